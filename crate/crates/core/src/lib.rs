//! Toric data of mirror pairs built from Fermat-type blocks: lattices, fans,
//! grading data, matrix factorizations and Koszul algebra dimensions.

pub mod bside;
pub mod cli;
pub mod error;
pub mod fans;
pub mod grading;
pub mod koszulalg;
pub mod intlat;
pub mod qlin;
pub mod rat;
pub mod toricdata;

pub use error::{Error, Result};
