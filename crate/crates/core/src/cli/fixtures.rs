//! Built-in example configurations.

use crate::cli::config::{Config, Congruence, LambdaConfig, LatticeConfig};
use crate::error::{Error, Result};
use crate::toricdata::{self, ToricInput, ValidatedToricData};

pub const NAMES: [&str; 4] = ["elliptic", "quartic", "cubic-fourfold", "z-manifold"];

fn cong(c: &[i64], modulus: i64) -> Congruence {
    Congruence { c: c.to_vec(), modulus }
}

fn plain(blocks: Vec<Vec<usize>>, d: Vec<i64>, congruences: Vec<Congruence>) -> Config {
    Config {
        blocks,
        d,
        lattice: LatticeConfig::Congruences(congruences),
        lambda: None,
        v: None,
        b_valuations: None,
        analysis: None,
    }
}

/// The named fixture configuration.
pub fn config(name: &str) -> Result<Config> {
    Ok(match name {
        "elliptic" => {
            let mut c = plain(vec![vec![1, 2, 3]], vec![3; 3], vec![cong(&[1, 1, 1], 3)]);
            c.lambda = Some(LambdaConfig::Uniform("uniform:1".into()));
            c
        }
        "quartic" => plain(vec![vec![1, 2, 3, 4]], vec![4; 4], vec![cong(&[1, 1, 1, 1], 4)]),
        "cubic-fourfold" => {
            plain(vec![vec![1, 2, 3], vec![4, 5, 6]], vec![3; 6], vec![cong(&[1, 1, 1, 1, 1, 1], 3)])
        }
        "z-manifold" => plain(
            vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]],
            vec![3; 9],
            vec![cong(&[1, 1, 1, -1, -1, -1, 0, 0, 0], 3), cong(&[0, 0, 0, 1, 1, 1, -1, -1, -1], 3)],
        ),
        other => return Err(Error::Config(format!("unknown example {other:?}; known: {}", NAMES.join(", ")))),
    })
}

pub fn input(name: &str) -> Result<ToricInput> {
    config(name)?.to_input()
}

pub fn validated(name: &str) -> Result<ValidatedToricData> {
    toricdata::validate(input(name)?)
}
