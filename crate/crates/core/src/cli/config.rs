//! JSON configuration files.
//!
//! ```json
//! {
//!   "blocks": [[1, 2, 3, 4]],
//!   "d": [4, 4, 4, 4],
//!   "lattice": {"congruences": [{"c": [1, 1, 1, 1], "mod": 4}]},
//!   "lambda": "uniform:1"
//! }
//! ```
//!
//! Indices are 1-based in the file and 0-based everywhere else.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, Q};
use crate::toricdata::{LambdaSpec, LatticeSpec, ToricInput};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub c: Vec<i64>,
    #[serde(rename = "mod")]
    pub modulus: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum LatticeConfig {
    Congruences(Vec<Congruence>),
    Generators(Vec<Vec<i64>>),
}

/// A rational written either as a JSON integer or as a string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLit {
    Int(i64),
    Str(String),
}

impl RatLit {
    pub fn parse(&self) -> Result<Q> {
        match self {
            RatLit::Int(n) => Ok(rat::q(*n)),
            RatLit::Str(s) => rat::parse_q(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaConfig {
    /// `"uniform:<rational>"`.
    Uniform(String),
    /// Exponent vectors written as comma-joined integers.
    Map(BTreeMap<String, RatLit>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisFlags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sections: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub blocks: Vec<Vec<usize>>,
    pub d: Vec<i64>,
    pub lattice: LatticeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<i64>>,
    /// Valuations of the superpotential coefficients; default is `λ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_valuations: Option<BTreeMap<String, RatLit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisFlags>,
}

/// Parses `"1,0,2"` into an exponent vector.
pub fn parse_exponent(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Config(format!("bad exponent key {s:?}"))))
        .collect()
}

pub fn exponent_key(p: &[i64]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_rat_map(m: &BTreeMap<String, RatLit>, n: usize) -> Result<BTreeMap<Vec<i64>, Q>> {
    let mut out = BTreeMap::new();
    for (k, v) in m {
        let p = parse_exponent(k)?;
        if p.len() != n {
            return Err(Error::Config(format!("exponent key {k:?} has length {}, expected {n}", p.len())));
        }
        out.insert(p, v.parse()?);
    }
    Ok(out)
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Converts to 0-based toric input.  Checks shapes only; axioms are
    /// checked by [`crate::toricdata::validate`].
    pub fn to_input(&self) -> Result<ToricInput> {
        let n = self.d.len();
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&i| {
                        if i == 0 {
                            Err(Error::Config("block indices are 1-based; found 0".into()))
                        } else {
                            Ok(i - 1)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let lattice = match &self.lattice {
            LatticeConfig::Congruences(cs) => {
                LatticeSpec::Congruences(cs.iter().map(|c| (c.c.clone(), c.modulus)).collect())
            }
            LatticeConfig::Generators(g) => LatticeSpec::Generators(g.clone()),
        };
        let lambda = match &self.lambda {
            None => None,
            Some(LambdaConfig::Uniform(s)) => {
                let body = s
                    .strip_prefix("uniform:")
                    .ok_or_else(|| Error::Config(format!("lambda string must be \"uniform:<rational>\", got {s:?}")))?;
                Some(LambdaSpec::Uniform(rat::parse_q(body)?))
            }
            Some(LambdaConfig::Map(m)) => Some(LambdaSpec::Map(parse_rat_map(m, n)?)),
        };
        Ok(ToricInput { blocks, d: self.d.clone(), lattice, lambda, v: self.v.clone() })
    }

    /// Coefficient valuations keyed by exponent, if given.
    pub fn b_valuations(&self) -> Result<Option<BTreeMap<Vec<i64>, Q>>> {
        self.b_valuations.as_ref().map(|m| parse_rat_map(m, self.d.len())).transpose()
    }
}
