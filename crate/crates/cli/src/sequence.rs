//! Computed sequences and their plain, CSV and JSON renderings.
//!
//! JSON carries every value as a decimal string (`"11663971"` or `"9/8"`) so
//! that consumers with 53-bit floats never see a rounded number.

use std::fmt;
use std::str::FromStr;

use pathweight::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Which engine produced a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Bruteforce,
    Formula,
    Feq,
    Kernel,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Bruteforce => "bruteforce",
            EngineKind::Formula => "formula",
            EngineKind::Feq => "feq",
            EngineKind::Kernel => "kernel",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub n: u64,
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub value: BigRational,
}

fn ser_rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    BigRational::from_str(&s).map_err(|e| serde::de::Error::custom(format!("bad rational `{s}`: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceResult {
    pub family: String,
    pub k: Option<u32>,
    pub weight: String,
    pub mode: String,
    pub engine: EngineKind,
    pub n_min: u64,
    pub n_max: u64,
    pub terms: Vec<Term>,
}

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("term list does not cover n = {n_min}..={n_max} in order")]
    Range { n_min: u64, n_max: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

impl SequenceResult {
    pub fn values(&self) -> impl Iterator<Item = &BigRational> {
        self.terms.iter().map(|t| &t.value)
    }

    fn check_range(&self) -> Result<(), SequenceError> {
        let ok = self.n_min <= self.n_max
            && self.terms.len() as u64 == self.n_max - self.n_min + 1
            && self
                .terms
                .iter()
                .enumerate()
                .all(|(i, t)| t.n == self.n_min + i as u64);
        if ok {
            Ok(())
        } else {
            Err(SequenceError::Range {
                n_min: self.n_min,
                n_max: self.n_max,
            })
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence results always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, SequenceError> {
        let r: Self = serde_json::from_str(text)?;
        r.check_range()?;
        Ok(r)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Plain => {
                let mut s = self
                    .values()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::from("n,value\n");
                for t in &self.terms {
                    s.push_str(&format!("{},{}\n", t.n, t.value));
                }
                s
            }
            Format::Json => self.to_json() + "\n",
        }
    }
}
