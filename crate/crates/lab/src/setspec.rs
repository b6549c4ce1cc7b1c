//! JSON descriptions of sets and progressions:
//! `{"p":101,"gap":{"a0":0,"gens":[1],"H":[10]}}` or `{"p":101,"elements":[...]}`.

use charsum_core::{FpSet, Gap, PrimeField};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// `a0 + { sum x_j gens_j : 0 <= x_j < H_j }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSpec {
    #[serde(default)]
    pub a0: u64,
    pub gens: Vec<u64>,
    #[serde(rename = "H")]
    pub bounds: Vec<u64>,
}

impl GapSpec {
    pub fn build(&self, field: &PrimeField) -> Result<Gap> {
        Ok(Gap::new(
            field,
            self.a0,
            self.gens.clone(),
            self.bounds.clone(),
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<GapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<u64>>,
}

impl SetSpec {
    /// Parses inline JSON, or the contents of a file when `text` starts with `@`.
    pub fn parse(text: &str) -> Result<Self> {
        let spec: SetSpec = serde_json::from_str(&read_arg(text)?)?;
        match (&spec.gap, &spec.elements) {
            (Some(_), None) | (None, Some(_)) => Ok(spec),
            _ => Err(LabError::Config(
                "a set needs exactly one of \"gap\" or \"elements\"".into(),
            )),
        }
    }

    /// Checks the modulus against an expected one.
    pub fn expect_p(&self, p: u64) -> Result<()> {
        if self.p == p {
            Ok(())
        } else {
            Err(LabError::Config(format!(
                "set is over p = {} but p = {p} was requested",
                self.p
            )))
        }
    }

    pub fn to_set(&self, field: &PrimeField) -> Result<FpSet> {
        self.expect_p(field.p() as u64)?;
        match (&self.gap, &self.elements) {
            (Some(g), _) => Ok(g.build(field)?.enumerate()?.set),
            (_, Some(xs)) => Ok(FpSet::new(field, xs.iter().copied())?),
            _ => unreachable!("validated in parse"),
        }
    }
}

/// Inline text, or a file's contents for `@path`.
pub fn read_arg(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|source| LabError::Io {
            path: path.into(),
            source,
        }),
        None => Ok(text.to_owned()),
    }
}
