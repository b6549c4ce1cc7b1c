//! Experiment configuration and the set families it draws `A` and `B` from.

use std::fmt;

use charsum_core::{is_prime, FpSet, Gap, PrimeField};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{LabError, Result};

fn default_c_of_k() -> f64 {
    1.0
}

fn default_start() -> i64 {
    1
}

/// A sweep: every prime against every `(family-A, family-B)` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub primes: Vec<u64>,
    /// Character order.
    pub d: u32,
    #[serde(rename = "family-A", deserialize_with = "one_or_many")]
    pub family_a: Vec<FamilySpec>,
    #[serde(rename = "family-B", deserialize_with = "one_or_many")]
    pub family_b: Vec<FamilySpec>,
    /// Stand-in for the structural constant `C(K)`; only enters reported numbers.
    #[serde(rename = "C_of_K", default = "default_c_of_k")]
    pub c_of_k: f64,
    #[serde(default)]
    pub seed: u64,
}

fn one_or_many<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Vec<FamilySpec>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(FamilySpec),
        Many(Vec<FamilySpec>),
    }
    Ok(match OneOrMany::deserialize(de)? {
        OneOrMany::One(f) => vec![f],
        OneOrMany::Many(fs) => fs,
    })
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(LabError::Config(format!("{p} is not prime")));
        }
        if self.d == 0 {
            return Err(LabError::Config("character order must be positive".into()));
        }
        if self.c_of_k.is_nan() || self.c_of_k <= 0.0 {
            return Err(LabError::Config("C_of_K must be positive".into()));
        }
        for fam in self.family_a.iter().chain(&self.family_b) {
            fam.validate()?;
        }
        Ok(())
    }
}

/// How a family sizes an interval: a fixed length or `floor(p^exponent)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Size {
    Len(u64),
    Exponent(f64),
}

impl Size {
    pub fn resolve(self, p: u64) -> u64 {
        match self {
            Size::Len(n) => n,
            Size::Exponent(e) => (p as f64).powf(e).floor() as u64,
        }
    }
}

/// A rule producing a subset of `F_p` for any `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    /// `[start, start + n - 1]`.
    Interval {
        #[serde(default = "default_start")]
        start: i64,
        #[serde(flatten)]
        size: Size,
    },
    /// A full progression; generators are reduced mod `p`.
    Gap {
        #[serde(default)]
        a0: i64,
        gens: Vec<i64>,
        #[serde(rename = "H")]
        bounds: Vec<u64>,
    },
    /// The multiplicative subgroup of the given order.
    MultiplicativeSubgroup { order: u32 },
    /// `ceil(density |P|)` elements of a progression, without replacement.
    RandomSubsetOfGap {
        #[serde(default)]
        a0: i64,
        gens: Vec<i64>,
        #[serde(rename = "H")]
        bounds: Vec<u64>,
        density: f64,
    },
    /// All of `F_p`.
    Full,
}

/// Why a family produced no set for a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skip(pub String);

impl FamilySpec {
    fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::Gap { gens, bounds, .. }
            | FamilySpec::RandomSubsetOfGap { gens, bounds, .. }
                if gens.is_empty() || gens.len() != bounds.len() =>
            {
                Err(LabError::Config(format!(
                    "{self}: gens and H must be nonempty and equally long"
                )))
            }
            FamilySpec::RandomSubsetOfGap { density, .. }
                if !(*density > 0.0 && *density <= 1.0) =>
            {
                Err(LabError::Config(format!(
                    "{self}: density must lie in (0, 1]"
                )))
            }
            FamilySpec::Interval {
                size: Size::Exponent(e),
                ..
            } if !(*e >= 0.0 && *e <= 1.0) => Err(LabError::Config(format!(
                "{self}: exponent must lie in [0, 1]"
            ))),
            _ => Ok(()),
        }
    }

    fn gap(field: &PrimeField, a0: i64, gens: &[i64], bounds: &[u64]) -> Result<Gap> {
        Ok(Gap::new(
            field,
            field.reduce(a0) as u64,
            gens.iter().map(|&g| field.reduce(g) as u64).collect(),
            bounds.to_vec(),
        )?)
    }

    /// Builds the set for `field`; `rng` is only consumed by random families.
    pub fn build(
        &self,
        field: &PrimeField,
        rng: &mut ChaCha8Rng,
    ) -> Result<std::result::Result<FpSet, Skip>> {
        let p = field.p() as u64;
        let set = match self {
            FamilySpec::Interval { start, size } => {
                let n = size.resolve(p);
                if n == 0 || n > p {
                    return Ok(Err(Skip(format!("{self}: length {n} outside [1, p]"))));
                }
                FpSet::interval(field, *start, *start + n as i64 - 1)
            }
            FamilySpec::Gap { a0, gens, bounds } => {
                Self::gap(field, *a0, gens, bounds)?.enumerate()?.set
            }
            FamilySpec::MultiplicativeSubgroup { order } => {
                if !(p - 1).is_multiple_of(*order as u64) {
                    return Ok(Err(Skip(format!("{self}: {order} does not divide p - 1"))));
                }
                FpSet::subgroup(field, *order)?
            }
            FamilySpec::RandomSubsetOfGap {
                a0,
                gens,
                bounds,
                density,
            } => {
                let all = Self::gap(field, *a0, gens, bounds)?.enumerate()?.set;
                let k = ((density * all.len() as f64).ceil() as usize).clamp(1, all.len());
                let picks = sample(rng, all.len(), k);
                FpSet::new(field, picks.iter().map(|i| all.as_slice()[i] as u64))?
            }
            FamilySpec::Full => FpSet::full(field),
        };
        Ok(Ok(set))
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Interval { start, size } => match size {
                Size::Len(n) => write!(f, "interval(start={start};len={n})"),
                Size::Exponent(e) => write!(f, "interval(start={start};exponent={e})"),
            },
            FamilySpec::Gap { a0, gens, bounds } => {
                write!(f, "gap(a0={a0};gens=[{}];H=[{}])", list(gens), list(bounds))
            }
            FamilySpec::MultiplicativeSubgroup { order } => write!(f, "subgroup(order={order})"),
            FamilySpec::RandomSubsetOfGap {
                a0,
                gens,
                bounds,
                density,
            } => write!(
                f,
                "random-subset(a0={a0};gens=[{}];H=[{}];density={density})",
                list(gens),
                list(bounds)
            ),
            FamilySpec::Full => write!(f, "full"),
        }
    }
}

/// Deterministic per-cell generator.
pub fn cell_rng(seed: u64, p: u64, family: usize, side: u64) -> ChaCha8Rng {
    let mut s = seed ^ 0x9e37_79b9_7f4a_7c15;
    for x in [p, family as u64, side] {
        s = (s ^ x).wrapping_mul(0xbf58_476d_1ce4_e5b9).rotate_left(31);
    }
    ChaCha8Rng::seed_from_u64(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_config_with_single_and_list_families() {
        let cfg = ExperimentConfig::from_json(
            r#"{"primes":[101,1009],"d":2,
                "family-A":{"kind":"interval","len":10},
                "family-B":[{"kind":"interval","exponent":0.4,"start":3},{"kind":"full"}],
                "C_of_K":2.5,"seed":7}"#,
        )
        .unwrap();
        assert_eq!(cfg.family_a.len(), 1);
        assert_eq!(cfg.family_b.len(), 2);
        assert_eq!(
            cfg.family_b[0],
            FamilySpec::Interval {
                start: 3,
                size: Size::Exponent(0.4)
            }
        );
        assert_eq!(cfg.c_of_k, 2.5);
    }

    #[test]
    fn defaults_and_validation() {
        let cfg = ExperimentConfig::from_json(
            r#"{"primes":[],"d":2,"family-A":{"kind":"full"},"family-B":{"kind":"full"}}"#,
        )
        .unwrap();
        assert_eq!((cfg.c_of_k, cfg.seed), (1.0, 0));
        for bad in [
            r#"{"primes":[100],"d":2,"family-A":{"kind":"full"},"family-B":{"kind":"full"}}"#,
            r#"{"primes":[101],"d":0,"family-A":{"kind":"full"},"family-B":{"kind":"full"}}"#,
            r#"{"primes":[101],"d":2,"family-A":{"kind":"full"},"family-B":{"kind":"full"},"C_of_K":0}"#,
            r#"{"primes":[101],"d":2,"family-A":{"kind":"random-subset-of-gap","gens":[1],"H":[5],"density":0},"family-B":{"kind":"full"}}"#,
            r#"{"primes":[101],"d":2,"family-A":{"kind":"gap","gens":[1,2],"H":[5]},"family-B":{"kind":"full"}}"#,
            r#"{"primes":[101],"d":2,"family-A":{"kind":"full"},"family-B":{"kind":"full"},"bogus":1}"#,
        ] {
            assert!(ExperimentConfig::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn random_subsets_stay_inside_their_progression() {
        let f = PrimeField::new(1009).unwrap();
        let fam = FamilySpec::RandomSubsetOfGap {
            a0: 5,
            gens: vec![1, 50],
            bounds: vec![10, 6],
            density: 0.3,
        };
        let all = FamilySpec::Gap {
            a0: 5,
            gens: vec![1, 50],
            bounds: vec![10, 6],
        };
        let mut rng = cell_rng(1, 1009, 0, 0);
        let full = all.build(&f, &mut rng).unwrap().unwrap();
        let a = fam
            .build(&f, &mut cell_rng(1, 1009, 0, 0))
            .unwrap()
            .unwrap();
        let again = fam
            .build(&f, &mut cell_rng(1, 1009, 0, 0))
            .unwrap()
            .unwrap();
        assert_eq!(a.len(), 18);
        assert!(a.is_subset(&full));
        assert_eq!(a, again);
    }

    #[test]
    fn subgroup_family_skips_non_divisors() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = cell_rng(0, 101, 0, 0);
        let fam = FamilySpec::MultiplicativeSubgroup { order: 3 };
        assert!(fam.build(&f, &mut rng).unwrap().is_err());
        let fam = FamilySpec::MultiplicativeSubgroup { order: 5 };
        assert_eq!(fam.build(&f, &mut rng).unwrap().unwrap().len(), 5);
    }
}
