//! Multiplicative representation functions and the counts built on them.
//!
//! For a zero-free set `A`, `f_A(lambda) = #{(a, a') in A^2 : a / a' = lambda}`.
//! The third energy is `E3(A) = sum f_A^3`, and the number of solutions of
//! `b1 / a = b1' / a'`, `b2 / a = b2' / a'` over `A^2 x B^4` is
//! `sum f_A g_B^2`. Hölder's inequality bounds the latter by
//! `E3(A)^(1/3) E3(B)^(2/3)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::sets::FpSet;

/// How to treat 0 in a set that is about to be used as a denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroPolicy {
    /// Fail with [`Error::ZeroElement`].
    Reject,
    /// Drop 0 and report that it was dropped.
    Exclude,
}

/// `lambda -> f(lambda)` for a zero-free set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioProfile {
    field: PrimeField,
    counts: BTreeMap<u32, u64>,
    source_size: usize,
}

impl RatioProfile {
    /// `f(lambda)`.
    pub fn get(&self, lambda: u32) -> u64 {
        self.counts.get(&lambda).copied().unwrap_or(0)
    }

    /// Nonzero values in increasing `lambda`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// `|A|`.
    pub fn source_size(&self) -> usize {
        self.source_size
    }

    /// `sum f = |A|^2`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `sum f^3`.
    pub fn third_moment(&self) -> u128 {
        self.counts.values().map(|&c| (c as u128).pow(3)).sum()
    }

    /// The field.
    pub fn field(&self) -> &PrimeField {
        &self.field
    }
}

fn reject_zero(a: &FpSet, what: &'static str) -> Result<()> {
    if a.contains(0) {
        Err(Error::ZeroElement(what))
    } else {
        Ok(())
    }
}

/// Builds `f_A`. `A` must not contain 0.
pub fn ratio_profile(a: &FpSet) -> Result<RatioProfile> {
    reject_zero(a, "ratio_profile")?;
    let f = a.field();
    let n = f.group_order() as usize;
    let logs: Vec<u32> = a.iter().map(|x| f.dlog(x).unwrap()).collect();
    let pairs = logs.len() * logs.len();
    let mut counts = BTreeMap::new();
    if n <= 4 * pairs + 1024 {
        let mut dense = vec![0u64; n];
        for &la in &logs {
            for &lb in &logs {
                dense[(la as usize + n - lb as usize) % n] += 1;
            }
        }
        for (k, c) in dense.into_iter().enumerate() {
            if c > 0 {
                counts.insert(f.exp(k as u64), c);
            }
        }
    } else {
        for &la in &logs {
            for &lb in &logs {
                let k = (la as usize + n - lb as usize) % n;
                *counts.entry(f.exp(k as u64)).or_insert(0) += 1;
            }
        }
    }
    Ok(RatioProfile {
        field: f.clone(),
        counts,
        source_size: a.len(),
    })
}

/// `E3(A) = sum_lambda f_A(lambda)^3`.
pub fn e3_mult(a: &FpSet) -> Result<u128> {
    Ok(ratio_profile(a)?.third_moment())
}

fn weighted(fa: &RatioProfile, gb: &RatioProfile, power: u32) -> u128 {
    fa.iter()
        .map(|(lambda, c)| c as u128 * (gb.get(lambda) as u128).pow(power))
        .sum()
}

/// Number of solutions of `b1 / a = b1' / a'`, `b2 / a = b2' / a'` in
/// `A^2 x B^4`, for zero-free `A` and `B`.
pub fn system_count(a: &FpSet, b: &FpSet) -> Result<u128> {
    a.field().check_same(b.field())?;
    reject_zero(a, "system_count: A")?;
    reject_zero(b, "system_count: B")?;
    Ok(weighted(&ratio_profile(a)?, &ratio_profile(b)?, 2))
}

/// The full solution count when `B` may contain 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemCount {
    /// Solutions with all four `b`'s nonzero: `sum f_A g_{B*}^2`.
    pub nonzero: u128,
    /// Solutions with some `b` equal to 0 (then its primed partner is 0 too).
    pub zero_terms: u128,
    /// `nonzero + zero_terms`.
    pub total: u128,
    /// Whether 0 was in `B`.
    pub zero_in_b: bool,
    /// `|A|^2`, the all-zero solutions.
    pub trivial_bound: u128,
    /// `|A|^2 |B|`, the bound per coordinate that vanishes alone.
    pub single_zero_bound: u128,
    /// `zero_terms <= trivial_bound + 2 single_zero_bound`.
    pub bookkeeping_ok: bool,
}

/// [`system_count`] allowing `0 in B`: the solutions through zero are
/// counted exactly and compared with the `|A|^2` and `|A|^2 |B|` bookkeeping
/// bounds. `A` must still be zero-free.
pub fn system_count_with_zeros(a: &FpSet, b: &FpSet) -> Result<SystemCount> {
    a.field().check_same(b.field())?;
    reject_zero(a, "system_count_with_zeros: A")?;
    let (b_star, zero_in_b) = b.without_zero();
    let fa = ratio_profile(a)?;
    let gb = ratio_profile(&b_star)?;
    let nonzero = weighted(&fa, &gb, 2);
    let a2 = (a.len() as u128).pow(2);
    let zero_terms = if zero_in_b {
        // b1 = b1' = 0 and b2 = b2' = 0, or exactly one coordinate pair vanishes
        a2 + 2 * weighted(&fa, &gb, 1)
    } else {
        0
    };
    let single_zero_bound = a2 * b.len() as u128;
    Ok(SystemCount {
        nonzero,
        zero_terms,
        total: nonzero + zero_terms,
        zero_in_b,
        trivial_bound: a2,
        single_zero_bound,
        bookkeeping_ok: zero_terms <= a2 + 2 * single_zero_bound,
    })
}

/// Both sides of `sum f g^2 <= (sum f^3)^(1/3) (sum g^3)^(2/3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HolderCheck {
    /// `sum f_A g_B^2`.
    pub lhs: u128,
    /// `E3(A)^(1/3) E3(B)^(2/3)`.
    pub rhs: f64,
    /// `lhs^3 <= E3(A) E3(B)^2`, decided exactly.
    pub ok: bool,
    /// `lhs^3 = E3(A) E3(B)^2`.
    pub equality: bool,
}

/// Hölder step for the system count, decided on cubes in exact arithmetic.
pub fn holder_chain_check(a: &FpSet, b: &FpSet) -> Result<HolderCheck> {
    a.field().check_same(b.field())?;
    reject_zero(a, "holder_chain_check: A")?;
    reject_zero(b, "holder_chain_check: B")?;
    let fa = ratio_profile(a)?;
    let gb = ratio_profile(b)?;
    let lhs = weighted(&fa, &gb, 2);
    let (ea, eb) = (fa.third_moment(), gb.third_moment());
    let cube = BigUint::from(lhs).pow(3u32);
    let bound = BigUint::from(ea) * BigUint::from(eb).pow(2u32);
    let rhs = libm::cbrt(ea as f64) * libm::pow(libm::cbrt(eb as f64), 2.0);
    Ok(HolderCheck {
        lhs,
        rhs,
        ok: cube <= bound,
        equality: cube == bound,
    })
}

/// `E3(A)` next to the shape `|A+A|^(15/4) |A|^(-3/4) log |A|`.
#[derive(Clone, Debug, PartialEq)]
pub struct E3BoundReport {
    /// `E3(A)`.
    pub e3: u128,
    /// `|A|`.
    pub size: usize,
    /// `|A + A|`.
    pub sumset_size: usize,
    /// `|A+A|^(15/4) |A|^(-3/4) ln |A|`.
    pub bound_body: f64,
    /// `e3 / bound_body`.
    pub ratio: f64,
    /// `|A|^11 |A+A| <= p^8`.
    pub precondition_ok: bool,
}

/// Reports `E3(A)` against the bound shape without asserting it; the
/// implied constant is unknown. Uses the natural logarithm.
pub fn e3_bound_report(a: &FpSet) -> Result<E3BoundReport> {
    if a.len() < 2 {
        return Err(Error::Invalid("e3_bound_report needs |A| >= 2"));
    }
    let e3 = e3_mult(a)?;
    let sumset_size = a.sumset(a)?.len();
    let n = a.len() as f64;
    let bound_body = libm::pow(sumset_size as f64, 3.75) * libm::pow(n, -0.75) * libm::log(n);
    let lhs = BigUint::from(a.len()).pow(11u32) * BigUint::from(sumset_size);
    let rhs = BigUint::from(a.field().p()).pow(8u32);
    Ok(E3BoundReport {
        e3,
        size: a.len(),
        sumset_size,
        bound_body,
        ratio: e3 as f64 / bound_body,
        precondition_ok: lhs <= rhs,
    })
}

/// `(u1, u2) -> nu(u1, u2) = #{(b1, b2, x) in B_a^2 x A0 : b1 / x = u1, b2 / x = u2}`
/// with `B_a = a + B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuProfile {
    counts: BTreeMap<(u32, u32), u64>,
    shift: u32,
    a0_size: usize,
    b_size: usize,
    excluded_zero: bool,
}

impl NuProfile {
    /// `nu(u1, u2)`.
    pub fn get(&self, u1: u32, u2: u32) -> u64 {
        self.counts.get(&(u1, u2)).copied().unwrap_or(0)
    }

    /// Nonzero entries.
    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// The shift `a`.
    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// `|A0|` after any zero exclusion.
    pub fn a0_size(&self) -> usize {
        self.a0_size
    }

    /// Whether 0 was dropped from `A0`.
    pub fn excluded_zero(&self) -> bool {
        self.excluded_zero
    }

    /// `sum nu`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `sum nu^2`.
    pub fn second_moment(&self) -> u128 {
        self.counts.values().map(|&c| (c as u128).pow(2)).sum()
    }

    /// `sum nu = |B|^2 |A0|`.
    pub fn total_identity_holds(&self) -> bool {
        self.total() as u128 == (self.b_size as u128).pow(2) * self.a0_size as u128
    }
}

/// Builds `nu` for `A0`, `B` and the shift `a`.
pub fn nu_profile(a0: &FpSet, b: &FpSet, a: u32, zero: ZeroPolicy) -> Result<NuProfile> {
    let f = a0.field();
    f.check_same(b.field())?;
    let (a0, excluded_zero) = match zero {
        ZeroPolicy::Reject => {
            reject_zero(a0, "nu_profile: A0")?;
            (a0.clone(), false)
        }
        ZeroPolicy::Exclude => a0.without_zero(),
    };
    let shifted = b.translate(f.residue(a as u64)?);
    let mut counts = BTreeMap::new();
    for x in a0.iter() {
        let xinv = f.inv(x).unwrap();
        let ratios: Vec<u32> = shifted.iter().map(|y| f.mul(y, xinv)).collect();
        for &u1 in &ratios {
            for &u2 in &ratios {
                *counts.entry((u1, u2)).or_insert(0) += 1;
            }
        }
    }
    Ok(NuProfile {
        counts,
        shift: a,
        a0_size: a0.len(),
        b_size: b.len(),
        excluded_zero,
    })
}
