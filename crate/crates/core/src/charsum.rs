//! Character sums: the bilinear sum over `A x B`, Weil sums over split
//! polynomials, the moment sum over pairs of shifts, and the translate
//! averaging step.
//!
//! Values are carried as [`UnitRootSum`] histograms. For the Legendre symbol
//! every result is an exact integer, and for orders 3, 4 and 6 squared moduli
//! are exact, so inequality verdicts in those cases use no tolerance.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Character, PrimeField};
use crate::roots::{UnitRootSum, EXACT_ORDERS};
use crate::sets::FpSet;

/// Largest modulus accepted by [`davenport_check`].
pub const DAVENPORT_MAX_P: u32 = 2000;

/// Relative slack for floating-point comparisons, per summand.
pub const FLOAT_SLACK: f64 = 1e-9;

/// A character sum with its number of nonzero summands.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSum {
    sum: UnitRootSum,
}

impl CharSum {
    /// The index histogram.
    pub fn histogram(&self) -> &UnitRootSum {
        &self.sum
    }

    /// Number of summands with `chi != 0`.
    pub fn terms(&self) -> u64 {
        self.sum.terms()
    }

    /// Exact integer value for characters of order at most 2.
    pub fn exact(&self) -> Option<i64> {
        self.sum.exact_real()
    }

    /// Complex value.
    pub fn value(&self) -> Complex64 {
        self.sum.value()
    }

    /// Modulus of the value.
    pub fn abs(&self) -> f64 {
        self.sum.abs()
    }
}

/// `f(x) = prod_i (x + c_i)^(e_i)` with distinct `c_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPoly {
    field: PrimeField,
    factors: Vec<(u32, u32)>,
}

impl SplitPoly {
    /// From `(c_i, e_i)` pairs.
    pub fn new(field: &PrimeField, factors: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for (c, e) in factors {
            let c = field.residue(c)?;
            if e == 0 {
                return Err(Error::Invalid("factor multiplicities must be positive"));
            }
            if out.iter().any(|&(d, _)| d == c) {
                return Err(Error::Invalid("repeated root in split polynomial"));
            }
            out.push((c, e));
        }
        if out.is_empty() {
            return Err(Error::Invalid("split polynomial needs at least one factor"));
        }
        Ok(Self {
            field: field.clone(),
            factors: out,
        })
    }

    /// `(c_i, e_i)` pairs.
    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    /// Number of distinct roots `m`.
    pub fn distinct_roots(&self) -> usize {
        self.factors.len()
    }

    /// `f(x)` evaluated directly.
    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.factors
            .iter()
            .fold(1, |acc, &(c, e)| f.mul(acc, f.pow(f.add(x, c), e as u64)))
    }

    /// Whether every multiplicity is divisible by `d`.
    pub fn is_dth_power(&self, d: u32) -> bool {
        self.factors.iter().all(|&(_, e)| e % d == 0)
    }
}

/// `sum_{a in A, b in B} chi(a + b)`, with `chi(0) = 0`.
pub fn char_sum(chi: &Character, a: &FpSet, b: &FpSet) -> Result<CharSum> {
    let f = chi.field();
    f.check_same(a.field())?;
    f.check_same(b.field())?;
    let mut sum = UnitRootSum::zero(chi.order());
    for x in a.iter() {
        for y in b.iter() {
            if let Some(k) = chi.index(f.add(x, y)) {
                sum.push(k);
            }
        }
    }
    Ok(CharSum { sum })
}

/// A Weil sum together with its bound.
#[derive(Clone, Debug, PartialEq)]
pub struct WeilReport {
    /// `sum_x chi(f(x))`.
    pub value: CharSum,
    /// `(m - 1) sqrt(p)`.
    pub bound: f64,
    /// `f` is a `d`-th power, so the bound does not apply.
    pub dth_power: bool,
    /// `|value| <= bound`, or `None` when the bound does not apply.
    pub holds: Option<bool>,
}

/// Evaluates `sum_{x in F_p} chi(f(x))` by brute force and checks it
/// against `(m - 1) sqrt(p)`.
pub fn weil_sum(chi: &Character, poly: &SplitPoly) -> Result<WeilReport> {
    let f = chi.field();
    f.check_same(&poly.field)?;
    let d = chi.order();
    let mut sum = UnitRootSum::zero(d);
    'x: for x in 0..f.p() {
        let mut k = 0u64;
        for &(c, e) in &poly.factors {
            match chi.index(f.add(x, c)) {
                Some(i) => k += i as u64 * e as u64,
                None => continue 'x,
            }
        }
        sum.push((k % d as u64) as u32);
    }
    let m = poly.distinct_roots() as u64;
    let p = f.p() as u64;
    let bound = (m - 1) as f64 * libm::sqrt(p as f64);
    let dth_power = poly.is_dth_power(d);
    let holds = (!dth_power).then(|| match sum.twice_norm_sq() {
        Some(t) => t <= 2 * ((m - 1) * (m - 1) * p) as i128,
        None => sum.value().norm() <= bound + FLOAT_SLACK * sum.terms() as f64,
    });
    Ok(WeilReport {
        value: CharSum { sum },
        bound,
        dth_power,
        holds,
    })
}

/// Both sides of the moment inequality over shifts.
#[derive(Clone, Debug, PartialEq)]
pub struct DavenportReport {
    /// `sum_{u1, u2} |sum_{t in I} chi(u1 + t) conj(chi)(u2 + t)|^(2r)`.
    pub lhs: f64,
    /// `p^2 |I|^r r^(2r) + 4 r^2 p |I|^(2r)`.
    pub rhs: f64,
    /// `lhs < rhs`.
    pub ok: bool,
    /// Whether the comparison was made in exact integer arithmetic.
    pub exact: bool,
}

/// Computes the `2r`-th moment of `W(u1, u2) = sum_{t in I} chi(u1 + t)
/// conj(chi)(u2 + t)` over all `(u1, u2)` and compares it with
/// `p^2 |I|^r r^(2r) + 4 r^2 p |I|^(2r)`.
pub fn davenport_check(chi: &Character, interval: &FpSet, r: u32) -> Result<DavenportReport> {
    let f = chi.field();
    f.check_same(interval.field())?;
    if r < 2 {
        return Err(Error::Invalid("moment parameter r must be at least 2"));
    }
    let p = f.p();
    if p > DAVENPORT_MAX_P {
        return Err(Error::CostGuard {
            what: "davenport modulus",
            value: p as u128,
            limit: DAVENPORT_MAX_P as u128,
        });
    }
    let n = interval.len() as u64;
    let rhs_exact =
        BigUint::from(p as u64).pow(2) * BigUint::from(n).pow(r) * BigUint::from(r).pow(2 * r)
            + BigUint::from(4u64 * r as u64 * r as u64 * p as u64) * BigUint::from(n).pow(2 * r);

    let d = chi.order();
    let t_set: Vec<u32> = interval.iter().collect();
    // shifted[u][j] = index of chi(u + t_j), or d for zero
    let shifted: Vec<Vec<u32>> = (0..p)
        .map(|u| {
            t_set
                .iter()
                .map(|&t| chi.index(f.add(u, t)).unwrap_or(d))
                .collect()
        })
        .collect();

    let exact = EXACT_ORDERS.contains(&d);
    let mut norm_counts: BTreeMap<i128, u64> = BTreeMap::new();
    let mut float_lhs = 0.0f64;
    let mut w = UnitRootSum::zero(d);
    for row1 in &shifted {
        for row2 in &shifted {
            w.clear();
            for (&k1, &k2) in row1.iter().zip(row2) {
                if k1 < d && k2 < d {
                    w.push((k1 + d - k2) % d);
                }
            }
            match w.twice_norm_sq() {
                Some(t) => *norm_counts.entry(t).or_default() += 1,
                None => float_lhs += libm::pow(w.value().norm_sqr(), r as f64),
            }
        }
    }
    let rhs = biguint_to_f64(&rhs_exact);
    if exact {
        // lhs = sum (2|W|^2)^r / 2^r
        let twice_lhs = norm_counts
            .iter()
            .fold(BigUint::from(0u8), |acc, (&t, &c)| {
                acc + BigUint::from(t as u128).pow(r) * BigUint::from(c)
            });
        let scaled_rhs = &rhs_exact << r as usize;
        Ok(DavenportReport {
            lhs: biguint_to_f64(&twice_lhs) / libm::pow(2.0, r as f64),
            rhs,
            ok: twice_lhs < scaled_rhs,
            exact: true,
        })
    } else {
        Ok(DavenportReport {
            lhs: float_lhs,
            rhs,
            ok: float_lhs < rhs * (1.0 + FLOAT_SLACK),
            exact: false,
        })
    }
}

pub(crate) fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_u64_digits().iter().rev().fold(0.0, |acc, &digit| {
        acc * 18_446_744_073_709_551_616.0 + digit as f64
    })
}

/// `|sum_{b in B} chi(s + b)|` for one shift `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct RowAbs {
    pub abs: f64,
    /// exact value for order <= 2
    pub exact: Option<u64>,
}

pub(crate) fn row_sum(chi: &Character, b: &FpSet, s: u32) -> UnitRootSum {
    let f = chi.field();
    let mut sum = UnitRootSum::zero(chi.order());
    for y in b.iter() {
        if let Some(k) = chi.index(f.add(s, y)) {
            sum.push(k);
        }
    }
    sum
}

/// Memoised row moduli `s -> |sum_b chi(s + b)|`.
pub(crate) struct RowTable<'a> {
    chi: &'a Character,
    b: &'a FpSet,
    cache: Vec<Option<RowAbs>>,
}

impl<'a> RowTable<'a> {
    pub fn new(chi: &'a Character, b: &'a FpSet) -> Self {
        Self {
            chi,
            b,
            cache: vec![None; chi.field().p() as usize],
        }
    }

    pub fn get(&mut self, s: u32) -> RowAbs {
        if let Some(v) = self.cache[s as usize] {
            return v;
        }
        let sum = row_sum(self.chi, self.b, s);
        let v = RowAbs {
            abs: sum.abs(),
            exact: sum.exact_real().map(i64::unsigned_abs),
        };
        self.cache[s as usize] = Some(v);
        v
    }
}

/// One `T(x, y)` value of the translate average.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftTotal {
    /// `x in A0`.
    pub x: u32,
    /// `y in I`.
    pub y: u32,
    /// `T(x, y) = sum_{a in A - A0 I} |sum_b chi(a + b + x y)|`.
    pub total: f64,
}

/// Result of [`translate_average`].
#[derive(Clone, Debug, PartialEq)]
pub struct TranslateAverage {
    /// `T(x, y)` for every `(x, y) in A0 x I`, row-major.
    pub totals: Vec<ShiftTotal>,
    /// `|A - A0 I|`.
    pub hull_size: usize,
    /// `|sum_{A, B} chi(a + b)|`.
    pub sum_abs: f64,
    /// `sum_{a in A} |sum_b chi(a + b)|`.
    pub row_total: f64,
    /// `min T`.
    pub min: f64,
    /// `mean T`.
    pub mean: f64,
    /// `|S| <= row_total`.
    pub triangle_ok: bool,
    /// `row_total <= min T` (the shifted copy of `A` lies in the hull).
    pub hull_ok: bool,
    /// `min T <= mean T`.
    pub min_le_mean: bool,
    /// `|S| <= mean T`.
    pub mean_dominates: bool,
    /// Whether the verdicts above were decided in exact integer arithmetic.
    pub exact: bool,
}

/// The averaging step over translates `x y`, `x in A0`, `y in I`: every
/// `T(x, y)` dominates `|sum_{A,B} chi(a + b)|`, hence so does their mean.
pub fn translate_average(
    chi: &Character,
    a: &FpSet,
    b: &FpSet,
    a0: &FpSet,
    interval: &FpSet,
) -> Result<TranslateAverage> {
    let f = chi.field();
    for s in [a, b, a0, interval] {
        f.check_same(s.field())?;
    }
    if a0.is_empty() {
        return Err(Error::EmptySet("translate_average: A0"));
    }
    if interval.is_empty() {
        return Err(Error::EmptySet("translate_average: I"));
    }
    let hull = a.difference(&a0.product_set(interval)?)?;
    let s = char_sum(chi, a, b)?;
    let mut rows = RowTable::new(chi, b);

    let exact = chi.order() <= 2;
    let mut totals = Vec::with_capacity(a0.len() * interval.len());
    let mut exact_totals = Vec::with_capacity(totals.capacity());
    for x in a0.iter() {
        for y in interval.iter() {
            let xy = f.mul(x, y);
            let mut total = 0.0;
            let mut total_exact = 0u64;
            for h in hull.iter() {
                let row = rows.get(f.add(h, xy));
                total += row.abs;
                total_exact += row.exact.unwrap_or(0);
            }
            totals.push(ShiftTotal { x, y, total });
            exact_totals.push(total_exact);
        }
    }
    let mut row_total = 0.0;
    let mut row_total_exact = 0u64;
    for x in a.iter() {
        let row = rows.get(x);
        row_total += row.abs;
        row_total_exact += row.exact.unwrap_or(0);
    }
    let count = totals.len() as f64;
    let sum_totals: f64 = totals.iter().map(|t| t.total).sum();
    let mean = sum_totals / count;
    let min = totals.iter().map(|t| t.total).fold(f64::INFINITY, f64::min);
    let slack = FLOAT_SLACK * (hull.len() * b.len()).max(1) as f64;

    let (triangle_ok, hull_ok, min_le_mean, mean_dominates) = if exact {
        let s_abs = s.exact().unwrap().unsigned_abs() as u128;
        let n = exact_totals.len() as u128;
        let sum: u128 = exact_totals.iter().map(|&t| t as u128).sum();
        let min = *exact_totals.iter().min().unwrap() as u128;
        (
            s_abs <= row_total_exact as u128,
            row_total_exact as u128 <= min,
            min * n <= sum,
            s_abs * n <= sum,
        )
    } else {
        (
            s.abs() <= row_total + slack,
            row_total <= min + slack,
            min <= mean + slack,
            s.abs() <= mean + slack,
        )
    };

    Ok(TranslateAverage {
        totals,
        hull_size: hull.len(),
        sum_abs: s.abs(),
        row_total,
        min,
        mean,
        triangle_ok,
        hull_ok,
        min_le_mean,
        mean_dominates,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_character;
    use proptest::prelude::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn set(f: &PrimeField, xs: &[u64]) -> FpSet {
        FpSet::new(f, xs.iter().copied()).unwrap()
    }

    #[test]
    fn char_sum_examples() {
        let f5 = field(5);
        let leg = Character::legendre(&f5).unwrap();
        let one = set(&f5, &[1]);
        assert_eq!(char_sum(&leg, &one, &one).unwrap().exact(), Some(-1));

        let f7 = field(7);
        for d in [2, 3, 6] {
            let chi = make_character(&f7, d).unwrap();
            let full = FpSet::full(&f7);
            let s = char_sum(&chi, &full, &full).unwrap();
            assert!(s.abs() < 1e-9);
            assert_eq!(s.terms(), 42);
            let s = char_sum(&chi, &full, &set(&f7, &[4])).unwrap();
            assert!(s.abs() < 1e-9);
        }
    }

    #[test]
    fn trivial_character_counts_terms() {
        let f = field(11);
        let chi0 = make_character(&f, 1).unwrap();
        let a = set(&f, &[1, 2, 3]);
        let b = set(&f, &[8, 9]);
        // 2+9 = 3+8 = 0 mod 11
        assert_eq!(char_sum(&chi0, &a, &b).unwrap().exact(), Some(4));
    }

    #[test]
    fn singleton_sums_hit_the_trivial_bound() {
        let f = field(13);
        let chi = make_character(&f, 3).unwrap();
        let s = char_sum(&chi, &set(&f, &[2]), &set(&f, &[5])).unwrap();
        assert!((s.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weil_examples() {
        let f7 = field(7);
        let leg = Character::legendre(&f7).unwrap();
        let x = SplitPoly::new(&f7, [(0, 1)]).unwrap();
        let rep = weil_sum(&leg, &x).unwrap();
        assert_eq!(rep.value.exact(), Some(0));
        assert_eq!(rep.bound, 0.0);
        assert_eq!(rep.holds, Some(true));

        let xx1 = SplitPoly::new(&f7, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(weil_sum(&leg, &xx1).unwrap().value.exact(), Some(-1));

        let sq = SplitPoly::new(&f7, [(1, 2)]).unwrap();
        let rep = weil_sum(&leg, &sq).unwrap();
        assert!(rep.dth_power);
        assert_eq!(rep.holds, None);
        assert_eq!(rep.value.exact(), Some(6));

        let cubic = make_character(&f7, 3).unwrap();
        let rep = weil_sum(&cubic, &x).unwrap();
        assert_eq!(rep.holds, Some(true));
        assert!(rep.value.abs() < 1e-12);
    }

    #[test]
    fn split_poly_validation() {
        let f = field(7);
        assert!(SplitPoly::new(&f, [(1, 1), (1, 2)]).is_err());
        assert!(SplitPoly::new(&f, [(1, 0)]).is_err());
        assert!(SplitPoly::new(&f, []).is_err());
        let poly = SplitPoly::new(&f, [(1, 2), (3, 1)]).unwrap();
        // (x+1)^2 (x+3) at x = 2: 9 * 5 = 45 = 3 mod 7
        assert_eq!(poly.eval(2), 3);
    }

    /// Direct oracle: complex products of character values, no index arithmetic.
    fn davenport_lhs_oracle(chi: &Character, interval: &[u32], r: u32) -> f64 {
        let f = chi.field();
        let bar = chi.conjugate();
        let mut lhs = 0.0;
        for u1 in 0..f.p() {
            for u2 in 0..f.p() {
                let w: Complex64 = interval
                    .iter()
                    .map(|&t| chi.value(f.add(u1, t)) * bar.value(f.add(u2, t)))
                    .sum();
                lhs += w.norm_sqr().powi(r as i32);
            }
        }
        lhs
    }

    #[test]
    fn davenport_examples() {
        let f5 = field(5);
        let leg = Character::legendre(&f5).unwrap();
        let i1 = set(&f5, &[1]);
        let rep = davenport_check(&leg, &i1, 2).unwrap();
        assert_eq!(rep.lhs, 16.0);
        // 25 * 1 * 2^4 + 4 * 4 * 5 * 1
        assert_eq!(rep.rhs, 480.0);
        assert!(rep.ok && rep.exact);

        let i2 = set(&f5, &[1, 2]);
        let rep = davenport_check(&leg, &i2, 2).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.lhs, davenport_lhs_oracle(&leg, &[1, 2], 2));

        assert!(davenport_check(&leg, &i1, 1).is_err());
        let big = field(2003);
        let leg = Character::legendre(&big).unwrap();
        assert!(matches!(
            davenport_check(&leg, &set(&big, &[1]), 2),
            Err(Error::CostGuard { .. })
        ));
    }

    #[test]
    fn davenport_matches_oracle_for_cubic_and_quintic() {
        let f = field(11);
        let chi = make_character(&f, 5).unwrap();
        let i = set(&f, &[1, 2, 3]);
        let rep = davenport_check(&chi, &i, 2).unwrap();
        assert!(!rep.exact && rep.ok);
        let oracle = davenport_lhs_oracle(&chi, &[1, 2, 3], 2);
        assert!((rep.lhs - oracle).abs() < 1e-6 * oracle);

        let f = field(13);
        let chi = make_character(&f, 3).unwrap();
        let i = set(&f, &[1, 2, 3, 4]);
        let rep = davenport_check(&chi, &i, 3).unwrap();
        assert!(rep.exact && rep.ok);
        let oracle = davenport_lhs_oracle(&chi, &[1, 2, 3, 4], 3);
        assert!((rep.lhs - oracle).abs() < 1e-6 * oracle);
    }

    #[test]
    fn singleton_interval_moment_is_count_of_nonvanishing_pairs() {
        for p in [5u64, 7, 13] {
            let f = field(p);
            let chi = Character::legendre(&f).unwrap();
            let rep = davenport_check(&chi, &set(&f, &[1]), 3).unwrap();
            assert_eq!(rep.lhs, ((p - 1) * (p - 1)) as f64);
        }
    }

    #[test]
    fn translate_average_examples() {
        let f = field(101);
        let leg = Character::legendre(&f).unwrap();
        let a = FpSet::interval(&f, 1, 10);
        let b = FpSet::interval(&f, 1, 10);
        let zero = set(&f, &[0]);
        let one = set(&f, &[1]);
        let t = translate_average(&leg, &a, &b, &zero, &one).unwrap();
        assert_eq!(t.min, t.mean);
        assert_eq!(t.mean, t.row_total);
        assert!(t.mean >= t.sum_abs);
        assert!(t.triangle_ok && t.hull_ok && t.min_le_mean && t.mean_dominates && t.exact);

        let a0 = FpSet::interval(&f, 0, 3);
        let t = translate_average(&leg, &a, &b, &a0, &one).unwrap();
        assert_eq!(t.totals.len(), 4);
        assert_eq!(t.hull_size, 13);
        assert!(t.triangle_ok && t.hull_ok && t.min_le_mean && t.mean_dominates);

        assert!(translate_average(&leg, &a, &b, &FpSet::empty(&f), &one).is_err());
        assert!(translate_average(&leg, &a, &b, &zero, &FpSet::empty(&f)).is_err());
    }

    proptest! {
        #[test]
        fn translation_and_conjugation(
            xs in proptest::collection::vec(0u64..103, 1..12),
            ys in proptest::collection::vec(0u64..103, 1..12),
            t in 0u32..103,
            dsel in 0usize..4,
        ) {
            let f = field(103);
            let d = [2u32, 3, 6, 17][dsel];
            let chi = make_character(&f, d).unwrap();
            let a = FpSet::new(&f, xs).unwrap();
            let b = FpSet::new(&f, ys).unwrap();
            let s1 = char_sum(&chi, &a.translate(t), &b).unwrap();
            let s2 = char_sum(&chi, &a, &b.translate(t)).unwrap();
            prop_assert_eq!(&s1, &s2);
            let s = char_sum(&chi, &a, &b).unwrap();
            let sbar = char_sum(&chi.conjugate(), &a, &b).unwrap();
            prop_assert!((s.value().conj() - sbar.value()).norm() < 1e-9);
            prop_assert!(s.abs() <= (a.len() * b.len()) as f64 + 1e-9);
            prop_assert!(s.terms() <= (a.len() * b.len()) as u64);
        }

        #[test]
        fn weil_value_matches_direct_evaluation(
            roots in proptest::collection::btree_map(0u64..31, 1u32..5, 1..4),
        ) {
            let f = field(31);
            let chi = make_character(&f, 3).unwrap();
            let poly = SplitPoly::new(&f, roots).unwrap();
            let rep = weil_sum(&chi, &poly).unwrap();
            let direct: Complex64 = (0..31).map(|x| chi.value(poly.eval(x))).sum();
            prop_assert!((rep.value.value() - direct).norm() < 1e-9);
            if !rep.dth_power {
                prop_assert_eq!(rep.holds, Some(true));
            }
        }
    }
}
