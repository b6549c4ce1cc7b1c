//! Finite subsets of `F_p`, Minkowski sums and products, and generalized
//! arithmetic progressions.

use alloc::vec::Vec;

use num_rational::Ratio;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Bitset-backed sumsets are used up to this modulus.
const BITSET_MAX_P: u32 = 1 << 20;

/// Largest index volume `prod H_j` that [`Gap::enumerate`] will walk.
pub const GAP_ENUMERATION_LIMIT: u128 = 100_000_000;

/// A subset of `F_p`, stored sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpSet {
    field: PrimeField,
    elements: Vec<u32>,
}

impl FpSet {
    fn from_unsorted(field: &PrimeField, mut elements: Vec<u32>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self {
            field: field.clone(),
            elements,
        }
    }

    /// Set of residues; anything `>= p` is rejected.
    pub fn new(field: &PrimeField, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        let elements = elements
            .into_iter()
            .map(|x| field.residue(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_unsorted(field, elements))
    }

    /// Integers reduced modulo `p`.
    pub fn from_integers(field: &PrimeField, it: impl IntoIterator<Item = i64>) -> Self {
        Self::from_unsorted(field, it.into_iter().map(|x| field.reduce(x)).collect())
    }

    /// The image of the integer interval `[lo, hi]`.
    pub fn interval(field: &PrimeField, lo: i64, hi: i64) -> Self {
        Self::from_integers(field, lo..=hi)
    }

    /// The empty set.
    pub fn empty(field: &PrimeField) -> Self {
        Self {
            field: field.clone(),
            elements: Vec::new(),
        }
    }

    /// All of `F_p`.
    pub fn full(field: &PrimeField) -> Self {
        Self {
            field: field.clone(),
            elements: (0..field.p()).collect(),
        }
    }

    /// The multiplicative subgroup of order `k`.
    pub fn subgroup(field: &PrimeField, k: u32) -> Result<Self> {
        let n = field.group_order();
        if k == 0 || !n.is_multiple_of(k) {
            return Err(Error::OrderMismatch {
                d: k as u64,
                order: n as u64,
            });
        }
        let step = (n / k) as u64;
        Ok(Self::from_unsorted(
            field,
            (0..k as u64).map(|j| field.exp(j * step)).collect(),
        ))
    }

    /// The ambient field.
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Cardinality.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in increasing order.
    pub fn as_slice(&self) -> &[u32] {
        &self.elements
    }

    /// Iterates elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().copied()
    }

    /// Membership.
    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subset(&self, other: &FpSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// `self \ {0}` together with whether 0 was present.
    pub fn without_zero(&self) -> (FpSet, bool) {
        let had = self.contains(0);
        let mut s = self.clone();
        if had {
            s.elements.remove(0);
        }
        (s, had)
    }

    /// `t + A`.
    pub fn translate(&self, t: u32) -> FpSet {
        let f = &self.field;
        Self::from_unsorted(f, self.iter().map(|x| f.add(x, t)).collect())
    }

    /// `lambda * A`.
    pub fn dilate(&self, lambda: u32) -> FpSet {
        let f = &self.field;
        Self::from_unsorted(f, self.iter().map(|x| f.mul(x, lambda)).collect())
    }

    /// `-A`.
    pub fn negate(&self) -> FpSet {
        let f = &self.field;
        Self::from_unsorted(f, self.iter().map(|x| f.neg(x)).collect())
    }

    /// Minkowski sum `A + B`.
    pub fn sumset(&self, other: &FpSet) -> Result<FpSet> {
        self.field.check_same(&other.field)?;
        let p = self.field.p();
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let pairwise_cost = small.len() as u64 * big.len() as u64;
        let bitset_cost = (small.len() as u64 + 1) * (p as u64 / 64 + 1);
        if p <= BITSET_MAX_P && bitset_cost < pairwise_cost {
            Ok(small.sumset_bitset(big))
        } else {
            Ok(self.sumset_pairwise(other))
        }
    }

    fn sumset_pairwise(&self, other: &FpSet) -> FpSet {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in self.iter() {
            out.extend(other.iter().map(|b| f.add(a, b)));
        }
        Self::from_unsorted(f, out)
    }

    fn sumset_bitset(&self, other: &FpSet) -> FpSet {
        let p = self.field.p() as usize;
        let src = BitSet::from_indices(p, other.iter().map(|x| x as usize));
        let mut acc = BitSet::new(p);
        for a in self.iter() {
            acc.or_rotated(&src, a as usize);
        }
        Self {
            field: self.field.clone(),
            elements: acc.iter().map(|x| x as u32).collect(),
        }
    }

    /// Difference set `A - B`.
    pub fn difference(&self, other: &FpSet) -> Result<FpSet> {
        self.field.check_same(&other.field)?;
        self.sumset(&other.negate())
    }

    /// Product set `A * I = {a i}`.
    pub fn product_set(&self, other: &FpSet) -> Result<FpSet> {
        self.field.check_same(&other.field)?;
        let f = &self.field;
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in self.iter() {
            out.extend(other.iter().map(|b| f.mul(a, b)));
        }
        Ok(Self::from_unsorted(f, out))
    }

    /// `|A + A| / |A|` as an exact rational.
    pub fn doubling_constant(&self) -> Result<Ratio<u64>> {
        if self.is_empty() {
            return Err(Error::EmptySet("doubling_constant"));
        }
        let doubled = self.sumset(self)?;
        Ok(Ratio::new(doubled.len() as u64, self.len() as u64))
    }
}

/// A generalized arithmetic progression
/// `a0 + { sum_j x_j a_j : 0 <= x_j < H_j }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    field: PrimeField,
    base: u32,
    gens: Vec<u32>,
    bounds: Vec<u64>,
}

/// The enumerated elements of a [`Gap`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapEnumeration {
    /// Distinct elements.
    pub set: FpSet,
    /// Whether all `prod H_j` index tuples give distinct elements.
    pub proper: bool,
}

impl Gap {
    /// Validates dimension, generator residues and positive bounds.
    pub fn new(field: &PrimeField, base: u64, gens: Vec<u64>, bounds: Vec<u64>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Invalid("a progression needs dimension at least 1"));
        }
        if gens.len() != bounds.len() {
            return Err(Error::Invalid("generator and bound lists differ in length"));
        }
        if bounds.contains(&0) {
            return Err(Error::Invalid("progression bounds must be positive"));
        }
        let gens = gens
            .into_iter()
            .map(|g| field.residue(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            field: field.clone(),
            base: field.residue(base)?,
            gens,
            bounds,
        })
    }

    /// `{start, start + 1, ..., start + len - 1}` as a one-dimensional progression.
    pub fn interval(field: &PrimeField, start: i64, len: u64) -> Result<Self> {
        Self::new(
            field,
            field.reduce(start) as u64,
            alloc::vec![1],
            alloc::vec![len],
        )
    }

    /// The ambient field.
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// `a0`.
    pub fn base(&self) -> u32 {
        self.base
    }

    /// Generators `a_1..a_d`.
    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    /// Bounds `H_1..H_d`.
    pub fn bounds(&self) -> &[u64] {
        &self.bounds
    }

    /// `d`.
    pub fn dimension(&self) -> usize {
        self.gens.len()
    }

    /// `prod H_j`, saturating.
    pub fn volume(&self) -> u128 {
        self.bounds
            .iter()
            .fold(1u128, |acc, &h| acc.saturating_mul(h as u128))
    }

    /// Enumerates the progression and reports whether it is proper.
    pub fn enumerate(&self) -> Result<GapEnumeration> {
        let volume = self.volume();
        if volume > GAP_ENUMERATION_LIMIT {
            return Err(Error::CostGuard {
                what: "progression volume",
                value: volume,
                limit: GAP_ENUMERATION_LIMIT,
            });
        }
        let f = &self.field;
        let d = self.dimension();
        // subtracting H_j a_j rolls coordinate j back to zero
        let rollback: Vec<u32> = self
            .gens
            .iter()
            .zip(&self.bounds)
            .map(|(&g, &h)| f.mul(g, (h % f.p() as u64) as u32))
            .collect();
        let mut seen = BitSet::new(f.p() as usize);
        let mut elements = Vec::new();
        let mut index = alloc::vec![0u64; d];
        let mut v = self.base;
        'walk: loop {
            if seen.insert(v as usize) {
                elements.push(v);
            }
            let mut j = 0;
            loop {
                if j == d {
                    break 'walk;
                }
                index[j] += 1;
                v = f.add(v, self.gens[j]);
                if index[j] < self.bounds[j] {
                    break;
                }
                index[j] = 0;
                v = f.sub(v, rollback[j]);
                j += 1;
            }
        }
        let proper = elements.len() as u128 == volume;
        Ok(GapEnumeration {
            set: FpSet::from_unsorted(f, elements),
            proper,
        })
    }

    /// The shrunk, unbased progression
    /// `{ sum_j x_j a_j : 0 <= x_j <= floor(p^(-2 alpha) H_j) }`.
    ///
    /// Each closed range has `floor(p^(-2 alpha) H_j) + 1` values.
    pub fn shrink(&self, alpha: f64) -> Result<Gap> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Invalid("shrink exponent must be positive"));
        }
        let factor = libm::pow(self.field.p() as f64, -2.0 * alpha);
        Ok(Gap {
            field: self.field.clone(),
            base: 0,
            gens: self.gens.clone(),
            bounds: self
                .bounds
                .iter()
                .map(|&h| libm::floor(factor * h as f64) as u64 + 1)
                .collect(),
        })
    }
}

/// Outcome of [`box_containment`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxContainment {
    /// Whether `A - A0 I` lies in the expanded box.
    pub contained: bool,
    /// `|A - A0 I|`.
    pub difference_size: usize,
    /// Enumerated size of the expanded box.
    pub box_size: usize,
    /// Index volume of the expanded box, `prod (H_j + e_j)`.
    pub box_volume: u128,
    /// Negative extents `e_j = floor(p^(-alpha) H_j)`.
    pub extents: Vec<u64>,
}

/// Checks `A - A0 I` against the expanded box
/// `a0 + { sum_j z_j a_j : -floor(p^(-alpha) H_j) <= z_j <= H_j - 1 }`.
///
/// `A` must lie in `P`, `A0` must be `P.shrink(alpha)`, and `I` must be a
/// nonempty interval `[1, n]`.
pub fn box_containment(
    a: &FpSet,
    a0: &Gap,
    interval: &FpSet,
    p_gap: &Gap,
    alpha: f64,
) -> Result<BoxContainment> {
    let f = p_gap.field();
    f.check_same(a.field())?;
    f.check_same(a0.field())?;
    f.check_same(interval.field())?;
    let expected = p_gap.shrink(alpha)?;
    if a0.gens != expected.gens || a0.bounds != expected.bounds || a0.base != 0 {
        return Err(Error::Invalid("A0 is not the shrink of P at this alpha"));
    }
    let n = interval.len() as u32;
    if n == 0 || !interval.iter().eq(1..=n) {
        return Err(Error::Invalid("I must be an interval [1, n]"));
    }
    let p_set = p_gap.enumerate()?.set;
    if !a.is_subset(&p_set) {
        return Err(Error::Invalid("A is not contained in P"));
    }

    let a0_set = a0.enumerate()?.set;
    let diff = a.difference(&a0_set.product_set(interval)?)?;

    let scale = libm::pow(f.p() as f64, -alpha);
    let extents: Vec<u64> = p_gap
        .bounds
        .iter()
        .map(|&h| libm::floor(scale * h as f64) as u64)
        .collect();
    let mut base = p_gap.base;
    for (&g, &e) in p_gap.gens.iter().zip(&extents) {
        base = f.sub(base, f.mul(g, (e % f.p() as u64) as u32));
    }
    let expanded = Gap {
        field: f.clone(),
        base,
        gens: p_gap.gens.clone(),
        bounds: p_gap
            .bounds
            .iter()
            .zip(&extents)
            .map(|(&h, &e)| h + e)
            .collect(),
    };
    let box_set = expanded.enumerate()?.set;
    Ok(BoxContainment {
        contained: diff.is_subset(&box_set),
        difference_size: diff.len(),
        box_size: box_set.len(),
        box_volume: expanded.volume(),
        extents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn set(f: &PrimeField, xs: &[u64]) -> FpSet {
        FpSet::new(f, xs.iter().copied()).unwrap()
    }

    #[test]
    fn sumset_examples() {
        let f7 = field(7);
        assert_eq!(
            set(&f7, &[1, 2]).sumset(&set(&f7, &[3])).unwrap(),
            set(&f7, &[4, 5])
        );
        let f101 = field(101);
        let a = set(&f101, &[1, 2, 3]);
        assert_eq!(a.sumset(&a).unwrap().len(), 5);
        let full = FpSet::full(&f101);
        assert_eq!(full.sumset(&set(&f101, &[17])).unwrap(), full);
        assert!(FpSet::empty(&f7)
            .sumset(&set(&f7, &[1]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn difference_examples() {
        let f7 = field(7);
        assert_eq!(
            set(&f7, &[5]).difference(&set(&f7, &[3])).unwrap(),
            set(&f7, &[2])
        );
        let f5 = field(5);
        let s = set(&f5, &[0, 1]);
        assert_eq!(s.difference(&s).unwrap(), set(&f5, &[0, 1, 4]));
    }

    #[test]
    fn product_set_examples() {
        let f7 = field(7);
        assert_eq!(
            set(&f7, &[2, 3]).product_set(&set(&f7, &[1])).unwrap(),
            set(&f7, &[2, 3])
        );
        assert_eq!(
            set(&f7, &[1, 2]).product_set(&set(&f7, &[2, 3])).unwrap(),
            set(&f7, &[2, 3, 4, 6])
        );
        assert_eq!(
            set(&f7, &[0]).product_set(&set(&f7, &[1, 2, 3])).unwrap(),
            set(&f7, &[0])
        );
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let a = set(&field(7), &[1]);
        let b = set(&field(11), &[1]);
        assert_eq!(a.sumset(&b), Err(Error::FieldMismatch(7, 11)));
        assert!(a.difference(&b).is_err());
        assert!(a.product_set(&b).is_err());
    }

    #[test]
    fn rejects_non_residues() {
        assert!(matches!(
            FpSet::new(&field(7), [3, 7]),
            Err(Error::NotResidue { x: 7, p: 7 })
        ));
    }

    #[test]
    fn doubling_constants() {
        let f = field(101);
        assert_eq!(
            FpSet::interval(&f, 1, 10).doubling_constant().unwrap(),
            Ratio::new(19, 10)
        );
        assert_eq!(
            FpSet::full(&f).doubling_constant().unwrap(),
            Ratio::new(1, 1)
        );
        assert_eq!(
            FpSet::empty(&f).doubling_constant(),
            Err(Error::EmptySet("doubling_constant"))
        );
    }

    #[test]
    fn subgroups() {
        let f = field(7);
        assert_eq!(FpSet::subgroup(&f, 3).unwrap(), set(&f, &[1, 2, 4]));
        assert!(FpSet::subgroup(&f, 4).is_err());
    }

    #[test]
    fn gap_enumeration_examples() {
        let f11 = field(11);
        let e = Gap::new(&f11, 0, vec![2], vec![3])
            .unwrap()
            .enumerate()
            .unwrap();
        assert_eq!(e.set, set(&f11, &[0, 2, 4]));
        assert!(e.proper);

        let f5 = field(5);
        let e = Gap::new(&f5, 0, vec![1, 2], vec![3, 2])
            .unwrap()
            .enumerate()
            .unwrap();
        assert_eq!(e.set, FpSet::full(&f5));
        assert!(!e.proper);

        let f101 = field(101);
        let e = Gap::new(&f101, 0, vec![1, 10], vec![3, 3])
            .unwrap()
            .enumerate()
            .unwrap();
        assert_eq!(e.set, set(&f101, &[0, 1, 2, 10, 11, 12, 20, 21, 22]));
        assert!(e.proper);
    }

    #[test]
    fn gap_validation_and_guard() {
        let f = field(101);
        assert!(Gap::new(&f, 0, vec![], vec![]).is_err());
        assert!(Gap::new(&f, 0, vec![1], vec![0]).is_err());
        assert!(Gap::new(&f, 0, vec![1, 2], vec![3]).is_err());
        let huge = Gap::new(&f, 0, vec![1, 2, 3], vec![1000, 1000, 1000]).unwrap();
        assert!(matches!(huge.enumerate(), Err(Error::CostGuard { .. })));
    }

    #[test]
    fn shrink_examples() {
        let f = field(101);
        let p = Gap::interval(&f, 0, 10).unwrap();
        let a0 = p.shrink(0.124).unwrap();
        assert_eq!(a0.bounds(), &[4]);
        assert_eq!(a0.enumerate().unwrap().set, set(&f, &[0, 1, 2, 3]));
        // p^(-2 alpha) rounds to exactly 1: the closed box [0, H]
        let p2 = Gap::new(&f, 5, vec![1, 10], vec![3, 4]).unwrap();
        assert_eq!(p2.shrink(1e-18).unwrap().bounds(), &[4, 5]);
        assert!(p.shrink(0.0).is_err());
        assert!(p.shrink(-1.0).is_err());
    }

    #[test]
    fn shrunk_doubling_is_at_most_two_to_the_d() {
        let f = field(10007);
        let p = Gap::new(&f, 3, vec![1, 100], vec![40, 30]).unwrap();
        for alpha in [0.01, 0.05, 0.1, 0.2] {
            let a0 = p.shrink(alpha).unwrap().enumerate().unwrap();
            assert!(a0.proper);
            let doubled = a0.set.sumset(&a0.set).unwrap();
            assert!(doubled.len() <= 4 * a0.set.len());
        }
    }

    #[test]
    fn box_containment_examples() {
        let f = field(101);
        let p = Gap::interval(&f, 1, 10).unwrap();
        let a = p.enumerate().unwrap().set;
        let i1 = set(&f, &[1]);
        let a0 = p.shrink(0.124).unwrap();
        let r = box_containment(&a, &a0, &i1, &p, 0.124).unwrap();
        assert!(r.contained);
        assert!(r.difference_size <= r.box_size);

        // alpha large enough that A0 = {0}: A - A0 I = A
        let a0 = p.shrink(0.5).unwrap();
        assert_eq!(a0.enumerate().unwrap().set, set(&f, &[0]));
        let r = box_containment(&a, &a0, &i1, &p, 0.5).unwrap();
        assert!(r.contained);
        assert_eq!(r.difference_size, a.len());

        // wrong A0, bad interval, A not in P
        assert!(box_containment(&a, &p.shrink(0.2).unwrap(), &i1, &p, 0.124).is_err());
        assert!(box_containment(&a, &a0, &set(&f, &[2]), &p, 0.5).is_err());
        assert!(box_containment(&set(&f, &[50]), &a0, &i1, &p, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn bitset_and_pairwise_sumsets_agree(
            xs in proptest::collection::vec(0u64..257, 0..40),
            ys in proptest::collection::vec(0u64..257, 0..40),
        ) {
            let f = field(257);
            let a = FpSet::new(&f, xs).unwrap();
            let b = FpSet::new(&f, ys).unwrap();
            prop_assert_eq!(a.sumset_bitset(&b), a.sumset_pairwise(&b));
            prop_assert_eq!(a.sumset(&b).unwrap(), b.sumset(&a).unwrap());
        }

        #[test]
        fn sumset_laws(
            xs in proptest::collection::vec(0u64..101, 1..15),
            ys in proptest::collection::vec(0u64..101, 1..15),
            zs in proptest::collection::vec(0u64..101, 1..15),
        ) {
            let f = field(101);
            let (a, b, c) = (FpSet::new(&f, xs).unwrap(), FpSet::new(&f, ys).unwrap(), FpSet::new(&f, zs).unwrap());
            let ab = a.sumset(&b).unwrap();
            prop_assert_eq!(ab.sumset(&c).unwrap(), a.sumset(&b.sumset(&c).unwrap()).unwrap());
            prop_assert!(ab.len() >= a.len().max(b.len()));
            prop_assert!(ab.len() <= (a.len() * b.len()).min(101));
            let k = a.doubling_constant().unwrap();
            prop_assert_eq!(k, Ratio::new(a.sumset(&a).unwrap().len() as u64, a.len() as u64));
        }

        #[test]
        fn integer_sets_double_at_least_linearly(xs in proptest::collection::vec(0i64..50, 1..30)) {
            let f = field(101);
            let a = FpSet::from_integers(&f, xs);
            prop_assert!(a.sumset(&a).unwrap().len() >= 2 * a.len() - 1);
        }

        #[test]
        fn proper_gaps_have_full_volume(g1 in 1u64..1009, g2 in 1u64..1009, h1 in 1u64..8, h2 in 1u64..8) {
            let f = field(1009);
            let gap = Gap::new(&f, 0, vec![g1, g2], vec![h1, h2]).unwrap();
            let e = gap.enumerate().unwrap();
            prop_assert!(e.set.len() as u128 <= gap.volume());
            prop_assert_eq!(e.proper, e.set.len() as u128 == gap.volume());
        }

        #[test]
        fn box_contains_difference(
            g1 in 1u64..10007, g2 in 1u64..10007,
            h1 in 1u64..30, h2 in 1u64..30,
            base in 0u64..10007,
            alpha in 0.01f64..0.4,
            keep in proptest::collection::vec(any::<bool>(), 900),
        ) {
            let f = field(10007);
            let p = Gap::new(&f, base, vec![g1, g2], vec![h1, h2]).unwrap();
            let all = p.enumerate().unwrap().set;
            let mut a = FpSet::from_integers(&f, all.iter().zip(&keep).filter(|(_, &k)| k).map(|(x, _)| x as i64));
            if a.is_empty() {
                a = FpSet::new(&f, [all.as_slice()[0] as u64]).unwrap();
            }
            let n = libm::floor(libm::pow(10007.0, alpha)) as i64;
            let i = FpSet::interval(&f, 1, n);
            let a0 = p.shrink(alpha).unwrap();
            let r = box_containment(&a, &a0, &i, &p, alpha).unwrap();
            prop_assert!(r.contained);
            prop_assert!(r.difference_size <= r.box_size);
        }
    }
}
