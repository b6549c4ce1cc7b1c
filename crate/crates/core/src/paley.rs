//! Paley graphs and their exact clique and independence numbers.

use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::{Character, PrimeField};

/// Largest prime accepted by [`build_paley`].
pub const PALEY_MAX_P: u64 = 10_000;

/// The Paley graph on `F_p`, `p = 1 mod 4`: `a ~ b` iff `a - b` is a nonzero
/// square.
#[derive(Clone, Debug)]
pub struct PaleyGraph {
    field: PrimeField,
    rows: Vec<BitSet>,
}

/// Builds the Paley graph of `p`.
pub fn build_paley(p: u64) -> Result<PaleyGraph> {
    if p > PALEY_MAX_P {
        return Err(Error::CostGuard {
            what: "Paley modulus",
            value: p as u128,
            limit: PALEY_MAX_P as u128,
        });
    }
    let field = PrimeField::new(p)?;
    if p % 4 != 1 {
        return Err(Error::Invalid("Paley graphs need p = 1 mod 4"));
    }
    let leg = Character::legendre(&field)?;
    let n = p as usize;
    let squares: Vec<u32> = (1..p as u32).filter(|&s| leg.index(s) == Some(0)).collect();
    let rows = (0..p as u32)
        .map(|v| BitSet::from_indices(n, squares.iter().map(|&s| field.add(v, s) as usize)))
        .collect();
    Ok(PaleyGraph { field, rows })
}

impl PaleyGraph {
    /// Number of vertices.
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// The vertex field.
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Adjacency.
    pub fn is_edge(&self, a: u32, b: u32) -> bool {
        self.rows[a as usize].contains(b as usize)
    }

    /// Degree of `v`.
    pub fn degree(&self, v: u32) -> usize {
        self.rows[v as usize].count()
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.rows[v as usize].iter().map(|x| x as u32)
    }

    /// Whether `vertices` are pairwise adjacent.
    pub fn is_clique(&self, vertices: &[u32]) -> bool {
        vertices.iter().enumerate().all(|(i, &a)| {
            vertices[i + 1..]
                .iter()
                .all(|&b| a != b && self.is_edge(a, b))
        })
    }

    /// Whether `vertices` are pairwise non-adjacent and distinct.
    pub fn is_independent(&self, vertices: &[u32]) -> bool {
        vertices.iter().enumerate().all(|(i, &a)| {
            vertices[i + 1..]
                .iter()
                .all(|&b| a != b && !self.is_edge(a, b))
        })
    }

    /// Whether `v -> n v` for the given non-residue `n` exchanges edges and
    /// non-edges.
    pub fn is_complemented_by(&self, n: u32) -> bool {
        let f = &self.field;
        let p = self.p();
        (0..p).all(|a| {
            (a + 1..p).all(|b| self.is_edge(a, b) != self.is_edge(f.mul(n, a), f.mul(n, b)))
        })
    }

    /// Maximum clique, with a witness.
    ///
    /// `x -> s x + t` with `s` a nonzero square is an automorphism taking
    /// `{0, 1}` to any edge, so some maximum clique contains both 0 and 1.
    pub fn clique_number(&self) -> (usize, Vec<u32>) {
        let mut cand = self.rows[0].clone();
        cand.intersect_with(&self.rows[1]);
        let mut best = max_clique(&self.rows, cand);
        best.extend([0, 1]);
        best.sort_unstable();
        let best: Vec<u32> = best.into_iter().map(|v| v as u32).collect();
        (best.len(), best)
    }

    /// Maximum independent set, with a witness, found as a maximum clique of
    /// the complement. Translations fix the complement, so vertex 0 is in
    /// some maximum independent set.
    pub fn independence_number(&self) -> (usize, Vec<u32>) {
        let n = self.p() as usize;
        let complement: Vec<BitSet> = (0..n)
            .map(|v| {
                let mut row = BitSet::from_indices(n, 0..n);
                row.difference_with(&self.rows[v]);
                row.remove(v);
                row
            })
            .collect();
        let cand = complement[0].clone();
        let mut best = max_clique(&complement, cand);
        best.push(0);
        best.sort_unstable();
        let best: Vec<u32> = best.into_iter().map(|v| v as u32).collect();
        (best.len(), best)
    }
}

/// Greedy colouring of `cand`: returns vertices in colour order with the
/// running colour number, the usual bound for clique branch-and-bound.
fn colour_sort(adj: &[BitSet], cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.count());
    let mut colours = Vec::with_capacity(order.capacity());
    let mut uncoloured = cand.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(&adj[v]);
            uncoloured.remove(v);
            order.push(v);
            colours.push(colour);
        }
    }
    (order, colours)
}

fn expand(adj: &[BitSet], current: &mut Vec<usize>, mut cand: BitSet, best: &mut Vec<usize>) {
    let (order, colours) = colour_sort(adj, &cand);
    for i in (0..order.len()).rev() {
        if current.len() + colours[i] <= best.len() {
            return;
        }
        let v = order[i];
        current.push(v);
        let mut next = cand.clone();
        next.intersect_with(&adj[v]);
        if next.is_empty() {
            if current.len() > best.len() {
                best.clone_from(current);
            }
        } else {
            expand(adj, current, next, best);
        }
        current.pop();
        cand.remove(v);
    }
}

/// A maximum clique of the graph induced on `cand`.
fn max_clique(adj: &[BitSet], cand: BitSet) -> Vec<usize> {
    let mut best = Vec::new();
    if !cand.is_empty() {
        expand(adj, &mut Vec::new(), cand, &mut best);
    }
    best
}

/// One row of [`clique_growth_report`].
#[derive(Clone, Debug, PartialEq)]
pub struct CliqueRow {
    /// Prime.
    pub p: u32,
    /// Clique number.
    pub omega: usize,
    /// Independence number.
    pub alpha: usize,
    /// `omega / log2 p`.
    pub omega_over_log2p: f64,
    /// `omega / sqrt p`.
    pub omega_over_sqrtp: f64,
    /// A maximum clique.
    pub witness: Vec<u32>,
}

/// Clique numbers for a list of primes.
#[derive(Clone, Debug, PartialEq)]
pub struct CliqueGrowthReport {
    /// One row per prime, in input order.
    pub rows: Vec<CliqueRow>,
    /// Whether `omega / sqrt p` is non-increasing along the rows.
    pub sqrt_ratio_decreasing: bool,
}

/// Computes `omega` and `alpha` for each prime; nothing is asserted about
/// growth.
pub fn clique_growth_report(primes: &[u64]) -> Result<CliqueGrowthReport> {
    let rows = primes
        .iter()
        .map(|&p| {
            let g = build_paley(p)?;
            let (omega, witness) = g.clique_number();
            let (alpha, _) = g.independence_number();
            let pf = p as f64;
            Ok(CliqueRow {
                p: p as u32,
                omega,
                alpha,
                omega_over_log2p: omega as f64 / libm::log2(pf),
                omega_over_sqrtp: omega as f64 / libm::sqrt(pf),
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sqrt_ratio_decreasing = rows
        .windows(2)
        .all(|w| w[1].omega_over_sqrtp <= w[0].omega_over_sqrtp);
    Ok(CliqueGrowthReport {
        rows,
        sqrt_ratio_decreasing,
    })
}
