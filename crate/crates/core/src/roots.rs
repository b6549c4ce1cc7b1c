//! Formal sums `sum_k c_k omega_d^k` of `d`-th roots of unity with
//! nonnegative integer coefficients.
//!
//! Character sums are accumulated as index histograms. The complex value is
//! only formed at the end, and for `d in {1, 2, 3, 4, 6}` the squared modulus
//! is an exact integer multiple of 1/2, which lets inequality checks run with
//! no tolerance.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Orders whose cosines `cos(2 pi j / d)` are all half-integers.
pub const EXACT_ORDERS: [u32; 5] = [1, 2, 3, 4, 6];

/// `2 cos(30 deg * m)` at even `m`; odd slots are never read.
const TWO_COS: [i128; 12] = [2, 0, 1, 0, -1, 0, -2, 0, -1, 0, 1, 0];

/// A histogram of unit-root indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitRootSum {
    counts: Vec<u64>,
}

impl UnitRootSum {
    /// The empty sum of order `d`.
    pub fn zero(d: u32) -> Self {
        Self {
            counts: vec![0; d.max(1) as usize],
        }
    }

    /// From explicit coefficients `c_0..c_{d-1}`.
    pub fn from_counts(counts: Vec<u64>) -> Self {
        assert!(!counts.is_empty());
        Self { counts }
    }

    /// Resets every coefficient to zero.
    pub fn clear(&mut self) {
        self.counts.iter_mut().for_each(|c| *c = 0);
    }

    /// Root order `d`.
    pub fn order(&self) -> u32 {
        self.counts.len() as u32
    }

    /// Adds one `omega^k`.
    #[inline]
    pub fn push(&mut self, k: u32) {
        self.counts[k as usize] += 1;
    }

    /// Adds `mult * omega^k`.
    #[inline]
    pub fn push_n(&mut self, k: u32, mult: u64) {
        self.counts[k as usize] += mult;
    }

    /// Coefficients.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of unit-modulus summands.
    pub fn terms(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The integer value when `d <= 2`.
    pub fn exact_real(&self) -> Option<i64> {
        match self.counts.as_slice() {
            [c0] => Some(*c0 as i64),
            [c0, c1] => Some(*c0 as i64 - *c1 as i64),
            _ => None,
        }
    }

    /// `2 |z|^2` as an exact integer, for orders in [`EXACT_ORDERS`].
    pub fn twice_norm_sq(&self) -> Option<i128> {
        let d = self.order();
        if !EXACT_ORDERS.contains(&d) {
            return None;
        }
        let step = 12 / d as usize;
        let mut acc = 0i128;
        for (j, &cj) in self.counts.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            for (k, &ck) in self.counts.iter().enumerate() {
                let m = ((j + 12 - k) * step) % 12;
                acc += cj as i128 * ck as i128 * TWO_COS[m];
            }
        }
        Some(acc)
    }

    /// `2 Re(z)` as an exact integer, for orders in [`EXACT_ORDERS`].
    pub fn twice_real(&self) -> Option<i128> {
        let d = self.order();
        if !EXACT_ORDERS.contains(&d) {
            return None;
        }
        let step = 12 / d as usize;
        Some(
            self.counts
                .iter()
                .enumerate()
                .map(|(k, &c)| c as i128 * TWO_COS[(k * step) % 12])
                .sum(),
        )
    }

    /// The value in floating point. Summation order is fixed by index.
    pub fn value(&self) -> Complex64 {
        if let Some(v) = self.exact_real() {
            return Complex64::new(v as f64, 0.0);
        }
        let d = self.order() as f64;
        self.counts
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| {
                let theta = 2.0 * core::f64::consts::PI * k as f64 / d;
                acc + Complex64::new(libm::cos(theta), libm::sin(theta)) * c as f64
            })
    }

    /// `|z|`, taken from the exact squared norm where available.
    pub fn abs(&self) -> f64 {
        if let Some(v) = self.exact_real() {
            return v.unsigned_abs() as f64;
        }
        match self.twice_norm_sq() {
            Some(t) => libm::sqrt(t as f64 / 2.0),
            None => self.value().norm(),
        }
    }
}
