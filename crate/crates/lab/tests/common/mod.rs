//! Brute-force oracles sharing no code with the library.
#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

/// Discrete logs by walking the powers of the least generator.
pub struct Oracle {
    pub p: u64,
    pub dlog: Vec<u64>,
}

impl Oracle {
    pub fn new(p: u64) -> Self {
        for g in 1..p {
            let mut dlog = vec![u64::MAX; p as usize];
            let mut x = 1u64;
            let mut ok = true;
            for k in 0..p - 1 {
                if dlog[x as usize] != u64::MAX {
                    ok = false;
                    break;
                }
                dlog[x as usize] = k;
                x = x * g % p;
            }
            if ok {
                return Oracle { p, dlog };
            }
        }
        unreachable!()
    }

    /// `exp(2 pi i dlog(x) / d)`, 0 at 0.
    pub fn chi(&self, d: u64, x: u64) -> Complex64 {
        let x = x % self.p;
        if x == 0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(1.0, TAU * (self.dlog[x as usize] % d) as f64 / d as f64)
    }

    /// Legendre symbol by Euler's criterion.
    pub fn legendre(&self, x: u64) -> i64 {
        let x = x % self.p;
        if x == 0 {
            return 0;
        }
        let (mut b, mut e, mut r) = (x, (self.p - 1) / 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }
}

/// `#{(a, a', b1, b1', b2, b2') : b1 a' = b1' a, b2 a' = b2' a}`.
pub fn sextuple_system(p: u64, a: &[u64], b: &[u64]) -> u128 {
    let mut n = 0u128;
    for &x in a {
        for &x2 in a {
            for &b1 in b {
                for &b1p in b {
                    if b1 * x2 % p != b1p * x % p {
                        continue;
                    }
                    for &b2 in b {
                        for &b2p in b {
                            if b2 * x2 % p == b2p * x % p {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    n
}

/// `#{(a1, .., a6) : a1 a4 = a2 a3, a3 a6 = a4 a5}`, i.e. `a1/a2 = a3/a4 = a5/a6`.
pub fn sextuple_e3(p: u64, a: &[u64]) -> u128 {
    let mut n = 0u128;
    for &a1 in a {
        for &a2 in a {
            for &a3 in a {
                for &a4 in a {
                    if a1 * a4 % p != a2 * a3 % p {
                        continue;
                    }
                    for &a5 in a {
                        for &a6 in a {
                            if a3 * a6 % p == a4 * a5 % p {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    n
}

/// Largest clique of the Paley graph by subset enumeration.
pub fn paley_clique_exhaustive(o: &Oracle) -> usize {
    let p = o.p;
    let edge = |a: u64, b: u64| o.legendre((a + p - b) % p) == 1;
    (0u32..1 << p)
        .filter(|&mask| {
            let vs: Vec<u64> = (0..p).filter(|v| mask >> v & 1 == 1).collect();
            vs.iter()
                .enumerate()
                .all(|(i, &a)| vs[i + 1..].iter().all(|&b| edge(a, b)))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap()
}
