//! Prime fields, primitive roots, discrete logarithms and multiplicative
//! characters.
//!
//! A [`PrimeField`] carries a primitive root `g` together with the full
//! `g^k` and discrete-log tables, so every multiplicative question reduces to
//! index arithmetic mod `p - 1`. A [`Character`] of order `d` is evaluated as
//! a unit-root index `k` with `chi(x) = exp(2 pi i k / d)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest modulus for which tables are built.
pub const MAX_MODULUS: u64 = 1 << 26;

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m`.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let odd = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`, ascending, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q.saturating_mul(q) <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest generator of `F_p^*`.
///
/// Candidates are tested by `g^((p-1)/q) != 1` for every prime `q | p - 1`.
pub fn find_primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = p - 1;
    let factors = prime_factors(n);
    (1..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, n / q, p) != 1))
        .ok_or(Error::Invalid("no primitive root found"))
}

struct Tables {
    p: u32,
    g: u32,
    /// `exp[k] = g^k`, `k in [0, p-2]`.
    exp: Vec<u32>,
    /// `dlog[x] = k` with `g^k = x`; slot 0 is unused.
    dlog: Vec<u32>,
}

/// The prime field `F_p` with a primitive root and discrete-log table.
///
/// Cloning is cheap: the tables are shared.
#[derive(Clone)]
pub struct PrimeField {
    tables: Arc<Tables>,
}

impl PrimeField {
    /// Builds `F_p`, its smallest primitive root and the discrete-log table.
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::ModulusTooLarge {
                p,
                max: MAX_MODULUS,
            });
        }
        let g = find_primitive_root(p)?;
        let n = (p - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut dlog = vec![u32::MAX; p as usize];
        let mut x = 1u64;
        for k in 0..n {
            exp.push(x as u32);
            dlog[x as usize] = k as u32;
            x = x * g % p;
        }
        Ok(Self {
            tables: Arc::new(Tables {
                p: p as u32,
                g: g as u32,
                exp,
                dlog,
            }),
        })
    }

    /// The modulus.
    #[inline]
    pub fn p(&self) -> u32 {
        self.tables.p
    }

    /// The primitive root used for the tables.
    #[inline]
    pub fn generator(&self) -> u32 {
        self.tables.g
    }

    /// `p - 1`, the order of the multiplicative group.
    #[inline]
    pub fn group_order(&self) -> u32 {
        self.tables.p - 1
    }

    /// Whether both handles describe the same modulus.
    #[inline]
    pub fn same_as(&self, other: &PrimeField) -> bool {
        Arc::ptr_eq(&self.tables, &other.tables) || self.p() == other.p()
    }

    pub(crate) fn check_same(&self, other: &PrimeField) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.p() as u64, other.p() as u64))
        }
    }

    /// Checks that `x` is a residue and narrows it.
    pub fn residue(&self, x: u64) -> Result<u32> {
        if x < self.p() as u64 {
            Ok(x as u32)
        } else {
            Err(Error::NotResidue {
                x,
                p: self.p() as u64,
            })
        }
    }

    /// Embeds an integer.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p() as i64) as u32
    }

    /// Discrete log of `x != 0`; `None` for zero.
    #[inline]
    pub fn dlog(&self, x: u32) -> Option<u32> {
        if x == 0 {
            None
        } else {
            Some(self.tables.dlog[x as usize])
        }
    }

    /// `g^k` for any `k`.
    #[inline]
    pub fn exp(&self, k: u64) -> u32 {
        self.tables.exp[(k % self.group_order() as u64) as usize]
    }

    /// Sum modulo `p`.
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p() as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    /// Difference modulo `p`.
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p() - b)
        }
    }

    /// Additive inverse.
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p() - a
        }
    }

    /// Product modulo `p`.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p() as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        let n = self.group_order();
        self.dlog(a)
            .map(|k| self.tables.exp[((n - k) % n) as usize])
    }

    /// `a / b`; `None` when `b = 0`.
    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e`.
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        pow_mod(a as u64, e, self.p() as u64) as u32
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeField")
            .field("p", &self.p())
            .field("g", &self.generator())
            .finish()
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for PrimeField {}

/// A multiplicative character of exact order `d` modulo `p`.
///
/// `chi(g^k) = omega_d^(twist * k)` with `gcd(twist, d) = 1`;
/// [`make_character`] uses `twist = 1`. `chi(0) = 0`.
#[derive(Clone)]
pub struct Character {
    field: PrimeField,
    order: u32,
    twist: u32,
    roots: Arc<[Complex64]>,
}

/// The character of order `d` sending the field's primitive root to
/// `exp(2 pi i / d)`.
pub fn make_character(field: &PrimeField, d: u32) -> Result<Character> {
    let n = field.group_order();
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::OrderMismatch {
            d: d as u64,
            order: n as u64,
        });
    }
    Ok(Character::with_twist(
        field.clone(),
        d,
        if d == 1 { 0 } else { 1 },
    ))
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Character {
    fn with_twist(field: PrimeField, order: u32, twist: u32) -> Self {
        let roots = (0..order)
            .map(|k| {
                let theta = 2.0 * core::f64::consts::PI * k as f64 / order as f64;
                Complex64::new(libm::cos(theta), libm::sin(theta))
            })
            .collect::<Vec<_>>()
            .into();
        Self {
            field,
            order,
            twist: twist % order.max(1),
            roots,
        }
    }

    /// The Legendre symbol on `field` (order 2). Needs odd `p`.
    pub fn legendre(field: &PrimeField) -> Result<Self> {
        make_character(field, 2)
    }

    /// The underlying field.
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Exact order `d`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Whether this is `chi_0`.
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Unit-root index of `chi(x)`, or `None` for `x = 0`.
    #[inline]
    pub fn index(&self, x: u32) -> Option<u32> {
        self.field
            .dlog(x)
            .map(|k| ((k as u64 * self.twist as u64) % self.order as u64) as u32)
    }

    /// `chi(x)` as a complex number.
    pub fn value(&self, x: u32) -> Complex64 {
        self.index(x)
            .map_or(Complex64::new(0.0, 0.0), |k| self.roots[k as usize])
    }

    /// `exp(2 pi i k / d)`.
    #[inline]
    pub fn unit_root(&self, k: u32) -> Complex64 {
        self.roots[(k % self.order) as usize]
    }

    /// The conjugate character `x -> chi(x^-1)`.
    pub fn conjugate(&self) -> Self {
        let twist = (self.order - self.twist) % self.order;
        Self {
            field: self.field.clone(),
            order: self.order,
            twist,
            roots: self.roots.clone(),
        }
    }

    /// `chi^e`, whose order is `d / gcd(d, e)`.
    pub fn pow(&self, e: u32) -> Self {
        let g = gcd(self.order, e % self.order);
        let g = if g == 0 { self.order } else { g };
        let order = self.order / g;
        let twist = ((e as u64 / g as u64) * self.twist as u64 % order as u64) as u32;
        Self::with_twist(self.field.clone(), order, twist)
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Character")
            .field("p", &self.field.p())
            .field("order", &self.order)
            .field("twist", &self.twist)
            .finish()
    }
}
