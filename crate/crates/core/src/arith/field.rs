//! Scalar fields used throughout the crate.
//!
//! Everything above this module is generic over [`Field`]. Three families
//! implement it: exact rationals ([`Rational`]), prime fields ([`Fp`]) and
//! the binary floating point types (useful for quick numerical sanity checks,
//! never for certification).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Rational = BigRational;

/// Default modulus: the largest prime below 2^62.
pub const DEFAULT_PRIME: u64 = 4_611_686_018_427_387_847;

/// A commutative field with exact or approximate arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Embeds a small integer.
    fn from_i64(v: i64) -> Self;

    /// Pivot preference during elimination. Exact fields only need a nonzero
    /// pivot; floating point wants the largest magnitude.
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    /// Whether arithmetic is exact (zero tests are reliable).
    fn is_exact() -> bool {
        true
    }

    /// Integer power by repeated squaring; negative exponents invert.
    fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 {
            self.inverse().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Field for Rational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            fn inverse(&self) -> Option<Self> {
                if *self == 0.0 {
                    None
                } else {
                    Some(1.0 / self)
                }
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn pivot_weight(&self) -> f64 {
                self.abs() as f64
            }

            fn is_exact() -> bool {
                false
            }
        }
    };
}

float_field!(f32);
float_field!(f64);

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// A prime field `Z/pZ` with `p < 2^63`, checked at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus >= 1 << 63 {
            return Err(Error::InvalidPrime(modulus, "modulus must be below 2^63"));
        }
        if !is_prime_u64(modulus) {
            return Err(Error::InvalidPrime(modulus, "not prime"));
        }
        Ok(PrimeField { modulus })
    }

    /// The field with [`DEFAULT_PRIME`].
    pub fn default_field() -> Self {
        PrimeField { modulus: DEFAULT_PRIME }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elem(&self, v: u64) -> Fp {
        Fp { value: v % self.modulus, modulus: self.modulus }
    }

    pub fn from_i64(&self, v: i64) -> Fp {
        let m = self.modulus as i128;
        Fp { value: (v as i128).rem_euclid(m) as u64, modulus: self.modulus }
    }

    /// Uniform element.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp {
        Fp { value: rng.gen_range(0..self.modulus), modulus: self.modulus }
    }

    /// Uniform nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp {
        Fp { value: rng.gen_range(1..self.modulus), modulus: self.modulus }
    }
}

/// Element of a prime field.
///
/// The element carries its modulus so that generic code can use plain
/// operators. `Zero::zero()`, `One::one()` and `Field::from_i64` produce
/// *unbound* small integers (modulus 0) which adopt the modulus of whatever
/// they are combined with.
#[derive(Clone, Copy)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    /// Canonical residue. Unbound constants report their integer value,
    /// which may be negative; use [`Fp::residue_in`] to reduce.
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    /// Residue modulo `p`, reducing unbound constants.
    pub fn residue_in(&self, p: u64) -> u64 {
        if self.modulus == 0 {
            (self.value as i64 as i128).rem_euclid(p as i128) as u64
        } else {
            debug_assert_eq!(self.modulus, p, "mixing prime fields");
            self.value
        }
    }

    fn unbound(v: i64) -> Self {
        Fp { value: v as u64, modulus: 0 }
    }

    #[inline]
    fn common(a: &Fp, b: &Fp) -> u64 {
        match (a.modulus, b.modulus) {
            (0, m) | (m, 0) => m,
            (m, n) => {
                assert_eq!(m, n, "arithmetic across different prime fields");
                m
            }
        }
    }

    #[inline]
    fn binary(a: Fp, b: Fp, bound: fn(u64, u64, u64) -> u64, free: fn(i64, i64) -> Option<i64>) -> Fp {
        let m = Fp::common(&a, &b);
        if m == 0 {
            let v = free(a.value as i64, b.value as i64).expect("overflow in unbound prime-field constant");
            return Fp::unbound(v);
        }
        Fp { value: bound(a.residue_in(m), b.residue_in(m), m), modulus: m }
    }
}

#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let m = Fp::common(self, other);
        if m == 0 {
            self.value == other.value
        } else {
            self.residue_in(m) == other.residue_in(m)
        }
    }
}

impl Eq for Fp {}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{}", self.value as i64)
        } else {
            write!(f, "{} (mod {})", self.value, self.modulus)
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{}", self.value as i64)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        Fp::binary(self, rhs, add_mod, i64::checked_add)
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        Fp::binary(self, rhs, sub_mod, i64::checked_sub)
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        Fp::binary(self, rhs, mul_mod, i64::checked_mul)
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inverse().expect("division by zero in prime field")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.modulus == 0 {
            Fp::unbound(-(self.value as i64))
        } else if self.value == 0 {
            self
        } else {
            Fp { value: self.modulus - self.value, modulus: self.modulus }
        }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp::unbound(0)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp::unbound(1)
    }
}

impl Field for Fp {
    fn inverse(&self) -> Option<Self> {
        if self.modulus == 0 {
            return match self.value as i64 {
                1 => Some(*self),
                -1 => Some(*self),
                _ => panic!("cannot invert an unbound prime-field constant other than ±1"),
            };
        }
        inv_mod(self.value, self.modulus).map(|v| Fp { value: v, modulus: self.modulus })
    }

    fn from_i64(v: i64) -> Self {
        Fp::unbound(v)
    }
}

/// Reduces a rational modulo `p`; `None` when the denominator vanishes.
pub fn rational_mod_p(r: &Rational, field: &PrimeField) -> Option<Fp> {
    let p = BigInt::from(field.modulus());
    let reduce = |x: &BigInt| -> u64 {
        let v = ((x % &p) + &p) % &p;
        v.to_u64().expect("residue fits in u64")
    };
    let num = field.elem(reduce(r.numer()));
    let den = field.elem(reduce(r.denom()));
    den.inverse().map(|d| num * d)
}

/// Rational from an integer.
pub fn rat(v: i64) -> Rational {
    Rational::from_i64(v)
}
