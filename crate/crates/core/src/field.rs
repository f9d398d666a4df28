//! Exact coefficient fields.
//!
//! Everything in the engine is generic over [`Field`]. Two implementations
//! ship: [`Rational`] (arbitrary precision, characteristic zero) and
//! [`Fp`], a prime field whose modulus is fixed at compile time.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Field:
    Clone + fmt::Debug + fmt::Display + PartialEq + Eq + Hash + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    /// 0 for the rationals.
    fn characteristic() -> u64;
    /// Parses `"p"` or `"p/q"` (optionally signed).
    fn parse(s: &str) -> Result<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

/// Exact rational number printed as `p` or `p/q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_ratio(s: &str) -> Result<(BigInt, BigInt)> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid coefficient `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(n).map_err(|_| bad())?;
    let den = BigInt::from_str(d).map_err(|_| bad())?;
    if den.is_zero() || den.is_negative() {
        return Err(bad());
    }
    Ok((num, den))
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn characteristic() -> u64 {
        0
    }
    fn parse(s: &str) -> Result<Self> {
        let (n, d) = parse_ratio(s)?;
        Ok(Rational(BigRational::new(n, d)))
    }
}

/// Integers modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {P}", self.0)
    }
}

impl<const P: u64> Fp<P> {
    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce_big(n: &BigInt) -> u64 {
        let m = BigInt::from(P);
        n.mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        let p = P as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 + other.0 as u128) % P as u128) as u64)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - other.0 as u128) % P as u128) as u64)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 * other.0 as u128) % P as u128) as u64)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn from_i64(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }
    fn characteristic() -> u64 {
        P
    }
    fn parse(s: &str) -> Result<Self> {
        let (n, d) = parse_ratio(s)?;
        let num = Fp::<P>(Self::reduce_big(&n));
        let den = Fp::<P>(Self::reduce_big(&d));
        num.div(&den)
            .ok_or_else(|| Error::Parse(format!("denominator of `{s}` vanishes mod {P}")))
    }
}

/// Primes selectable at run time with `--field fp:<p>`.
pub const SUPPORTED_PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13, 101, 32003, 65521, 2147483647];
