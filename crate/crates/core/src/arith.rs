//! Exact rational arithmetic, primality and p-adic absolute values.
//!
//! [`Rational`] is a thin newtype over [`num_rational::BigRational`] that
//! always stays in lowest terms with a positive denominator, prints as `a/b`
//! (or `a` for integers) and serialises as that string.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision exact fraction in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self> {
        let den = denominator.into();
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numerator.into(), den)))
    }

    /// `numerator / denominator`; panics on a zero denominator.
    pub fn frac(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        Rational(BigRational::new(numerator.into(), denominator.into()))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_big(inner: BigRational) -> Self {
        Rational(inner)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// `base^exp` for any signed exponent; `base` must be non-zero when `exp < 0`.
    pub fn pow(base: u64, exp: i64) -> Self {
        let magnitude = num_traits::pow(BigInt::from(base), exp.unsigned_abs() as usize);
        let value = BigRational::from_integer(magnitude);
        if exp < 0 {
            Rational(value.recip())
        } else {
            Rational(value)
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
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

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => {
                let num: BigInt = a.trim().parse().map_err(|_| bad())?;
                let den: BigInt = b.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Rational(BigRational::new(num, den)))
            }
            None => {
                let num: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational::integer(num))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// p-adic valuation, with a distinct value for zero.
///
/// `Finite` sorts below `Infinite`, matching the usual convention `v(0) = +∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// Deterministic trial division. Inputs here are small primes and
/// desk-scale integers, so this is plenty.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

/// Exponent of `p` in a non-zero integer.
pub(crate) fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `v` such that `r = p^v · a/b` with `p ∤ a, b`; [`Valuation::Infinite`] for zero.
pub fn valuation(r: &Rational, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    Ok(valuation_unchecked(r, p))
}

pub(crate) fn valuation_unchecked(r: &Rational, p: u64) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(int_valuation(r.numer(), p) - int_valuation(r.denom(), p))
}

/// `|r|_p = p^(-v_p(r))`, and `|0|_p = 0`.
pub fn padic_abs(r: &Rational, p: u64) -> Result<Rational> {
    check_prime(p)?;
    Ok(padic_abs_unchecked(r, p))
}

pub(crate) fn padic_abs_unchecked(r: &Rational, p: u64) -> Rational {
    match valuation_unchecked(r, p) {
        Valuation::Infinite => Rational::zero(),
        Valuation::Finite(v) => Rational::pow(p, -v),
    }
}

pub fn archimedean_abs(r: &Rational) -> Rational {
    r.abs()
}

/// Whether `|r|_p <= 1`.
pub(crate) fn is_p_integral(r: &Rational, p: u64) -> bool {
    !r.denom().is_multiple_of(&BigInt::from(p))
}

/// Distinct prime factors of `|n|`, ascending. `n` must be non-zero.
pub(crate) fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return out;
    }
    let mut d = 2u64;
    loop {
        let dd = BigInt::from(d) * BigInt::from(d);
        if dd > m {
            break;
        }
        let bd = BigInt::from(d);
        if m.is_multiple_of(&bd) {
            out.push(d);
            while m.is_multiple_of(&bd) {
                m /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        out.push(m.to_u64().expect("prime factor exceeds u64"));
    }
    out
}

/// Inverse of `a` modulo `m` for coprime `a, m` with `m >= 1`, in `[0, m)`.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one(), "not invertible");
    g.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&q("351/100"), 2).unwrap(), Valuation::Finite(-2));
        assert_eq!(valuation(&q("0"), 7).unwrap(), Valuation::Infinite);
        assert_eq!(valuation(&q("16/5"), 3).unwrap(), Valuation::Finite(0));
        assert_eq!(valuation(&q("-48"), 2).unwrap(), Valuation::Finite(4));
    }

    #[test]
    fn valuation_rejects_composite() {
        assert_eq!(valuation(&q("3"), 4), Err(Error::InvalidPrime(4)));
        assert_eq!(padic_abs(&q("3"), 1), Err(Error::InvalidPrime(1)));
    }

    #[test]
    fn padic_abs_examples() {
        assert_eq!(padic_abs(&q("351/100"), 2).unwrap(), q("4"));
        for p in [2, 3, 5, 7, 101] {
            assert_eq!(padic_abs(&q("1"), p).unwrap(), q("1"));
        }
        assert_eq!(padic_abs(&q("-128"), 2).unwrap(), q("1/128"));
        assert_eq!(padic_abs(&q("0"), 5).unwrap(), q("0"));
    }

    #[test]
    fn archimedean_examples() {
        assert_eq!(archimedean_abs(&q("-3/4")), q("3/4"));
        assert_eq!(archimedean_abs(&q("0")), q("0"));
        assert_eq!(archimedean_abs(&q("17901/100")), q("17901/100"));
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(91));
        assert!(is_prime(97));
        assert_eq!(next_prime(7), 11);
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn canonical_form_and_display() {
        let r = Rational::frac(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(q("10/5").to_string(), "2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn factors_and_inverse() {
        assert_eq!(prime_factors(&BigInt::from(100)), vec![2, 5]);
        assert_eq!(prime_factors(&BigInt::from(-97)), vec![97]);
        assert_eq!(prime_factors(&BigInt::from(1)), Vec::<u64>::new());
        let inv = mod_inverse(&BigInt::from(3), &BigInt::from(8));
        assert_eq!(inv, BigInt::from(3));
    }
}
