use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::PrimeSet;
use crate::arith::{is_p_integral, is_prime, prime_factors, Rational};
use crate::error::{Error, Result};

/// An element of the restricted product over `{∞} ∪ P`, stored with finite data.
///
/// The coordinate at a prime `p ∈ P` is `overrides[p]` when present and
/// `default_value` otherwise. Every prime of `P` at which `default_value`
/// fails to be a p-adic integer must carry an override, so all but finitely
/// many coordinates lie in `Z_p`.
///
/// Equality is semantic: two points are equal when every coordinate agrees,
/// regardless of which primes happen to be listed as overrides.
#[derive(Clone, Debug, Serialize)]
pub struct AdelePoint {
    at_infinity: Rational,
    default_value: Rational,
    overrides: BTreeMap<u64, Rational>,
    primes: PrimeSet,
}

impl AdelePoint {
    pub fn new(
        at_infinity: Rational,
        default_value: Rational,
        overrides: BTreeMap<u64, Rational>,
        primes: PrimeSet,
    ) -> Result<Self> {
        for &p in overrides.keys() {
            if !is_prime(p) {
                return Err(Error::InvalidPrime(p));
            }
            if !primes.contains(p) {
                return Err(Error::PrimeNotInSet(p));
            }
        }
        if !default_value.is_integer() {
            for p in prime_factors(default_value.denom()) {
                if primes.contains(p) && !overrides.contains_key(&p) {
                    return Err(Error::NonIntegralDefault {
                        value: default_value,
                        prime: p,
                    });
                }
            }
        }
        Ok(AdelePoint {
            at_infinity,
            default_value,
            overrides,
            primes,
        })
    }

    pub fn zero(primes: PrimeSet) -> Self {
        AdelePoint {
            at_infinity: Rational::zero(),
            default_value: Rational::zero(),
            overrides: BTreeMap::new(),
            primes,
        }
    }

    /// The diagonal image of `gamma`, which must lie in `Z[1/p : p ∈ P]`.
    pub fn diagonal(gamma: &Rational, primes: PrimeSet) -> Result<Self> {
        AdelePoint::zero(primes).add_diagonal(gamma)
    }

    pub fn at_infinity(&self) -> &Rational {
        &self.at_infinity
    }

    pub fn default_value(&self) -> &Rational {
        &self.default_value
    }

    pub fn overrides(&self) -> &BTreeMap<u64, Rational> {
        &self.overrides
    }

    pub fn primes(&self) -> &PrimeSet {
        &self.primes
    }

    /// Coordinate at a prime of `P`.
    pub fn coordinate(&self, p: u64) -> &Rational {
        self.overrides.get(&p).unwrap_or(&self.default_value)
    }

    fn check_same_primes(&self, other: &AdelePoint) -> Result<()> {
        if self.primes == other.primes {
            Ok(())
        } else {
            Err(Error::PrimeSetMismatch)
        }
    }

    fn combine(
        &self,
        other: &AdelePoint,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<AdelePoint> {
        self.check_same_primes(other)?;
        let mut overrides = BTreeMap::new();
        for &p in self.overrides.keys().chain(other.overrides.keys()) {
            overrides
                .entry(p)
                .or_insert_with(|| op(self.coordinate(p), other.coordinate(p)));
        }
        Ok(AdelePoint {
            at_infinity: op(&self.at_infinity, &other.at_infinity),
            default_value: op(&self.default_value, &other.default_value),
            overrides,
            primes: self.primes.clone(),
        })
    }

    pub fn add(&self, other: &AdelePoint) -> Result<AdelePoint> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &AdelePoint) -> Result<AdelePoint> {
        self.combine(other, |a, b| a - b)
    }

    pub fn neg(&self) -> AdelePoint {
        self.map(|a| -a)
    }

    pub fn scale_by_integer(&self, n: impl Into<BigInt>) -> AdelePoint {
        let n = Rational::integer(n);
        self.map(|a| a * &n)
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> AdelePoint {
        AdelePoint {
            at_infinity: f(&self.at_infinity),
            default_value: f(&self.default_value),
            overrides: self.overrides.iter().map(|(&p, v)| (p, f(v))).collect(),
            primes: self.primes.clone(),
        }
    }

    /// Adds the diagonal image of `gamma` to every coordinate.
    pub fn add_diagonal(&self, gamma: &Rational) -> Result<AdelePoint> {
        let den_primes = prime_factors(gamma.denom());
        if let Some(&p) = den_primes.iter().find(|&&p| !self.primes.contains(p)) {
            return Err(Error::NotInDiagonalGroup {
                value: gamma.clone(),
                prime: p,
            });
        }
        Ok(self.add_diagonal_in_group(gamma, &den_primes))
    }

    /// `gamma` is known to lie in the diagonal group and `den_primes` are
    /// the primes of its denominator.
    pub(crate) fn add_diagonal_in_group(&self, gamma: &Rational, den_primes: &[u64]) -> AdelePoint {
        let mut out = self.map(|a| a + gamma);
        for &p in den_primes {
            out.overrides
                .entry(p)
                .or_insert_with(|| &self.default_value + gamma);
        }
        out
    }

    /// Primes whose coordinate may differ from `default_value`, ascending.
    pub(crate) fn override_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.overrides.keys().copied()
    }

    /// Whether the point lies in `[0,1) × ∏ Z_p`.
    pub fn in_fundamental_domain(&self) -> bool {
        let inf_ok = !self.at_infinity.is_negative() && self.at_infinity < Rational::one();
        let overrides_ok = self.overrides.iter().all(|(&p, v)| is_p_integral(v, p));
        // non-overridden primes of P see the default
        let default_ok = prime_factors(self.default_value.denom())
            .into_iter()
            .all(|p| !self.primes.contains(p) || self.overrides.contains_key(&p));
        inf_ok && overrides_ok && default_ok
    }

    pub fn is_zero(&self) -> bool {
        *self == AdelePoint::zero(self.primes.clone())
    }
}

impl PartialEq for AdelePoint {
    fn eq(&self, other: &Self) -> bool {
        if self.primes != other.primes || self.at_infinity != other.at_infinity {
            return false;
        }
        match self.primes.members() {
            Some(ps) => ps
                .iter()
                .all(|&p| self.coordinate(p) == other.coordinate(p)),
            None => {
                self.default_value == other.default_value
                    && self
                        .override_primes()
                        .chain(other.override_primes())
                        .all(|p| self.coordinate(p) == other.coordinate(p))
            }
        }
    }
}

impl Eq for AdelePoint {}

/// Renders in the textual point grammar, `inf=a/b;default=c;p=d;...`.
impl fmt::Display for AdelePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inf={};default={}", self.at_infinity, self.default_value)?;
        for (p, v) in &self.overrides {
            write!(f, ";{p}={v}")?;
        }
        Ok(())
    }
}

/// Parses `inf=<rat>;default=<rat>;<p>=<rat>;...` over `primes`.
///
/// Override entries may be separated by `;` or `,`. Missing `inf` or
/// `default` keys are taken to be zero.
pub fn parse_point(spec: &str, primes: &PrimeSet) -> Result<AdelePoint> {
    let mut at_infinity = None;
    let mut default_value = None;
    let mut overrides = BTreeMap::new();
    for entry in spec
        .split([';', ','])
        .map(str::trim)
        .filter(|e| !e.is_empty())
    {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {entry:?}")))?;
        let value: Rational = value.parse()?;
        let slot = match key.trim() {
            "inf" => &mut at_infinity,
            "default" => &mut default_value,
            k => {
                let p: u64 = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown key {k:?}")))?;
                if overrides.insert(p, value).is_some() {
                    return Err(Error::Parse(format!("duplicate key {p}")));
                }
                continue;
            }
        };
        if slot.replace(value).is_some() {
            return Err(Error::Parse(format!("duplicate key {:?}", key.trim())));
        }
    }
    AdelePoint::new(
        at_infinity.unwrap_or_else(Rational::zero),
        default_value.unwrap_or_else(Rational::zero),
        overrides,
        primes.clone(),
    )
}

/// An [`AdelePoint`] known to lie in the fundamental domain `[0,1) × ∏ Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TorusPoint(AdelePoint);

impl TorusPoint {
    pub fn point(&self) -> &AdelePoint {
        &self.0
    }

    pub fn into_point(self) -> AdelePoint {
        self.0
    }

    pub(crate) fn new_unchecked(point: AdelePoint) -> Self {
        debug_assert!(point.in_fundamental_domain(), "{point} is not reduced");
        TorusPoint(point)
    }
}

impl TryFrom<AdelePoint> for TorusPoint {
    type Error = Error;

    fn try_from(point: AdelePoint) -> Result<Self> {
        if point.in_fundamental_domain() {
            Ok(TorusPoint(point))
        } else {
            Err(Error::OutOfRange(format!(
                "{point} is not in the fundamental domain"
            )))
        }
    }
}

impl std::ops::Deref for TorusPoint {
    type Target = AdelePoint;

    fn deref(&self) -> &AdelePoint {
        &self.0
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn two() -> PrimeSet {
        PrimeSet::finite([2]).unwrap()
    }

    fn pt(spec: &str, primes: &PrimeSet) -> AdelePoint {
        parse_point(spec, primes).unwrap()
    }

    #[test]
    fn make_point_examples() {
        assert!(parse_point("inf=351/100;default=0;2=1", &two()).is_ok());
        assert_eq!(
            parse_point("inf=1/2;default=1/2", &two()),
            Err(Error::NonIntegralDefault {
                value: q("1/2"),
                prime: 2
            })
        );
        let odd = PrimeSet::all_except([2]).unwrap();
        assert!(parse_point("inf=1/9;default=0;3=1", &odd).is_ok());
        assert_eq!(parse_point("inf=0;2=1", &odd), Err(Error::PrimeNotInSet(2)));
        assert_eq!(parse_point("inf=0;4=1", &odd), Err(Error::InvalidPrime(4)));
        // 1/3 as default is fine over {2}: 3 is not a place of the point.
        assert!(parse_point("inf=0;default=1/3", &two()).is_ok());
    }

    #[test]
    fn grammar_errors() {
        assert!(parse_point("inf=1;inf=2", &two()).is_err());
        assert!(parse_point("inf", &two()).is_err());
        assert!(parse_point("x=1", &two()).is_err());
        assert!(parse_point("inf=1/0", &two()).is_err());
        assert!(parse_point("2=1,2=3", &two()).is_err());
    }

    #[test]
    fn display_round_trips() {
        let p = pt("inf=351/100;default=0;2=1", &two());
        assert_eq!(p.to_string(), "inf=351/100;default=0;2=1");
        assert_eq!(pt(&p.to_string(), &two()), p);
    }

    #[test]
    fn arithmetic_examples() {
        let alpha = pt("inf=351/100;default=0;2=1", &two());
        let scaled = alpha.scale_by_integer(51);
        assert_eq!(scaled.at_infinity(), &q("17901/100"));
        assert_eq!(scaled.coordinate(2), &q("51"));
        assert_eq!(scaled.default_value(), &q("0"));
        assert!(alpha.sub(&alpha).unwrap().is_zero());

        let odd = PrimeSet::all_except([2]).unwrap();
        let a = pt("inf=1/9;default=0;3=1", &odd);
        let doubled = a.add(&a).unwrap();
        assert_eq!(doubled, pt("inf=2/9;default=0;3=2", &odd));
        assert_eq!(doubled.overrides().len(), 1);
    }

    #[test]
    fn mismatched_sets_rejected() {
        let a = AdelePoint::zero(two());
        let b = AdelePoint::zero(PrimeSet::all());
        assert_eq!(a.add(&b), Err(Error::PrimeSetMismatch));
    }

    #[test]
    fn add_diagonal_examples() {
        let x = pt("inf=17901/100;default=0;2=51", &two());
        let y = x.add_diagonal(&q("-179")).unwrap();
        assert_eq!(y.at_infinity(), &q("1/100"));
        assert_eq!(y.default_value(), &q("-179"));
        assert_eq!(y.coordinate(2), &q("-128"));
        assert_eq!(x.add_diagonal(&q("0")).unwrap(), x);

        let three = PrimeSet::finite([3]).unwrap();
        assert_eq!(
            AdelePoint::zero(three).add_diagonal(&q("1/2")),
            Err(Error::NotInDiagonalGroup {
                value: q("1/2"),
                prime: 2
            })
        );
    }

    #[test]
    fn add_diagonal_adds_override_where_needed() {
        let all = PrimeSet::all();
        let x = AdelePoint::diagonal(&q("1/6"), all.clone()).unwrap();
        assert_eq!(
            x.overrides().keys().copied().collect::<Vec<_>>(),
            vec![2, 3]
        );
        // Re-validates cleanly through the checked constructor.
        AdelePoint::new(
            x.at_infinity().clone(),
            x.default_value().clone(),
            x.overrides().clone(),
            all,
        )
        .unwrap();
    }

    #[test]
    fn semantic_equality() {
        let odd = PrimeSet::all_except([2]).unwrap();
        assert_eq!(pt("inf=1;default=0;3=0", &odd), pt("inf=1;default=0", &odd));
        assert_ne!(pt("inf=1;default=0;3=1", &odd), pt("inf=1;default=0", &odd));
        // Over a finite set the default is irrelevant once every prime is listed.
        assert_eq!(
            pt("inf=1;default=5;2=0", &two()),
            pt("inf=1;default=0", &two())
        );
    }
}
