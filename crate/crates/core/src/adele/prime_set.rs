use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{is_prime, next_prime};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Finite(Vec<u64>),
    Cofinite(Vec<u64>),
}

/// A non-empty set of primes: either an explicit finite list or "every
/// prime except" a finite exclusion list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeSet(Kind);

fn normalise(mut primes: Vec<u64>) -> Result<Vec<u64>> {
    if let Some(&bad) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::InvalidPrime(bad));
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

impl PrimeSet {
    pub fn finite(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let primes = normalise(primes.into_iter().collect())?;
        if primes.is_empty() {
            return Err(Error::InvalidPrimeSet(
                "a finite prime set must be non-empty".into(),
            ));
        }
        Ok(PrimeSet(Kind::Finite(primes)))
    }

    pub fn all_except(excluded: impl IntoIterator<Item = u64>) -> Result<Self> {
        Ok(PrimeSet(Kind::Cofinite(normalise(
            excluded.into_iter().collect(),
        )?)))
    }

    pub fn all() -> Self {
        PrimeSet(Kind::Cofinite(Vec::new()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0, Kind::Finite(_))
    }

    /// The members, when the set is finite.
    pub fn members(&self) -> Option<&[u64]> {
        match &self.0 {
            Kind::Finite(ps) => Some(ps),
            Kind::Cofinite(_) => None,
        }
    }

    /// The exclusion list, when the set is cofinite.
    pub fn excluded(&self) -> Option<&[u64]> {
        match &self.0 {
            Kind::Finite(_) => None,
            Kind::Cofinite(ex) => Some(ex),
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        match &self.0 {
            Kind::Finite(ps) => ps.binary_search(&p).is_ok(),
            Kind::Cofinite(ex) => is_prime(p) && ex.binary_search(&p).is_err(),
        }
    }

    pub fn smallest(&self) -> u64 {
        self.iter().next().expect("prime sets are non-empty")
    }

    /// Members in ascending order. Infinite for cofinite sets.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let finite = self.members().map(|ps| ps.iter().copied());
        let cofinite = match &self.0 {
            Kind::Cofinite(ex) => Some(
                std::iter::successors(Some(2u64), |&p| Some(next_prime(p)))
                    .filter(move |p| ex.binary_search(p).is_err()),
            ),
            Kind::Finite(_) => None,
        };
        finite
            .into_iter()
            .flatten()
            .chain(cofinite.into_iter().flatten())
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ps: &[u64]| ps.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match &self.0 {
            Kind::Finite(ps) => write!(f, "{}", join(ps)),
            Kind::Cofinite(ex) if ex.is_empty() => write!(f, "all"),
            Kind::Cofinite(ex) => write!(f, "all-except:{}", join(ex)),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("invalid prime {t:?}")))
        })
        .collect()
}

/// Accepts `all`, `all-except:2,3` and `2,3,5`.
impl FromStr for PrimeSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(PrimeSet::all());
        }
        if let Some(rest) = s.strip_prefix("all-except:") {
            return PrimeSet::all_except(parse_list(rest)?);
        }
        if s.is_empty() {
            return Err(Error::Parse("empty prime set".into()));
        }
        PrimeSet::finite(parse_list(s)?)
    }
}

impl Serialize for PrimeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PrimeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
