//! Seeded random instances and the gap-bound verification sweep.
//!
//! Sample `i` of a sweep draws from its own ChaCha stream (`seed`, stream
//! `i`), so results do not depend on scheduling and any single sample can
//! be regenerated in isolation.
//!
//! Sampling: the real coordinate is `a/b` with `|a| <= H`, `1 <= b <= H`.
//! The default coordinate is an integer in `[−H, H]` or such a fraction,
//! with equal odds. Each of the four smallest primes of `P` independently
//! gets an override with probability 1/2, and any prime of `P` dividing the
//! default's denominator always gets one. `N` is uniform on `[2, max_n]`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::adele::{AdelePoint, PrimeSet};
use crate::arith::{prime_factors, Rational};
use crate::error::{Error, Result};
use crate::gaps::{gap_report, GapReport};

/// Where each sample's prime set comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeSetPool {
    Fixed(PrimeSet),
    /// Finite subsets of {2, 3, 5, 7} with one to three members, all
    /// primes, or all primes except 2.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub seed: u64,
    pub samples: u64,
    pub max_n: u64,
    pub max_height: u64,
    pub primes: PrimeSetPool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::OutOfRange("samples must be at least 1".into()));
        }
        if self.max_n < 2 {
            return Err(Error::OutOfRange("max N must be at least 2".into()));
        }
        if self.max_height < 2 {
            return Err(Error::OutOfRange("max height must be at least 2".into()));
        }
        Ok(())
    }
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_prime_set(rng: &mut impl Rng) -> PrimeSet {
    match rng.gen_range(0..10) {
        0..=3 => {
            let mut pool = vec![2u64, 3, 5, 7];
            let size = rng.gen_range(1..=3);
            let mut chosen = Vec::with_capacity(size);
            for _ in 0..size {
                chosen.push(pool.swap_remove(rng.gen_range(0..pool.len())));
            }
            PrimeSet::finite(chosen).expect("small primes")
        }
        4..=6 => PrimeSet::all(),
        _ => PrimeSet::all_except([2]).expect("2 is prime"),
    }
}

pub fn random_rational(rng: &mut impl Rng, height: u64) -> Rational {
    let h = height as i64;
    Rational::frac(rng.gen_range(-h..=h), rng.gen_range(1..=h))
}

pub fn random_point(rng: &mut impl Rng, primes: &PrimeSet, height: u64) -> AdelePoint {
    let h = height as i64;
    let at_infinity = random_rational(rng, height);
    let default_value = if rng.gen_bool(0.5) {
        Rational::integer(rng.gen_range(-h..=h))
    } else {
        random_rational(rng, height)
    };
    let mut overrides = BTreeMap::new();
    for p in primes.iter().take(4) {
        if rng.gen_bool(0.5) {
            overrides.insert(p, random_rational(rng, height));
        }
    }
    for p in prime_factors(default_value.denom()) {
        if primes.contains(p) && !overrides.contains_key(&p) {
            overrides.insert(p, random_rational(rng, height));
        }
    }
    AdelePoint::new(at_infinity, default_value, overrides, primes.clone())
        .expect("sampled overrides cover the default's denominator")
}

/// A random reduced point.
pub fn random_torus_point(rng: &mut impl Rng, primes: &PrimeSet, height: u64) -> AdelePoint {
    crate::adele::reduce(&random_point(rng, primes, height))
        .0
        .into_point()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub index: u64,
    pub primes: PrimeSet,
    pub alpha: String,
    #[serde(rename = "N")]
    pub len: u64,
    pub gap_count: usize,
    pub distinct_gaps: Vec<Rational>,
}

/// Draws one non-degenerate instance. Degenerate draws (every orbit point in
/// one coset) are redrawn from the same stream.
pub fn draw_instance(
    rng: &mut impl Rng,
    pool: &PrimeSetPool,
    max_n: u64,
    height: u64,
) -> (AdelePoint, u64, GapReport) {
    loop {
        let primes = match pool {
            PrimeSetPool::Fixed(p) => p.clone(),
            PrimeSetPool::Mixed => random_prime_set(rng),
        };
        let alpha = random_point(rng, &primes, height);
        let len = rng.gen_range(2..=max_n);
        match gap_report(&alpha, len) {
            Ok(report) => return (alpha, len, report),
            Err(Error::DegenerateOrbit { .. }) => continue,
            Err(e) => panic!("sampled instance {alpha} failed: {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub seed: u64,
    pub samples: u64,
    /// Number of samples for each observed gap count.
    pub histogram: BTreeMap<usize, u64>,
    pub violations: Vec<SweepRecord>,
    pub records: Vec<SweepRecord>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    config.validate()?;
    let records: Vec<SweepRecord> = (0..config.samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = rng_for(config.seed, index);
            let (alpha, len, report) =
                draw_instance(&mut rng, &config.primes, config.max_n, config.max_height);
            SweepRecord {
                index,
                primes: alpha.primes().clone(),
                alpha: alpha.to_string(),
                len,
                gap_count: report.gap_count,
                distinct_gaps: report.distinct_gaps,
            }
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for r in &records {
        *histogram.entry(r.gap_count).or_insert(0) += 1;
    }
    let violations = records
        .iter()
        .filter(|r| r.gap_count > 3)
        .cloned()
        .collect();
    Ok(SweepSummary {
        seed: config.seed,
        samples: config.samples,
        histogram,
        violations,
        records,
    })
}
