//! Orbits `ξ_n = nα + Γ_P`, nearest-neighbour distances and gap counts.
//!
//! Distances are taken pairwise between reduced orbit points. This is the
//! quadratic reference path; [`crate::lattice`] computes the same values
//! from translates `kα` instead.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adele::{reduce, torus_distance_reduced, AdelePoint, TorusPoint};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Nearest-neighbour distances of one orbit segment and their distinct values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    #[serde(rename = "N")]
    pub len: u64,
    /// `deltas[n - 1]` is the distance from `ξ_n` to its nearest distinct neighbour.
    pub deltas: Vec<Rational>,
    pub distinct_gaps: Vec<Rational>,
    pub gap_count: usize,
    /// First index `n` attaining each gap.
    pub witnesses: BTreeMap<Rational, u64>,
}

impl GapReport {
    fn from_deltas(deltas: Vec<Rational>) -> Self {
        let mut witnesses = BTreeMap::new();
        for (i, d) in deltas.iter().enumerate() {
            witnesses.entry(d.clone()).or_insert(i as u64 + 1);
        }
        let distinct_gaps: Vec<Rational> = witnesses.keys().cloned().collect();
        GapReport {
            len: deltas.len() as u64,
            gap_count: distinct_gaps.len(),
            distinct_gaps,
            deltas,
            witnesses,
        }
    }

    /// `δ_{n,N}` for `1 <= n <= N`.
    pub fn delta(&self, n: u64) -> Option<&Rational> {
        n.checked_sub(1).and_then(|i| self.deltas.get(i as usize))
    }
}

fn check_len(len: u64) -> Result<()> {
    if len < 1 {
        Err(Error::InvalidLength(len))
    } else {
        Ok(())
    }
}

/// The reduced orbit points `ξ_1, …, ξ_N`.
pub fn orbit(alpha: &AdelePoint, len: u64) -> Result<Vec<TorusPoint>> {
    check_len(len)?;
    Ok((1..=len)
        .into_par_iter()
        .map(|n| reduce(&alpha.scale_by_integer(n)).0)
        .collect())
}

/// Symmetric matrix of torus distances between orbit points, zero on the diagonal.
pub fn distance_matrix(points: &[TorusPoint]) -> Vec<Vec<Rational>> {
    let n = points.len();
    let upper: Vec<Vec<Rational>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    torus_distance_reduced(&points[i], &points[j])
                        .expect("one orbit, one prime set")
                })
                .collect()
        })
        .collect();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (i, row) in upper.into_iter().enumerate() {
        for (offset, d) in row.into_iter().enumerate() {
            let j = i + 1 + offset;
            m[j][i] = d.clone();
            m[i][j] = d;
        }
    }
    m
}

fn min_positive<'a>(row: impl Iterator<Item = &'a Rational>) -> Option<&'a Rational> {
    row.filter(|d| d.is_positive()).min()
}

/// `δ_{n,N}(α)`: the smallest positive distance from `ξ_n` to another orbit point.
pub fn nn_distance(alpha: &AdelePoint, len: u64, n: u64) -> Result<Rational> {
    check_len(len)?;
    if n < 1 || n > len {
        return Err(Error::IndexOutOfRange { index: n, len });
    }
    let points = orbit(alpha, len)?;
    let xi = &points[(n - 1) as usize];
    let row: Vec<Rational> = points
        .iter()
        .map(|p| torus_distance_reduced(p, xi).expect("one orbit, one prime set"))
        .collect();
    min_positive(row.iter())
        .cloned()
        .ok_or(Error::DegenerateOrbit { len })
}

/// All `δ_{n,N}(α)` and their distinct values.
///
/// Coinciding orbit points contribute zero distances, which are skipped.
/// If every point coincides there is no positive distance at all and the
/// orbit is reported as degenerate.
pub fn gap_report(alpha: &AdelePoint, len: u64) -> Result<GapReport> {
    let points = orbit(alpha, len)?;
    let matrix = distance_matrix(&points);
    let deltas = matrix
        .iter()
        .map(|row| min_positive(row.iter()).cloned())
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::DegenerateOrbit { len })?;
    Ok(GapReport::from_deltas(deltas))
}

/// Whether `g_N(α) <= 3`, with the report attached for diagnostics.
pub fn three_gap_check(alpha: &AdelePoint, len: u64) -> Result<(bool, GapReport)> {
    let report = gap_report(alpha, len)?;
    Ok((report.gap_count <= 3, report))
}
