//! The lattice reformulation of the gap problem.
//!
//! For `t ≠ 0` the matrix `A_t(α) = [[1/t, tα], [0, t]]` has row span
//! `{(β/t, t(βα + γ)) : β, γ ∈ Γ_P}`. Restricting `u = β/t` to a window
//! `−τ < u_∞ < 1 − τ` with `|u_p|_p <= |2/z|_p`, the smallest `|v|` in the
//! window is `F(A_t(α), τ, z)`. When `2t/z` is a unit at every prime of `P`
//! (always true for `t = N + 1/2`, `z = 2N + 1`) the p-adic conditions force
//! `β = k ∈ Z`, so the window is a finite run of integers and
//!
//! ```text
//! F(A_t(α), τ, z) = t · min { |kα + γ| > 0 : −τt < k < (1 − τ)t, γ ∈ Γ_P }.
//! ```
//!
//! The norm of `v` is measured as `t · |kα + γ|`, the scaling under which
//! `δ_{n,N}(α) = F(A_{N+1/2}(α), n/(N+1/2), 2N+1) / (N+1/2)` holds exactly.
//!
//! `F` only changes where an integer enters or leaves the window, so the
//! number of distinct values over `τ ∈ (0,1)` is found by evaluating at one
//! point of each open interval between breakpoints.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::adele::{
    ambient_norm, diagonal_elements, reduce, torus_distance_reduced, AdelePoint, PrimeSet,
    TorusPoint,
};
use crate::arith::{prime_factors, Rational};
use crate::error::{Error, Result};
use crate::gaps;

/// Height bound for the search of the shortest non-zero diagonal element.
///
/// A non-zero `γ ∈ Γ_P` that is integral at every prime of `P` is a
/// non-zero integer, so `|γ| >= |γ|_∞ >= 1`. If instead `|γ|_p > 1` for some
/// `p ∈ P` then `|γ|_p >= p`, which contributes at least `p >= 2` (finite
/// `P`) or `p/p = 1` (infinite `P`). Both cases give `|γ| >= 1 = |±1|`, so
/// the minimum is attained at height 1; 4 leaves margin, and the tests
/// confirm the value is stable at larger heights.
pub const SHORT_VECTOR_SEARCH_HEIGHT: u64 = 4;

/// `A_t(α)` for a rational `t ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationMatrixSpec {
    alpha: AdelePoint,
    scale: Rational,
}

impl RotationMatrixSpec {
    pub fn new(alpha: AdelePoint, scale: Rational) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::OutOfRange("A_t(α) needs t ≠ 0".into()));
        }
        Ok(RotationMatrixSpec { alpha, scale })
    }

    /// `A_{N+1/2}(α)`, the matrix attached to an orbit of length `N`.
    pub fn for_orbit(alpha: AdelePoint, len: u64) -> Result<Self> {
        if len < 1 {
            return Err(Error::InvalidLength(len));
        }
        RotationMatrixSpec::new(alpha, half_plus(len))
    }

    pub fn alpha(&self) -> &AdelePoint {
        &self.alpha
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    /// For the row-span vector `(u, v) = (β, γ) A_t(α)` with integer `β`,
    /// returns `u_∞ = β/t` and `v/t = βα + γ`.
    pub fn vector(&self, beta: i64, gamma: &Rational) -> Result<(Rational, AdelePoint)> {
        let u = Rational::integer(beta) / &self.scale;
        let v = self.alpha.scale_by_integer(beta).add_diagonal(gamma)?;
        Ok((u, v))
    }
}

fn half_plus(len: u64) -> Rational {
    Rational::integer(len) + Rational::frac(1, 2)
}

/// A shortest vector for a fixed integer `k`: `γ` minimises `|kα + γ|` among
/// choices with `kα + γ ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeVector {
    pub k: i64,
    pub gamma: Rational,
    pub u_infinity: Rational,
    /// `t · |kα + γ|`.
    pub v_norm: Rational,
}

/// `min { |γ| : γ ∈ Γ_P, γ ≠ 0 }`, by bounded enumeration.
pub fn min_nonzero_diagonal_norm(primes: &PrimeSet) -> Rational {
    min_nonzero_diagonal(primes, SHORT_VECTOR_SEARCH_HEIGHT).1
}

fn min_nonzero_diagonal(primes: &PrimeSet, height: u64) -> (Rational, Rational) {
    let zero = AdelePoint::zero(primes.clone());
    diagonal_elements(primes, height)
        .into_iter()
        .filter(|(g, _)| !g.is_zero())
        .map(|(g, dens)| {
            let norm = ambient_norm(&zero.add_diagonal_in_group(&g, &dens));
            (norm, g)
        })
        .min()
        .map(|(norm, g)| (g, norm))
        .expect("±1 are always enumerated")
}

/// `min { |x − γ| > 0 : γ ∈ Γ_P }` together with a minimising `γ`.
fn nearest_nonzero_offset(x: &AdelePoint) -> (Rational, Rational) {
    let (reduced, shift) = reduce(x);
    let zero = TorusPoint::new_unchecked(AdelePoint::zero(x.primes().clone()));
    let best = [-1i64, 0, 1]
        .into_iter()
        .map(|c| {
            let c = Rational::integer(c);
            let norm = ambient_norm(&reduced.add_diagonal_in_group(&-&c, &[]));
            (norm, c)
        })
        .min()
        .expect("three candidates");
    debug_assert_eq!(best.0, torus_distance_reduced(&reduced, &zero).unwrap());
    if best.0.is_positive() {
        (shift + best.1, best.0)
    } else {
        // x is itself diagonal; step to the nearest other element.
        let (g, norm) = min_nonzero_diagonal(x.primes(), SHORT_VECTOR_SEARCH_HEIGHT);
        (shift + g, norm)
    }
}

/// `min { |x − γ| > 0 : γ ∈ Γ_P }`.
///
/// Off the diagonal group this is the torus norm `‖x‖`; on it, the norm of
/// the shortest non-zero diagonal element.
pub fn min_positive_diagonal_distance(x: &AdelePoint) -> Rational {
    nearest_nonzero_offset(x).1
}

fn shortest_for(spec: &RotationMatrixSpec, k: i64) -> LatticeVector {
    let (offset, norm) = nearest_nonzero_offset(&spec.alpha.scale_by_integer(k));
    LatticeVector {
        k,
        gamma: -offset,
        u_infinity: Rational::integer(k) / &spec.scale,
        v_norm: &spec.scale * norm,
    }
}

fn check_constraint(spec: &RotationMatrixSpec, z: u64) -> Result<()> {
    if z < 1 {
        return Err(Error::OutOfRange("z must be at least 1".into()));
    }
    if !spec.scale.is_positive() {
        return Err(Error::OutOfRange("window evaluation needs t > 0".into()));
    }
    let ratio = Rational::integer(2) * &spec.scale / Rational::integer(z);
    let primes = spec.alpha.primes();
    let mut bad = prime_factors(ratio.numer());
    bad.extend(prime_factors(ratio.denom()));
    if let Some(p) = bad.into_iter().find(|&p| primes.contains(p)) {
        return Err(Error::OutOfRange(format!(
            "2t/z = {ratio} is not a unit at {p}; only windows with integral β are supported"
        )));
    }
    Ok(())
}

fn check_tau(tau: &Rational) -> Result<()> {
    if tau.is_positive() && *tau < Rational::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("t = {tau} is outside (0,1)")))
    }
}

fn to_i64(n: BigInt) -> i64 {
    n.to_i64().expect("window bound exceeds i64")
}

/// Integers `k` with `−τt < k < (1 − τ)t`.
fn window(scale: &Rational, tau: &Rational) -> std::ops::RangeInclusive<i64> {
    let lo = to_i64((-(tau * scale)).floor()) + 1;
    let hi = to_i64(((Rational::one() - tau) * scale).ceil()) - 1;
    lo..=hi
}

/// The window minimiser behind `F(A_t(α), τ, z)`.
pub fn shortest_in_window(
    spec: &RotationMatrixSpec,
    tau: &Rational,
    z: u64,
) -> Result<LatticeVector> {
    check_tau(tau)?;
    check_constraint(spec, z)?;
    Ok(window(&spec.scale, tau)
        .into_par_iter()
        .map(|k| shortest_for(spec, k))
        .min_by(|a, b| {
            a.v_norm
                .cmp(&b.v_norm)
                .then(a.k.abs().cmp(&b.k.abs()))
                .then(a.k.cmp(&b.k))
        })
        .expect("k = 0 is always in the window"))
}

/// `F(A_t(α), τ, z)`: the least `|v|` over lattice vectors in the window.
pub fn f_value(spec: &RotationMatrixSpec, tau: &Rational, z: u64) -> Result<Rational> {
    Ok(shortest_in_window(spec, tau, z)?.v_norm)
}

/// Shortest vectors for every `k` with `|k| <= bound`, indexed by `k + bound`.
struct VectorTable {
    bound: i64,
    norms: Vec<Rational>,
}

impl VectorTable {
    fn new(spec: &RotationMatrixSpec, bound: i64) -> Self {
        let norms = (-bound..=bound)
            .into_par_iter()
            .map(|k| shortest_for(spec, k).v_norm)
            .collect();
        VectorTable { bound, norms }
    }

    fn min_over(&self, ks: std::ops::RangeInclusive<i64>) -> Rational {
        let lo = (ks.start() + self.bound) as usize;
        let hi = (ks.end() + self.bound) as usize;
        self.norms[lo..=hi]
            .iter()
            .min()
            .cloned()
            .expect("non-empty window")
    }
}

fn k_bound(scale: &Rational) -> i64 {
    // every window member satisfies |k| < t
    to_i64(scale.ceil()) - 1
}

/// `δ_{n,N}(α)` read off the lattice: `F(A_{N₊}(α), n/N₊, 2N+1) / N₊`.
pub fn delta_via_lattice(alpha: &AdelePoint, len: u64, n: u64) -> Result<Rational> {
    if n < 1 || n > len {
        return Err(Error::IndexOutOfRange { index: n, len });
    }
    let spec = RotationMatrixSpec::for_orbit(alpha.clone(), len)?;
    let tau = Rational::integer(n) / spec.scale();
    Ok(f_value(&spec, &tau, 2 * len + 1)? / spec.scale())
}

/// Every `δ_{n,N}(α)` through the lattice path, sharing one vector table.
pub fn deltas_via_lattice(alpha: &AdelePoint, len: u64) -> Result<Vec<Rational>> {
    let spec = RotationMatrixSpec::for_orbit(alpha.clone(), len)?;
    check_constraint(&spec, 2 * len + 1)?;
    let table = VectorTable::new(&spec, k_bound(spec.scale()));
    Ok((1..=len)
        .map(|n| {
            let tau = Rational::integer(n) / spec.scale();
            table.min_over(window(spec.scale(), &tau)) / spec.scale()
        })
        .collect())
}

/// `𝒢_N(A_{N₊}(α))`: distinct values of `F` at `τ = n/N₊`, `1 <= n <= N`.
pub fn g_n_value(alpha: &AdelePoint, len: u64) -> Result<usize> {
    let distinct: BTreeSet<Rational> = deltas_via_lattice(alpha, len)?.into_iter().collect();
    Ok(distinct.len())
}

/// `F(M, ·, z)` as a step function on `(0,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub breakpoints: Vec<Rational>,
    /// `F` on each open interval; one more entry than `breakpoints`.
    pub interval_values: Vec<Rational>,
    /// `𝒢(M, z)`.
    pub distinct_count: usize,
}

impl ScanResult {
    /// Endpoints `0 = b_0 < b_1 < … < b_m < b_{m+1} = 1` of the scan intervals.
    pub fn interval(&self, i: usize) -> (Rational, Rational) {
        let left = if i == 0 {
            Rational::zero()
        } else {
            self.breakpoints[i - 1].clone()
        };
        let right = self
            .breakpoints
            .get(i)
            .cloned()
            .unwrap_or_else(Rational::one);
        (left, right)
    }
}

/// Values of `τ ∈ (0,1)` at which some integer enters or leaves the window.
pub fn breakpoints(scale: &Rational) -> Vec<Rational> {
    let bound = k_bound(scale);
    let one = Rational::one();
    let mut out = BTreeSet::new();
    for k in 0..=bound {
        let kt = Rational::integer(k) / scale;
        // −k joins the window once τ passes k/t; k leaves it once τ reaches 1 − k/t.
        for b in [kt.clone(), &one - &kt] {
            if b.is_positive() && b < one {
                out.insert(b);
            }
        }
    }
    out.into_iter().collect()
}

/// Exact `𝒢(M, z) = |{F(M, τ, z) : 0 < τ < 1}|` by breakpoint scanning.
///
/// At a breakpoint itself the window agrees with one of its two neighbouring
/// open intervals, so interval values cover every value `F` takes.
pub fn scan_g(spec: &RotationMatrixSpec, z: u64) -> Result<ScanResult> {
    check_constraint(spec, z)?;
    let breakpoints = breakpoints(spec.scale());
    let table = VectorTable::new(spec, k_bound(spec.scale()));
    let two = Rational::integer(2);
    let mut edges = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(Rational::zero());
    edges.extend(breakpoints.iter().cloned());
    edges.push(Rational::one());
    let interval_values: Vec<Rational> = edges
        .windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / &two;
            table.min_over(window(spec.scale(), &mid))
        })
        .collect();
    let distinct_count = interval_values.iter().collect::<BTreeSet<_>>().len();
    Ok(ScanResult {
        breakpoints,
        interval_values,
        distinct_count,
    })
}

/// Compares both routes to `δ_{n,N}` for every `n`; any disagreement is an engine bug.
pub fn cross_check(alpha: &AdelePoint, len: u64) -> Result<Vec<Rational>> {
    let direct = gaps::gap_report(alpha, len)?.deltas;
    let lattice = deltas_via_lattice(alpha, len)?;
    for (i, (d, l)) in direct.iter().zip(&lattice).enumerate() {
        if d != l {
            return Err(Error::PathMismatch {
                index: i as u64 + 1,
                direct: Box::new(d.clone()),
                lattice: Box::new(l.clone()),
            });
        }
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adele::{ambient_metric, parse_point, torus_norm};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pt(spec: &str, primes: &str) -> AdelePoint {
        parse_point(spec, &primes.parse().unwrap()).unwrap()
    }

    fn f1() -> AdelePoint {
        pt("inf=351/100;default=0;2=1", "2")
    }

    fn f2() -> AdelePoint {
        pt("inf=16/5;3=1", "3")
    }

    #[test]
    fn min_positive_examples() {
        let x = f1().scale_by_integer(51);
        assert_eq!(min_positive_diagonal_distance(&x), q("1/100"));
        assert_eq!(min_positive_diagonal_distance(&x), torus_norm(&x));
        for primes in ["2", "3", "all", "all-except:2"] {
            let zero = AdelePoint::zero(primes.parse().unwrap());
            assert_eq!(min_positive_diagonal_distance(&zero), q("1"), "{primes}");
        }
    }

    #[test]
    fn short_vector_height_is_stable() {
        for primes in ["2", "3", "2,3,5", "all", "all-except:2,3"] {
            let ps: PrimeSet = primes.parse().unwrap();
            let at_four = min_nonzero_diagonal(&ps, SHORT_VECTOR_SEARCH_HEIGHT).1;
            let at_twenty = min_nonzero_diagonal(&ps, 20).1;
            assert_eq!(at_four, at_twenty, "{primes}");
        }
    }

    #[test]
    fn f_value_examples() {
        let spec = RotationMatrixSpec::for_orbit(f2(), 5).unwrap();
        assert_eq!(spec.scale(), &q("11/2"));
        assert_eq!(f_value(&spec, &q("2/11"), 11).unwrap(), q("11/10"));

        let spec = RotationMatrixSpec::for_orbit(f1(), 52).unwrap();
        let tau = q("2") / spec.scale();
        assert_eq!(f_value(&spec, &tau, 105).unwrap() / spec.scale(), q("3/20"));
    }

    #[test]
    fn f_value_rejects_bad_arguments() {
        let spec = RotationMatrixSpec::for_orbit(f2(), 5).unwrap();
        assert!(f_value(&spec, &q("0"), 11).is_err());
        assert!(f_value(&spec, &q("1"), 11).is_err());
        assert!(f_value(&spec, &q("1/2"), 0).is_err());
        // 2t/z = 11/3 is not a 3-adic unit.
        assert!(f_value(&spec, &q("1/2"), 3).is_err());
        let neg = RotationMatrixSpec::new(f2(), q("-11/2")).unwrap();
        assert!(f_value(&neg, &q("1/2"), 11).is_err());
        assert!(RotationMatrixSpec::new(f2(), q("0")).is_err());
    }

    #[test]
    fn witness_vector_is_consistent() {
        let spec = RotationMatrixSpec::for_orbit(f1(), 52).unwrap();
        let tau = q("18") / spec.scale();
        let w = shortest_in_window(&spec, &tau, 105).unwrap();
        assert_eq!(w.v_norm / spec.scale(), q("4/25"));
        let (u, v) = spec.vector(w.k, &w.gamma).unwrap();
        assert_eq!(u, w.u_infinity);
        assert!(-&tau < u && u < Rational::one() - &tau);
        let zero = AdelePoint::zero(spec.alpha().primes().clone());
        assert_eq!(ambient_metric(&v, &zero).unwrap(), q("4/25"));
    }

    #[test]
    fn delta_via_lattice_examples() {
        assert_eq!(delta_via_lattice(&f1(), 52, 18).unwrap(), q("4/25"));
        assert_eq!(delta_via_lattice(&f2(), 5, 2).unwrap(), q("3/5"));
        assert_eq!(delta_via_lattice(&f2(), 5, 1).unwrap(), q("1/5"));
        assert!(delta_via_lattice(&f2(), 5, 0).is_err());
        // A collapsed orbit still has the γ' branch: |±1| = 1.
        let zero = AdelePoint::zero("2".parse().unwrap());
        assert_eq!(delta_via_lattice(&zero, 3, 2).unwrap(), q("1"));
    }

    #[test]
    fn g_n_examples() {
        assert_eq!(g_n_value(&f1(), 52).unwrap(), 3);
        let i4 = pt("inf=4/15;default=0;5=-1", "all-except:2,3");
        assert_eq!(g_n_value(&i4, 5).unwrap(), 3);
    }

    #[test]
    fn scan_f2() {
        let spec = RotationMatrixSpec::for_orbit(f2(), 5).unwrap();
        let scan = scan_g(&spec, 11).unwrap();
        assert_eq!(scan.interval_values.len(), scan.breakpoints.len() + 1);
        assert!(scan.distinct_count <= 3);
        assert!(scan.distinct_count >= g_n_value(&f2(), 5).unwrap());
        // 1/11, 2/11, ..., 5/11 and 1 − k/(11/2) for k = 1..5
        assert_eq!(scan.breakpoints.len(), 10);
    }

    #[test]
    fn scan_degenerate_spec_terminates() {
        let zero = AdelePoint::zero("all".parse().unwrap());
        let spec = RotationMatrixSpec::for_orbit(zero, 6).unwrap();
        let scan = scan_g(&spec, 13).unwrap();
        assert_eq!(scan.distinct_count, 1);
        assert!(scan.interval_values.iter().all(|v| *v == q("13/2")));
    }

    #[test]
    fn breakpoint_values_match_a_neighbour() {
        let spec = RotationMatrixSpec::for_orbit(f2(), 5).unwrap();
        let scan = scan_g(&spec, 11).unwrap();
        for (i, b) in scan.breakpoints.iter().enumerate() {
            let at = f_value(&spec, b, 11).unwrap();
            assert!(at == scan.interval_values[i] || at == scan.interval_values[i + 1]);
        }
    }

    #[test]
    fn piecewise_constant() {
        let spec = RotationMatrixSpec::for_orbit(f1(), 52).unwrap();
        let scan = scan_g(&spec, 105).unwrap();
        for i in (0..scan.interval_values.len()).step_by(7) {
            let (l, r) = scan.interval(i);
            let a = (&l * Rational::integer(3) + &r) / Rational::integer(4);
            let b = (&l + &r * Rational::integer(3)) / Rational::integer(4);
            assert_eq!(f_value(&spec, &a, 105).unwrap(), scan.interval_values[i]);
            assert_eq!(f_value(&spec, &b, 105).unwrap(), scan.interval_values[i]);
        }
    }

    #[test]
    fn vectors_symmetric_under_negation() {
        let spec =
            RotationMatrixSpec::for_orbit(pt("inf=8/49;default=0;2=-1;5=3", "all-except:3"), 8)
                .unwrap();
        for k in 1..=8 {
            let a = shortest_for(&spec, k);
            let b = shortest_for(&spec, -k);
            assert_eq!(a.v_norm, b.v_norm);
            assert_eq!(a.u_infinity, -b.u_infinity);
        }
    }

    #[test]
    fn cross_check_f2() {
        let deltas = cross_check(&f2(), 5).unwrap();
        assert_eq!(deltas[..3], [q("1/5"), q("3/5"), q("4/5")]);
    }
}
