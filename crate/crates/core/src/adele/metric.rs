//! The ambient max-metric on `A_P`, reduction to the fundamental domain,
//! and the quotient metric on the torus `A_P / Γ_P`.

use num_bigint::BigInt;
use num_integer::Integer;

use super::{AdelePoint, TorusPoint};
use crate::arith::{
    int_valuation, mod_inverse, padic_abs_unchecked, prime_factors, valuation_unchecked, Rational,
    Valuation,
};
use crate::error::{Error, Result};

/// `|x|`: the max over places, with p-adic terms weighted by `1/p` when `P` is infinite.
///
/// For a cofinite `P` the supremum runs over infinitely many primes but is
/// attained on a finite candidate set. Away from the overrides the
/// coordinate is the default `d`, which is p-integral there, so the term is
/// `|d|_p / p <= 1/p` with equality exactly when `p ∤ numerator(d)`. Walking
/// the non-overridden members upward, the first prime not dividing the
/// numerator bounds every later term, so the walk stops there.
pub fn ambient_norm(x: &AdelePoint) -> Rational {
    let mut best = x.at_infinity().abs();
    let primes = x.primes();
    if let Some(members) = primes.members() {
        for &p in members {
            best = best.max(padic_abs_unchecked(x.coordinate(p), p));
        }
        return best;
    }

    for (&p, v) in x.overrides() {
        best = best.max(padic_abs_unchecked(v, p) / Rational::integer(p));
    }
    let d = x.default_value();
    if d.is_zero() {
        return best;
    }
    for p in primes.iter().filter(|p| !x.overrides().contains_key(p)) {
        let bound = Rational::frac(1, p as i64);
        if bound <= best {
            break;
        }
        best = best.max(padic_abs_unchecked(d, p) / Rational::integer(p));
        if !d.numer().is_multiple_of(&BigInt::from(p)) {
            break;
        }
    }
    best
}

/// `|x − y|` in the ambient metric.
pub fn ambient_metric(x: &AdelePoint, y: &AdelePoint) -> Result<Rational> {
    Ok(ambient_norm(&x.sub(y)?))
}

/// Moves `x` into `[0,1) × ∏ Z_p` by a diagonal translate.
///
/// Returns the reduced point together with the `γ ∈ Γ_P` that was
/// subtracted, so that `x − γ` is the reduced point. Each override with a
/// non-integral coordinate `v` at `p` sheds its fractional p-part `c/p^k`
/// (with `0 <= c < p^k`), which is integral at every other prime; the
/// integer part of the real coordinate goes last.
pub fn reduce(x: &AdelePoint) -> (TorusPoint, Rational) {
    let mut y = x.clone();
    let mut gamma = Rational::zero();
    let primes: Vec<u64> = x.overrides().keys().copied().collect();
    for p in primes {
        let v = y.coordinate(p).clone();
        let k = match valuation_unchecked(&v, p) {
            Valuation::Finite(e) if e < 0 => -e,
            _ => continue,
        };
        let pk = num_traits::pow(BigInt::from(p), k as usize);
        let unit_den = v.denom() / &pk;
        debug_assert_eq!(int_valuation(&unit_den, p), 0);
        let c = (v.numer() * mod_inverse(&unit_den, &pk)).mod_floor(&pk);
        let step = Rational::from_big(num_rational::BigRational::new(c, pk));
        y = y.add_diagonal_in_group(&-&step, &[p]);
        gamma = gamma + step;
    }
    let whole = Rational::integer(y.at_infinity().floor());
    y = y.add_diagonal_in_group(&-&whole, &[]);
    gamma = gamma + whole;
    (TorusPoint::new_unchecked(y), gamma)
}

/// `‖x̄ − ȳ‖` for already-reduced points: only `γ ∈ {−1, 0, 1}` can be optimal.
pub fn torus_distance_reduced(x: &TorusPoint, y: &TorusPoint) -> Result<Rational> {
    let d = x.sub(y)?;
    Ok([-1i64, 0, 1]
        .into_iter()
        .map(|g| ambient_norm(&d.add_diagonal_in_group(&Rational::integer(g), &[])))
        .min()
        .expect("three candidates"))
}

/// The quotient metric `‖x − y‖ = min over γ ∈ Γ_P of |x − y − γ|`.
pub fn torus_distance(x: &AdelePoint, y: &AdelePoint) -> Result<Rational> {
    if x.primes() != y.primes() {
        return Err(Error::PrimeSetMismatch);
    }
    torus_distance_reduced(&reduce(x).0, &reduce(y).0)
}

/// `‖x‖`, the distance from `x` to the zero coset.
pub fn torus_norm(x: &AdelePoint) -> Rational {
    let zero = TorusPoint::new_unchecked(AdelePoint::zero(x.primes().clone()));
    torus_distance_reduced(&reduce(x).0, &zero).expect("same prime set")
}

/// The elements `a/b ∈ Γ_P` with `|a| <= height` and `1 <= b <= height`.
pub fn diagonal_elements(primes: &super::PrimeSet, height: u64) -> Vec<(Rational, Vec<u64>)> {
    let h = height as i64;
    let mut out = Vec::new();
    for b in 1..=height {
        let factors = prime_factors(&BigInt::from(b));
        if !factors.iter().all(|&p| primes.contains(p)) {
            continue;
        }
        for a in -h..=h {
            out.push((Rational::frac(a, b as i64), factors.clone()));
        }
    }
    out
}

/// Exhaustive version of [`torus_distance`]: minimises `|x − y − γ|` over
/// every `γ = a/b ∈ Γ_P` with `|a|, b <= height_bound`.
///
/// No reduction is applied, so for reduced inputs this is a direct check
/// that the three-candidate shortcut in [`torus_distance`] loses nothing.
pub fn brute_force_torus_distance(
    x: &AdelePoint,
    y: &AdelePoint,
    height_bound: u64,
) -> Result<Rational> {
    if height_bound < 1 {
        return Err(Error::OutOfRange("height bound must be at least 1".into()));
    }
    let d = x.sub(y)?;
    Ok(diagonal_elements(x.primes(), height_bound)
        .into_iter()
        .map(|(g, dens)| ambient_norm(&d.add_diagonal_in_group(&-g, &dens)))
        .min()
        .expect("γ = 0 is always enumerated"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adele::{parse_point, PrimeSet};
    use crate::arith::padic_abs;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pt(spec: &str, primes: &PrimeSet) -> AdelePoint {
        parse_point(spec, primes).unwrap()
    }

    #[test]
    fn ambient_metric_examples() {
        let two = PrimeSet::finite([2]).unwrap();
        let x = pt("inf=1/100;default=-179;2=-128", &two);
        let zero = AdelePoint::zero(two.clone());
        assert_eq!(ambient_metric(&x, &zero).unwrap(), q("1/100"));
        assert_eq!(ambient_metric(&x, &x).unwrap(), q("0"));

        let odd = PrimeSet::all_except([2]).unwrap();
        let minus_one = pt("inf=0;default=-1", &odd);
        assert_eq!(ambient_norm(&minus_one), q("1/3"));
    }

    /// Truncated supremum over the first primes of the set, computed
    /// coordinate by coordinate.
    fn cofinite_norm_oracle(x: &AdelePoint, prime_count: usize) -> Rational {
        let mut best = x.at_infinity().abs();
        for p in x.primes().iter().take(prime_count) {
            let term = padic_abs(x.coordinate(p), p).unwrap() / Rational::integer(p);
            best = best.max(term);
        }
        best
    }

    #[test]
    fn cofinite_norm_matches_truncated_sup() {
        let all = PrimeSet::all();
        let cases = [
            "inf=0;default=30",
            "inf=0;default=210/11;11=3",
            "inf=1/50;default=9",
            "inf=0;default=2310",
            "inf=0;default=0;3=1/3",
            "inf=0;default=-1;2=4",
        ];
        for spec in cases {
            let x = pt(spec, &all);
            assert_eq!(ambient_norm(&x), cofinite_norm_oracle(&x, 60), "{spec}");
        }
    }

    #[test]
    fn cofinite_norm_with_large_square_factors() {
        // 3 | d twice: term at 3 is 1/27, but 5 ∤ d gives 1/5.
        let odd = PrimeSet::all_except([2]).unwrap();
        let x = pt("inf=0;default=9", &odd);
        assert_eq!(ambient_norm(&x), q("1/5"));
        // d = 3·5·7·11·13: the first prime not dividing it is 17,
        // but 3 contributes 1/9 > 1/17.
        let y = pt("inf=0;default=15015", &odd);
        assert_eq!(ambient_norm(&y), q("1/9"));
    }

    #[test]
    fn reduce_examples() {
        let two = PrimeSet::finite([2]).unwrap();
        let x = pt("inf=17901/100;default=0;2=51", &two);
        let (r, g) = reduce(&x);
        assert_eq!(g, q("179"));
        assert_eq!(r.point(), &pt("inf=1/100;default=-179;2=-128", &two));
        let (again, g2) = reduce(r.point());
        assert_eq!(&again, &r);
        assert_eq!(g2, q("0"));

        let half = pt("inf=0;default=0;2=1/2", &two);
        let (r, g) = reduce(&half);
        assert_eq!(g, q("-1/2"));
        assert_eq!(r.at_infinity(), &q("1/2"));
        assert_eq!(r.default_value(), &q("1/2"));
        assert_eq!(r.coordinate(2), &q("1"));
        assert!(r.in_fundamental_domain());
        assert_eq!(half.add_diagonal(&-g).unwrap(), *r.point());
    }

    #[test]
    fn reduce_peels_several_primes() {
        let all = PrimeSet::all();
        let x = pt("inf=7/3;default=0;2=3/8;3=5/9;5=1/25", &all);
        let (r, g) = reduce(&x);
        assert!(r.in_fundamental_domain());
        assert_eq!(x.add_diagonal(&-g).unwrap(), *r.point());
    }

    #[test]
    fn torus_distance_examples() {
        let two = PrimeSet::finite([2]).unwrap();
        let alpha = pt("inf=351/100;default=0;2=1", &two);
        let zero = AdelePoint::zero(two);
        assert_eq!(
            torus_distance(&alpha.scale_by_integer(51), &zero).unwrap(),
            q("1/100")
        );

        let three = PrimeSet::finite([3]).unwrap();
        let beta = pt("inf=16/5;default=0;3=1", &three);
        let zero3 = AdelePoint::zero(three);
        assert_eq!(
            torus_distance(&beta.scale_by_integer(4), &zero3).unwrap(),
            q("1/5")
        );
        assert_eq!(torus_distance(&beta, &beta).unwrap(), q("0"));
        assert_eq!(torus_distance(&beta, &zero), Err(Error::PrimeSetMismatch));
    }

    #[test]
    fn brute_force_agrees_on_examples() {
        let two = PrimeSet::finite([2]).unwrap();
        let alpha = pt("inf=351/100;default=0;2=1", &two);
        let zero = AdelePoint::zero(two.clone());
        let x = reduce(&alpha.scale_by_integer(51)).0.into_point();
        assert_eq!(
            brute_force_torus_distance(&x, &zero, 256).unwrap(),
            q("1/100")
        );

        let half = reduce(&pt("inf=0;default=0;2=1/2", &two)).0.into_point();
        assert_eq!(
            brute_force_torus_distance(&half, &zero, 16).unwrap(),
            torus_distance(&half, &zero).unwrap()
        );
        assert_eq!(torus_distance(&half, &zero).unwrap(), q("1/2"));
    }

    #[test]
    fn height_one_still_sees_unit_translates() {
        let two = PrimeSet::finite([2]).unwrap();
        let elems: Vec<Rational> = diagonal_elements(&two, 1)
            .into_iter()
            .map(|(g, _)| g)
            .collect();
        assert_eq!(elems, vec![q("-1"), q("0"), q("1")]);
        assert!(brute_force_torus_distance(
            &AdelePoint::zero(two.clone()),
            &AdelePoint::zero(two),
            0
        )
        .is_err());
    }
}
