// Copyright 2026 The ccsketch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The asymptotic variance coefficient `g(lambda; alpha)` of the
//! fractional-power estimator and its minimizer `lambda*(alpha)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use statrs::function::gamma::digamma;

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::stable::{ln_g_moment_factor, ln_gamma};

/// Default bracket width on `lambda` for [`optimal_lambda`].
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Relative margin kept from each end of a bounded search interval.
const BOUNDARY_MARGIN: f64 = 1e-9;

/// Expansion steps of the downward bracket before giving up.
const MAX_EXPANSIONS: u32 = 80;

/// Below this `|lambda|`, `g` is replaced by its limit at zero.
const ZERO_LIMIT_RADIUS: f64 = 1e-5;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
        return Err(Error::domain(format!(
            "alpha must lie in (0, 2) without 1, got {alpha}"
        )));
    }
    Ok(())
}

/// Open interval of `lambda` for which the estimator of `F^lambda` has
/// finite variance: `(-inf, 1/2)` below one, `(-1/(2 alpha), 1/2)` above.
pub fn admissible_range(alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    Ok(if alpha < 1.0 {
        (f64::NEG_INFINITY, 0.5)
    } else {
        (-0.5 / alpha, 0.5)
    })
}

/// A validated `(alpha, lambda)` pair for [`variance_coeff`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceCoeffQuery {
    alpha: f64,
    lambda: f64,
}

impl VarianceCoeffQuery {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        let (lo, hi) = admissible_range(alpha)?;
        if !(lambda > lo && lambda < hi) {
            return Err(Error::domain(format!(
                "lambda = {lambda} outside the admissible range ({lo}, {hi}) for alpha = {alpha}"
            )));
        }
        if lambda == 0.0 {
            return Err(Error::domain("g(lambda; alpha) is undefined at lambda = 0"));
        }
        Ok(VarianceCoeffQuery { alpha, lambda })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// `ln[G(2 alpha lambda) / G^2(alpha lambda)]`.
fn ln_second_moment_ratio(lambda: f64, alpha: f64) -> Result<f64> {
    if alpha < 1.0 {
        let l = lambda;
        let a = alpha;
        Ok(ln_gamma(1.0 - 2.0 * l) + 2.0 * ln_gamma(1.0 - a * l)
            - ln_gamma(1.0 - 2.0 * a * l)
            - 2.0 * ln_gamma(1.0 - l))
    } else {
        Ok(ln_g_moment_factor(2.0 * alpha * lambda, alpha)?
            - 2.0 * ln_g_moment_factor(alpha * lambda, alpha)?)
    }
}

/// `G(2 alpha lambda) / G^2(alpha lambda) - 1`, the relative variance of a
/// single `|x|^(lambda alpha)` term.
pub(crate) fn second_moment_excess(lambda: f64, alpha: f64) -> Result<f64> {
    Ok(ln_second_moment_ratio(lambda, alpha)?.exp_m1())
}

/// `g(lambda; alpha) = (1/lambda^2) [G(2 alpha lambda) / G^2(alpha lambda) - 1]`.
pub fn variance_coeff(query: &VarianceCoeffQuery) -> f64 {
    let l = query.lambda;
    // Validated on construction, so the moment factors are in range.
    second_moment_excess(l, query.alpha).expect("validated query") / (l * l)
}

/// Shorthand for `variance_coeff(&VarianceCoeffQuery::new(alpha, lambda)?)`.
pub fn g(lambda: f64, alpha: f64) -> Result<f64> {
    Ok(variance_coeff(&VarianceCoeffQuery::new(alpha, lambda)?))
}

/// `lim_{lambda -> 0} g(lambda; alpha)`, the variance coefficient of the
/// geometric-mean estimator: `(pi^2/6)(1 - alpha^2)` below one and
/// `(pi^2/6)(alpha - 1)(5 - alpha)` above.
pub fn gm_variance_coeff(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let c = PI * PI / 6.0;
    Ok(if alpha < 1.0 {
        c * (1.0 - alpha * alpha)
    } else {
        c * (alpha - 1.0) * (5.0 - alpha)
    })
}

/// `2 Gamma^2(1 + alpha) / Gamma(1 + 2 alpha) - 1`.
pub fn hm_variance_coeff(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "the harmonic-mean estimator needs alpha < 1, got {alpha}"
        )));
    }
    let ln = 2.0f64.ln() + 2.0 * ln_gamma(1.0 + alpha) - ln_gamma(1.0 + 2.0 * alpha);
    Ok(ln.exp_m1())
}

/// `lambda*` and the minimized coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalLambda {
    pub alpha: f64,
    pub lambda_star: f64,
    pub g_at_star: f64,
    /// The minimizer sits against the (margin-shrunk) end of a bounded
    /// admissible interval. Only possible above `alpha = 1`.
    pub at_boundary: bool,
}

fn objective(lambda: f64, alpha: f64) -> Result<f64> {
    if lambda.abs() < ZERO_LIMIT_RADIUS {
        return gm_variance_coeff(alpha);
    }
    g(lambda, alpha)
}

struct Bracket {
    lo: f64,
    hi: f64,
}

/// Golden-section search on `[lo, hi]` until the bracket is narrower than
/// `tol`. Returns the final bracket.
fn golden_section<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        // Bracket stopped shrinking in floating point.
        if c >= d {
            break;
        }
    }
    Ok(Bracket { lo: a, hi: b })
}

/// `d/d lambda ln[G(2 alpha lambda)/G^2(alpha lambda)]` for `alpha < 1`.
fn ln_ratio_derivative(lambda: f64, alpha: f64) -> f64 {
    let (l, a) = (lambda, alpha);
    -2.0 * digamma(1.0 - 2.0 * l) - 2.0 * a * digamma(1.0 - a * l)
        + 2.0 * a * digamma(1.0 - 2.0 * a * l)
        + 2.0 * digamma(1.0 - l)
}

/// `lambda^3 g'(lambda)` for `alpha < 1`; has the sign of `g'` flipped for
/// `lambda < 0`.
fn stationarity(lambda: f64, alpha: f64) -> f64 {
    let d = ln_second_moment_ratio(lambda, alpha).expect("lambda < 0 is admissible");
    ln_ratio_derivative(lambda, alpha) * d.exp() * lambda - 2.0 * d.exp_m1()
}

/// Bisection on the analytic derivative inside the golden-section bracket.
fn polish_below_one(bracket: &Bracket, alpha: f64) -> Option<f64> {
    // Golden-section search cannot resolve a flat minimum much below the
    // square root of machine precision, so the root may sit just outside
    // the bracket. Widen until the derivative changes sign.
    let mid = 0.5 * (bracket.lo + bracket.hi);
    let mut width = (bracket.hi - bracket.lo).max(1e-6 * mid.abs());
    let (mut lo, mut hi) = (mid - width, (mid + width).min(-f64::EPSILON));
    let mut widened = 0;
    while !(stationarity(lo, alpha) > 0.0 && stationarity(hi, alpha) < 0.0) {
        widened += 1;
        if widened > 40 || hi >= -f64::EPSILON {
            return None;
        }
        width *= 2.0;
        lo = mid - width;
        hi = (mid + width).min(-f64::EPSILON);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if stationarity(mid, alpha) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn solve(alpha: f64, tolerance: f64) -> Result<OptimalLambda> {
    check_alpha(alpha)?;
    if !(tolerance > 0.0) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    if alpha < 1.0 {
        // g is convex with a negative minimizer that runs off to -inf as
        // alpha -> 1-, so expand the bracket downward geometrically.
        let mut prev2 = f64::NAN;
        let mut prev = -0.5;
        let mut f_prev = objective(prev, alpha)?;
        let mut found = None;
        for _ in 0..MAX_EXPANSIONS {
            let next = 2.0 * prev;
            let f_next = objective(next, alpha)?;
            if f_next > f_prev {
                let upper = if prev2.is_nan() { -ZERO_LIMIT_RADIUS } else { prev2 };
                found = Some((next, upper));
                break;
            }
            prev2 = prev;
            prev = next;
            f_prev = f_next;
        }
        let (lo, hi) = found.ok_or_else(|| {
            Error::Solver(format!(
                "no interior minimum of g(.; {alpha}) on [{prev}, -0.5] after {MAX_EXPANSIONS} expansions"
            ))
        })?;
        let bracket = golden_section(|l| objective(l, alpha), lo, hi, tolerance)?;
        let lambda_star = polish_below_one(&bracket, alpha).unwrap_or(0.5 * (bracket.lo + bracket.hi));
        Ok(OptimalLambda {
            alpha,
            lambda_star,
            g_at_star: g(lambda_star, alpha)?,
            at_boundary: false,
        })
    } else {
        let (lo, hi) = admissible_range(alpha)?;
        let lo = lo * (1.0 - BOUNDARY_MARGIN);
        let hi = hi * (1.0 - BOUNDARY_MARGIN);
        let bracket = golden_section(|l| objective(l, alpha), lo, hi, tolerance)?;
        let lambda_star = 0.5 * (bracket.lo + bracket.hi);
        let at_boundary = lambda_star - lo <= tolerance || hi - lambda_star <= tolerance;
        Ok(OptimalLambda {
            alpha,
            lambda_star,
            g_at_star: objective(lambda_star, alpha)?,
            at_boundary,
        })
    }
}

fn cache() -> &'static Mutex<HashMap<(u64, u64), OptimalLambda>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), OptimalLambda>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `lambda*(alpha) = argmin_lambda g(lambda; alpha)`, memoized per
/// `(alpha, tolerance)` for the life of the process.
///
/// Below `alpha = 1` the minimum is bracketed by doubling `|lambda|` from
/// `-1/2`, narrowed by golden-section search to `tolerance`, then refined by
/// bisection on the analytic derivative. Above one the search runs over the
/// bounded admissible interval.
pub fn optimal_lambda(alpha: f64, tolerance: f64) -> Result<OptimalLambda> {
    let key = (alpha.to_bits(), tolerance.to_bits());
    if let Some(hit) = cache().lock().expect("lambda cache poisoned").get(&key) {
        return Ok(*hit);
    }
    let solved = solve(alpha, tolerance)?;
    cache().lock().expect("lambda cache poisoned").insert(key, solved);
    Ok(solved)
}

/// [`optimal_lambda`] at [`DEFAULT_TOLERANCE`].
pub fn lambda_star(alpha: f64) -> Result<OptimalLambda> {
    optimal_lambda(alpha, DEFAULT_TOLERANCE)
}

/// Leading-order variance of each estimator for `k` samples of scale `f`.
pub fn predicted_variance(kind: EstimatorKind, alpha: f64, f: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!("need k >= 2 samples, got {k}")));
    }
    if !(f > 0.0) {
        return Err(Error::domain(format!("scale must be positive, got {f}")));
    }
    let kf = k as f64;
    let f2 = f * f;
    match kind {
        EstimatorKind::GeometricMean => Ok(f2 * gm_variance_coeff(alpha)? / kf),
        EstimatorKind::HarmonicMean => Ok(f2 * hm_variance_coeff(alpha)? / kf),
        EstimatorKind::OptimalPower => Ok(f2 * lambda_star(alpha)?.g_at_star / kf),
        EstimatorKind::MaximumLikelihood => {
            if alpha != 0.5 {
                return Err(Error::domain(format!(
                    "the maximum-likelihood estimator needs alpha = 0.5, got {alpha}"
                )));
            }
            Ok(0.5 * f2 / kf + 9.0 / 8.0 * f2 / (kf * kf))
        }
    }
}

/// Variance of the fractional-power estimator at an arbitrary admissible
/// `lambda`: `f^2 g(lambda; alpha) / k`.
pub fn fractional_power_variance(lambda: f64, alpha: f64, f: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!("need k >= 2 samples, got {k}")));
    }
    Ok(f * f * g(lambda, alpha)? / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable::ln_gamma;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn g_exact_values_at_half() {
        assert!((g(-2.0, 0.5).unwrap() - 0.5).abs() < 1e-12);
        assert!(rel(g(-1.0, 0.5).unwrap(), PI / 2.0 - 1.0) < 1e-12);
    }

    #[test]
    fn g_at_minus_one_is_harmonic_mean_coeff() {
        let direct = 2.0 * (2.0 * ln_gamma(1.9)).exp() / ln_gamma(2.8).exp() - 1.0;
        assert!(rel(g(-1.0, 0.9).unwrap(), direct) < 1e-10);
        assert!(rel(hm_variance_coeff(0.9).unwrap(), direct) < 1e-10);
    }

    #[test]
    fn query_range_checks() {
        assert!(VarianceCoeffQuery::new(0.5, 0.5).is_err());
        assert!(VarianceCoeffQuery::new(0.5, 0.0).is_err());
        assert!(VarianceCoeffQuery::new(0.5, -1e6).is_ok());
        assert!(VarianceCoeffQuery::new(1.5, -1.0 / 3.0).is_err());
        assert!(VarianceCoeffQuery::new(1.5, -0.3).is_ok());
        assert!(VarianceCoeffQuery::new(1.0, -0.3).is_err());
    }

    #[test]
    fn g_tends_to_gm_coefficient_at_zero() {
        for &a in &[0.3, 0.8, 1.3, 1.8] {
            let near = g(1e-3, a).unwrap();
            let limit = gm_variance_coeff(a).unwrap();
            assert!(rel(near, limit) < 1e-2, "alpha={a}: {near} vs {limit}");
        }
    }

    #[test]
    fn lambda_star_anchor_values() {
        let half = lambda_star(0.5).unwrap();
        assert!((half.lambda_star + 2.0).abs() < 1e-6);
        assert!((half.g_at_star - 0.5).abs() < 1e-12);
        let near_one = lambda_star(0.99).unwrap();
        assert!(rel(near_one.lambda_star, -114.9) < 0.02);
        let small = lambda_star(0.01).unwrap();
        assert!((small.lambda_star + 1.0).abs() < 0.05);
    }

    #[test]
    fn lambda_star_above_one_is_interior() {
        for &a in &[1.1, 1.5, 1.9] {
            let opt = lambda_star(a).unwrap();
            assert!(!opt.at_boundary);
            assert!(opt.lambda_star > 0.0 && opt.lambda_star < 0.5, "{opt:?}");
            for eps in [-1e-3, 1e-3] {
                assert!(objective(opt.lambda_star + eps, a).unwrap() >= opt.g_at_star);
            }
        }
    }

    #[test]
    fn cache_returns_identical_values() {
        let a = optimal_lambda(0.77, 1e-8).unwrap();
        let b = optimal_lambda(0.77, 1e-8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn solver_rejects_bad_inputs() {
        assert!(optimal_lambda(1.0, 1e-9).is_err());
        assert!(optimal_lambda(0.5, 0.0).is_err());
        assert!(optimal_lambda(2.0, 1e-9).is_err());
    }

    #[test]
    fn predicted_variance_examples() {
        let mle = predicted_variance(EstimatorKind::MaximumLikelihood, 0.5, 1.0, 100).unwrap();
        assert!(rel(mle, 0.0051125) < 1e-12);
        let op = predicted_variance(EstimatorKind::OptimalPower, 0.5, 1.0, 100).unwrap();
        assert!(rel(op, 0.005) < 1e-9);
        let hm = predicted_variance(EstimatorKind::HarmonicMean, 0.5, 2.0, 50).unwrap();
        assert!(rel(hm, 4.0 * (PI / 2.0 - 1.0) / 50.0) < 1e-12);
        assert!((hm - 0.045664).abs() < 1e-6);
        assert!(predicted_variance(EstimatorKind::HarmonicMean, 1.5, 1.0, 50).is_err());
        assert!(predicted_variance(EstimatorKind::MaximumLikelihood, 0.6, 1.0, 50).is_err());
        assert!(predicted_variance(EstimatorKind::OptimalPower, 0.5, 1.0, 1).is_err());
    }
}
