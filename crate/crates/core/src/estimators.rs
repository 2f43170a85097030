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

//! Estimators of `F_(alpha)` from the projected coordinates of a sketch.
//!
//! All four work in the log domain. Products of `k` terms underflow for
//! large `k`, and the optimal power near `alpha = 1` raises coordinates to
//! exponents around `-113`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lambda::{
    fractional_power_variance, hm_variance_coeff, lambda_star, predicted_variance, second_moment_excess,
    VarianceCoeffQuery,
};
use crate::sketch::Sketch;
use crate::stable::{cos_kappa_half_pi, kappa, ln_g_moment_factor, ln_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    GeometricMean,
    HarmonicMean,
    OptimalPower,
    MaximumLikelihood,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::GeometricMean,
        EstimatorKind::HarmonicMean,
        EstimatorKind::OptimalPower,
        EstimatorKind::MaximumLikelihood,
    ];

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::GeometricMean => "gm",
            EstimatorKind::HarmonicMean => "hm",
            EstimatorKind::OptimalPower => "op",
            EstimatorKind::MaximumLikelihood => "mle",
        }
    }

    /// Whether the estimator is defined at `alpha`.
    pub fn supports(self, alpha: f64) -> bool {
        let generic = alpha > 0.0 && alpha < 2.0 && alpha != 1.0;
        match self {
            EstimatorKind::GeometricMean | EstimatorKind::OptimalPower => generic,
            EstimatorKind::HarmonicMean => generic && alpha < 1.0,
            EstimatorKind::MaximumLikelihood => alpha == 0.5,
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gm" => Ok(EstimatorKind::GeometricMean),
            "hm" => Ok(EstimatorKind::HarmonicMean),
            "op" => Ok(EstimatorKind::OptimalPower),
            "mle" => Ok(EstimatorKind::MaximumLikelihood),
            other => Err(Error::domain(format!(
                "unknown estimator {other:?} (expected gm, hm, op or mle)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub kind: EstimatorKind,
    /// Plug-in standard error: the leading-order variance with `F` replaced
    /// by `value`.
    pub predicted_se: f64,
    /// The power `lambda` used by the optimal-power estimator.
    pub lambda_used: Option<f64>,
}

/// `ln |x_j|` for every coordinate, rejecting zeros.
fn log_abs(x: &[f64]) -> Result<Vec<f64>> {
    if x.len() < 2 {
        return Err(Error::domain(format!("need k >= 2 coordinates, got {}", x.len())));
    }
    x.iter()
        .enumerate()
        .map(|(j, &v)| {
            if v == 0.0 || !v.is_finite() {
                Err(Error::Degenerate(format!("coordinate {} is {v}", j + 1)))
            } else {
                Ok(v.abs().ln())
            }
        })
        .collect()
}

/// `ln sum_j exp(t_j)`.
fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.map(|t| (t - m).exp()).sum::<f64>().ln()
}

fn with_se(kind: EstimatorKind, value: f64, variance: f64, lambda: Option<f64>) -> Estimate {
    Estimate {
        value,
        kind,
        predicted_se: variance.sqrt(),
        lambda_used: lambda,
    }
}

/// `ln D_gm` for the geometric-mean normalizer
/// `D_gm = cos^k(kappa pi/(2k)) / cos(kappa pi/2) * [(2/pi) sin(pi alpha/(2k)) Gamma(1 - 1/k) Gamma(alpha/k)]^k`.
pub fn ln_gm_normalizer(alpha: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!("need k >= 2, got {k}")));
    }
    let kf = k as f64;
    let kap = kappa(alpha)?;
    let per_sample = (2.0 / PI).ln()
        + (PI * alpha / (2.0 * kf)).sin().ln()
        + ln_gamma(1.0 - 1.0 / kf)
        + ln_gamma(alpha / kf);
    Ok(kf * (kap * PI / (2.0 * kf)).cos().ln() - cos_kappa_half_pi(alpha)?.ln() + kf * per_sample)
}

/// Geometric mean: `prod_j |x_j|^(alpha/k) / D_gm`, unbiased.
pub fn geometric_mean(alpha: f64, x: &[f64]) -> Result<Estimate> {
    let logs = log_abs(x)?;
    let k = x.len();
    let ln_value = alpha / k as f64 * logs.iter().sum::<f64>() - ln_gm_normalizer(alpha, k)?;
    let value = ln_value.exp();
    let var = predicted_variance(EstimatorKind::GeometricMean, alpha, value, k)?;
    Ok(with_se(EstimatorKind::GeometricMean, value, var, None))
}

/// Harmonic mean (`alpha < 1`):
/// `k cos(alpha pi/2) / Gamma(1 + alpha) / sum_j |x_j|^(-alpha)`, times the
/// bias correction `1 - (2 Gamma^2(1+alpha)/Gamma(1+2alpha) - 1)/k`.
pub fn harmonic_mean(alpha: f64, x: &[f64]) -> Result<Estimate> {
    let coeff = hm_variance_coeff(alpha)?;
    let logs = log_abs(x)?;
    let k = x.len();
    let kf = k as f64;
    let lse = log_sum_exp(logs.iter().map(|l| -alpha * l));
    let ln_value = kf.ln() + cos_kappa_half_pi(alpha)?.ln() - ln_gamma(1.0 + alpha) - lse;
    let value = ln_value.exp() * (1.0 - coeff / kf);
    let var = predicted_variance(EstimatorKind::HarmonicMean, alpha, value, k)?;
    Ok(with_se(EstimatorKind::HarmonicMean, value, var, None))
}

/// Bias-corrected fractional-power estimator at `lambda_override`, or at
/// `lambda*(alpha)` when `None`.
///
/// `(cos^lambda(kappa pi/2) sum_j |x_j|^(lambda alpha) / (k G(alpha lambda)))^(1/lambda)`
/// times `1 - (1/k)(1/(2 lambda))(1/lambda - 1)[G(2 alpha lambda)/G^2(alpha lambda) - 1]`.
pub fn optimal_power(alpha: f64, x: &[f64], lambda_override: Option<f64>) -> Result<Estimate> {
    let lambda = match lambda_override {
        Some(l) => VarianceCoeffQuery::new(alpha, l)?.lambda(),
        None => lambda_star(alpha)?.lambda_star,
    };
    let logs = log_abs(x)?;
    let k = x.len();
    let kf = k as f64;
    let lse = log_sum_exp(logs.iter().map(|l| lambda * alpha * l));
    let ln_moment =
        lambda * cos_kappa_half_pi(alpha)?.ln() + lse - kf.ln() - ln_g_moment_factor(alpha * lambda, alpha)?;
    let correction = 1.0
        - (1.0 / kf) * (1.0 / (2.0 * lambda)) * (1.0 / lambda - 1.0) * second_moment_excess(lambda, alpha)?;
    if !(correction > 0.0) {
        return Err(Error::domain(format!(
            "bias correction {correction} is not positive at lambda = {lambda}, k = {k}"
        )));
    }
    let value = (ln_moment / lambda).exp() * correction;
    let var = match lambda_override {
        Some(l) => fractional_power_variance(l, alpha, value, k)?,
        None => predicted_variance(EstimatorKind::OptimalPower, alpha, value, k)?,
    };
    Ok(with_se(EstimatorKind::OptimalPower, value, var, Some(lambda)))
}

/// Bias-corrected Lévy MLE (`alpha = 0.5`):
/// `(1 - 3/(4k)) sqrt(k / sum_j 1/x_j)`.
pub fn mle_half(alpha: f64, x: &[f64]) -> Result<Estimate> {
    if alpha != 0.5 {
        return Err(Error::domain(format!(
            "the maximum-likelihood estimator needs alpha = 0.5, got {alpha}"
        )));
    }
    if let Some((j, v)) = x.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::Degenerate(format!(
            "coordinate {} is {v}; the Levy law is supported on x > 0",
            j + 1
        )));
    }
    let logs = log_abs(x)?;
    let k = x.len();
    let kf = k as f64;
    let lse = log_sum_exp(logs.iter().map(|l| -l));
    let value = (1.0 - 0.75 / kf) * (0.5 * (kf.ln() - lse)).exp();
    let var = predicted_variance(EstimatorKind::MaximumLikelihood, alpha, value, k)?;
    Ok(with_se(EstimatorKind::MaximumLikelihood, value, var, None))
}

/// Dispatch on `kind` over raw coordinates. `lambda_override` is only
/// accepted by the optimal-power estimator.
pub fn estimate_samples(
    kind: EstimatorKind,
    alpha: f64,
    x: &[f64],
    lambda_override: Option<f64>,
) -> Result<Estimate> {
    if lambda_override.is_some() && kind != EstimatorKind::OptimalPower {
        return Err(Error::domain(format!(
            "a lambda override only applies to the optimal-power estimator, not {kind}"
        )));
    }
    match kind {
        EstimatorKind::GeometricMean => geometric_mean(alpha, x),
        EstimatorKind::HarmonicMean => harmonic_mean(alpha, x),
        EstimatorKind::OptimalPower => optimal_power(alpha, x, lambda_override),
        EstimatorKind::MaximumLikelihood => mle_half(alpha, x),
    }
}

pub fn estimate(sketch: &Sketch, kind: EstimatorKind) -> Result<Estimate> {
    estimate_samples(kind, sketch.alpha(), &sketch.coordinates(), None)
}

pub fn estimate_gm(sketch: &Sketch) -> Result<Estimate> {
    geometric_mean(sketch.alpha(), &sketch.coordinates())
}

pub fn estimate_hm(sketch: &Sketch) -> Result<Estimate> {
    harmonic_mean(sketch.alpha(), &sketch.coordinates())
}

pub fn estimate_op(sketch: &Sketch, lambda_override: Option<f64>) -> Result<Estimate> {
    optimal_power(sketch.alpha(), &sketch.coordinates(), lambda_override)
}

pub fn estimate_mle_half(sketch: &Sketch) -> Result<Estimate> {
    mle_half(sketch.alpha(), &sketch.coordinates())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::SketchConfig;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gm_two_ones() {
        // Independent evaluation of 1/D_gm at alpha = 0.5, k = 2 with
        // Gamma(1/2) = sqrt(pi) and Gamma(1/4) from the Gamma function.
        let gamma_quarter = ln_gamma(0.25).exp();
        let d = ((PI / 8.0).cos().powi(2) / (PI / 4.0).cos())
            * ((2.0 / PI) * (PI / 8.0).sin() * PI.sqrt() * gamma_quarter).powi(2);
        let est = geometric_mean(0.5, &[1.0, 1.0]).unwrap();
        assert!(rel(est.value, 1.0 / d) < 1e-13);
        assert!((est.value - 0.3380).abs() < 5e-4);
    }

    #[test]
    fn hm_two_ones() {
        let gamma_15 = PI.sqrt() / 2.0;
        let expected = 2.0 * (PI / 4.0).cos() / gamma_15 / 2.0 * (1.0 - 0.5 * (PI / 2.0 - 1.0));
        let est = harmonic_mean(0.5, &[1.0, 1.0]).unwrap();
        assert!(rel(est.value, expected) < 1e-13);
        assert!((est.value - 0.5702).abs() < 1e-4);
        assert!(harmonic_mean(1.2, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn mle_direct_substitution() {
        assert!(rel(mle_half(0.5, &[1.0, 1.0]).unwrap().value, 0.625) < 1e-15);
        assert!(rel(mle_half(0.5, &[1.0; 4]).unwrap().value, 0.8125) < 1e-15);
        assert!(mle_half(0.6, &[1.0, 1.0]).is_err());
        assert!(matches!(mle_half(0.5, &[1.0, -1.0]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn op_at_half_equals_mle() {
        let op = optimal_power(0.5, &[1.0, 1.0], None).unwrap();
        assert!(rel(op.value, 0.625) < 1e-12);
        assert!((op.lambda_used.unwrap() + 2.0).abs() < 1e-6);
    }

    #[test]
    fn zero_coordinate_is_degenerate() {
        for kind in EstimatorKind::ALL {
            let err = estimate_samples(kind, 0.5, &[1.0, 0.0, 2.0], None).unwrap_err();
            assert!(matches!(err, Error::Degenerate(_)), "{kind}: {err}");
        }
    }

    #[test]
    fn override_checks() {
        assert!(optimal_power(0.5, &[1.0, 2.0], Some(0.6)).is_err());
        assert!(optimal_power(1.5, &[1.0, 2.0], Some(-0.4)).is_err());
        assert!(estimate_samples(EstimatorKind::GeometricMean, 0.5, &[1.0, 2.0], Some(-1.0)).is_err());
    }

    #[test]
    fn names_round_trip() {
        for kind in EstimatorKind::ALL {
            assert_eq!(kind.name().parse::<EstimatorKind>().unwrap(), kind);
        }
        assert!("xx".parse::<EstimatorKind>().is_err());
    }

    #[test]
    fn sketch_wrappers_use_coordinates() {
        let cfg = SketchConfig::new(0.5, 8, 3, 4).unwrap();
        let s = Sketch::from_vector(cfg, &[1.0, 2.0, 0.0, 3.0]).unwrap();
        let x = s.coordinates();
        assert_eq!(estimate_gm(&s).unwrap(), geometric_mean(0.5, &x).unwrap());
        assert_eq!(
            estimate_mle_half(&s).unwrap().value,
            mle_half(0.5, &x).unwrap().value
        );
        assert!(estimate(&s, EstimatorKind::HarmonicMean).unwrap().value > 0.0);
    }

    proptest! {
        #[test]
        fn homogeneous_of_degree_alpha(
            xs in prop::collection::vec(0.01f64..100.0, 2..30),
            c in 0.01f64..100.0,
            alpha_idx in 0usize..4,
        ) {
            let alpha = [0.5, 0.8, 0.95, 1.5][alpha_idx];
            let scaled: Vec<f64> = xs.iter().map(|x| c * x).collect();
            for kind in EstimatorKind::ALL.into_iter().filter(|k| k.supports(alpha)) {
                let base = estimate_samples(kind, alpha, &xs, None).unwrap().value;
                let lifted = estimate_samples(kind, alpha, &scaled, None).unwrap().value;
                prop_assert!(rel(lifted, c.powf(alpha) * base) < 1e-12, "{} {} {}", kind, lifted, base);
            }
        }

        #[test]
        fn op_at_minus_one_is_hm(
            xs in prop::collection::vec(0.01f64..100.0, 2..30),
            alpha in 0.05f64..0.95,
        ) {
            let op = optimal_power(alpha, &xs, Some(-1.0)).unwrap().value;
            let hm = harmonic_mean(alpha, &xs).unwrap().value;
            prop_assert!(rel(op, hm) < 1e-10);
        }
    }
}
