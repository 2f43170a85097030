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

//! Shannon, Rényi and Tsallis entropies, exact and sketched.
//!
//! Natural logarithms throughout, with `0 log 0 = 0`. Sketched Shannon
//! entropy is the Tsallis (default) or Rényi entropy at the sketch's
//! `alpha`, computed from an estimated `F_(alpha)` and the exact `F_(1)`
//! counter.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimators::{estimate, EstimatorKind};
use crate::sketch::Sketch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum EntropyRoute {
    #[default]
    Tsallis,
    Renyi,
}

impl EntropyRoute {
    pub fn name(self) -> &'static str {
        match self {
            EntropyRoute::Tsallis => "tsallis",
            EntropyRoute::Renyi => "renyi",
        }
    }
}

impl fmt::Display for EntropyRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntropyRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tsallis" => Ok(EntropyRoute::Tsallis),
            "renyi" => Ok(EntropyRoute::Renyi),
            other => Err(Error::domain(format!(
                "unknown entropy route {other:?} (expected tsallis or renyi)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub shannon_estimate: f64,
    pub alpha_used: f64,
    pub route: EntropyRoute,
    pub moment_estimate: f64,
    pub f1: f64,
}

fn check_nonnegative(a: &[f64]) -> Result<f64> {
    if let Some((i, v)) = a.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::domain(format!(
            "entry {} is {v}; entries must be >= 0",
            i + 1
        )));
    }
    let total: f64 = a.iter().sum();
    if !(total > 0.0) {
        return Err(Error::domain("vector sums to zero"));
    }
    Ok(total)
}

/// `H = -sum_i (a_i/F1) log(a_i/F1)`.
pub fn shannon_exact(a: &[f64]) -> Result<f64> {
    let total = check_nonnegative(a)?;
    let h: f64 = a
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| {
            let p = v / total;
            -p * p.ln()
        })
        .sum();
    Ok(h.max(0.0))
}

fn check_moments(f_alpha: f64, f1: f64, alpha: f64) -> Result<()> {
    if alpha == 1.0 || !(alpha > 0.0) {
        return Err(Error::domain(format!(
            "alpha must be positive and differ from 1, got {alpha}"
        )));
    }
    if !(f_alpha > 0.0) || !(f1 > 0.0) {
        return Err(Error::domain(format!(
            "moments must be positive, got F_alpha = {f_alpha}, F1 = {f1}"
        )));
    }
    Ok(())
}

/// `T_alpha = (1 - F_alpha / F1^alpha) / (alpha - 1)`.
pub fn tsallis_from_moments(f_alpha: f64, f1: f64, alpha: f64) -> Result<f64> {
    check_moments(f_alpha, f1, alpha)?;
    // 1 - exp(ln ratio), kept accurate when the ratio is close to one.
    let ln_ratio = f_alpha.ln() - alpha * f1.ln();
    Ok(-ln_ratio.exp_m1() / (alpha - 1.0))
}

/// `H_alpha = log(F_alpha / F1^alpha) / (1 - alpha)`.
pub fn renyi_from_moments(f_alpha: f64, f1: f64, alpha: f64) -> Result<f64> {
    check_moments(f_alpha, f1, alpha)?;
    Ok((f_alpha.ln() - alpha * f1.ln()) / (1.0 - alpha))
}

pub fn entropy_from_moments(route: EntropyRoute, f_alpha: f64, f1: f64, alpha: f64) -> Result<f64> {
    match route {
        EntropyRoute::Tsallis => tsallis_from_moments(f_alpha, f1, alpha),
        EntropyRoute::Renyi => renyi_from_moments(f_alpha, f1, alpha),
    }
}

/// Plug-in Shannon estimate from an already estimated `F_(alpha)`.
pub fn shannon_from_moment_estimate(
    route: EntropyRoute,
    moment_estimate: f64,
    f1: f64,
    alpha: f64,
) -> Result<EntropyEstimate> {
    if !(f1 > 0.0) {
        return Err(Error::domain(format!(
            "F1 = {f1}; the accumulated vector must be non-negative and non-empty"
        )));
    }
    Ok(EntropyEstimate {
        shannon_estimate: entropy_from_moments(route, moment_estimate, f1, alpha)?,
        alpha_used: alpha,
        route,
        moment_estimate,
        f1,
    })
}

/// Estimate `F_(alpha)` with `kind` and plug it into the chosen route with
/// the sketch's exact `F_(1)`.
pub fn estimate_shannon(
    sketch: &Sketch,
    kind: EstimatorKind,
    route: EntropyRoute,
) -> Result<EntropyEstimate> {
    let f1 = sketch.f1();
    if !(f1 > 0.0) {
        return Err(Error::domain(format!(
            "F1 = {f1}; the accumulated vector must be non-negative and non-empty"
        )));
    }
    let moment = estimate(sketch, kind)?;
    shannon_from_moment_estimate(route, moment.value, f1, sketch.alpha())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(a: &[f64], alpha: f64) -> (f64, f64) {
        (a.iter().map(|v| v.powf(alpha)).sum(), a.iter().sum())
    }

    #[test]
    fn shannon_examples() {
        assert!((shannon_exact(&[2.0; 4]).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert_eq!(shannon_exact(&[0.0, 5.0, 0.0]).unwrap(), 0.0);
        let expected = -(0.25f64 * 0.25f64.ln()) - 0.75 * 0.75f64.ln();
        let h = shannon_exact(&[1.0, 3.0]).unwrap();
        assert!((h - expected).abs() < 1e-15);
        assert!((h - 0.562335).abs() < 1e-6);
        assert!(shannon_exact(&[1.0, -1.0]).is_err());
        assert!(shannon_exact(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn tsallis_and_renyi_of_uniform() {
        let (fa, f1) = moments(&[3.0; 4], 0.5);
        assert!((tsallis_from_moments(fa, f1, 0.5).unwrap() - 2.0).abs() < 1e-14);
        assert!((renyi_from_moments(fa, f1, 0.5).unwrap() - 4f64.ln()).abs() < 1e-14);
        assert!(tsallis_from_moments(fa, f1, 1.0).is_err());
        assert!(renyi_from_moments(fa, f1, 1.0).is_err());
    }

    #[test]
    fn one_hot_is_zero() {
        for &alpha in &[0.3, 0.9, 1.4] {
            let (fa, f1) = moments(&[0.0, 7.0], alpha);
            assert!(tsallis_from_moments(fa, f1, alpha).unwrap().abs() < 1e-14);
            assert!(renyi_from_moments(fa, f1, alpha).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn both_routes_approach_shannon() {
        let a = [1.0, 3.0, 0.5, 7.0, 2.0];
        let h = shannon_exact(&a).unwrap();
        for alpha in [1.0 - 1e-4, 1.0 + 1e-4] {
            let (fa, f1) = moments(&a, alpha);
            assert!((tsallis_from_moments(fa, f1, alpha).unwrap() - h).abs() < 1e-3);
            assert!((renyi_from_moments(fa, f1, alpha).unwrap() - h).abs() < 1e-3);
        }
    }

    #[test]
    fn routes_parse() {
        assert_eq!("Renyi".parse::<EntropyRoute>().unwrap(), EntropyRoute::Renyi);
        assert_eq!(EntropyRoute::default(), EntropyRoute::Tsallis);
        assert!("x".parse::<EntropyRoute>().is_err());
    }
}
