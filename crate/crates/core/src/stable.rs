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

//! Maximally-skewed stable laws `S(alpha, beta = 1, F)`.
//!
//! The scale `F` enters the characteristic function as
//! `exp(-F |t|^alpha (1 - i sign(t) tan(pi alpha / 2)))`, so a projection of a
//! non-negative vector `a` onto i.i.d. `S(alpha, 1, 1)` entries is distributed
//! as `S(alpha, 1, sum_i a_i^alpha)`.
//!
//! Gamma products are always assembled from log-Gamma terms: the powers used
//! by the optimal-power estimator near `alpha = 1` reach several hundred and
//! the plain products overflow.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::distributions::Distribution;
use rand::Rng;

use crate::error::{Error, Result};

/// `ln |Gamma(x)|` together with the sign of `Gamma(x)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    let (value, sign) = libm::lgamma_r(x);
    (value, if sign < 0 { -1.0 } else { 1.0 })
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma called with non-positive argument {x}");
    libm::lgamma_r(x).0
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 2], got {alpha}")));
    }
    if alpha == 1.0 {
        return Err(Error::domain(
            "alpha = 1 is excluded: the first moment is an exact counter",
        ));
    }
    Ok(())
}

/// `kappa(alpha)`: `alpha` below one, `2 - alpha` above.
pub fn kappa(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(if alpha < 1.0 { alpha } else { 2.0 - alpha })
}

/// `cos(kappa(alpha) pi / 2)`, evaluated as `sin(|1 - alpha| pi / 2)` so that
/// it keeps full relative precision as `alpha -> 1`.
pub fn cos_kappa_half_pi(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(((1.0 - alpha).abs() * FRAC_PI_2).sin())
}

/// Parameters of `S(alpha, beta = 1, scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    alpha: f64,
    scale: f64,
}

impl StableParams {
    pub fn new(alpha: f64, scale: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::domain(format!("scale must be positive, got {scale}")));
        }
        Ok(StableParams { alpha, scale })
    }

    /// Unit scale, the law of a single projection entry.
    pub fn standard(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        1.0
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

fn check_moment_arg(lambda: f64, alpha: f64) -> Result<()> {
    check_alpha(alpha)?;
    if lambda == 0.0 {
        return Err(Error::domain(
            "G(lambda) has a removable singularity at lambda = 0 (limit 1)",
        ));
    }
    if !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be finite, got {lambda}")));
    }
    if lambda >= alpha {
        return Err(Error::domain(format!(
            "moment of order {lambda} diverges for alpha = {alpha} (need lambda < alpha)"
        )));
    }
    Ok(())
}

/// `ln G(lambda)` for the moment constant
///
/// `G(lambda) = (2/pi) cos((kappa/alpha) lambda pi/2) sin(pi lambda/2) Gamma(1 - lambda/alpha) Gamma(lambda)`.
///
/// Below `alpha = 1` this is evaluated through the reflection-formula
/// simplification `Gamma(1 - lambda/alpha) / Gamma(1 - lambda)`; above, through
/// the trigonometric form. Fails when `G(lambda) <= 0`, which does not happen
/// inside the moment range `-1 < lambda < alpha`.
pub fn ln_g_moment_factor(lambda: f64, alpha: f64) -> Result<f64> {
    let (ln_abs, sign) = ln_g_signed(lambda, alpha)?;
    if sign < 0.0 {
        return Err(Error::domain(format!(
            "G({lambda}) is negative for alpha = {alpha}; outside the moment range"
        )));
    }
    Ok(ln_abs)
}

/// `G(lambda)`; see [`ln_g_moment_factor`].
pub fn g_moment_factor(lambda: f64, alpha: f64) -> Result<f64> {
    let (ln_abs, sign) = ln_g_signed(lambda, alpha)?;
    Ok(sign * ln_abs.exp())
}

fn ln_g_signed(lambda: f64, alpha: f64) -> Result<(f64, f64)> {
    check_moment_arg(lambda, alpha)?;
    if alpha < 1.0 {
        // 1 - lambda/alpha > 0 and 1 - lambda > 0 since lambda < alpha < 1.
        return Ok((ln_gamma(1.0 - lambda / alpha) - ln_gamma(1.0 - lambda), 1.0));
    }
    if is_nonpositive_integer(lambda) {
        if (lambda / 2.0).fract() != 0.0 {
            return Err(Error::domain(format!(
                "G has a pole at lambda = {lambda} for alpha = {alpha}"
            )));
        }
        // sin(pi lambda/2) vanishes against the pole of Gamma(lambda); use the
        // reflected form cos(c lambda pi/2) Gamma(1 - lambda/alpha) / (cos(lambda pi/2) Gamma(1 - lambda)).
        let c = (2.0 - alpha) / alpha;
        let num = (c * lambda * FRAC_PI_2).cos();
        let den = (lambda * FRAC_PI_2).cos();
        let ratio = num / den;
        let ln = ratio.abs().ln() + ln_gamma(1.0 - lambda / alpha) - ln_gamma(1.0 - lambda);
        return Ok((ln, ratio.signum()));
    }
    ln_g_trig_signed(lambda, alpha)
}

/// The literal trigonometric form of `G`, in sign/log-magnitude form. Valid
/// for every `alpha` away from the poles of `Gamma(lambda)`.
pub fn ln_g_trig_signed(lambda: f64, alpha: f64) -> Result<(f64, f64)> {
    check_moment_arg(lambda, alpha)?;
    if is_nonpositive_integer(lambda) {
        return Err(Error::domain(format!(
            "trigonometric form of G is indeterminate at lambda = {lambda}"
        )));
    }
    let c = kappa(alpha)? / alpha;
    let cos_term = (c * lambda * FRAC_PI_2).cos();
    let sin_term = (lambda * FRAC_PI_2).sin();
    let (ln_g1, s1) = ln_gamma_signed(1.0 - lambda / alpha);
    let (ln_g2, s2) = ln_gamma_signed(lambda);
    let sign = cos_term.signum() * sin_term.signum() * s1 * s2;
    let ln = (2.0 / PI).ln() + cos_term.abs().ln() + sin_term.abs().ln() + ln_g1 + ln_g2;
    Ok((ln, sign))
}

/// `ln E|Z|^lambda` for `Z ~ S(alpha, 1, F)`.
pub fn ln_absolute_moment(lambda: f64, params: &StableParams) -> Result<f64> {
    let alpha = params.alpha;
    if lambda >= alpha {
        return Err(Error::domain(format!(
            "E|Z|^{lambda} diverges for alpha = {alpha}"
        )));
    }
    if alpha > 1.0 && lambda <= -1.0 {
        return Err(Error::domain(format!(
            "E|Z|^{lambda} diverges for alpha = {alpha} > 1 (need lambda > -1)"
        )));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let p = lambda / alpha;
    Ok(p * params.scale.ln() + ln_g_moment_factor(lambda, alpha)? - p * cos_kappa_half_pi(alpha)?.ln())
}

/// `E|Z|^lambda = F^(lambda/alpha) G(lambda) / cos^(lambda/alpha)(kappa pi/2)`.
pub fn absolute_moment(lambda: f64, params: &StableParams) -> Result<f64> {
    Ok(ln_absolute_moment(lambda, params)?.exp())
}

/// Maps 64 random bits to a uniform in the open interval `(0, 1)`.
#[inline]
pub fn open_unit(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Sampler for `S(alpha, 1, 1)` by the Chambers–Mallows–Stuck transform.
///
/// For `V ~ U(-pi/2, pi/2)` and `W ~ Exp(1)`:
///
/// `X = s sin(alpha (V + B)) / cos(V)^(1/alpha) * (cos(V - alpha (V + B)) / W)^((1 - alpha)/alpha)`
///
/// with `alpha B = arctan(tan(pi alpha / 2))` and
/// `s = (1 + tan^2(pi alpha / 2))^(1/(2 alpha)) = cos(kappa pi/2)^(-1/alpha)`.
/// Evaluated in log space.
#[derive(Debug, Clone, Copy)]
pub struct SkewedStable {
    alpha: f64,
    alpha_b: f64,
    inv_alpha: f64,
    tail_exponent: f64,
    ln_scale: f64,
}

impl SkewedStable {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if alpha == 2.0 {
            return Err(Error::domain("alpha = 2 is not supported by the sampler"));
        }
        // arctan(tan(pi alpha/2)) folds pi alpha/2 back into (-pi/2, pi/2).
        let alpha_b = if alpha < 1.0 {
            alpha * FRAC_PI_2
        } else {
            alpha * FRAC_PI_2 - PI
        };
        Ok(SkewedStable {
            alpha,
            alpha_b,
            inv_alpha: 1.0 / alpha,
            tail_exponent: (1.0 - alpha) / alpha,
            ln_scale: -cos_kappa_half_pi(alpha)?.ln() / alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Deterministic transform of two uniforms in `(0, 1)`.
    #[inline]
    pub fn from_uniforms(&self, u_angle: f64, u_exp: f64) -> f64 {
        let v = PI * (u_angle - 0.5);
        let ln_w = (-u_exp.ln()).ln();
        let shifted = self.alpha * v + self.alpha_b;
        let head = shifted.sin();
        let cos_v = v.cos().max(f64::MIN_POSITIVE);
        let cos_tail = (v - shifted).cos().max(f64::MIN_POSITIVE);
        let ln_mag = self.ln_scale + head.abs().ln() - self.inv_alpha * cos_v.ln()
            + self.tail_exponent * (cos_tail.ln() - ln_w);
        head.signum() * ln_mag.exp()
    }
}

impl Distribution<f64> for SkewedStable {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u1 = open_unit(rng.next_u64());
        let u2 = open_unit(rng.next_u64());
        self.from_uniforms(u1, u2)
    }
}

/// `n` independent draws from `S(alpha, 1, 1)`. Multiply by `F^(1/alpha)` for
/// scale `F`.
pub fn sample_skewed_stable<R: Rng + ?Sized>(alpha: f64, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if alpha == 1.0 {
        return Err(Error::domain(
            "sampling at alpha = 1 is unsupported; the first moment is counted exactly",
        ));
    }
    let dist = SkewedStable::new(alpha)?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}

fn check_levy(z: f64, scale: f64) -> Result<()> {
    if !(scale > 0.0) {
        return Err(Error::domain(format!("Levy scale must be positive, got {scale}")));
    }
    if !(z > 0.0) {
        return Err(Error::domain(format!("Levy law is supported on z > 0, got {z}")));
    }
    Ok(())
}

/// Density of `S(1/2, 1, F)`: `F / sqrt(2 pi) exp(-F^2 / (2z)) z^(-3/2)`.
pub fn levy_pdf(z: f64, scale: f64) -> Result<f64> {
    check_levy(z, scale)?;
    Ok(scale / (2.0 * PI).sqrt() * (-scale * scale / (2.0 * z)).exp() * z.powf(-1.5))
}

/// CDF of `S(1/2, 1, F)`, `2 (1 - Phi(F / sqrt(z)))`, from `Z = F^2 / N^2`.
pub fn levy_cdf(z: f64, scale: f64) -> Result<f64> {
    check_levy(z, scale)?;
    Ok(libm::erfc(scale / (2.0 * z).sqrt()))
}
