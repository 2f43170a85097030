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

//! Monte-Carlo runner for estimator accuracy over an `(alpha, k, estimator)`
//! grid.
//!
//! Trial `t` of every cell uses sketch seed `base_seed ^ t`. Trials run in
//! parallel but are reduced by index, so a report is a deterministic
//! function of its config (apart from the optional timing column).

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entropy::{entropy_from_moments, shannon_exact, EntropyRoute};
use crate::error::{Error, Result};
use crate::estimators::{estimate_samples, EstimatorKind};
use crate::harness::data::{accumulate, exact_moment, generate_zipf, ingest_stream, read_vector};
use crate::lambda::predicted_variance;
use crate::sketch::{Sketch, SketchConfig};
use crate::stable::SkewedStable;

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Zipf {
        domain: usize,
        exponent: f64,
        scale: f64,
    },
    Vector(Vec<f64>),
    VectorFile(PathBuf),
    /// A Turnstile stream, accumulated over `[1, max index]`.
    StreamFile(PathBuf),
}

impl DataSource {
    pub fn load(&self) -> Result<Vec<f64>> {
        match self {
            DataSource::Zipf {
                domain,
                exponent,
                scale,
            } => generate_zipf(*domain, *exponent, *scale, None),
            DataSource::Vector(v) => Ok(v.clone()),
            DataSource::VectorFile(p) => read_vector(BufReader::new(File::open(p)?)),
            DataSource::StreamFile(p) => {
                let ups = ingest_stream(p)?;
                let domain = ups.iter().map(|u| u.index).max().unwrap_or(0) as usize;
                accumulate(&ups, domain)
            }
        }
    }
}

/// What each trial is scored against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Target {
    /// `F_(alpha)` against `exact_moment`.
    #[default]
    Moment,
    /// Shannon entropy through the given route, against `shannon_exact`.
    Entropy(EntropyRoute),
}

/// How the `k` coordinates of a trial are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// Full projection of the data vector (`Sketch::from_vector`), `O(D k)`
    /// per trial.
    #[default]
    Projection,
    /// Coordinates drawn directly as `F_(alpha)^(1/alpha) Z_j` with
    /// `Z_j ~ S(alpha, 1, 1)`, the exact law of a projection of a
    /// non-negative vector. `O(k)` per trial.
    Stable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub alphas: Vec<f64>,
    pub ks: Vec<usize>,
    pub estimators: Vec<EstimatorKind>,
    pub trials: usize,
    pub data: DataSource,
    pub seed: u64,
    pub target: Target,
    pub sampling: Sampling,
    /// Record wall time per cell; turn off for byte-identical reports.
    pub timing: bool,
}

impl McConfig {
    pub fn new(data: DataSource) -> Self {
        McConfig {
            alphas: vec![0.5],
            ks: vec![100],
            estimators: vec![EstimatorKind::OptimalPower],
            trials: 1000,
            data,
            seed: 0,
            target: Target::Moment,
            sampling: Sampling::Projection,
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.alphas.is_empty() || self.ks.is_empty() || self.estimators.is_empty() {
            return Err(Error::Config(
                "alpha, k and estimator lists must be non-empty".into(),
            ));
        }
        if let Some(k) = self.ks.iter().find(|&&k| k < 2) {
            return Err(Error::Config(format!("k must be at least 2, got {k}")));
        }
        for &alpha in &self.alphas {
            for &kind in &self.estimators {
                if !kind.supports(alpha) {
                    return Err(Error::Config(format!(
                        "estimator {kind} is not defined at alpha = {alpha}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One row of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct McCell {
    pub alpha: f64,
    pub k: usize,
    pub estimator: EstimatorKind,
    pub trials: usize,
    pub true_value: f64,
    pub emp_mean: f64,
    /// Unbiased sample variance; `NaN` for a single trial.
    pub emp_var: f64,
    pub pred_var: f64,
    /// `sqrt(MSE) / |true_value|`.
    pub norm_rmse: f64,
    pub seconds: f64,
}

impl McCell {
    pub fn mse(&self) -> f64 {
        (self.norm_rmse * self.true_value).powi(2)
    }

    pub fn variance_ratio(&self) -> f64 {
        self.emp_var / self.pred_var
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct McReport {
    pub cells: Vec<McCell>,
}

impl McReport {
    pub fn cell(&self, alpha: f64, k: usize, estimator: EstimatorKind) -> Option<&McCell> {
        self.cells
            .iter()
            .find(|c| c.alpha == alpha && c.k == k && c.estimator == estimator)
    }

    /// Sorted by alpha, then k, then estimator name.
    pub fn sort(&mut self) {
        self.cells.sort_by(|a, b| {
            a.alpha
                .total_cmp(&b.alpha)
                .then(a.k.cmp(&b.k))
                .then(a.estimator.name().cmp(b.estimator.name()))
        });
    }
}

/// For a moment-target geometric-mean cell, the constant `c` fitted from
/// `emp_var = c (1 - alpha^2) F^2 / k` (or `c (alpha - 1)(5 - alpha) F^2 / k`
/// above one). The analytic value is `pi^2 / 6`.
pub fn fitted_gm_constant(cell: &McCell) -> Option<f64> {
    if cell.estimator != EstimatorKind::GeometricMean || !cell.emp_var.is_finite() {
        return None;
    }
    let a = cell.alpha;
    let shape = if a < 1.0 {
        1.0 - a * a
    } else {
        (a - 1.0) * (5.0 - a)
    };
    Some(cell.emp_var * cell.k as f64 / (cell.true_value.powi(2) * shape))
}

struct TrialSample {
    coords: Vec<f64>,
    f1: f64,
}

fn draw_trial(
    cfg: &McConfig,
    data: &[f64],
    alpha: f64,
    k: usize,
    f_alpha: f64,
    f1: f64,
    trial: u64,
) -> Result<TrialSample> {
    let seed = cfg.seed ^ trial;
    match cfg.sampling {
        Sampling::Projection => {
            let config = SketchConfig::new(alpha, k, seed, data.len() as u64)?;
            let sketch = Sketch::from_vector(config, data)?;
            Ok(TrialSample {
                coords: sketch.coordinates(),
                f1: sketch.f1(),
            })
        }
        Sampling::Stable => {
            let dist = SkewedStable::new(alpha)?;
            let scale = f_alpha.powf(1.0 / alpha);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coords = (0..k).map(|_| scale * dist.sample(&mut rng)).collect();
            Ok(TrialSample { coords, f1 })
        }
    }
}

fn summarize(values: &[f64], truth: f64) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        f64::NAN
    };
    let mse = values.iter().map(|v| (v - truth).powi(2)).sum::<f64>() / n;
    (mean, var, mse.sqrt() / truth.abs())
}

/// Runs every grid cell of `cfg`.
pub fn run_monte_carlo(cfg: &McConfig) -> Result<McReport> {
    cfg.validate()?;
    let data = cfg.data.load()?;
    if data.is_empty() {
        return Err(Error::Config("data vector is empty".into()));
    }
    let f1 = exact_moment(&data, 1.0)?;
    if !(f1 > 0.0) {
        return Err(Error::Config("data vector sums to zero".into()));
    }
    let shannon = match cfg.target {
        Target::Entropy(_) => Some(shannon_exact(&data)?),
        Target::Moment => None,
    };

    let mut alphas = cfg.alphas.clone();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let mut ks = cfg.ks.clone();
    ks.sort_unstable();
    ks.dedup();
    let mut kinds = cfg.estimators.clone();
    kinds.sort_by_key(|k| k.name());
    kinds.dedup();

    let mut report = McReport::default();
    for &alpha in &alphas {
        let f_alpha = exact_moment(&data, alpha)?;
        for &k in &ks {
            let started = Instant::now();
            let samples: Vec<TrialSample> = (0..cfg.trials as u64)
                .into_par_iter()
                .map(|t| draw_trial(cfg, &data, alpha, k, f_alpha, f1, t))
                .collect::<Result<_>>()
                .map_err(|e| Error::Cell {
                    alpha,
                    k,
                    estimator: "*".into(),
                    source: Box::new(e),
                })?;
            let sampling_secs = started.elapsed().as_secs_f64();

            for &kind in &kinds {
                let cell_err = |e: Error| Error::Cell {
                    alpha,
                    k,
                    estimator: kind.name().into(),
                    source: Box::new(e),
                };
                let est_started = Instant::now();
                let values: Vec<f64> = samples
                    .par_iter()
                    .map(|s| {
                        let est = estimate_samples(kind, alpha, &s.coords, None)?;
                        match cfg.target {
                            Target::Moment => Ok(est.value),
                            Target::Entropy(route) => entropy_from_moments(route, est.value, s.f1, alpha),
                        }
                    })
                    .collect::<Result<_>>()
                    .map_err(cell_err)?;
                let var_f = predicted_variance(kind, alpha, f_alpha, k).map_err(cell_err)?;
                let (true_value, pred_var) = match cfg.target {
                    Target::Moment => (f_alpha, var_f),
                    Target::Entropy(route) => {
                        // Delta method through the plug-in map.
                        let slope = match route {
                            EntropyRoute::Tsallis => 1.0 / ((alpha - 1.0) * f1.powf(alpha)),
                            EntropyRoute::Renyi => 1.0 / ((1.0 - alpha) * f_alpha),
                        };
                        (shannon.expect("entropy target"), var_f * slope * slope)
                    }
                };
                let (emp_mean, emp_var, norm_rmse) = summarize(&values, true_value);
                let seconds = if cfg.timing {
                    sampling_secs + est_started.elapsed().as_secs_f64()
                } else {
                    0.0
                };
                report.cells.push(McCell {
                    alpha,
                    k,
                    estimator: kind,
                    trials: cfg.trials,
                    true_value,
                    emp_mean,
                    emp_var,
                    pred_var,
                    norm_rmse,
                    seconds,
                });
            }
        }
    }
    report.sort();
    Ok(report)
}
