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

//! A small accuracy grid written as CSV, plus the fitted geometric-mean
//! variance constant.
//!
//! `Sampling::Stable` draws each trial's coordinates from their exact law,
//! which keeps a `D = 2^16` run fast. Switch to `Sampling::Projection` to
//! project the vector for every trial.

use ccsketch::estimators::EstimatorKind;
use ccsketch::harness::{emit_csv, fitted_gm_constant, run_monte_carlo, DataSource, McConfig, Sampling};

fn main() -> ccsketch::Result<()> {
    let mut cfg = McConfig::new(DataSource::Zipf {
        domain: 1 << 16,
        exponent: 1.0,
        scale: 1.0,
    });
    cfg.alphas = vec![0.5, 0.9, 0.99];
    cfg.ks = vec![10, 100, 1000];
    cfg.estimators = vec![
        EstimatorKind::GeometricMean,
        EstimatorKind::HarmonicMean,
        EstimatorKind::OptimalPower,
    ];
    cfg.trials = 2000;
    cfg.sampling = Sampling::Stable;
    cfg.seed = 42;

    let report = run_monte_carlo(&cfg)?;
    println!(
        "{:>6} {:>5} {:>4} {:>12} {:>10}",
        "alpha", "k", "est", "norm rmse", "emp/pred"
    );
    for c in &report.cells {
        println!(
            "{:>6} {:>5} {:>4} {:>12.5} {:>10.3}",
            c.alpha,
            c.k,
            c.estimator.name(),
            c.norm_rmse,
            c.variance_ratio()
        );
    }
    for c in report.cells.iter().filter(|c| c.k == 1000) {
        if let Some(constant) = fitted_gm_constant(c) {
            println!(
                "gm alpha={} fitted constant {constant:.3} (pi^2/6 = 1.645)",
                c.alpha
            );
        }
    }

    let path = std::env::temp_dir().join("ccsketch-report.csv");
    emit_csv(&report, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
