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

//! The optimal power `lambda*` and how much it buys over the geometric mean.

use ccsketch::estimators::EstimatorKind;
use ccsketch::lambda::{g, lambda_star, predicted_variance};

fn main() -> ccsketch::Result<()> {
    println!(
        "{:>8} {:>14} {:>12} {:>12} {:>10}",
        "alpha", "lambda*", "g(lambda*)", "g(-1)", "V_gm/V_op"
    );
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99, 0.999, 1.1, 1.5, 1.9] {
        let opt = lambda_star(alpha)?;
        let hm = if alpha < 1.0 {
            format!("{:12.6}", g(-1.0, alpha)?)
        } else {
            format!("{:>12}", "-")
        };
        let ratio = predicted_variance(EstimatorKind::GeometricMean, alpha, 1.0, 100)?
            / predicted_variance(EstimatorKind::OptimalPower, alpha, 1.0, 100)?;
        println!(
            "{alpha:>8} {:>14.6} {:>12.6e} {hm} {ratio:>10.2}",
            opt.lambda_star, opt.g_at_star
        );
    }

    // g is convex in lambda below alpha = 1; a coarse look at alpha = 0.9.
    println!("\ng(lambda; 0.9):");
    for lambda in [-40.0, -20.0, -11.237, -5.0, -1.0, -0.1, 0.2, 0.45] {
        println!("  {lambda:>8} {:.6}", g(lambda, 0.9)?);
    }
    Ok(())
}
