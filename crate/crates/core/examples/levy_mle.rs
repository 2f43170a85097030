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

//! At `alpha = 1/2` the skewed stable law is the Levy law and the moment
//! problem has an exact maximum-likelihood solution. The optimal-power
//! estimator lands on it: `lambda*(0.5) = -2`.

use ccsketch::estimators::{mle_half, optimal_power};
use ccsketch::lambda::lambda_star;
use ccsketch::stable::{absolute_moment, levy_cdf, sample_skewed_stable, StableParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ccsketch::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let z = sample_skewed_stable(0.5, 200_000, &mut rng)?;

    // Empirical CDF against the closed form.
    for q in [0.25, 1.0, 4.0, 100.0] {
        let emp = z.iter().filter(|&&v| v <= q).count() as f64 / z.len() as f64;
        println!("P(Z <= {q:>6}) = {emp:.4} (closed form {:.4})", levy_cdf(q, 1.0)?);
    }
    let params = StableParams::standard(0.5)?;
    for lambda in [-1.0, -0.5, 0.25] {
        let emp = z.iter().map(|v| v.powf(lambda)).sum::<f64>() / z.len() as f64;
        println!(
            "E Z^{lambda:<5} = {emp:.4} (closed form {:.4})",
            absolute_moment(lambda, &params)?
        );
    }

    println!("lambda*(0.5) = {:.12}", lambda_star(0.5)?.lambda_star);
    let f = 3.0f64;
    let x: Vec<f64> = z[..50].iter().map(|v| f * f * v).collect();
    let mle = mle_half(0.5, &x)?;
    let op = optimal_power(0.5, &x, None)?;
    println!(
        "F = {f}: mle {:.12}, op {:.12}, predicted se {:.4}",
        mle.value, op.value, mle.predicted_se
    );
    Ok(())
}
