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

//! Per-window Shannon entropy of destination traffic, the kind of signal
//! used to flag floods that concentrate on a few hosts.
//!
//! Each window is sketched at `alpha = 0.999` with 500 projections; the
//! entropy estimate combines the sketch's moment estimate with its exact
//! packet count.

use ccsketch::entropy::{estimate_shannon, shannon_exact, EntropyRoute};
use ccsketch::estimators::EstimatorKind;
use ccsketch::{Sketch, SketchConfig, StreamUpdate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HOSTS: u64 = 5000;

fn main() -> ccsketch::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "window", "exact", "tsallis", "renyi"
    );
    for window in 0..8u64 {
        let config = SketchConfig::new(0.999, 500, 100 + window, HOSTS)?;
        let mut sketch = Sketch::new(config)?;
        let mut counts = vec![0.0f64; HOSTS as usize];
        let attack = (5..7).contains(&window);
        for _ in 0..50_000 {
            let host = if attack && rng.gen_bool(0.7) {
                1 + rng.gen_range(0..3)
            } else {
                // Heavy-tailed background: host ~ HOSTS^u.
                (HOSTS as f64).powf(rng.gen::<f64>()) as u64
            };
            let host = host.clamp(1, HOSTS);
            sketch.update(StreamUpdate::new(host, 1.0))?;
            counts[host as usize - 1] += 1.0;
        }
        let exact = shannon_exact(&counts)?;
        let t = estimate_shannon(&sketch, EstimatorKind::OptimalPower, EntropyRoute::Tsallis)?;
        let r = estimate_shannon(&sketch, EstimatorKind::OptimalPower, EntropyRoute::Renyi)?;
        println!(
            "{window:>6} {exact:>10.4} {:>10.4} {:>10.4}{}",
            t.shannon_estimate,
            r.shannon_estimate,
            if attack { "  <- flood" } else { "" }
        );
    }
    Ok(())
}
