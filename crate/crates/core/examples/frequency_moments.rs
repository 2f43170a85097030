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

//! All four estimators of `F_(alpha)` on one data vector, against the
//! exact value.

use ccsketch::estimators::{estimate, EstimatorKind};
use ccsketch::harness::{exact_moment, generate_zipf};
use ccsketch::{Sketch, SketchConfig};

fn main() -> ccsketch::Result<()> {
    let a = generate_zipf(4096, 1.1, 1000.0, Some(1))?;
    let k = 200;
    println!(
        "{:>6} {:>4} {:>14} {:>14} {:>10}",
        "alpha", "est", "estimate", "exact", "rel err"
    );
    for alpha in [0.5, 0.9, 0.99, 1.2] {
        let sketch = Sketch::from_vector(SketchConfig::new(alpha, k, 17, a.len() as u64)?, &a)?;
        let exact = exact_moment(&a, alpha)?;
        for kind in EstimatorKind::ALL {
            if !kind.supports(alpha) {
                continue;
            }
            let est = estimate(&sketch, kind)?;
            println!(
                "{alpha:>6} {:>4} {:>14.3} {exact:>14.3} {:>+10.4}",
                kind.name(),
                est.value,
                est.value / exact - 1.0
            );
        }
    }
    Ok(())
}
