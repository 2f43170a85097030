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

//! Sketch a Turnstile stream on two shards, merge them, and persist the
//! result. Items are hashed into `[1, D]`; increments may be negative.

use ccsketch::{estimate_op, Sketch, SketchConfig, StreamUpdate};

const DOMAIN: u64 = 10_000;

fn main() -> ccsketch::Result<()> {
    let config = SketchConfig::new(0.7, 128, 2026, DOMAIN)?;
    let mut east = Sketch::new(config)?;
    let mut west = Sketch::new(config)?;
    let mut truth = vec![0.0f64; DOMAIN as usize];

    // Flows arrive on both shards; every fifth one is later partly retracted.
    for t in 0..200_000u64 {
        let index = 1 + (t * 7919) % DOMAIN;
        let bytes = (1 + t % 13) as f64;
        let shard = if t % 2 == 0 { &mut east } else { &mut west };
        shard.update(StreamUpdate::new(index, bytes))?;
        truth[index as usize - 1] += bytes;
        if t % 5 == 0 {
            shard.update(StreamUpdate::new(index, -1.0))?;
            truth[index as usize - 1] -= 1.0;
        }
    }

    let merged = Sketch::merge(&east, &west)?;
    let batch = Sketch::from_vector(config, &truth)?;
    println!("merged shards equal the batch sketch: {}", merged == batch);
    println!("F1 (exact counter): {}", merged.f1());

    let exact: f64 = truth.iter().map(|v| v.powf(0.7)).sum();
    let est = estimate_op(&merged, None)?;
    println!(
        "F_(0.7): estimate {:.1}, exact {:.1}, predicted se {:.1}",
        est.value, exact, est.predicted_se
    );

    let path = std::env::temp_dir().join("ccsketch-stream-example.ccsk");
    merged.write_to(&path)?;
    let restored = Sketch::read_from(&path)?;
    println!(
        "snapshot: {} bytes, round trip exact: {}",
        std::fs::metadata(&path)?.len(),
        restored == merged
    );
    std::fs::remove_file(path)?;
    Ok(())
}
