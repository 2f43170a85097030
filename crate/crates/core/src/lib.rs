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

//! Compressed Counting: one-pass sketches of Turnstile streams built from
//! maximally-skewed stable projections.
//!
//! A [`Sketch`] keeps `k` projections `x_j = sum_i r_ij A_i` of the stream
//! vector together with the running total `F_(1)`. The entries `r_ij` follow
//! `S(alpha, 1, 1)` and are regenerated on demand from `(seed, i, j)`, so no
//! projection matrix is stored. From the `x_j` the estimators in
//! [`estimators`] recover `F_(alpha) = sum_i A_i^alpha`, and [`entropy`]
//! turns moment estimates near `alpha = 1` into Shannon entropy estimates.
//!
//! ```
//! use ccsketch::{estimate_op, Sketch, SketchConfig, StreamUpdate};
//!
//! let config = SketchConfig::new(0.5, 200, 7, 1000).unwrap();
//! let mut sketch = Sketch::new(config).unwrap();
//! for i in 1..=1000u64 {
//!     sketch.update(StreamUpdate::new(i, 4.0)).unwrap();
//! }
//! // F_(0.5) = 1000 * sqrt(4) = 2000
//! let est = estimate_op(&sketch, None).unwrap();
//! assert!((est.value / 2000.0 - 1.0).abs() < 0.3);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod estimators;
pub mod exact;
pub mod harness;
pub mod lambda;
pub mod sketch;
pub mod stable;

pub use entropy::{estimate_shannon, shannon_exact, EntropyEstimate, EntropyRoute};
pub use error::{Error, Result};
pub use estimators::{
    estimate, estimate_gm, estimate_hm, estimate_mle_half, estimate_op, estimate_samples, Estimate,
    EstimatorKind,
};
pub use lambda::{g, lambda_star, optimal_lambda, predicted_variance, OptimalLambda};
pub use sketch::{Sketch, SketchConfig, StreamUpdate};
pub use stable::{SkewedStable, StableParams};
