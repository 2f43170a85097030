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

//! Data generation, Monte-Carlo experiments and CSV reports.

pub mod data;
pub mod mc;
pub mod report;

pub use data::{accumulate, exact_moment, generate_zipf, ingest_stream, parse_stream, read_vector};
pub use mc::{fitted_gm_constant, run_monte_carlo, DataSource, McCell, McConfig, McReport, Sampling, Target};
pub use report::{emit_csv, read_csv, write_csv, CSV_HEADER};
