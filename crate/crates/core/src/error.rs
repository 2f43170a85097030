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

use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid sketch config: {0}")]
    Config(String),

    #[error("invalid update: {0}")]
    Update(String),

    #[error("cannot merge sketches: {0}")]
    Merge(String),

    /// A projected coordinate is zero (or non-positive where the support requires it).
    #[error("degenerate sketch: {0}")]
    Degenerate(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("decode error: {0}")]
    Decode(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A failure inside one Monte-Carlo grid cell.
    #[error("cell alpha={alpha} k={k} estimator={estimator}: {source}")]
    Cell {
        alpha: f64,
        k: usize,
        estimator: String,
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Cell { source, .. } => source.exit_code(),
            Error::Io(_) | Error::Csv(_) | Error::Decode(_) | Error::Parse { .. } => 4,
            _ => 3,
        }
    }
}
