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

//! Input data: synthetic Zipf vectors, stream and vector files, and the
//! brute-force moment oracle.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sketch::StreamUpdate;

/// Rank-frequency Zipf vector `a_i = scale * i^(-s)` for `i = 1..D`. With a
/// seed, the ranks are shuffled over the positions.
pub fn generate_zipf(
    domain: usize,
    exponent: f64,
    scale: f64,
    shuffle_seed: Option<u64>,
) -> Result<Vec<f64>> {
    if domain == 0 {
        return Err(Error::domain("Zipf domain size must be at least 1"));
    }
    if !(exponent > 0.0) {
        return Err(Error::domain(format!(
            "Zipf exponent must be positive, got {exponent}"
        )));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(format!("Zipf scale must be positive, got {scale}")));
    }
    let mut a: Vec<f64> = (1..=domain).map(|i| scale * (i as f64).powf(-exponent)).collect();
    if let Some(seed) = shuffle_seed {
        a.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    Ok(a)
}

/// `F_(alpha) = sum_i a_i^alpha`, zero entries contributing nothing.
pub fn exact_moment(a: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    if let Some((i, v)) = a.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::domain(format!(
            "entry {} is {v}; entries must be >= 0",
            i + 1
        )));
    }
    Ok(a.iter().filter(|&&v| v > 0.0).map(|v| v.powf(alpha)).sum())
}

fn significant(line: &str) -> Option<&str> {
    let t = line.trim();
    if t.is_empty() || t.starts_with('#') {
        None
    } else {
        Some(t)
    }
}

fn parse_update(line: &str, line_no: usize) -> Result<StreamUpdate> {
    let err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let mut fields = line.split_whitespace();
    let (Some(index), Some(increment), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(err(format!("expected `<index>\\t<increment>`, got {line:?}")));
    };
    let index: u64 = index
        .parse()
        .map_err(|e| err(format!("bad index {index:?}: {e}")))?;
    if index == 0 {
        return Err(err("indices are 1-based".into()));
    }
    let increment: f64 = increment
        .parse()
        .map_err(|e| err(format!("bad increment {increment:?}: {e}")))?;
    if !increment.is_finite() {
        return Err(err(format!("non-finite increment {increment}")));
    }
    Ok(StreamUpdate::new(index, increment))
}

/// Reads a stream in the `<index>\t<increment>` line format. Lines starting
/// with `#` and blank lines are skipped; errors carry 1-based line numbers.
pub fn parse_stream<R: BufRead>(reader: R) -> Result<Vec<StreamUpdate>> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(body) = significant(&line) {
            out.push(parse_update(body, n + 1)?);
        }
    }
    Ok(out)
}

pub fn ingest_stream(path: impl AsRef<Path>) -> Result<Vec<StreamUpdate>> {
    parse_stream(BufReader::new(File::open(path)?))
}

/// Accumulates a stream into its histogram over `[1, domain]`.
pub fn accumulate(updates: &[StreamUpdate], domain: usize) -> Result<Vec<f64>> {
    let mut a = vec![0.0; domain];
    for u in updates {
        let slot = a
            .get_mut(u.index as usize - 1)
            .ok_or_else(|| Error::Update(format!("index {} outside [1, {domain}]", u.index)))?;
        *slot += u.increment;
    }
    Ok(a)
}

/// Reads a vector file: whitespace-separated reals, `#` comment lines.
pub fn read_vector<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(body) = significant(&line) {
            for tok in body.split_whitespace() {
                out.push(tok.parse().map_err(|e| Error::Parse {
                    line: n + 1,
                    message: format!("bad value {tok:?}: {e}"),
                })?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zipf_definition() {
        assert_eq!(
            generate_zipf(4, 1.0, 1.0, None).unwrap(),
            vec![1.0, 0.5, 1.0 / 3.0, 0.25]
        );
        assert_eq!(generate_zipf(1, 2.0, 3.5, None).unwrap(), vec![3.5]);
        let f1 = exact_moment(&generate_zipf(4, 1.0, 1.0, None).unwrap(), 1.0).unwrap();
        assert!((f1 - 25.0 / 12.0).abs() < 1e-15);
        assert!(generate_zipf(0, 1.0, 1.0, None).is_err());
        assert!(generate_zipf(4, 0.0, 1.0, None).is_err());
    }

    #[test]
    fn zipf_shuffle_is_a_permutation() {
        let mut a = generate_zipf(64, 1.1, 2.0, Some(5)).unwrap();
        let mut b = generate_zipf(64, 1.1, 2.0, None).unwrap();
        assert_ne!(a, b);
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, b);
    }

    #[test]
    fn moment_oracle() {
        assert_eq!(exact_moment(&[1.0; 4], 0.5).unwrap(), 4.0);
        assert_eq!(exact_moment(&[4.0, 9.0], 0.5).unwrap(), 5.0);
        let v = exact_moment(&[1.0, 3.0], 0.99).unwrap();
        assert!((v - (1.0 + 3f64.powf(0.99))).abs() < 1e-15);
        assert!((v - 3.967_222_012_516_512).abs() < 1e-12);
        assert_eq!(exact_moment(&[0.0, 2.0], 0.3).unwrap(), 2f64.powf(0.3));
        assert!(exact_moment(&[1.0, -2.0], 0.5).is_err());
    }

    #[test]
    fn stream_format() {
        let ups = parse_stream("3\t2.0\n1\t-0.5\n".as_bytes()).unwrap();
        assert_eq!(ups, vec![StreamUpdate::new(3, 2.0), StreamUpdate::new(1, -0.5)]);
        let ups = parse_stream("# header\n\n2\t1\n#3\t4\n".as_bytes()).unwrap();
        assert_eq!(ups, vec![StreamUpdate::new(2, 1.0)]);
        match parse_stream("abc\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_stream("1\t2\n0\t1\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_stream("1\tx\n".as_bytes()).is_err());
        assert!(ingest_stream("/nonexistent/stream.tsv").is_err());
    }

    #[test]
    fn accumulate_and_vector_file() {
        let ups = [
            StreamUpdate::new(2, 1.5),
            StreamUpdate::new(2, 1.0),
            StreamUpdate::new(1, 4.0),
        ];
        assert_eq!(accumulate(&ups, 3).unwrap(), vec![4.0, 2.5, 0.0]);
        assert!(accumulate(&ups, 1).is_err());
        assert_eq!(
            read_vector("# v\n1 2\n3.5\n".as_bytes()).unwrap(),
            vec![1.0, 2.0, 3.5]
        );
    }
}
