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

//! CSV reports.
//!
//! Numbers are written in `{:.16e}` form (17 significant digits), which
//! round-trips every `f64` exactly.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::harness::mc::{McCell, McReport};

pub const CSV_HEADER: [&str; 10] = [
    "alpha",
    "k",
    "estimator",
    "trials",
    "true_value",
    "emp_mean",
    "emp_var",
    "pred_var",
    "norm_rmse",
    "seconds",
];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `report` as CSV. Rows are emitted in report order; reports from
/// `run_monte_carlo` are already sorted.
pub fn write_csv<W: Write>(report: &McReport, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for c in &report.cells {
        w.write_record([
            num(c.alpha),
            c.k.to_string(),
            c.estimator.name().to_string(),
            c.trials.to_string(),
            num(c.true_value),
            num(c.emp_mean),
            num(c.emp_var),
            num(c.pred_var),
            num(c.norm_rmse),
            num(c.seconds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(report: &McReport, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(report, std::io::BufWriter::new(file))
}

pub fn read_csv<R: Read>(reader: R) -> Result<McReport> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("unexpected header {header:?}"),
        });
    }
    let mut cells = Vec::new();
    for (row, record) in r.records().enumerate() {
        let record = record?;
        let line = row + 2;
        let bad = |field: &str| Error::Parse {
            line,
            message: format!("bad {field}"),
        };
        let f = |i: usize| -> Result<f64> { record[i].parse().map_err(|_| bad(CSV_HEADER[i])) };
        cells.push(McCell {
            alpha: f(0)?,
            k: record[1].parse().map_err(|_| bad("k"))?,
            estimator: record[2].parse::<EstimatorKind>().map_err(|_| bad("estimator"))?,
            trials: record[3].parse().map_err(|_| bad("trials"))?,
            true_value: f(4)?,
            emp_mean: f(5)?,
            emp_var: f(6)?,
            pred_var: f(7)?,
            norm_rmse: f(8)?,
            seconds: f(9)?,
        });
    }
    Ok(McReport { cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell() -> McCell {
        McCell {
            alpha: 0.9,
            k: 100,
            estimator: EstimatorKind::OptimalPower,
            trials: 10_000,
            true_value: 11.301_203_125_4,
            emp_mean: 11.3 + 1.0 / 3.0,
            emp_var: 0.1,
            pred_var: f64::MIN_POSITIVE,
            norm_rmse: 2.0f64.sqrt(),
            seconds: 0.0,
        }
    }

    fn to_string(report: &McReport) -> String {
        let mut out = Vec::new();
        write_csv(report, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(
            to_string(&McReport::default()),
            "alpha,k,estimator,trials,true_value,emp_mean,emp_var,pred_var,norm_rmse,seconds\n"
        );
    }

    #[test]
    fn one_cell_is_two_lines() {
        let text = to_string(&McReport { cells: vec![cell()] });
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("9.0000000000000002e-1,100,op,10000,"));
    }

    #[test]
    fn round_trip_is_exact() {
        let mut nan = cell();
        nan.emp_var = f64::NAN;
        nan.estimator = EstimatorKind::MaximumLikelihood;
        let report = McReport {
            cells: vec![cell(), nan],
        };
        let back = read_csv(to_string(&report).as_bytes()).unwrap();
        assert_eq!(back.cells[0], report.cells[0]);
        assert!(back.cells[1].emp_var.is_nan());
        assert_eq!(
            back.cells[1].emp_mean.to_bits(),
            report.cells[1].emp_mean.to_bits()
        );
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(matches!(
            read_csv("a,b\n1,2\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
