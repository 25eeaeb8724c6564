//! CSV and JSON serialisation of reports, tables, grids and operators.
//!
//! Numbers are written with Rust's shortest round-trip formatting so that
//! re-parsing reproduces every value exactly.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::moments::{MomentReport, SweepRow, Verdict};
use crate::multicopy::TruncatedOperator;

/// Shortest decimal string that parses back to `x`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn report_to_json(report: &MomentReport) -> String {
    serde_json::to_string_pretty(report).expect("reports contain only finite numbers and strings")
}

pub fn report_from_json(text: &str) -> Result<MomentReport> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// `param,w2,w3,delta,verdict`
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("param,w2,w3,delta,verdict\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(r.param),
            num(r.w2),
            num(r.w3),
            num(r.delta),
            r.verdict
        );
    }
    out
}

/// `param,w2,w3,delta`
pub fn table_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("param,w2,w3,delta\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(r.param),
            num(r.w2),
            num(r.w3),
            num(r.delta)
        );
    }
    out
}

/// `param,delta,verdict`, optionally followed by a threshold row
/// `lambda_star,0,Threshold`.
pub fn figure_csv(rows: &[SweepRow], threshold: Option<f64>) -> String {
    let mut out = String::from("param,delta,verdict\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", num(r.param), num(r.delta), r.verdict);
    }
    if let Some(t) = threshold {
        let _ = writeln!(out, "{},0,Threshold", num(t));
    }
    out
}

/// `x,p,w`
pub fn grid_csv(samples: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("x,p,w\n");
    for &(x, p, w) in samples {
        let _ = writeln!(out, "{},{},{}", num(x), num(p), num(w));
    }
    out
}

/// `row,col,re,im` for every nonzero entry.
pub fn operator_csv(op: &TruncatedOperator) -> String {
    let mut out = String::from("row,col,re,im\n");
    for (r, c, v) in op.nonzero_entries() {
        let _ = writeln!(out, "{r},{c},{},{}", num(v.re), num(v.im));
    }
    out
}

/// Parses a `param,w2,w3,delta,verdict` CSV back into rows.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("param,w2,w3,delta,verdict") => {}
        other => return Err(Error::Parse(format!("unexpected header {other:?}"))),
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(Error::Parse(format!("expected 5 fields in '{line}'")));
            }
            let p = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("'{s}': {e}")))
            };
            Ok(SweepRow {
                param: p(f[0])?,
                w2: p(f[1])?,
                w3: p(f[2])?,
                delta: p(f[3])?,
                verdict: f[4].parse::<Verdict>()?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{analyze, QuadratureSpec};
    use crate::states::StateSpec;

    #[test]
    fn json_round_trip_is_exact() {
        let r = analyze(
            &StateSpec::Fock { n: 2 },
            4,
            &QuadratureSpec::default(),
            None,
        )
        .unwrap();
        let text = report_to_json(&r);
        assert!(text.contains("\"verdict\": \"NegativityCertified\""));
        assert!(text.contains("\"3\":"));
        assert_eq!(report_from_json(&text).unwrap(), r);
    }

    #[test]
    fn sweep_csv_round_trip() {
        let rows = vec![SweepRow {
            param: 0.1,
            w2: 1.0 / 7.0,
            w3: -1e-21,
            delta: 3.0e10,
            verdict: Verdict::Inconclusive,
        }];
        let text = sweep_csv(&rows);
        assert_eq!(parse_sweep_csv(&text).unwrap(), rows);
    }
}
