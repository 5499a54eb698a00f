use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{affine_hull_residual, PointSet};
use crate::io::{format_value, parse_row};

/// One iteration of a coreset construction.
///
/// Field meaning depends on the construction:
///
/// | method  | `index`          | `step`          | `distance`            | `value`          |
/// |---------|------------------|-----------------|-----------------------|------------------|
/// | greedy  | point moved to   | segment param t | d(c_i, o)             | δ(c_i)           |
/// | fw      | chosen vertex    | line-search γ   | ‖A x_i − centroid‖    | g(x_i)           |
/// | meb     | point added      | 0               | farthest-point dist   | radius of subset |
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub index: usize,
    pub step: f64,
    pub distance: f64,
    pub value: f64,
}

/// A subset of input points with a witness center in their affine hull.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coreset {
    pub indices: Vec<usize>,
    pub witness: Vec<f64>,
    pub trace: Vec<TraceRow>,
}

impl Coreset {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Distance from the witness to the affine hull of the selected points.
    pub fn hull_residual(&self, points: &PointSet) -> f64 {
        let rows: Vec<&[f64]> = self.indices.iter().map(|&i| points.point(i)).collect();
        affine_hull_residual(&rows, &self.witness)
    }

    /// Text record:
    ///
    /// ```text
    /// indices: 0,4,9
    /// witness: <comma-separated coordinates>
    /// trace: index,step,distance,value
    /// <one row per iteration>
    /// ```
    pub fn to_record(&self) -> String {
        let mut s = String::new();
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "indices: {}", idx.join(","));
        let w: Vec<String> = self.witness.iter().map(|&x| format_value(x)).collect();
        let _ = writeln!(s, "witness: {}", w.join(","));
        let _ = writeln!(s, "trace: index,step,distance,value");
        for r in &self.trace {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                r.index,
                format_value(r.step),
                format_value(r.distance),
                format_value(r.value)
            );
        }
        s
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut field = |name: &str| -> Result<(usize, String)> {
            let (no, line) = lines.next().ok_or_else(|| Error::Format(format!("missing {name} line")))?;
            let rest = line
                .strip_prefix(name)
                .and_then(|r| r.strip_prefix(':'))
                .ok_or_else(|| Error::Parse { line: no, message: format!("expected `{name}:`") })?;
            Ok((no, rest.trim().to_string()))
        };
        let (no, idx) = field("indices")?;
        let indices = if idx.is_empty() {
            Vec::new()
        } else {
            idx.split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse { line: no, message: format!("bad index {t:?}") }))
                .collect::<Result<Vec<usize>>>()?
        };
        let (no, w) = field("witness")?;
        let witness = parse_row(&w, no)?;
        field("trace")?;
        let mut trace = Vec::new();
        for (no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (head, tail) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse { line: no, message: "short trace row".into() })?;
            let index = head
                .trim()
                .parse()
                .map_err(|_| Error::Parse { line: no, message: format!("bad index {head:?}") })?;
            let v = parse_row(tail, no)?;
            if v.len() != 3 {
                return Err(Error::Parse { line: no, message: "trace rows have four fields".into() });
            }
            trace.push(TraceRow { index, step: v[0], distance: v[1], value: v[2] });
        }
        Ok(Self { indices, witness, trace })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let c = Coreset {
            indices: vec![3, 0, 7],
            witness: vec![0.1, -2.5, 1.0 / 3.0],
            trace: vec![
                TraceRow { index: 3, step: 0.0, distance: 1.5, value: 2.0 },
                TraceRow { index: 7, step: 0.25, distance: 0.75, value: 1.25 },
            ],
        };
        let text = c.to_record();
        assert!(text.starts_with("indices: 3,0,7\n"));
        assert_eq!(Coreset::from_record(&text).unwrap(), c);
        assert!(Coreset::from_record("witness: 1\n").is_err());
    }
}
