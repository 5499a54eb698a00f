//! Point files: UTF-8 CSV, one point per row, no header.
//!
//! Values are written with 17 significant digits so a written file reads
//! back bit-for-bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::PointSet;

/// Parses one CSV row. `line` is 1-based and only used for error messages.
pub fn parse_row(text: &str, line: usize) -> Result<Vec<f64>> {
    text.split(',')
        .map(|field| {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("not a decimal number: {field:?}"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse { line, message: format!("non-finite value {field:?}") })
            }
        })
        .collect()
}

/// Iterator over the rows of a point stream, reading each line exactly once.
///
/// Blank lines are skipped. All rows must have the dimension of the first.
pub struct RowReader<R> {
    reader: R,
    line: usize,
    dim: Option<usize>,
    buf: String,
}

impl<R: BufRead> RowReader<R> {
    pub fn new(reader: R) -> Self {
        Self { reader, line: 0, dim: None, buf: String::new() }
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }
}

impl RowReader<BufReader<File>> {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::new(BufReader::new(File::open(path)?)))
    }
}

impl<R: BufRead> Iterator for RowReader<R> {
    type Item = Result<Vec<f64>>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line += 1;
            let text = self.buf.trim();
            if text.is_empty() {
                continue;
            }
            let row = match parse_row(text, self.line) {
                Ok(r) => r,
                Err(e) => return Some(Err(e)),
            };
            match self.dim {
                None => self.dim = Some(row.len()),
                Some(d) if d != row.len() => {
                    return Some(Err(Error::Parse {
                        line: self.line,
                        message: format!("expected {d} values, found {}", row.len()),
                    }))
                }
                Some(_) => {}
            }
            return Some(Ok(row));
        }
    }
}

pub fn read_points_from<R: BufRead>(reader: R) -> Result<PointSet> {
    let mut dim = 0;
    let mut coords = Vec::new();
    let mut rows = RowReader::new(reader);
    for row in &mut rows {
        let row = row?;
        dim = row.len();
        coords.extend(row);
    }
    if coords.is_empty() {
        return Err(Error::Empty);
    }
    PointSet::new(dim, coords)
}

pub fn read_points(path: impl AsRef<Path>) -> Result<PointSet> {
    read_points_from(BufReader::new(File::open(path)?))
}

pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_points_to<W: Write>(points: &PointSet, mut w: W) -> Result<()> {
    for p in points.iter() {
        let row: Vec<String> = p.iter().map(|&x| format_value(x)).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_points(points: &PointSet, path: impl AsRef<Path>) -> Result<()> {
    write_points_to(points, BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_row_reports_line_number() {
        let text = "1,2\n\n3,x\n";
        match read_points_from(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_no_points() {
        let err = read_points_from("\n\n".as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "no points");
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(read_points_from("1,2\n3\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn written_values_read_back_exactly() {
        let p = PointSet::from_rows(&[[0.1, -1.0 / 3.0], [1e-300, 2f64.sqrt()]]).unwrap();
        let mut out = Vec::new();
        write_points_to(&p, &mut out).unwrap();
        let back = read_points_from(out.as_slice()).unwrap();
        assert_eq!(back, p);
    }
}
