//! Matrix and index-set files.
//!
//! Matrices are dense CSV, row-major, without a header. Index sets and
//! vectors may be given as JSON arrays; indices are 0-based.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

fn parse_at(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::ParseAt {
        line,
        column,
        message: message.into(),
    }
}

/// Read a dense matrix. Rows must have equal length; blank lines are
/// skipped and fields are trimmed.
pub fn read_matrix_csv<R: Read>(reader: R) -> Result<Matrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_at(line, 1, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(rows.len() + 1);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let mut row = Vec::with_capacity(rec.len());
        for (k, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_at(line, k + 1, format!("`{field}` is not a number")))?;
            if !v.is_finite() {
                return Err(parse_at(line, k + 1, format!("`{field}` is not finite")));
            }
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_at(
                    line,
                    row.len().min(first.len()) + 1,
                    format!("expected {} fields, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_at(1, 1, "empty matrix"));
    }
    Ok(Matrix::from_rows(&rows))
}

pub fn read_matrix_file(path: &Path) -> Result<Matrix<f64>> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_matrix_csv(f)
}

/// Write with 17 significant digits (`{:.16e}`), which round-trips `f64`.
pub fn write_matrix_csv<W: Write>(m: &Matrix<f64>, writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for i in 0..m.nrows() {
        w.write_record(m.row(i).iter().map(|v| format!("{v:.16e}")))
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn matrix_to_csv_string(m: &Matrix<f64>) -> String {
    let mut buf = Vec::new();
    write_matrix_csv(m, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// A JSON array of numbers, or a CSV row or column.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let t = text.trim_start();
    if t.starts_with('[') {
        return serde_json::from_str(text).map_err(|e| parse_at(e.line(), e.column(), e.to_string()));
    }
    let m = read_matrix_csv(text.as_bytes())?;
    if m.nrows() != 1 && m.ncols() != 1 {
        return Err(parse_at(1, 1, format!("expected a row or a column, got {} x {}", m.nrows(), m.ncols())));
    }
    Ok(m.as_slice().to_vec())
}

/// A JSON array of 0-based indices, or a comma-separated list.
pub fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| parse_at(e.line(), e.column(), e.to_string()));
    }
    let mut out = Vec::new();
    let mut col = 1;
    for part in t.split(',') {
        let p = part.trim();
        let v = p
            .parse()
            .map_err(|_| parse_at(1, col, format!("`{p}` is not a nonnegative integer")))?;
        out.push(v);
        col += part.len() + 1;
    }
    Ok(out)
}

/// A comma-separated list of reals.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut col = 1;
    for part in text.split(',') {
        let p = part.trim();
        let v: f64 = p.parse().map_err(|_| parse_at(1, col, format!("`{p}` is not a number")))?;
        out.push(v);
        col += part.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = Matrix::from_rows(&[vec![1.0, 0.1 + 0.2], vec![1.0 / 3.0, -2e-300]]);
        let s = matrix_to_csv_string(&m);
        let back = read_matrix_csv(s.as_bytes()).unwrap();
        assert_eq!(back.as_slice(), m.as_slice());
    }

    #[test]
    fn reports_position() {
        let err = read_matrix_csv("1,2\n3,x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::ParseAt { line: 2, column: 2, .. }), "{err}");
        let err = read_matrix_csv("1,2\n3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::ParseAt { line: 2, .. }), "{err}");
        let err = parse_index_list("[0, 1,").unwrap_err();
        assert!(matches!(err, Error::ParseAt { line: 1, .. }), "{err}");
        assert_eq!(parse_index_list("0, 3,5").unwrap(), vec![0, 3, 5]);
        assert!(matches!(parse_index_list("0,a").unwrap_err(), Error::ParseAt { column: 3, .. }));
    }
}
