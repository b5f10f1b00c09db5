//! Plain-text matrix format.
//!
//! ```text
//! n
//! a_11 a_12 ... a_1n
//! ...
//! a_n1 a_n2 ... a_nn
//! ```
//!
//! Values are written in scientific notation with 17 significant digits,
//! which round-trips every `f64` exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{DenseSymMatrix, LinalgError};

/// Formats a scalar with 17 significant digits.
pub fn fmt_sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_text(m: &DenseSymMatrix) -> String {
    let n = m.dim();
    let mut out = String::with_capacity(n * n * 25 + 16);
    out.push_str(&n.to_string());
    out.push('\n');
    for i in 0..n {
        let line: Vec<String> = m.row(i).iter().map(|&x| fmt_sci(x)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_text(text: &str) -> Result<DenseSymMatrix, LinalgError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());

    let (header_no, header) = lines.next().ok_or(LinalgError::Parse {
        line: 1,
        msg: "missing dimension header".into(),
    })?;
    let n: usize = header.trim().parse().map_err(|_| LinalgError::Parse {
        line: header_no + 1,
        msg: format!("invalid dimension `{}`", header.trim()),
    })?;
    if n == 0 {
        return Err(LinalgError::Empty);
    }

    // a hostile header must not drive the allocation
    let mut data = Vec::with_capacity(n.saturating_mul(n).min(text.len()));
    let mut rows = 0usize;
    for (line_no, line) in lines {
        if rows == n {
            return Err(LinalgError::RowCount {
                expected: n,
                found: rows + 1,
            });
        }
        let start = data.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| LinalgError::Parse {
                line: line_no + 1,
                msg: format!("invalid number `{tok}`"),
            })?;
            data.push(v);
        }
        let found = data.len() - start;
        if found != n {
            return Err(LinalgError::RowLength {
                row: rows,
                expected: n,
                found,
            });
        }
        rows += 1;
    }
    if rows != n {
        return Err(LinalgError::RowCount {
            expected: n,
            found: rows,
        });
    }
    DenseSymMatrix::from_row_major(n, data)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &DenseSymMatrix) -> Result<(), LinalgError> {
    let path = path.as_ref();
    let mut f = fs::File::create(path).map_err(|source| LinalgError::Io {
        path: path.display().to_string(),
        source,
    })?;
    f.write_all(to_text(m).as_bytes())
        .map_err(|source| LinalgError::Io {
            path: path.display().to_string(),
            source,
        })
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseSymMatrix, LinalgError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| LinalgError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_text(&text)
}
