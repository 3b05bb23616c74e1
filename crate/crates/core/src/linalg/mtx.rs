//! Matrix Market reading/writing for real matrices (coordinate and array
//! layouts, `general` and `symmetric` qualifiers) plus plain-text vectors.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, StateVector, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

fn mm_err(msg: impl Into<String>) -> Error {
    Error::MatrixMarket(msg.into())
}

fn parse_header(line: &str) -> Result<(Layout, Symmetry)> {
    let words: Vec<String> = line.split_whitespace().map(str::to_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(mm_err(format!("bad header line: {line:?}")));
    }
    let layout = match words[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(mm_err(format!("unsupported layout {other}"))),
    };
    match words[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(mm_err(format!("unsupported field {other}"))),
    }
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(mm_err(format!("unsupported symmetry {other}"))),
    };
    Ok((layout, symmetry))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.ok_or_else(|| mm_err(format!("missing {what}")))?
        .parse()
        .map_err(|_| mm_err(format!("cannot parse {what}")))
}

/// Parses Matrix Market text into a dense matrix. For the `symmetric`
/// qualifier the stored triangle is mirrored.
pub fn parse_matrix_market(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| mm_err("empty input"))?;
    let (layout, symmetry) = parse_header(header)?;
    let mut body = lines
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('%'));

    let size = body.next().ok_or_else(|| mm_err("missing size line"))?;
    let mut toks = size.split_whitespace();
    let rows: usize = parse_num(toks.next(), "row count")?;
    let cols: usize = parse_num(toks.next(), "column count")?;
    if symmetry == Symmetry::Symmetric && rows != cols {
        return Err(mm_err("symmetric matrix must be square"));
    }
    let mut m = DenseMatrix::zeros(rows, cols);

    match layout {
        Layout::Coordinate => {
            let nnz: usize = parse_num(toks.next(), "entry count")?;
            for k in 0..nnz {
                let line = body
                    .next()
                    .ok_or_else(|| mm_err(format!("expected {nnz} entries, found {k}")))?;
                let mut t = line.split_whitespace();
                let i: usize = parse_num(t.next(), "row index")?;
                let j: usize = parse_num(t.next(), "column index")?;
                let v: f64 = parse_num(t.next(), "value")?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(mm_err(format!("index ({i}, {j}) out of range")));
                }
                m[(i - 1, j - 1)] += v;
                if symmetry == Symmetry::Symmetric && i != j {
                    m[(j - 1, i - 1)] += v;
                }
            }
        }
        Layout::Array => {
            let mut values = body.flat_map(str::split_whitespace);
            // column-major; lower triangle only when symmetric
            for j in 0..cols {
                let start = if symmetry == Symmetry::Symmetric {
                    j
                } else {
                    0
                };
                for i in start..rows {
                    let v: f64 = parse_num(values.next(), "array value")?;
                    m[(i, j)] = v;
                    if symmetry == Symmetry::Symmetric {
                        m[(j, i)] = v;
                    }
                }
            }
        }
    }
    Ok(m)
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path.as_ref())?;
    parse_matrix_market(&text)
}

pub fn read_sym_matrix(path: impl AsRef<Path>) -> Result<SymMatrix> {
    SymMatrix::from_dense(read_matrix_market(path)?)
}

/// Writes `array real symmetric` with 17 significant digits.
pub fn write_sym_matrix(path: impl AsRef<Path>, m: &SymMatrix) -> Result<()> {
    let mut out = String::from("%%MatrixMarket matrix array real symmetric\n");
    let n = m.dim();
    out.push_str(&format!("{n} {n}\n"));
    for j in 0..n {
        for i in j..n {
            out.push_str(&format!("{:.16e}\n", m.get(i, j)));
        }
    }
    fs::File::create(path)?.write_all(out.as_bytes())?;
    Ok(())
}

/// Whitespace-separated reals; `#` starts a comment.
pub fn parse_vector(text: &str) -> Result<StateVector> {
    let mut values = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Config(format!("cannot parse vector entry {tok:?}")))?;
            values.push(v);
        }
    }
    Ok(StateVector::new(values))
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<StateVector> {
    parse_vector(&fs::read_to_string(path.as_ref())?)
}

pub fn write_vector(path: impl AsRef<Path>, v: &StateVector) -> Result<()> {
    let mut out = String::new();
    for x in v.iter() {
        out.push_str(&format!("{x:.16e}\n"));
    }
    fs::File::create(path)?.write_all(out.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_symmetric_mirrors() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 4\n1 1 2.0\n2 1 -1.0\n2 2 2.0\n3 3 5\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m[(0, 1)], -1.0);
        assert_eq!(m[(1, 0)], -1.0);
        assert_eq!(m[(2, 2)], 5.0);
        assert_eq!(m[(0, 2)], 0.0);
    }

    #[test]
    fn array_general_is_column_major() {
        let text = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.row(0), &[1.0, 3.0]);
        assert_eq!(m.row(1), &[2.0, 4.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_matrix_market("").is_err());
        assert!(parse_matrix_market(
            "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"
        )
        .is_err());
        assert!(parse_matrix_market(
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"
        )
        .is_err());
        assert!(parse_matrix_market(
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"
        )
        .is_err());
    }

    #[test]
    fn symmetric_write_then_read_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.mtx");
        let m = SymMatrix::from_rows(&[vec![0.1, 1.0 / 3.0], vec![1.0 / 3.0, 2.0e-300]]).unwrap();
        write_sym_matrix(&path, &m).unwrap();
        assert_eq!(read_sym_matrix(&path).unwrap(), m);
    }

    #[test]
    fn vector_text() {
        let v = parse_vector("1 2\n# skip\n3.5 # trailing\n").unwrap();
        assert_eq!(v.as_slice(), &[1.0, 2.0, 3.5]);
        assert!(parse_vector("1 x").is_err());
    }
}
