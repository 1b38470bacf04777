//! Matrix Market coordinate files and plain-text vectors.
//!
//! Supported: `matrix coordinate {real|integer|pattern} {general|symmetric}`.
//! Indices in the file are 1-based. Symmetric files store one triangle and
//! are mirrored; pattern entries read as 1; explicit zeros are dropped.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::CooMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmField {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixMarketHeader {
    pub field: MmField,
    pub symmetry: MmSymmetry,
}

impl MatrixMarketHeader {
    pub fn parse(line: &str) -> Result<Self> {
        let parse_err = |msg: &str| Error::Parse {
            line: 1,
            msg: msg.to_string(),
        };
        let words: Vec<String> = line.split_whitespace().map(str::to_lowercase).collect();
        if words.first().map(String::as_str) != Some("%%matrixmarket") {
            return Err(parse_err("missing %%MatrixMarket banner"));
        }
        if words.len() != 5 {
            return Err(parse_err("banner must have object, format, field and symmetry"));
        }
        if words[1] != "matrix" {
            return Err(Error::UnsupportedFormat(format!("object {}", words[1])));
        }
        if words[2] != "coordinate" {
            return Err(Error::UnsupportedFormat(format!("format {}", words[2])));
        }
        let field = match words[3].as_str() {
            "real" | "double" => MmField::Real,
            "integer" => MmField::Integer,
            "pattern" => MmField::Pattern,
            other => return Err(Error::UnsupportedFormat(format!("field {other}"))),
        };
        let symmetry = match words[4].as_str() {
            "general" => MmSymmetry::General,
            "symmetric" => MmSymmetry::Symmetric,
            other => return Err(Error::UnsupportedFormat(format!("symmetry {other}"))),
        };
        Ok(MatrixMarketHeader { field, symmetry })
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} {tok:?}"),
    })
}

/// Parse a Matrix Market coordinate stream.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<CooMatrix<f64>> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let read_err = |line: usize, e: std::io::Error| Error::Parse {
        line,
        msg: e.to_string(),
    };

    let header = match lines.next() {
        Some((_, Ok(l))) => MatrixMarketHeader::parse(&l)?,
        Some((n, Err(e))) => return Err(read_err(n, e)),
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "empty file".into(),
            })
        }
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triples = Vec::new();
    let mut seen = 0usize;
    for (n, line) in lines {
        let line = line.map_err(|e| read_err(n, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let Some((rows, cols, nnz)) = size else {
            size = Some((
                parse_num(toks.next(), n, "row count")?,
                parse_num(toks.next(), n, "column count")?,
                parse_num(toks.next(), n, "entry count")?,
            ));
            continue;
        };
        if seen == nnz {
            return Err(Error::Parse {
                line: n,
                msg: format!("more than the declared {nnz} entries"),
            });
        }
        seen += 1;
        let i: usize = parse_num(toks.next(), n, "row index")?;
        let j: usize = parse_num(toks.next(), n, "column index")?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(Error::Parse {
                line: n,
                msg: format!("index ({i}, {j}) outside {rows}x{cols}"),
            });
        }
        let v: f64 = match header.field {
            MmField::Pattern => 1.0,
            _ => parse_num(toks.next(), n, "value")?,
        };
        if v == 0.0 {
            continue;
        }
        let (i, j) = (i - 1, j - 1);
        triples.push((i, j, v));
        if header.symmetry == MmSymmetry::Symmetric && i != j {
            triples.push((j, i, v));
        }
    }
    let Some((rows, cols, nnz)) = size else {
        return Err(Error::Parse {
            line: 1,
            msg: "missing size line".into(),
        });
    };
    if seen != nnz {
        return Err(Error::Parse {
            line: 0,
            msg: format!("declared {nnz} entries, found {seen}"),
        });
    }
    CooMatrix::new(rows, cols, triples)
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CooMatrix<f64>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_market(BufReader::new(file))
}

/// Write an integer matrix as `coordinate integer general`.
pub fn write_matrix_market<W: Write>(m: &CooMatrix<i64>, mut out: W) -> std::io::Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate integer general")?;
    writeln!(out, "{} {} {}", m.rows(), m.cols(), m.triples().len())?;
    for &(i, j, v) in m.triples() {
        writeln!(out, "{} {} {}", i + 1, j + 1, v)?;
    }
    Ok(())
}

/// Round `value * scale` to the nearest integer for every entry; entries
/// that round to zero are dropped.
pub fn quantize(m: &CooMatrix<f64>, scale: f64) -> CooMatrix<i64> {
    m.map_values(|v| (v * scale).round() as i64)
}

/// One integer per line; blank lines and `%`/`#` comments are skipped.
pub fn parse_vector<R: BufRead>(reader: R) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        out.push(parse_num(Some(line), i + 1, "vector entry")?);
    }
    Ok(out)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<i64>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_vector(BufReader::new(file))
}

pub fn write_vector<W: Write>(v: &[i64], mut out: W) -> std::io::Result<()> {
    for x in v {
        writeln!(out, "{x}")?;
    }
    Ok(())
}
