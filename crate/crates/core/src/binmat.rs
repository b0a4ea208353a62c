//! 0/1 matrices and their plain-text interchange format.
//!
//! The text format is a header line `m n` followed by `m` lines of exactly
//! `n` characters from `{0,1}`. Trailing whitespace on any line is ignored.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::exactlin::{rank, Rat, RatMatrix};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl BinaryMatrix {
    /// Panics if `bits` has the wrong length or contains a value other than 0 or 1.
    pub fn new(rows: usize, cols: usize, bits: Vec<u8>) -> Self {
        assert_eq!(bits.len(), rows * cols, "bit count does not match shape");
        assert!(bits.iter().all(|&b| b <= 1), "entries must be 0 or 1");
        BinaryMatrix { rows, cols, bits }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            rows,
            cols,
            bits: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from row strings like `"0101"`; handy in tests.
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut bits = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            bits.extend(r.bytes().map(|b| match b {
                b'0' => 0,
                b'1' => 1,
                _ => panic!("invalid bit {:?}", b as char),
            }));
        }
        BinaryMatrix {
            rows: rows.len(),
            cols,
            bits,
        }
    }

    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Self {
        let mut bits = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            bits.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, bits)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.bits[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        assert!(v <= 1);
        self.bits[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.bits[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut bits = Vec::with_capacity(self.bits.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                bits.push(self.get(i, j));
            }
        }
        BinaryMatrix {
            rows: self.cols,
            cols: self.rows,
            bits,
        }
    }

    pub fn has_distinct_rows(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.rows);
        (0..self.rows).all(|i| seen.insert(self.row(i)))
    }

    pub fn has_distinct_columns(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.cols);
        (0..self.cols).all(|j| seen.insert(self.column(j)))
    }

    pub fn to_rat_matrix(&self) -> RatMatrix {
        let data = self
            .bits
            .iter()
            .map(|&b| if b == 1 { Rat::one() } else { Rat::zero() })
            .collect();
        RatMatrix::from_vec(self.rows, self.cols, data).expect("shape is consistent")
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        if self.rows.min(self.cols) <= SMALL_RANK_LIMIT {
            small_rank(self)
        } else {
            rank(&self.to_rat_matrix())
        }
    }

    /// Entry `(i, j)` of the result is entry `(row_order[i], col_order[j])` of `self`.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> Self {
        self.submatrix(row_order, col_order)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut bits = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                bits.push(self.get(i, j));
            }
        }
        BinaryMatrix {
            rows: rows.len(),
            cols: cols.len(),
            bits,
        }
    }

    /// Appends a row; panics on a length mismatch.
    pub fn with_row(&self, row: &[u8]) -> Self {
        assert_eq!(row.len(), self.cols);
        let mut bits = self.bits.clone();
        bits.extend_from_slice(row);
        Self::new(self.rows + 1, self.cols, bits)
    }

    /// Appends a column; panics on a length mismatch.
    pub fn with_column(&self, col: &[u8]) -> Self {
        self.transpose().with_row(col).transpose()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate();
        let err = |line: usize, column: usize, message: String| ParseError {
            line: line + 1,
            column: column + 1,
            message,
        };
        let (hl, header) = lines
            .next()
            .ok_or_else(|| err(0, 0, "missing header line `m n`".into()))?;
        let header = header.trim_end();
        let mut parts = header.split_whitespace();
        let mut dim = |what: &str| -> Result<usize, ParseError> {
            let tok = parts
                .next()
                .ok_or_else(|| err(hl, header.len(), format!("missing {what} in header")))?;
            let col = header.find(tok).unwrap_or(0);
            tok.parse()
                .map_err(|_| err(hl, col, format!("invalid {what} {tok:?}")))
        };
        let rows = dim("row count")?;
        let cols = dim("column count")?;
        if let Some(extra) = parts.next() {
            return Err(err(
                hl,
                header.find(extra).unwrap_or(0),
                "unexpected token after header".into(),
            ));
        }
        let mut bits = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| err(hl + r + 1, 0, format!("expected {rows} rows, found {r}")))?;
            let line = line.trim_end();
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => bits.push(0),
                    '1' => bits.push(1),
                    other => return Err(err(ln, c, format!("unexpected character {other:?}"))),
                }
            }
            let len = line.chars().count();
            if len != cols {
                return Err(err(
                    ln,
                    len.min(cols),
                    format!("expected {cols} entries, found {len}"),
                ));
            }
        }
        for (ln, line) in lines {
            if !line.trim().is_empty() {
                return Err(err(ln, 0, "trailing content after the last row".into()));
            }
        }
        Ok(BinaryMatrix { rows, cols, bits })
    }

    /// Canonical text form: header, then one line per row, newline-terminated.
    pub fn emit(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            out.extend(self.row(i).iter().map(|&b| if b == 1 { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }
}

// Bareiss intermediates are minors, bounded by n^(n/2) for 0/1 entries.
const SMALL_RANK_LIMIT: usize = 20;

fn small_rank(m: &BinaryMatrix) -> usize {
    // Work on the orientation with fewer columns to keep minors small.
    let t;
    let m = if m.cols > m.rows {
        t = m.transpose();
        &t
    } else {
        m
    };
    let mut a: Vec<Vec<i128>> = (0..m.rows)
        .map(|i| m.row(i).iter().map(|&b| i128::from(b)).collect())
        .collect();
    let (nrows, ncols) = (m.rows, m.cols);
    let mut prev = 1i128;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
    }
    r
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, " ")?;
            }
            for &b in self.row(i) {
                write!(f, "{b}")?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

impl std::str::FromStr for BinaryMatrix {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        Self::parse(s)
    }
}
