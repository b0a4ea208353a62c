//! Exact rational and integer linear algebra.
//!
//! Everything here is exact: rationals are arbitrary-precision and there is
//! no floating-point fallback anywhere. Rank and linear solves use
//! fraction-free (Bareiss) elimination on row-scaled integer copies of the
//! input, which keeps intermediate entries bounded by minors of the input.

mod hnf;
mod lattice;
mod lp;

pub use hnf::{hnf, IntMatrix};
pub(crate) use lattice::echelon_coordinates;
pub use lattice::{lattice_determinant, lattice_member, IntLatticeBasis};
pub use lp::lp_feasible;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// A vector of exact rationals.
pub type RatVec = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Converts a slice of machine integers into a rational vector.
pub fn rat_vec(xs: &[i64]) -> RatVec {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn dot(x: &[Rat], y: &[Rat]) -> Rat {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Returns the integer entries of `v`, or `None` if some entry is fractional.
pub fn to_int_vec(v: &[Rat]) -> Option<Vec<Int>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(RatMatrix { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows. An empty list gives a `0 x cols` matrix.
    pub fn from_rows(rows: &[RatVec], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[RatVec], rows: usize) -> Result<Self> {
        Ok(Self::from_rows(cols, rows)?.transpose())
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        RatMatrix {
            rows,
            cols,
            data: data.iter().map(|&x| rat(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<RatVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> RatVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<RatVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_zero())?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let piv = a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] /= &piv;
                inv[(c, j)] /= &piv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let t = &f * &a[(c, j)];
                    a[(r, j)] -= t;
                    let t = &f * &inv[(c, j)];
                    inv[(r, j)] -= t;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Rows scaled by the lcm of their denominators, as integers.
    fn integer_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows)
            .map(|i| scale_to_integers(self.row(i)))
            .collect()
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;

    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Multiplies a rational vector by the lcm of its denominators.
pub fn scale_to_integers(v: &[Rat]) -> Vec<Int> {
    let lcm = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Fraction-free row echelon form. Returns the pivot column of each nonzero row;
/// rows are permuted in place and rows below the rank are zero.
fn bareiss_echelon(a: &mut [Vec<Int>], ncols: usize) -> Vec<usize> {
    let nrows = a.len();
    let mut prev = Int::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = Int::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut a = m.integer_rows();
    bareiss_echelon(&mut a, m.cols).len()
}

/// Rank of a list of rational vectors of common length `dim`.
pub fn rank_of(vectors: &[RatVec], dim: usize) -> usize {
    match RatMatrix::from_rows(vectors, dim) {
        Ok(m) => rank(&m),
        Err(_) => 0,
    }
}

/// Determinant of a square integer matrix (given as rows) by Bareiss elimination.
pub fn int_determinant(rows: &[Vec<Int>]) -> Int {
    let n = rows.len();
    if n == 0 {
        return Int::one();
    }
    let mut a = rows.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Finds some `x` with `m x = y`, or `None` if the system is inconsistent.
///
/// Free variables are set to zero, so the answer is unique exactly when `m`
/// has full column rank.
pub fn solve(m: &RatMatrix, y: &[Rat]) -> Result<Option<RatVec>> {
    if y.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: y.len(),
        });
    }
    let n = m.cols;
    let mut aug: Vec<Vec<Int>> = (0..m.rows)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(y[i].clone());
            scale_to_integers(&row)
        })
        .collect();
    let pivots = bareiss_echelon(&mut aug, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = Rat::from_integer(aug[r][n].clone());
        for j in c + 1..n {
            if !aug[r][j].is_zero() && !x[j].is_zero() {
                acc -= Rat::from_integer(aug[r][j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rat::from_integer(aug[r][c].clone());
    }
    Ok(Some(x))
}

/// Incrementally grown set of linearly independent vectors.
///
/// Each stored row is reduced against all earlier rows and scaled to have a
/// leading one, so membership in the span is a single forward sweep.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    dim: usize,
    rows: Vec<(usize, RatVec)>,
}

impl IncrementalBasis {
    pub fn new(dim: usize) -> Self {
        IncrementalBasis {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: &[Rat]) -> RatVec {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (vi, ri) in v.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *vi -= &f * ri;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` if it is independent of the current rows; reports whether it was added.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = r[p].clone();
        for x in r.iter_mut() {
            *x /= &lead;
        }
        self.rows.push((p, r));
        true
    }
}

/// Indices of the first linearly independent vectors of `vectors`, scanning in order.
pub fn greedy_independent(vectors: &[RatVec], dim: usize) -> Vec<usize> {
    let mut basis = IncrementalBasis::new(dim);
    let mut picked = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if basis.rank() == dim {
            break;
        }
        if basis.insert(v) {
            picked.push(i);
        }
    }
    picked
}

/// Parses a rational from `p/q` or `p` notation.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().map_err(|_| bad())?;
            let q: Int = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A basis of `{x : m x = 0}`, one vector per free column of the reduced row echelon form.
pub fn nullspace(m: &RatMatrix) -> Vec<RatVec> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.row_vecs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let lead = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &lead;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rat::zero(); cols];
            v[free] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][free].clone();
            }
            v
        })
        .collect()
}
