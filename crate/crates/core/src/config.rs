//! 2-level configurations, their slack matrices, and the closure operator.
//!
//! For a finite spanning set `X` of rational `d`-vectors, `closure(X)` is the
//! set of all `y` with `<y, x>` in `{0,1}` for every `x` in `X`. It is finite
//! (at most `2^d` elements, since `y` is fixed by its products with a basis
//! inside `X`) and always contains the origin. The pair of closures forms a
//! Galois connection, and its fixed pairs `A = closure(B)`, `B = closure(A)`
//! are exactly the maximal configurations.

use std::sync::OnceLock;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::binmat::BinaryMatrix;
use crate::error::{Error, Result};
use crate::exactlin::{
    dot, greedy_independent, int_determinant, parse_rat, rank_of, solve, to_int_vec, Int, Rat,
    RatMatrix, RatVec,
};

/// A pair `(A, B)` of spanning vector sets with all inner products in `{0,1}`.
///
/// Both sides are stored sorted (lexicographically on exact rationals) and
/// without duplicates, which makes slack matrices deterministic.
#[derive(Debug)]
pub struct Configuration {
    d: usize,
    a: Vec<RatVec>,
    b: Vec<RatVec>,
    maximal: OnceLock<bool>,
}

impl Clone for Configuration {
    fn clone(&self) -> Self {
        let maximal = OnceLock::new();
        if let Some(&m) = self.maximal.get() {
            let _ = maximal.set(m);
        }
        Configuration {
            d: self.d,
            a: self.a.clone(),
            b: self.b.clone(),
            maximal,
        }
    }
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.a == other.a && self.b == other.b
    }
}

impl Eq for Configuration {}

/// Which side of a configuration a transform should make binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

fn sorted_set(mut v: Vec<RatVec>) -> Vec<RatVec> {
    v.sort();
    v.dedup();
    v
}

fn check_dims(d: usize, vs: &[RatVec]) -> Result<()> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    for v in vs {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    Ok(())
}

fn binary_value(x: &Rat) -> Option<u8> {
    if x.is_zero() {
        Some(0)
    } else if x.is_one() {
        Some(1)
    } else {
        None
    }
}

impl Configuration {
    /// Validates dimensions, spanning of both sides, and that every inner
    /// product is 0 or 1. Maximality is not required.
    pub fn new(d: usize, a: Vec<RatVec>, b: Vec<RatVec>) -> Result<Self> {
        check_dims(d, &a)?;
        check_dims(d, &b)?;
        let a = sorted_set(a);
        let b = sorted_set(b);
        if rank_of(&a, d) < d || rank_of(&b, d) < d {
            return Err(Error::NotSpanning(d));
        }
        for x in &a {
            for y in &b {
                let p = dot(x, y);
                if binary_value(&p).is_none() {
                    return Err(Error::NonBinarySlack {
                        value: p.to_string(),
                    });
                }
            }
        }
        Ok(Configuration {
            d,
            a,
            b,
            maximal: OnceLock::new(),
        })
    }

    fn new_maximal(d: usize, a: Vec<RatVec>, b: Vec<RatVec>) -> Self {
        let maximal = OnceLock::new();
        let _ = maximal.set(true);
        Configuration { d, a, b, maximal }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn a(&self) -> &[RatVec] {
        &self.a
    }

    pub fn b(&self) -> &[RatVec] {
        &self.b
    }

    /// Swaps the roles of the two sides.
    pub fn transposed(&self) -> Configuration {
        let c = Configuration {
            d: self.d,
            a: self.b.clone(),
            b: self.a.clone(),
            maximal: OnceLock::new(),
        };
        if let Some(&m) = self.maximal.get() {
            let _ = c.maximal.set(m);
        }
        c
    }

    /// `A = closure(B)` and `B = closure(A)`. Computed once and cached.
    pub fn is_maximal(&self) -> bool {
        *self.maximal.get_or_init(|| {
            closure(&self.b, self.d).is_ok_and(|c| c == self.a)
                && closure(&self.a, self.d).is_ok_and(|c| c == self.b)
        })
    }

    pub fn slack_matrix(&self) -> Result<SlackMatrix> {
        slack_matrix(self)
    }

    pub fn to_json(&self) -> String {
        let side = |vs: &[RatVec]| -> Vec<Vec<String>> {
            vs.iter()
                .map(|v| v.iter().map(rat_to_json).collect())
                .collect()
        };
        let j = ConfigJson {
            d: self.d,
            a: side(&self.a),
            b: side(&self.b),
        };
        serde_json::to_string(&j).expect("configuration serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: ConfigJson = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("configuration JSON: {e}")))?;
        Configuration::new(j.d, parse_side(&j.a)?, parse_side(&j.b)?)
    }
}

/// `p/q` with `q > 0`; integers are written with denominator 1.
pub fn rat_to_json(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub(crate) fn parse_side(vs: &[Vec<String>]) -> Result<Vec<RatVec>> {
    vs.iter()
        .map(|v| v.iter().map(|s| parse_rat(s)).collect())
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    d: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    b: Vec<Vec<String>>,
}

/// Slack matrix with the vectors labelling its rows (side A) and columns (side B).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackMatrix {
    pub matrix: BinaryMatrix,
    pub row_labels: Vec<RatVec>,
    pub col_labels: Vec<RatVec>,
}

/// Matrix of all inner products `<a, b>`, rows and columns in sorted label order.
pub fn slack_matrix(cfg: &Configuration) -> Result<SlackMatrix> {
    slack_of(&cfg.a, &cfg.b)
}

pub(crate) fn slack_of(rows: &[RatVec], cols: &[RatVec]) -> Result<SlackMatrix> {
    let mut bits = Vec::with_capacity(rows.len() * cols.len());
    for a in rows {
        for b in cols {
            let p = dot(a, b);
            bits.push(binary_value(&p).ok_or_else(|| Error::NonBinarySlack {
                value: p.to_string(),
            })?);
        }
    }
    Ok(SlackMatrix {
        matrix: BinaryMatrix::new(rows.len(), cols.len(), bits),
        row_labels: rows.to_vec(),
        col_labels: cols.to_vec(),
    })
}

/// All vectors `y` with `<y, x>` in `{0,1}` for every `x` in `xs`, sorted.
///
/// Picks the first `d` independent vectors of the sorted input as a basis,
/// solves for the unique `y` matching each 0/1 pattern on the basis, and
/// keeps those whose products with the remaining vectors are also 0/1.
pub fn closure(xs: &[RatVec], d: usize) -> Result<Vec<RatVec>> {
    check_dims(d, xs)?;
    let xs = sorted_set(xs.to_vec());
    let basis_idx = greedy_independent(&xs, d);
    if basis_idx.len() < d {
        return Err(Error::NotSpanning(d));
    }
    let basis: Vec<RatVec> = basis_idx.iter().map(|&i| xs[i].clone()).collect();
    let basis_m = RatMatrix::from_rows(&basis, d)?;
    let inv = basis_m.inverse().ok_or(Error::NotSpanning(d))?;

    if let Some(out) = integer_closure(&xs, &basis_m, &inv, d) {
        return Ok(out);
    }

    let mut out = Vec::with_capacity(1 << d.min(20));
    for sigma in 0u64..(1u64 << d) {
        // y = inv * sigma
        let y: RatVec = (0..d)
            .map(|r| {
                (0..d)
                    .filter(|&c| sigma_bit(sigma, c, d))
                    .fold(Rat::zero(), |acc, c| acc + &inv[(r, c)])
            })
            .collect();
        if xs.iter().all(|x| binary_value(&dot(&y, x)).is_some()) {
            out.push(y);
        }
    }
    out.sort();
    Ok(out)
}

// Bit c of the pattern, with coordinate 0 as the most significant bit so the
// patterns are visited in lexicographic order.
fn sigma_bit(sigma: u64, c: usize, d: usize) -> bool {
    (sigma >> (d - 1 - c)) & 1 == 1
}

/// Fast path for integer inputs: `y = adj(basis) * sigma / det(basis)`, tested
/// with `i128` dot products. Returns `None` if anything would overflow.
fn integer_closure(
    xs: &[RatVec],
    basis: &RatMatrix,
    inv: &RatMatrix,
    d: usize,
) -> Option<Vec<RatVec>> {
    if d > 24 {
        return None;
    }
    let xs_int: Vec<Vec<i128>> = xs
        .iter()
        .map(|x| to_int_vec(x)?.iter().map(|v| v.to_i128()).collect())
        .collect::<Option<_>>()?;
    let basis_rows: Vec<Vec<Int>> = basis
        .row_vecs()
        .iter()
        .map(|r| to_int_vec(r))
        .collect::<Option<_>>()?;
    let det = int_determinant(&basis_rows);
    let det_r = Rat::from_integer(det.clone());
    let det_i = det.to_i128()?;
    let mut adj = vec![0i128; d * d];
    for r in 0..d {
        for c in 0..d {
            let v = &inv[(r, c)] * &det_r;
            adj[r * d + c] = v.to_integer().to_i128()?;
        }
    }
    let mut out = Vec::new();
    let mut y = vec![0i128; d];
    for sigma in 0u64..(1u64 << d) {
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = 0i128;
            for c in 0..d {
                if sigma_bit(sigma, c, d) {
                    acc = acc.checked_add(adj[r * d + c])?;
                }
            }
            *yr = acc;
        }
        let mut ok = true;
        for x in &xs_int {
            let mut p = 0i128;
            for (a, b) in y.iter().zip(x) {
                p = p.checked_add(a.checked_mul(*b)?)?;
            }
            if p != 0 && p != det_i {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(
                y.iter()
                    .map(|&v| Rat::new(Int::from(v), det.clone()))
                    .collect(),
            );
        }
    }
    out.sort();
    Some(out)
}

/// Completes a spanning seed to a maximal configuration: `A = closure(B0)`,
/// `B = closure(A)`. Then `B` contains `B0` and both sides are closed.
pub fn maximal_completion(b0: &[RatVec], d: usize) -> Result<Configuration> {
    let a = closure(b0, d)?;
    if rank_of(&a, d) < d {
        return Err(Error::DegenerateSeed(d));
    }
    let b = closure(&a, d)?;
    Ok(Configuration::new_maximal(d, a, b))
}

/// Rank factorization `m = A B^T` with `B` binary: `B` is read off `rank(m)`
/// independent rows and `A` holds the coordinates of every row in that basis.
/// Row `i` of `m` corresponds to `a_coords[i]`, column `j` to `b_cols[j]`.
pub(crate) fn factorize(m: &BinaryMatrix) -> Result<(usize, Vec<RatVec>, Vec<RatVec>)> {
    let rm = m.to_rat_matrix();
    let rows = rm.row_vecs();
    let basis = greedy_independent(&rows, m.cols());
    let d = basis.len();
    if d == 0 {
        return Err(Error::RankZero);
    }
    let b: Vec<RatVec> = (0..m.cols())
        .map(|j| basis.iter().map(|&r| rm[(r, j)].clone()).collect())
        .collect();
    // rows of m = coords * R where R holds the basis rows; solve R^T c = row.
    let rt = RatMatrix::from_rows(
        &basis.iter().map(|&r| rows[r].clone()).collect::<Vec<_>>(),
        m.cols(),
    )?
    .transpose();
    let a = rows
        .iter()
        .map(|row| solve(&rt, row).map(|x| x.expect("row lies in the row space")))
        .collect::<Result<Vec<_>>>()?;
    Ok((d, a, b))
}

/// A configuration whose slack matrix is `m` up to row and column permutation.
pub fn from_slack_matrix(m: &BinaryMatrix) -> Result<Configuration> {
    if !m.has_distinct_rows() {
        return Err(Error::RepeatedLine("row"));
    }
    if !m.has_distinct_columns() {
        return Err(Error::RepeatedLine("column"));
    }
    let (d, a, b) = factorize(m)?;
    Configuration::new(d, a, b)
}

/// Whether `m` is a maximal element of the set of rank-`d` 0/1 matrices with
/// distinct rows and columns, where `d = rank(m)`.
///
/// With `m = A B^T` a rank factorization, every row of `m` lies in
/// `closure(B)` and every column in `closure(A)`; `m` is maximal exactly when
/// neither closure has vectors beyond those already present.
pub fn is_maximal_in_md(m: &BinaryMatrix) -> bool {
    if !m.has_distinct_rows() || !m.has_distinct_columns() {
        return false;
    }
    let Ok((d, a, b)) = factorize(m) else {
        return false;
    };
    let Ok(ca) = closure(&b, d) else { return false };
    if ca.len() != m.rows() {
        return false;
    }
    closure(&a, d).is_ok_and(|cb| cb.len() == m.cols())
}

/// Result of a linear change of basis that makes one side binary.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub config: Configuration,
    /// `row_map[i]` is the index in `config.a()` of the image of the i-th source A-vector.
    pub row_map: Vec<usize>,
    /// `col_map[j]` is the index in `config.b()` of the image of the j-th source B-vector.
    pub col_map: Vec<usize>,
    /// The matrix applied to side B (side A is mapped by its inverse transpose).
    pub transform: RatMatrix,
}

/// Linearly equivalent configuration whose `side` lies in `{0,1}^d` and whose
/// other side contains the standard basis vectors. Slack entries are
/// preserved exactly under the returned label maps.
pub fn normalize_to_binary(cfg: &Configuration, side: Side) -> Result<Normalized> {
    let d = cfg.d;
    // The opposite side supplies the basis that becomes e_1..e_d.
    let (basis_src, _) = match side {
        Side::A => (&cfg.b, &cfg.a),
        Side::B => (&cfg.a, &cfg.b),
    };
    let idx = greedy_independent(basis_src, d);
    let basis: Vec<RatVec> = idx.iter().map(|&i| basis_src[i].clone()).collect();
    // cols: matrix with the chosen vectors as columns.
    let cols = RatMatrix::from_columns(&basis, d)?;
    let cols_inv = cols.inverse().ok_or(Error::NotSpanning(d))?;

    // For side A: B' = cols^{-1} b, A' = cols^T a, so the transform on B is cols^{-1}.
    // For side B: A' = cols^{-1} a, B' = cols^T b, so the transform on B is cols^T.
    let (map_a, map_b) = match side {
        Side::A => (cols.transpose(), cols_inv.clone()),
        Side::B => (cols_inv.clone(), cols.transpose()),
    };
    let new_a: Vec<RatVec> = cfg
        .a
        .iter()
        .map(|v| map_a.mul_vec(v))
        .collect::<Result<_>>()?;
    let new_b: Vec<RatVec> = cfg
        .b
        .iter()
        .map(|v| map_b.mul_vec(v))
        .collect::<Result<_>>()?;
    let config = Configuration {
        d,
        a: sorted_set(new_a.clone()),
        b: sorted_set(new_b.clone()),
        maximal: OnceLock::new(),
    };
    if let Some(&m) = cfg.maximal.get() {
        let _ = config.maximal.set(m);
    }
    let locate = |set: &[RatVec], v: &RatVec| set.binary_search(v).expect("image present");
    let row_map = new_a.iter().map(|v| locate(&config.a, v)).collect();
    let col_map = new_b.iter().map(|v| locate(&config.b, v)).collect();
    Ok(Normalized {
        config,
        row_map,
        col_map,
        transform: map_b,
    })
}

/// All points of `{0,1}^d` in lexicographic order.
pub fn cube_points(d: usize) -> Vec<RatVec> {
    (0u64..(1u64 << d))
        .map(|s| {
            (0..d)
                .map(|c| {
                    if sigma_bit(s, c, d) {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn is_binary_vector(v: &[Rat]) -> bool {
    v.iter().all(|x| binary_value(x).is_some())
}
