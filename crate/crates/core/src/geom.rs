//! Polytopes and cones with 0/1 slacks, and their passage to configurations.
//!
//! An inequality `(a, b)` reads `<a, x> >= b`; its slack at a point `v` is
//! `<a, v> - b`. Homogenizing sends the inequality to `(a, b)` and the point to
//! `(v, -1)` in dimension `d + 1`, so slacks become plain inner products.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{closure, parse_side, rat_to_json, slack_matrix, Configuration, SlackMatrix};
use crate::error::{Error, Result};
use crate::exactlin::{dot, is_integral, rank_of, IncrementalBasis, Int, Rat, RatMatrix, RatVec};

/// `{x : <a_i, x> >= b_i}` together with a list of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeDescription {
    pub d: usize,
    pub ineqs: Vec<(RatVec, Rat)>,
    pub verts: Vec<RatVec>,
    /// Indices of inequalities that were not confirmed to define facets.
    pub non_facet: Vec<usize>,
}

/// `{x : A x >= 0} = cone(gens)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDescription {
    pub d: usize,
    pub ineqs: Vec<RatVec>,
    pub gens: Vec<RatVec>,
}

/// Rows and columns of a slack matrix whose selected submatrix is
/// lower-triangular with ones on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularCore {
    pub row_indices: Vec<usize>,
    pub col_indices: Vec<usize>,
}

/// Output of [`to_binary_integral`].
#[derive(Debug, Clone)]
pub struct BinaryIntegral {
    /// Side A is binary; side B is integral and contains every standard basis vector.
    pub config: Configuration,
    /// Core of the source configuration's slack matrix.
    pub core: TriangularCore,
    /// Determinant of the triangular core submatrix.
    pub core_det: Rat,
}

fn check_vectors(d: usize, vs: &[RatVec]) -> Result<()> {
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

fn homog_point(v: &[Rat]) -> RatVec {
    let mut h = v.to_vec();
    h.push(-Rat::one());
    h
}

fn homog_ineq(a: &[Rat], b: &Rat) -> RatVec {
    let mut h = a.to_vec();
    h.push(b.clone());
    h
}

impl PolytopeDescription {
    /// Checks shapes, full-dimensionality of the points, and 0/1 slacks.
    pub fn new(d: usize, ineqs: Vec<(RatVec, Rat)>, verts: Vec<RatVec>) -> Result<Self> {
        check_vectors(d, &verts)?;
        for (a, _) in &ineqs {
            check_vectors(d, std::slice::from_ref(a))?;
        }
        let hv: Vec<RatVec> = verts.iter().map(|v| homog_point(v)).collect();
        if rank_of(&hv, d + 1) < d + 1 {
            return Err(Error::NotSpanning(d));
        }
        for (a, b) in &ineqs {
            for v in &verts {
                let s = dot(a, v) - b;
                if !(s.is_zero() || s.is_one()) {
                    return Err(Error::NonBinarySlack {
                        value: s.to_string(),
                    });
                }
            }
        }
        Ok(PolytopeDescription {
            d,
            ineqs,
            verts,
            non_facet: Vec::new(),
        })
    }

    pub fn to_json(&self) -> String {
        let j = PolytopeJson {
            d: self.d,
            ineqs: self
                .ineqs
                .iter()
                .map(|(a, b)| a.iter().chain([b]).map(rat_to_json).collect())
                .collect(),
            verts: self
                .verts
                .iter()
                .map(|v| v.iter().map(rat_to_json).collect())
                .collect(),
            non_facet: self.non_facet.clone(),
        };
        serde_json::to_string(&j).expect("polytope serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: PolytopeJson = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("polytope JSON: {e}")))?;
        let rows = parse_side(&j.ineqs)?;
        let mut ineqs = Vec::with_capacity(rows.len());
        for mut r in rows {
            if r.len() != j.d + 1 {
                return Err(Error::DimensionMismatch {
                    expected: j.d + 1,
                    found: r.len(),
                });
            }
            let b = r.pop().expect("nonempty row");
            ineqs.push((r, b));
        }
        let mut p = PolytopeDescription::new(j.d, ineqs, parse_side(&j.verts)?)?;
        p.non_facet = j.non_facet;
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    d: usize,
    ineqs: Vec<Vec<String>>,
    verts: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    non_facet: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ConeJson {
    d: usize,
    ineqs: Vec<Vec<String>>,
    gens: Vec<Vec<String>>,
}

impl ConeDescription {
    /// Checks shapes, spanning of both families, and 0/1 products.
    pub fn new(d: usize, ineqs: Vec<RatVec>, gens: Vec<RatVec>) -> Result<Self> {
        // Configuration::new performs exactly these checks.
        Configuration::new(d, ineqs.clone(), gens.clone())?;
        Ok(ConeDescription { d, ineqs, gens })
    }

    pub fn to_json(&self) -> String {
        let side = |vs: &[RatVec]| -> Vec<Vec<String>> {
            vs.iter()
                .map(|v| v.iter().map(rat_to_json).collect())
                .collect()
        };
        serde_json::to_string(&ConeJson {
            d: self.d,
            ineqs: side(&self.ineqs),
            gens: side(&self.gens),
        })
        .expect("cone serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: ConeJson =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("cone JSON: {e}")))?;
        ConeDescription::new(j.d, parse_side(&j.ineqs)?, parse_side(&j.gens)?)
    }
}

/// The cone over `P` at height `-1`, with the origin listed as a generator.
pub fn homogenize(p: &PolytopeDescription) -> ConeDescription {
    let mut gens: Vec<RatVec> = p.verts.iter().map(|v| homog_point(v)).collect();
    gens.push(vec![Rat::zero(); p.d + 1]);
    ConeDescription {
        d: p.d + 1,
        ineqs: p.ineqs.iter().map(|(a, b)| homog_ineq(a, b)).collect(),
        gens,
    }
}

/// The `(d+1)`-configuration of homogenized inequalities and points plus the origin.
pub fn polytope_to_configuration(p: &PolytopeDescription) -> Result<Configuration> {
    cone_to_configuration(&homogenize(p))
}

pub fn cone_to_configuration(k: &ConeDescription) -> Result<Configuration> {
    Configuration::new(k.d, k.ineqs.clone(), k.gens.clone())
}

/// Every inequality with all slacks in `{0,1}` on `verts`, and every point with
/// all slacks in `{0,1}` on those inequalities.
///
/// Inequalities whose tight points in `verts` do not affinely span a
/// hyperplane are listed in `non_facet`; this includes the two trivial rows
/// `0 >= 0` and `0 >= -1`.
pub fn complete_maximal_pair(verts: &[RatVec]) -> Result<PolytopeDescription> {
    let d = verts.first().map_or(0, |v| v.len());
    check_vectors(d, verts)?;
    let hv: Vec<RatVec> = verts.iter().map(|v| homog_point(v)).collect();
    if rank_of(&hv, d + 1) < d + 1 {
        return Err(Error::NotSpanning(d));
    }
    let rows = closure(&hv, d + 1)?;
    let points = closure(&rows, d + 1)?;
    let minus_one = -Rat::one();
    let out_verts: Vec<RatVec> = points
        .iter()
        .filter(|p| p[d] == minus_one)
        .map(|p| p[..d].to_vec())
        .collect();
    let ineqs: Vec<(RatVec, Rat)> = rows
        .iter()
        .map(|r| (r[..d].to_vec(), r[d].clone()))
        .collect();
    let non_facet = ineqs
        .iter()
        .enumerate()
        .filter(|(_, (a, b))| {
            let tight: Vec<RatVec> = out_verts
                .iter()
                .filter(|v| (dot(a, v) - b).is_zero())
                .map(|v| homog_point(v))
                .collect();
            rank_of(&tight, d + 1) != d
        })
        .map(|(i, _)| i)
        .collect();
    Ok(PolytopeDescription {
        d,
        ineqs,
        verts: out_verts,
        non_facet,
    })
}

/// Backtracking search for `size` rows `r_i` and columns `c_i` with
/// `S[r_i][c_i] = 1`, `S[r_i][c_j] = 0` for `j > i`, and linearly independent
/// row labels. Rows with fewer ones are tried first.
pub fn find_triangular_core(s: &SlackMatrix, size: usize) -> Result<TriangularCore> {
    let m = &s.matrix;
    let dim = s.row_labels.first().map_or(0, |r| r.len());
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by_key(|&r| (m.row(r).iter().filter(|&&b| b == 1).count(), r));
    let mut state = CoreSearch {
        s,
        order,
        rows: Vec::new(),
        cols: Vec::new(),
        used_rows: vec![false; m.rows()],
        used_cols: vec![false; m.cols()],
    };
    if state.descend(size, IncrementalBasis::new(dim)) {
        Ok(TriangularCore {
            row_indices: state.rows,
            col_indices: state.cols,
        })
    } else {
        Err(Error::NoCore)
    }
}

struct CoreSearch<'a> {
    s: &'a SlackMatrix,
    order: Vec<usize>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    used_rows: Vec<bool>,
    used_cols: Vec<bool>,
}

impl CoreSearch<'_> {
    fn descend(&mut self, size: usize, basis: IncrementalBasis) -> bool {
        if self.rows.len() == size {
            return true;
        }
        let m = &self.s.matrix;
        for oi in 0..self.order.len() {
            let r = self.order[oi];
            if self.used_rows[r] {
                continue;
            }
            let mut next = basis.clone();
            if !next.insert(&self.s.row_labels[r]) {
                continue;
            }
            for c in 0..m.cols() {
                if self.used_cols[c] || m.get(r, c) != 1 {
                    continue;
                }
                if self.rows.iter().any(|&pr| m.get(pr, c) != 0) {
                    continue;
                }
                self.rows.push(r);
                self.cols.push(c);
                self.used_rows[r] = true;
                self.used_cols[c] = true;
                if self.descend(size, next.clone()) {
                    return true;
                }
                self.rows.pop();
                self.cols.pop();
                self.used_rows[r] = false;
                self.used_cols[c] = false;
            }
        }
        false
    }
}

/// Linearly equivalent configuration with side A in `{0,1}^d` and side B
/// integral containing `e_1, ..., e_d`.
///
/// With core rows `a_i` forming `M` and `L = M [b_{c_1} ... b_{c_d}]`
/// lower unitriangular, points map by `L^{-1} M` and inequalities by its
/// inverse transpose.
pub fn to_binary_integral(cfg: &Configuration) -> Result<BinaryIntegral> {
    let d = cfg.dim();
    let s = slack_matrix(cfg)?;
    let core = find_triangular_core(&s, d)?;
    let m_rows: Vec<RatVec> = core
        .row_indices
        .iter()
        .map(|&r| s.row_labels[r].clone())
        .collect();
    let m = RatMatrix::from_rows(&m_rows, d)?;
    let m_inv = m.inverse().ok_or(Error::NoCore)?;
    let core_cols: Vec<RatVec> = core
        .col_indices
        .iter()
        .map(|&c| s.col_labels[c].clone())
        .collect();
    let l = m.mul(&RatMatrix::from_columns(&core_cols, d)?)?;
    let core_det = (0..d).fold(Rat::one(), |acc, i| acc * &l[(i, i)]);
    let l_inv = l.inverse().ok_or(Error::NoCore)?;
    let point_map = l_inv.mul(&m)?;
    let ineq_map = l.transpose().mul(&m_inv.transpose())?;
    let c: Vec<RatVec> = cfg
        .a()
        .iter()
        .map(|a| ineq_map.mul_vec(a))
        .collect::<Result<_>>()?;
    let dd: Vec<RatVec> = cfg
        .b()
        .iter()
        .map(|b| point_map.mul_vec(b))
        .collect::<Result<_>>()?;
    let config = Configuration::new(d, c, dd)?;
    Ok(BinaryIntegral {
        config,
        core,
        core_det,
    })
}

pub fn polytope_to_binary_integral(p: &PolytopeDescription) -> Result<BinaryIntegral> {
    to_binary_integral(&polytope_to_configuration(p)?)
}

pub fn cone_to_binary_integral(k: &ConeDescription) -> Result<BinaryIntegral> {
    to_binary_integral(&cone_to_configuration(k)?)
}

/// Whether side B is integral and side A binary, with every `e_i` in side B.
pub fn is_binary_integral(cfg: &Configuration) -> bool {
    let d = cfg.dim();
    let a_binary = cfg
        .a()
        .iter()
        .all(|v| v.iter().all(|x| x.is_zero() || x.is_one()));
    let b_integral = cfg.b().iter().all(|v| is_integral(v));
    let has_basis = (0..d).all(|i| {
        let e: RatVec = (0..d)
            .map(|j| if i == j { Rat::one() } else { Rat::zero() })
            .collect();
        cfg.b().binary_search(&e).is_ok()
    });
    a_binary && b_integral && has_basis
}

/// Vertices of the standard simplex `conv{0, e_1, ..., e_d}`.
pub fn simplex_vertices(d: usize) -> Vec<RatVec> {
    let mut out = vec![vec![Rat::zero(); d]];
    for i in 0..d {
        let mut v = vec![Rat::zero(); d];
        v[i] = Rat::one();
        out.push(v);
    }
    out
}

/// Vertices of `[0,1]^d`.
pub fn cube_vertices(d: usize) -> Vec<RatVec> {
    crate::config::cube_points(d)
}

/// Vertices `+-e_i` of the cross-polytope.
pub fn cross_polytope_vertices(d: usize) -> Vec<RatVec> {
    let mut out = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1i64, -1] {
            let mut v = vec![Rat::zero(); d];
            v[i] = Rat::from_integer(Int::from(s));
            out.push(v);
        }
    }
    out
}

/// Named built-in 2-level polytopes used by tests and the CLI.
pub fn builtin_polytopes() -> Vec<(String, Vec<RatVec>)> {
    let mut out = Vec::new();
    for d in 1..=4 {
        out.push((format!("simplex-{d}"), simplex_vertices(d)));
    }
    for d in 2..=4 {
        out.push((format!("cube-{d}"), cube_vertices(d)));
    }
    out.push(("cross-polytope-2".to_string(), cross_polytope_vertices(2)));
    out
}
