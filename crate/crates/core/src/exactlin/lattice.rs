use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::hnf::{hnf, pivot_columns, IntMatrix};
use super::{int_determinant, rank_of, Int, Rat};
use crate::error::{Error, Result};

/// Basis of an integer lattice: linearly independent integer vectors of a common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLatticeBasis {
    dim: usize,
    vectors: Vec<Vec<Int>>,
    // HNF of `vectors`, used for membership tests.
    echelon: IntMatrix,
}

impl IntLatticeBasis {
    /// Validates that `vectors` are independent over the rationals.
    pub fn new(dim: usize, vectors: Vec<Vec<Int>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        let as_rat: Vec<Vec<Rat>> = vectors
            .iter()
            .map(|v| v.iter().cloned().map(Rat::from_integer).collect())
            .collect();
        if rank_of(&as_rat, dim) != vectors.len() {
            return Err(Error::NotFullRank);
        }
        let (echelon, _) = hnf(&IntMatrix::from_rows(&vectors, dim));
        Ok(IntLatticeBasis {
            dim,
            vectors,
            echelon,
        })
    }

    pub fn from_i64(dim: usize, vectors: &[&[i64]]) -> Result<Self> {
        Self::new(
            dim,
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    /// Basis of the lattice generated by an arbitrary list of integer vectors
    /// (the nonzero rows of their Hermite normal form).
    pub fn from_generators(dim: usize, gens: &[Vec<Int>]) -> Result<Self> {
        for v in gens {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        let (h, _) = hnf(&IntMatrix::from_rows(gens, dim));
        let basis: Vec<Vec<Int>> = (0..h.rows())
            .map(|i| h.row(i).to_vec())
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        Self::new(dim, basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<Int>] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Integer coordinates of `v` with respect to the echelon basis, if `v` is a member.
    pub(crate) fn echelon_coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        echelon_coordinates(&self.echelon, v)
    }
}

/// Integer coefficients of `v` over the nonzero rows of the HNF matrix `h`, if any exist.
pub(crate) fn echelon_coordinates(h: &IntMatrix, v: &[Int]) -> Option<Vec<Int>> {
    let mut rest = v.to_vec();
    let pivots = pivot_columns(h);
    let mut coords = Vec::with_capacity(pivots.len());
    for (r, &c) in pivots.iter().enumerate() {
        if rest[..c].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, rem) = rest[c].div_rem(&h[(r, c)]);
        if !rem.is_zero() {
            return None;
        }
        for (x, hv) in rest.iter_mut().zip(h.row(r)) {
            *x -= &q * hv;
        }
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

/// True iff `v` is an integer combination of the basis vectors.
pub fn lattice_member(l: &IntLatticeBasis, v: &[Int]) -> Result<bool> {
    if v.len() != l.dim {
        return Err(Error::DimensionMismatch {
            expected: l.dim,
            found: v.len(),
        });
    }
    Ok(l.echelon_coordinates(v).is_some())
}

/// Absolute determinant of a full-rank square basis.
pub fn lattice_determinant(l: &IntLatticeBasis) -> Result<Int> {
    if l.vectors.len() != l.dim {
        return Err(Error::NotFullRank);
    }
    Ok(int_determinant(&l.vectors).abs())
}
