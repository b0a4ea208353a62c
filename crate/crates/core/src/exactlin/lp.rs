use num_traits::{One, Signed, Zero};

use super::{Rat, RatMatrix, RatVec};
use crate::error::{Error, Result};

/// Finds a point of `{x : aeq x = beq, x_i >= 0 for every i with nonneg[i]}`.
///
/// Phase one of the primal simplex method on a dense exact tableau, with
/// Bland's rule for both the entering and the leaving variable, so it always
/// terminates. Unflagged variables are split into a difference of two
/// nonnegative ones. Returns `None` when the system is infeasible.
pub fn lp_feasible(aeq: &RatMatrix, beq: &[Rat], nonneg: &[bool]) -> Result<Option<RatVec>> {
    if beq.len() != aeq.rows() {
        return Err(Error::DimensionMismatch {
            expected: aeq.rows(),
            found: beq.len(),
        });
    }
    if nonneg.len() != aeq.cols() {
        return Err(Error::DimensionMismatch {
            expected: aeq.cols(),
            found: nonneg.len(),
        });
    }

    // Column layout: one column per nonneg variable, two per free variable.
    let mut columns: Vec<(usize, bool)> = Vec::new();
    for (j, &nn) in nonneg.iter().enumerate() {
        columns.push((j, true));
        if !nn {
            columns.push((j, false));
        }
    }

    let m = aeq.rows();
    let n = columns.len();
    let width = n + m + 1;
    let mut t = Tableau {
        rows: m,
        width,
        data: vec![Rat::zero(); (m + 1) * width],
    };
    for i in 0..m {
        let flip = beq[i].is_negative();
        for (c, &(j, positive)) in columns.iter().enumerate() {
            let mut v = aeq[(i, j)].clone();
            if !positive {
                v = -v;
            }
            if flip {
                v = -v;
            }
            *t.at(i, c) = v;
        }
        *t.at(i, n + i) = Rat::one();
        *t.at(i, width - 1) = if flip {
            -beq[i].clone()
        } else {
            beq[i].clone()
        };
    }
    // Reduced costs of the auxiliary objective (sum of artificials).
    for c in 0..n {
        let s = (0..m).fold(Rat::zero(), |acc, i| acc - &t.data[i * width + c]);
        *t.at(m, c) = s;
    }
    let total = (0..m).fold(Rat::zero(), |acc, i| acc + &t.data[i * width + width - 1]);
    *t.at(m, width - 1) = -total;

    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..n + m).find(|&c| t.get(m, c).is_negative()) {
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            let a = t.get(i, enter);
            if !a.is_positive() {
                continue;
            }
            let ratio = t.get(i, width - 1) / a;
            let better = match &leave {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so a leaving row always exists.
        let (row, _) = leave.expect("auxiliary problem is bounded");
        t.pivot(row, enter);
        basis[row] = enter;
    }

    if !t.get(m, width - 1).is_zero() {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); aeq.cols()];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            let (j, positive) = columns[b];
            let v = t.get(i, width - 1).clone();
            if positive {
                x[j] += v;
            } else {
                x[j] -= v;
            }
        }
    }
    Ok(Some(x))
}

struct Tableau {
    rows: usize,
    width: usize,
    data: Vec<Rat>,
}

impl Tableau {
    fn at(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.width + j]
    }

    fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.width + j]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.get(row, col).clone();
        for j in 0..w {
            self.data[row * w + j] /= &p;
        }
        let pivot_row: Vec<Rat> = self.data[row * w..(row + 1) * w].to_vec();
        for i in 0..=self.rows {
            if i == row {
                continue;
            }
            let f = self.get(i, col).clone();
            if f.is_zero() {
                continue;
            }
            for (j, pj) in pivot_row.iter().enumerate() {
                if !pj.is_zero() {
                    self.data[i * w + j] -= &f * pj;
                }
            }
        }
    }
}
