//! Canonical forms of 0/1 matrices under independent row and column permutations.
//!
//! The matrix is read as a bipartite graph (rows on one side, columns on the
//! other). An ordered partition of its vertices is refined until equitable,
//! then the search branches on each vertex of the first non-singleton cell.
//! Every leaf of the search tree fixes an order of rows and of columns; the
//! canonical form is the lexicographically least row-major bit string over
//! all leaves. All choices depend only on the partition, never on input
//! labels, so permuted inputs explore the same set of leaf matrices.
//!
//! Transposes are not identified: a matrix and its transpose have different
//! canonical forms unless they are permutation-equivalent.

use std::collections::BTreeSet;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::binmat::BinaryMatrix;

/// Canonical representative of a permutation class of 0/1 matrices.
///
/// Ordered by shape first, then by the canonical bit string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl CanonicalForm {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn matrix(&self) -> BinaryMatrix {
        BinaryMatrix::new(self.rows, self.cols, self.bits.clone())
    }

    /// Shape as two big-endian `u32`s, then the row-major bits packed MSB first.
    pub fn bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.bits.len().div_ceil(8));
        out.extend_from_slice(&(self.rows as u32).to_be_bytes());
        out.extend_from_slice(&(self.cols as u32).to_be_bytes());
        for chunk in self.bits.chunks(8) {
            let mut byte = 0u8;
            for (k, &b) in chunk.iter().enumerate() {
                byte |= b << (7 - k);
            }
            out.push(byte);
        }
        out
    }

    pub fn sha256_hex(&self) -> String {
        let digest = Sha256::digest(self.bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Canonical form of `m` under row and column permutations.
pub fn canonical_form(m: &BinaryMatrix) -> CanonicalForm {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CanonicalForm {
            rows,
            cols,
            bits: Vec::new(),
        };
    }
    let g = Bigraph::new(m);
    let initial = vec![(0..rows).collect::<Vec<_>>(), (rows..rows + cols).collect()];
    let mut search = Search { g: &g, best: None };
    let part = g.refine(initial);
    search.descend(part);
    CanonicalForm {
        rows,
        cols,
        bits: search.best.expect("search visits at least one leaf"),
    }
}

/// The lesser of the canonical forms of `m` and of its transpose.
pub fn canonical_form_up_to_transpose(m: &BinaryMatrix) -> CanonicalForm {
    canonical_form(m).min(canonical_form(&m.transpose()))
}

pub fn equivalent(m1: &BinaryMatrix, m2: &BinaryMatrix) -> bool {
    m1.shape() == m2.shape() && canonical_form(m1) == canonical_form(m2)
}

/// One canonical representative per class, sorted by canonical bytes.
pub fn dedup_classes(ms: &[BinaryMatrix]) -> Vec<BinaryMatrix> {
    let forms: BTreeSet<CanonicalForm> = ms.par_iter().map(canonical_form).collect();
    forms.into_iter().map(|f| f.matrix()).collect()
}

struct Bigraph {
    rows: usize,
    adj: Vec<Vec<usize>>,
    m: BinaryMatrix,
}

impl Bigraph {
    fn new(m: &BinaryMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut adj = vec![Vec::new(); rows + cols];
        for i in 0..rows {
            for j in 0..cols {
                if m.get(i, j) == 1 {
                    adj[i].push(rows + j);
                    adj[rows + j].push(i);
                }
            }
        }
        Bigraph {
            rows,
            adj,
            m: m.clone(),
        }
    }

    /// Splits cells by the number of neighbours each vertex has in every cell,
    /// until no cell splits. Sub-cells are ordered by that count vector.
    fn refine(&self, mut part: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut cell_of = vec![0usize; n];
        loop {
            for (c, cell) in part.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = c;
                }
            }
            let ncells = part.len();
            let mut next = Vec::with_capacity(ncells);
            let mut split = false;
            for cell in &part {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig = vec![0u32; ncells];
                        for &w in &self.adj[v] {
                            sig[cell_of[w]] += 1;
                        }
                        (sig, v)
                    })
                    .collect();
                keyed.sort_by(|a, b| a.0.cmp(&b.0));
                let before = next.len();
                let mut start = 0;
                for k in 1..=keyed.len() {
                    if k == keyed.len() || keyed[k].0 != keyed[start].0 {
                        next.push(keyed[start..k].iter().map(|(_, v)| *v).collect());
                        start = k;
                    }
                }
                if next.len() - before > 1 {
                    split = true;
                }
            }
            part = next;
            if !split {
                return part;
            }
        }
    }

    fn leaf_bits(&self, part: &[Vec<usize>]) -> Vec<u8> {
        let mut row_order = Vec::with_capacity(self.rows);
        let mut col_order = Vec::with_capacity(self.adj.len() - self.rows);
        for cell in part {
            let v = cell[0];
            if v < self.rows {
                row_order.push(v);
            } else {
                col_order.push(v - self.rows);
            }
        }
        self.m.permuted(&row_order, &col_order).bits().to_vec()
    }
}

struct Search<'a> {
    g: &'a Bigraph,
    best: Option<Vec<u8>>,
}

impl Search<'_> {
    fn descend(&mut self, part: Vec<Vec<usize>>) {
        let Some(target) = part.iter().position(|c| c.len() > 1) else {
            let bits = self.g.leaf_bits(&part);
            if self.best.as_ref().is_none_or(|b| bits < *b) {
                self.best = Some(bits);
            }
            return;
        };
        for &v in &part[target] {
            let mut child = Vec::with_capacity(part.len() + 1);
            child.extend_from_slice(&part[..target]);
            child.push(vec![v]);
            child.push(part[target].iter().copied().filter(|&w| w != v).collect());
            child.extend_from_slice(&part[target + 1..]);
            let refined = self.g.refine(child);
            self.descend(refined);
        }
    }
}
