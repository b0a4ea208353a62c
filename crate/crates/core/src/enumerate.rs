//! Exhaustive generation of the maximal rank-`d` 0/1 matrices, and a
//! brute-force oracle that works from the definition alone.
//!
//! Every maximal configuration is linearly equivalent to one whose side B lies
//! in `{0,1}^d`, so completing every spanning subset of the cube reaches every
//! class.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::binmat::BinaryMatrix;
use crate::canon::{canonical_form, canonical_form_up_to_transpose, CanonicalForm};
use crate::config::{closure, cube_points, slack_of};
use crate::error::{Error, Result};
use crate::exactlin::{rank_of, RatVec};
use crate::store::{Checkpoint, Store};

/// Largest dimension enumerated exhaustively.
pub const MAX_ENUM_DIM: usize = 4;

/// Largest dimension accepted when a seed budget is given.
pub const MAX_BUDGET_DIM: usize = 5;

/// Seeds handled between store checkpoints.
const BATCH: usize = 4096;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumOptions {
    /// Visit seeds in reverse order.
    pub reverse: bool,
    /// Stop after this many seeds; required above [`MAX_ENUM_DIM`].
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub seeds: u64,
    pub spanning: u64,
    pub degenerate: u64,
    pub distinct_closures: u64,
    pub resumed_from: u64,
    /// False when a budget cut the seed sequence short.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub d: usize,
    /// One canonical form per class, sorted.
    pub classes: Vec<CanonicalForm>,
    pub stats: EnumStats,
}

impl EnumerationResult {
    pub fn matrices(&self) -> Vec<BinaryMatrix> {
        self.classes.iter().map(|c| c.matrix()).collect()
    }
}

/// Iterates the nonempty subsets of an `n`-set as bitmasks: by increasing
/// size, then increasing value (Gosper's hack).
#[derive(Debug, Clone)]
struct SubsetIter {
    n: u32,
    k: u32,
    cur: u64,
}

impl SubsetIter {
    fn new(n: u32) -> Self {
        SubsetIter { n, k: 1, cur: 1 }
    }
}

impl Iterator for SubsetIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.k > self.n {
            return None;
        }
        let out = self.cur;
        let limit = 1u64 << self.n;
        let c = self.cur;
        let u = c & c.wrapping_neg();
        let v = c + u;
        let next = if v >= limit {
            limit
        } else {
            v + (((v ^ c) / u) >> 2)
        };
        if next >= limit {
            self.k += 1;
            self.cur = if self.k >= 64 {
                0
            } else {
                (1u64 << self.k) - 1
            };
        } else {
            self.cur = next;
        }
        Some(out)
    }
}

fn check_dim(d: usize, opts: &EnumOptions) -> Result<()> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let max = if opts.budget.is_some() {
        MAX_BUDGET_DIM
    } else {
        MAX_ENUM_DIM
    };
    if d > max {
        return Err(Error::DimensionTooLarge { d, max });
    }
    if opts.reverse && d > MAX_ENUM_DIM {
        return Err(Error::Invalid("reverse order needs d <= 4".into()));
    }
    Ok(())
}

enum SeedOutcome {
    NotSpanning,
    Degenerate,
    Closed(Vec<RatVec>),
}

fn process_seed(mask: u64, points: &[RatVec], bits: &[Vec<u8>], d: usize) -> SeedOutcome {
    let chosen: Vec<usize> = (0..points.len()).filter(|&i| mask >> i & 1 == 1).collect();
    let rows: Vec<Vec<u8>> = chosen.iter().map(|&i| bits[i].clone()).collect();
    if (rows.len() < d) || BinaryMatrix::from_rows(&rows, d).rank() < d {
        return SeedOutcome::NotSpanning;
    }
    let seed: Vec<RatVec> = chosen.iter().map(|&i| points[i].clone()).collect();
    match closure(&seed, d) {
        Ok(a) if rank_of(&a, d) == d => SeedOutcome::Closed(a),
        _ => SeedOutcome::Degenerate,
    }
}

fn class_of(a: &[RatVec], d: usize) -> Result<CanonicalForm> {
    let b = closure(a, d)?;
    Ok(canonical_form(&slack_of(a, &b)?.matrix))
}

/// All classes of maximal elements for dimension `d`, from every spanning
/// subset of `{0,1}^d` as a seed.
pub fn enumerate_maximal(d: usize, opts: &EnumOptions) -> Result<EnumerationResult> {
    run(d, opts, None)
}

/// As [`enumerate_maximal`], writing classes to the store and resuming from
/// its checkpoint when the seed order matches.
pub fn enumerate_maximal_with_store(
    d: usize,
    opts: &EnumOptions,
    store: &Store,
) -> Result<EnumerationResult> {
    run(d, opts, Some(store))
}

fn run(d: usize, opts: &EnumOptions, store: Option<&Store>) -> Result<EnumerationResult> {
    check_dim(d, opts)?;
    let points = cube_points(d);
    let bits: Vec<Vec<u8>> = points
        .iter()
        .map(|p| p.iter().map(|x| u8::from(*x.numer() != 0.into())).collect())
        .collect();
    let n = points.len() as u32;
    let order = if opts.reverse { "reverse" } else { "forward" };

    let mut seeds: Box<dyn Iterator<Item = u64>> = if opts.reverse {
        let mut all: Vec<u64> = SubsetIter::new(n).collect();
        all.reverse();
        Box::new(all.into_iter())
    } else {
        Box::new(SubsetIter::new(n))
    };

    let mut classes: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut stats = EnumStats::default();
    if let Some(st) = store {
        classes.extend(st.load_classes(d)?);
        if let Some(cp) = st.read_checkpoint(d)? {
            if cp.order == order {
                stats.resumed_from = cp.seeds_done;
                for _ in 0..cp.seeds_done {
                    seeds.next();
                }
                stats.seeds = cp.seeds_done;
            }
        }
    }

    let mut memo: HashSet<Vec<RatVec>> = HashSet::new();
    let mut exhausted = false;
    loop {
        let remaining = opts.budget.map(|b| b.saturating_sub(stats.seeds) as usize);
        let take = remaining.map_or(BATCH, |r| r.min(BATCH));
        let batch: Vec<u64> = seeds.by_ref().take(take).collect();
        if batch.len() < take {
            exhausted = true;
        }
        if batch.is_empty() {
            break;
        }
        let outcomes: Vec<SeedOutcome> = batch
            .par_iter()
            .map(|&m| process_seed(m, &points, &bits, d))
            .collect();
        let mut fresh: Vec<Vec<RatVec>> = Vec::new();
        for o in outcomes {
            match o {
                SeedOutcome::NotSpanning => {}
                SeedOutcome::Degenerate => {
                    stats.spanning += 1;
                    stats.degenerate += 1;
                }
                SeedOutcome::Closed(a) => {
                    stats.spanning += 1;
                    if !memo.contains(&a) {
                        memo.insert(a.clone());
                        fresh.push(a);
                    }
                }
            }
        }
        stats.seeds += batch.len() as u64;
        let new_forms: Vec<CanonicalForm> = fresh
            .par_iter()
            .map(|a| class_of(a, d))
            .collect::<Result<_>>()?;
        for f in new_forms {
            if classes.insert(f.clone()) {
                if let Some(st) = store {
                    st.put_class(d, &f)?;
                }
            }
        }
        if let Some(st) = store {
            st.write_checkpoint(
                d,
                &Checkpoint {
                    order: order.to_string(),
                    seeds_done: stats.seeds,
                },
            )?;
        }
        if exhausted || opts.budget.is_some_and(|b| stats.seeds >= b) {
            break;
        }
    }
    stats.distinct_closures = memo.len() as u64;
    stats.complete = exhausted || seeds.next().is_none();
    Ok(EnumerationResult {
        d,
        classes: classes.into_iter().collect(),
        stats,
    })
}

/// All canonical forms of `r x c` 0/1 matrices (`1 <= r <= max_rows`,
/// `1 <= c <= max_cols`) with distinct rows, distinct columns and rank `d`,
/// that are not proper submatrices of another such matrix within the bounds.
pub fn oracle_maximal(d: usize, max_rows: usize, max_cols: usize) -> Result<Vec<CanonicalForm>> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if d > 2 {
        return Err(Error::DimensionTooLarge { d, max: 2 });
    }
    let big = max_rows.max(max_cols);
    if big > 4 {
        return Err(Error::DimensionTooLarge { d: big, max: 4 });
    }
    let mut shapes = Vec::new();
    for r in 1..=max_rows {
        for c in 1..=max_cols {
            shapes.push((r, c));
        }
    }
    let collection: BTreeSet<CanonicalForm> = shapes
        .par_iter()
        .flat_map_iter(|&(r, c)| {
            (0u64..1 << (r * c)).filter_map(move |m| {
                let bits: Vec<u8> = (0..r * c).map(|i| (m >> i & 1) as u8).collect();
                let mat = BinaryMatrix::new(r, c, bits);
                (mat.has_distinct_rows() && mat.has_distinct_columns() && mat.rank() == d)
                    .then(|| canonical_form(&mat))
            })
        })
        .collect();
    let all: Vec<CanonicalForm> = collection.iter().cloned().collect();
    let kept = all
        .par_iter()
        .filter(|m| {
            !all.iter().any(|n| {
                let (mr, mc) = m.shape();
                let (nr, nc) = n.shape();
                nr >= mr && nc >= mc && (nr, nc) != (mr, mc) && contains_submatrix(&n.matrix(), m)
            })
        })
        .cloned()
        .collect();
    Ok(kept)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

fn contains_submatrix(n: &BinaryMatrix, m: &CanonicalForm) -> bool {
    let (mr, mc) = m.shape();
    let col_sets = subsets(n.cols(), mc);
    subsets(n.rows(), mr).iter().any(|rows| {
        col_sets
            .iter()
            .any(|cols| canonical_form(&n.submatrix(rows, cols)) == *m)
    })
}

/// Maximality from the definition: `m` has distinct rows and columns, and no
/// 0/1 row or column can be appended without repeating a line or raising the rank.
pub fn oracle_is_maximal(m: &BinaryMatrix) -> bool {
    if m.rows() == 0 || m.cols() == 0 || !m.has_distinct_rows() || !m.has_distinct_columns() {
        return false;
    }
    let d = m.rank();
    if d == 0 {
        return false;
    }
    let extends = |len: usize,
                   existing: &dyn Fn(usize) -> Vec<u8>,
                   count: usize,
                   add: &dyn Fn(&[u8]) -> BinaryMatrix| {
        (0u64..1 << len).any(|x| {
            let line: Vec<u8> = (0..len).map(|i| (x >> i & 1) as u8).collect();
            !(0..count).any(|i| existing(i) == line) && add(&line).rank() == d
        })
    };
    let row_ext = extends(m.cols(), &|i| m.row(i).to_vec(), m.rows(), &|l| {
        m.with_row(l)
    });
    let col_ext = extends(m.rows(), &|j| m.column(j), m.cols(), &|l| m.with_column(l));
    !(row_ext || col_ext)
}

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub d: usize,
    pub classes: usize,
    pub classes_up_to_transpose: usize,
}

pub fn report_row(d: usize, classes: &[CanonicalForm]) -> ReportRow {
    let transposed: BTreeSet<CanonicalForm> = classes
        .iter()
        .map(|c| canonical_form_up_to_transpose(&c.matrix()))
        .collect();
    ReportRow {
        d,
        classes: classes.len(),
        classes_up_to_transpose: transposed.len(),
    }
}

/// Plain-text table of computed class counts next to the growth exponents
/// `d^2`, `d^2 log2 d` and `d^2 log2^3 d` for scale.
pub fn report(rows: &[ReportRow]) -> String {
    let mut out = String::from(
        "# computed counts of maximal elements of M_d (up to row/column permutation)\n",
    );
    out.push_str(&format!(
        "{:>2} {:>9} {:>15} {:>13} {:>5} {:>11} {:>13}\n",
        "d", "classes", "up_to_transpose", "log2(classes)", "d^2", "d^2*log2(d)", "d^2*log2(d)^3"
    ));
    for r in rows {
        let d = r.d as f64;
        let l = d.log2();
        out.push_str(&format!(
            "{:>2} {:>9} {:>15} {:>13.3} {:>5} {:>11.3} {:>13.3}\n",
            r.d,
            r.classes,
            r.classes_up_to_transpose,
            (r.classes as f64).log2(),
            r.d * r.d,
            d * d * l,
            d * d * l * l * l
        ));
    }
    out
}
