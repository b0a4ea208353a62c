//! Stable set polytopes of bipartite graphs.
//!
//! Nodes are numbered from 0. Stable sets are bitmasks over the nodes. For a
//! bipartite graph the polytope is cut out by `x_v >= 0` and
//! `x_u + x_v <= 1` for each edge (and `x_v <= 1` for an isolated node), and
//! every vertex has slack 0 or 1 against each of these rows.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_form, CanonicalForm};
use crate::config::{slack_matrix, slack_of, SlackMatrix};
use crate::error::{Error, Result};
use crate::exactlin::{Rat, RatVec};
use crate::geom::{complete_maximal_pair, polytope_to_configuration};

/// Largest node count accepted by [`census`].
pub const MAX_CENSUS_NODES: usize = 7;

/// Largest node count accepted by graph constructors (stable sets are `u64` masks).
pub const MAX_NODES: usize = 32;

/// A simple graph with a proper 2-coloring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    coloring: Vec<u8>,
}

impl BipartiteGraph {
    /// Normalizes edges to `(min, max)` sorted order and computes a coloring.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_NODES {
            return Err(Error::DimensionTooLarge {
                d: n,
                max: MAX_NODES,
            });
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) names a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at node {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("parallel edges".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut color = vec![u8::MAX; n];
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        q.push_back(v);
                    } else if color[v] == color[u] {
                        return Err(Error::NotBipartite);
                    }
                }
            }
        }
        Ok(BipartiteGraph {
            n,
            edges: norm,
            coloring: color,
        })
    }

    /// Graph whose edges are the set bits of `mask` over [`edge_pairs`]`(n)`;
    /// `None` if it is not bipartite.
    pub fn from_edge_mask(n: usize, mask: u64) -> Option<Self> {
        let pairs = edge_pairs(n);
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        BipartiteGraph::new(n, &edges).ok()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Color class (0 or 1) of every node.
    pub fn coloring(&self) -> &[u8] {
        &self.coloring
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    fn neighbor_masks(&self) -> Vec<u64> {
        let mut m = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            m[u] |= 1 << v;
            m[v] |= 1 << u;
        }
        m
    }

    /// The graph with node `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        BipartiteGraph::new(self.n, &edges)
    }

    /// `n` on the first line, then one `u v` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::InvalidGraph("missing node count".into()))?;
        let n: usize = first.trim().parse().map_err(|_| {
            Error::InvalidGraph(format!("line 1: bad node count {:?}", first.trim()))
        })?;
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let parsed: Option<Vec<usize>> = toks.iter().map(|t| t.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[u, v]) => edges.push((u, v)),
                _ => {
                    return Err(Error::InvalidGraph(format!(
                        "line {}: expected `u v`, found {:?}",
                        ln + 1,
                        line.trim()
                    )))
                }
            }
        }
        BipartiteGraph::new(n, &edges)
    }
}

/// All node pairs `(i, j)` with `i < j`, in lexicographic order.
pub fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// All stable sets as node bitmasks, ascending. Backtracks over nodes in
/// order of decreasing degree.
pub fn stable_sets(g: &BipartiteGraph) -> Vec<u64> {
    let nb = g.neighbor_masks();
    let deg = g.degrees();
    let mut order: Vec<usize> = (0..g.n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
    let mut out = Vec::new();
    fn rec(i: usize, cur: u64, banned: u64, order: &[usize], nb: &[u64], out: &mut Vec<u64>) {
        if i == order.len() {
            out.push(cur);
            return;
        }
        let v = order[i];
        rec(i + 1, cur, banned, order, nb, out);
        if banned & (1 << v) == 0 {
            rec(i + 1, cur | 1 << v, banned | nb[v], order, nb, out);
        }
    }
    rec(0, 0, 0, &order, &nb, &mut out);
    out.sort_unstable();
    out
}

fn unit(n: usize, v: usize) -> RatVec {
    let mut e = vec![Rat::from_integer(0.into()); n];
    e[v] = Rat::from_integer(1.into());
    e
}

fn characteristic(n: usize, s: u64) -> RatVec {
    (0..n)
        .map(|v| Rat::from_integer(((s >> v) & 1).into()))
        .collect()
}

fn homog(mut v: RatVec, last: i64) -> RatVec {
    v.push(Rat::from_integer(last.into()));
    v
}

/// Slack matrix of `x_v >= 0` (one row per node, in node order) and
/// `x_u + x_v <= 1` (one row per edge, in edge order) against all stable
/// sets (ascending masks). Labels are homogenized as `(a, b)` and `(x, -1)`.
pub fn stab_basic_slack(g: &BipartiteGraph) -> Result<SlackMatrix> {
    if let Some(v) = g.degrees().iter().position(|&d| d == 0) {
        return Err(Error::IsolatedNode(v));
    }
    let n = g.n;
    let mut rows: Vec<RatVec> = (0..n).map(|v| homog(unit(n, v), 0)).collect();
    for &(u, v) in &g.edges {
        let mut a = vec![Rat::from_integer(0.into()); n];
        a[u] = Rat::from_integer((-1).into());
        a[v] = Rat::from_integer((-1).into());
        rows.push(homog(a, -1));
    }
    let cols: Vec<RatVec> = stable_sets(g)
        .into_iter()
        .map(|s| homog(characteristic(n, s), -1))
        .collect();
    slack_of(&rows, &cols)
}

/// Slack matrix of the maximal pair of the stable set polytope.
pub fn stab_maximal_slack(g: &BipartiteGraph) -> Result<SlackMatrix> {
    let verts: Vec<RatVec> = stable_sets(g)
        .into_iter()
        .map(|s| characteristic(g.n, s))
        .collect();
    let p = complete_maximal_pair(&verts)?;
    slack_matrix(&polytope_to_configuration(&p)?)
}

/// Zero sets (bitmask over facet rows) of every stable set, ascending by stable set.
fn facet_zero_sets(g: &BipartiteGraph) -> Result<(Vec<u64>, Vec<u128>)> {
    let n = g.n;
    let deg = g.degrees();
    let isolated: Vec<usize> = (0..n).filter(|&v| deg[v] == 0).collect();
    let rows = n + g.edges.len() + isolated.len();
    if rows > 128 {
        return Err(Error::DimensionTooLarge { d: rows, max: 128 });
    }
    let sets = stable_sets(g);
    let zs = sets
        .iter()
        .map(|&s| {
            let mut z = 0u128;
            for v in 0..n {
                if s >> v & 1 == 0 {
                    z |= 1 << v;
                }
            }
            for (i, &(u, v)) in g.edges.iter().enumerate() {
                if (s >> u & 1) + (s >> v & 1) == 1 {
                    z |= 1 << (n + i);
                }
            }
            for (i, &v) in isolated.iter().enumerate() {
                if s >> v & 1 == 1 {
                    z |= 1 << (n + g.edges.len() + i);
                }
            }
            z
        })
        .collect();
    Ok((sets, zs))
}

/// Stable sets whose vertex lies on exactly `n` facets.
pub fn simple_vertices(g: &BipartiteGraph) -> Result<Vec<u64>> {
    let (sets, zs) = facet_zero_sets(g)?;
    Ok(sets
        .into_iter()
        .zip(zs)
        .filter(|(_, z)| z.count_ones() as usize == g.n)
        .map(|(s, _)| s)
        .collect())
}

/// Vertices adjacent to the origin, found combinatorially: `u` and `w` are
/// adjacent when no third vertex is tight on every facet tight at both.
pub fn zero_vertex_neighbors(g: &BipartiteGraph) -> Result<Vec<u64>> {
    let (sets, zs) = facet_zero_sets(g)?;
    let z0 = zs[0];
    debug_assert_eq!(sets[0], 0);
    Ok((1..sets.len())
        .filter(|&j| {
            let common = z0 & zs[j];
            !(1..sets.len()).any(|t| t != j && zs[t] & common == common)
        })
        .map(|j| sets[j])
        .collect())
}

/// Counts for one node count, with the bounds `2^(n^2/4 + n - 2 log2 n)` and
/// `2^(n^2/4 + n)` on the number of labeled bipartite graphs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub labeled_bipartite: u64,
    pub labeled_min_degree_2: u64,
    pub isomorphism_classes: u64,
    pub slack_classes: u64,
    /// `log2` of `labeled_bipartite`.
    pub log2_count: f64,
    pub lower_exponent: f64,
    /// `n^2/4 + n` as an exact fraction `p/q`.
    pub upper_exponent: String,
    pub lower_bound_holds: bool,
    pub upper_bound_holds: bool,
}

impl CensusReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        format!(
            "n = {}\nlabeled bipartite graphs: {}\nlabeled, min degree >= 2: {}\nisomorphism classes (min degree >= 2): {}\ndistinct maximal slack matrices: {}\nlog2(count) = {:.4}\nlower exponent n^2/4 + n - 2 log2 n = {:.4} ({})\nupper exponent n^2/4 + n = {} ({})\n",
            self.n,
            self.labeled_bipartite,
            self.labeled_min_degree_2,
            self.isomorphism_classes,
            self.slack_classes,
            self.log2_count,
            self.lower_exponent,
            if self.lower_bound_holds { "holds" } else { "violated" },
            self.upper_exponent,
            if self.upper_bound_holds { "holds" } else { "violated" },
        )
    }
}

fn is_bipartite_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Option<Vec<u32>> {
    let mut nb = vec![0u32; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if mask >> i & 1 == 1 {
            nb[u] |= 1 << v;
            nb[v] |= 1 << u;
        }
    }
    let mut color = [u8::MAX; MAX_CENSUS_NODES];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let mut rest = nb[u];
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    stack.push(v);
                } else if color[v] == color[u] {
                    return None;
                }
            }
        }
    }
    Some(nb)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Exhaustive census over all graphs on `n <= 7` labeled nodes.
///
/// Isomorphism classes are found by marking the orbit of each unmarked graph
/// under all `n!` relabelings; each class is then compared through the
/// canonical form of its maximal slack matrix.
pub fn census(n: usize) -> Result<CensusReport> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if n > MAX_CENSUS_NODES {
        return Err(Error::DimensionTooLarge {
            d: n,
            max: MAX_CENSUS_NODES,
        });
    }
    let pairs = edge_pairs(n);
    let m = pairs.len();
    let total = 1u64 << m;
    let classify = |mask: u64| -> (bool, bool) {
        match is_bipartite_mask(n, &pairs, mask) {
            None => (false, false),
            Some(nb) => (true, nb.iter().all(|x| x.count_ones() >= 2)),
        }
    };
    let (labeled, min2) = (0..total)
        .into_par_iter()
        .map(|mask| {
            let (b, m2) = classify(mask);
            (u64::from(b), u64::from(m2))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let index_of = |u: usize, v: usize| -> usize {
        let (a, b) = (u.min(v), u.max(v));
        pairs
            .iter()
            .position(|&p| p == (a, b))
            .expect("pair exists")
    };
    let edge_maps: Vec<Vec<usize>> = permutations(n)
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index_of(p[u], p[v])).collect())
        .collect();
    let mut seen = vec![0u64; (total as usize).div_ceil(64)];
    let mut reps = Vec::new();
    for mask in 0..total {
        if seen[(mask / 64) as usize] >> (mask % 64) & 1 == 1 {
            continue;
        }
        if !classify(mask).1 {
            continue;
        }
        reps.push(mask);
        for map in &edge_maps {
            let mut img = 0u64;
            for (i, &j) in map.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    img |= 1 << j;
                }
            }
            seen[(img / 64) as usize] |= 1 << (img % 64);
        }
    }
    let forms: BTreeSet<CanonicalForm> = reps
        .par_iter()
        .map(|&mask| {
            let g = BipartiteGraph::from_edge_mask(n, mask).expect("bipartite");
            stab_maximal_slack(&g).map(|s| canonical_form(&s.matrix))
        })
        .collect::<Result<_>>()?;

    let nf = n as f64;
    let lower = nf * nf / 4.0 + nf - 2.0 * nf.log2();
    let upper_num = (n * n + 4 * n) as u64;
    let upper = Rat::new(upper_num.into(), 4u64.into());
    let log2_count = (labeled as f64).log2();
    Ok(CensusReport {
        n,
        labeled_bipartite: labeled,
        labeled_min_degree_2: min2,
        isomorphism_classes: reps.len() as u64,
        slack_classes: forms.len() as u64,
        log2_count,
        lower_exponent: lower,
        upper_exponent: format!("{}/{}", upper.numer(), upper.denom()),
        lower_bound_holds: log2_count >= lower,
        upper_bound_holds: log2_count <= upper_num as f64 / 4.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BinaryMatrix;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn cycle(n: usize) -> BipartiteGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        BipartiteGraph::new(n, &edges).unwrap()
    }

    fn k2() -> BipartiteGraph {
        BipartiteGraph::new(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            BipartiteGraph::new(3, &[(0, 1), (1, 2), (0, 2)]),
            Err(Error::NotBipartite)
        );
        assert!(matches!(
            BipartiteGraph::new(2, &[(0, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            BipartiteGraph::new(2, &[(0, 1), (1, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            BipartiteGraph::new(2, &[(0, 2)]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn coloring_is_proper() {
        let g = cycle(6);
        for &(u, v) in g.edges() {
            assert_ne!(g.coloring()[u], g.coloring()[v]);
        }
    }

    #[test]
    fn text_roundtrip() {
        let g = cycle(4);
        assert_eq!(BipartiteGraph::parse(&g.to_text()).unwrap(), g);
        assert!(BipartiteGraph::parse("2\n0 1 2\n").is_err());
        assert!(BipartiteGraph::parse("").is_err());
    }

    #[test]
    fn basic_slack_examples() {
        let s = stab_basic_slack(&cycle(4)).unwrap();
        assert_eq!(s.matrix.shape(), (8, 7));
        let s = stab_basic_slack(&k2()).unwrap();
        assert_eq!(s.matrix.shape(), (3, 3));
        assert_eq!(s.matrix, BinaryMatrix::from_strs(&["010", "001", "100"]));
        let lonely = BipartiteGraph::new(2, &[]).unwrap();
        assert_eq!(stab_basic_slack(&lonely), Err(Error::IsolatedNode(0)));
    }

    #[test]
    fn basic_slack_random_graphs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 500 {
            let n = rng.gen_range(2..=8);
            let left = rng.gen_range(1..n);
            let mut edges = Vec::new();
            for u in 0..left {
                for v in left..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = BipartiteGraph::new(n, &edges).unwrap();
            if g.min_degree() == 0 {
                continue;
            }
            // slack_of rejects any entry outside {0,1}
            let s = stab_basic_slack(&g).unwrap();
            assert_eq!(s.matrix.rows(), n + edges.len());
            checked += 1;
        }
    }

    #[test]
    fn maximal_slack_examples() {
        let basic = stab_basic_slack(&k2()).unwrap();
        let max = stab_maximal_slack(&k2()).unwrap();
        assert!(max.matrix.rows() > basic.matrix.rows());
        assert!(max
            .row_labels
            .contains(&crate::exactlin::rat_vec(&[1, 1, 0])));
        assert!(max
            .row_labels
            .contains(&crate::exactlin::rat_vec(&[0, 0, 0])));
        assert!(max
            .row_labels
            .contains(&crate::exactlin::rat_vec(&[0, 0, -1])));

        let single = BipartiteGraph::new(1, &[]).unwrap();
        assert_eq!(stab_maximal_slack(&single).unwrap().matrix.shape(), (4, 3));
    }

    #[test]
    fn relabeling_preserves_canonical_slack() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for g in [
            cycle(4),
            cycle(6),
            BipartiteGraph::new(5, &[(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)]).unwrap(),
        ] {
            let base = canonical_form(&stab_maximal_slack(&g).unwrap().matrix);
            for _ in 0..5 {
                let mut perm: Vec<usize> = (0..g.n()).collect();
                perm.shuffle(&mut rng);
                let h = g.relabeled(&perm).unwrap();
                assert_eq!(
                    canonical_form(&stab_maximal_slack(&h).unwrap().matrix),
                    base
                );
            }
        }
    }

    #[test]
    fn simple_vertex_examples() {
        assert_eq!(simple_vertices(&cycle(4)).unwrap(), vec![0]);
        assert_eq!(simple_vertices(&k2()).unwrap(), vec![0, 1, 2]);
        let p3 = BipartiteGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let sv = simple_vertices(&p3).unwrap();
        assert!(sv.contains(&0));
        assert!(sv.len() > 1);
    }

    #[test]
    fn zero_neighbor_examples() {
        assert_eq!(zero_vertex_neighbors(&cycle(4)).unwrap(), vec![1, 2, 4, 8]);
        assert_eq!(zero_vertex_neighbors(&k2()).unwrap(), vec![1, 2]);
        let empty = BipartiteGraph::new(2, &[]).unwrap();
        assert_eq!(zero_vertex_neighbors(&empty).unwrap(), vec![1, 2]);
    }

    #[test]
    fn census_small() {
        let r = census(2).unwrap();
        assert_eq!(r.labeled_bipartite, 2);
        assert!(r.lower_bound_holds && r.upper_bound_holds);
        assert_eq!(r.upper_exponent, "3/1");
        let r = census(3).unwrap();
        assert_eq!(r.labeled_bipartite, 7);
        assert!((r.lower_exponent - 2.0801).abs() < 1e-3);
        assert_eq!(r.upper_exponent, "21/4");
        let r = census(4).unwrap();
        assert_eq!(r.labeled_bipartite, 41);
        assert_eq!(r.isomorphism_classes, r.slack_classes);
        // C4 is the only graph on 4 nodes with min degree 2 that is bipartite
        assert_eq!(r.isomorphism_classes, 1);
        assert_eq!(r.labeled_min_degree_2, 3);
        let r = census(1).unwrap();
        assert_eq!(r.labeled_bipartite, 1);
        assert!(!r.lower_bound_holds);
        assert_eq!(census(8), Err(Error::DimensionTooLarge { d: 8, max: 7 }));
    }
}
