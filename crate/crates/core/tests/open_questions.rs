//! Computations whose outcomes are recorded rather than asserted.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use twolevel::config::from_slack_matrix;
use twolevel::corrcone::{lifted_rank, reduced_dim};
use twolevel::enumerate::{enumerate_maximal, EnumOptions};
use twolevel::exactlin::{dot, nullspace, rank_of, Rat, RatMatrix, RatVec};
use twolevel::Configuration;

/// Normals of the facets of `cone(gens)`, scaled to a primitive direction
/// (first nonzero entry of absolute value one).
fn facet_normals(gens: &[RatVec], d: usize) -> Vec<RatVec> {
    let nonzero: Vec<&RatVec> = gens
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .collect();
    let mut out: Vec<RatVec> = Vec::new();
    let n = nonzero.len();
    let mut idx: Vec<usize> = (0..d - 1).collect();
    if d == 1 {
        return vec![vec![Rat::from_integer(1.into())]];
    }
    if n < d - 1 {
        return out;
    }
    loop {
        let rows: Vec<RatVec> = idx.iter().map(|&i| nonzero[i].clone()).collect();
        if rank_of(&rows, d) == d - 1 {
            let ns = nullspace(&RatMatrix::from_rows(&rows, d).unwrap());
            let mut c = ns[0].clone();
            let signs: Vec<Rat> = nonzero.iter().map(|g| dot(&c, g)).collect();
            let pos = signs.iter().any(|s| s.is_positive());
            let neg = signs.iter().any(|s| s.is_negative());
            if !(pos && neg) {
                if neg {
                    c = c.iter().map(|x| -x).collect();
                }
                let lead = c.iter().find(|x| !x.is_zero()).unwrap().abs();
                let c: RatVec = c.iter().map(|x| x / &lead).collect();
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        // next combination
        let mut i = d - 1;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - (d - 1 - i) {
                idx[i] += 1;
                for j in i + 1..d - 1 {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn is_positive_multiple(a: &RatVec, c: &RatVec) -> bool {
    let Some(k) = c.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let t = &a[k] / &c[k];
    t.is_positive() && a.iter().zip(c).all(|(x, y)| *x == &t * y)
}

/// Whether `{x : <a, x> >= 0 for a in A} = cone(B)`.
fn cone_is_exact(cfg: &Configuration) -> (bool, usize) {
    let normals = facet_normals(cfg.b(), cfg.dim());
    let exact = normals
        .iter()
        .all(|c| cfg.a().iter().any(|a| is_positive_multiple(a, c)));
    (exact, normals.len())
}

#[test]
fn maximal_slack_matrices_of_cones() {
    let mut findings = Vec::new();
    for d in 1..=3 {
        let classes = enumerate_maximal(d, &EnumOptions::default())
            .unwrap()
            .classes;
        // Simplicial cones of full dimension are all linearly equivalent, so
        // two inequivalent classes whose B-cone is exact and simplicial are
        // two maximal slack matrices of the same cone.
        let mut simplicial: Vec<String> = Vec::new();
        let mut by_facets: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &classes {
            let cfg = from_slack_matrix(&c.matrix()).unwrap();
            let (exact, facets) = cone_is_exact(&cfg);
            // {Ax >= 0} always contains cone(B) since all products are nonnegative.
            for a in cfg.a() {
                for b in cfg.b() {
                    assert!(!dot(a, b).is_negative());
                }
            }
            if exact {
                *by_facets.entry(facets).or_default() += 1;
                if facets == d {
                    let (r, k) = c.shape();
                    simplicial.push(format!("{r}x{k}"));
                }
            }
        }
        findings.push(format!(
            "d={d}: {} classes; exact cone descriptions by facet count {by_facets:?}; simplicial: {simplicial:?}{}",
            classes.len(),
            if simplicial.len() >= 2 { " -> non-unique maximal slack matrix witnessed" } else { "" }
        ));
    }
    for f in &findings {
        println!("{f}");
    }
    assert_eq!(findings.len(), 3);
}

#[test]
fn degenerate_seeds_for_small_d() {
    for d in 1..=4 {
        let s = enumerate_maximal(d, &EnumOptions::default()).unwrap().stats;
        println!(
            "d={d}: {} spanning seeds, {} with non-spanning closure",
            s.spanning, s.degenerate
        );
        assert!(s.complete);
    }
}

#[test]
fn correlation_cone_dimension() {
    for d in 1..=4 {
        assert_eq!(lifted_rank(d), reduced_dim(d));
        println!("d={d}: lifted rank {}", lifted_rank(d));
    }
}
