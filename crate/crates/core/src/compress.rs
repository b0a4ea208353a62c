//! Succinct encoding of maximal configurations with a binary side B.
//!
//! A few vectors `b_1, ..., b_k` of B generating the lattice spanned by B are
//! kept. Each `a` in A is mapped to `zeta(a) = (<a, b_i>)_i in {0,1}^k` and each
//! `b` in B to integer coefficients `phi(b)` with `sum phi(b)_i b_i = b`, so
//! `<zeta(a), phi(b)> = <a, b>`. The images of A lie in a face of the
//! correlation cone in dimension `k`, stored by its certificate.

use num_traits::{One, ToPrimitive, Zero};

use crate::config::{closure, is_binary_vector, Configuration};
use crate::corrcone::{certificate_decode, encode_unchecked, face_points, FaceCertificate, Point};
use crate::error::{Error, Result};
use crate::exactlin::{
    dot, echelon_coordinates, greedy_independent, hnf, lattice_determinant, lattice_member, solve,
    Int, IntLatticeBasis, IntMatrix, Rat, RatMatrix, RatVec,
};

/// Ordered generators whose first `d` entries are linearly independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    d: usize,
    gens: Vec<Point>,
}

/// Generators plus the certificate of the face containing `zeta(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedConfig {
    pub gens: GeneratorSet,
    pub cert: FaceCertificate,
}

fn check_points(d: usize, xs: &[Point]) -> Result<()> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    for x in xs {
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len(),
            });
        }
        if x.iter().any(|&b| b > 1) {
            return Err(Error::NonBinary);
        }
    }
    Ok(())
}

fn point_to_rat(x: &[u8]) -> RatVec {
    x.iter().map(|&b| Rat::from_integer(b.into())).collect()
}

fn point_to_int(x: &[u8]) -> Vec<Int> {
    x.iter().map(|&b| Int::from(b)).collect()
}

impl GeneratorSet {
    /// Checks that the first `d` generators are linearly independent.
    pub fn new(d: usize, gens: Vec<Point>) -> Result<Self> {
        check_points(d, &gens)?;
        let head: Vec<RatVec> = gens.iter().take(d).map(|g| point_to_rat(g)).collect();
        if head.len() < d || greedy_independent(&head, d).len() < d {
            return Err(Error::NotSpanning(d));
        }
        Ok(GeneratorSet { d, gens })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Point] {
        &self.gens
    }

    fn int_rows(&self) -> Vec<Vec<Int>> {
        self.gens.iter().map(|g| point_to_int(g)).collect()
    }

    /// `|det|` of the lattice generated by the first `j` generators, for `j = d..=k`.
    pub fn lattice_determinants(&self) -> Vec<Int> {
        let rows = self.int_rows();
        (self.d..=self.k())
            .map(|j| {
                let l =
                    IntLatticeBasis::from_generators(self.d, &rows[..j]).expect("generators span");
                lattice_determinant(&l).expect("full rank")
            })
            .collect()
    }
}

/// The bound `d + d log2 d` on the number of generators (`d` when `d = 1`).
pub fn generator_bound(d: usize) -> f64 {
    let d = d as f64;
    d + d * d.log2()
}

/// Starts from the first `d` independent vectors of sorted `b` and appends the
/// first vector outside the current lattice until the lattice of `b` is reached.
pub fn select_generators(b: &[Point], d: usize) -> Result<GeneratorSet> {
    check_points(d, b)?;
    let mut sorted = b.to_vec();
    sorted.sort();
    sorted.dedup();
    let rats: Vec<RatVec> = sorted.iter().map(|x| point_to_rat(x)).collect();
    let idx = greedy_independent(&rats, d);
    if idx.len() < d {
        return Err(Error::NotSpanning(d));
    }
    let mut gens: Vec<Point> = idx.iter().map(|&i| sorted[i].clone()).collect();
    loop {
        let rows: Vec<Vec<Int>> = gens.iter().map(|g| point_to_int(g)).collect();
        let lattice = IntLatticeBasis::from_generators(d, &rows)?;
        let mut outside = None;
        for x in &sorted {
            if !lattice_member(&lattice, &point_to_int(x))? {
                outside = Some(x.clone());
                break;
            }
        }
        match outside {
            Some(x) => gens.push(x),
            None => break,
        }
    }
    Ok(GeneratorSet { d, gens })
}

/// `(<a, b_1>, ..., <a, b_k>)`; every product must be 0 or 1.
pub fn zeta(a: &[Rat], gs: &GeneratorSet) -> Result<Point> {
    if a.len() != gs.d {
        return Err(Error::DimensionMismatch {
            expected: gs.d,
            found: a.len(),
        });
    }
    gs.gens
        .iter()
        .enumerate()
        .map(|(index, g)| {
            let p = dot(a, &point_to_rat(g));
            if p.is_zero() {
                Ok(0)
            } else if p.is_one() {
                Ok(1)
            } else {
                Err(Error::NonBinaryProduct {
                    index,
                    value: p.to_string(),
                })
            }
        })
        .collect()
}

/// Integer coefficients `lambda` with `sum lambda_i b_i = b`; a generator
/// `b_i` maps to `e_i`. Other vectors get coordinates from the Hermite normal
/// form of the generator matrix.
pub fn phi(b: &[Int], gs: &GeneratorSet) -> Result<Vec<Int>> {
    if b.len() != gs.d {
        return Err(Error::DimensionMismatch {
            expected: gs.d,
            found: b.len(),
        });
    }
    let k = gs.k();
    let rows = gs.int_rows();
    if let Some(i) = rows.iter().position(|r| r.as_slice() == b) {
        let mut e = vec![Int::zero(); k];
        e[i] = Int::one();
        return Ok(e);
    }
    let (h, u) = hnf(&IntMatrix::from_rows(&rows, gs.d));
    let coords = echelon_coordinates(&h, b).ok_or(Error::NotInLattice)?;
    // b = sum_r c_r h_r and h = u g, so lambda_j = sum_r c_r u_{r,j}.
    Ok((0..k)
        .map(|j| {
            coords
                .iter()
                .enumerate()
                .fold(Int::zero(), |acc, (r, c)| acc + c * &u[(r, j)])
        })
        .collect())
}

/// `{a' in {0,1}^k : <a', phi(b)> in {0,1} for every b in bs}`.
pub fn lifted_face(bs: &[Point], gs: &GeneratorSet) -> Result<Vec<Point>> {
    let phis: Vec<Vec<i64>> = bs
        .iter()
        .map(|b| {
            phi(&point_to_int(b), gs)?
                .iter()
                .map(|x| {
                    x.to_i64()
                        .ok_or_else(|| Error::Invalid("coefficient overflow".into()))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    face_points(&phis, gs.k())
}

fn binary_side(vs: &[RatVec]) -> Result<Vec<Point>> {
    vs.iter()
        .map(|v| {
            if is_binary_vector(v) {
                Ok(v.iter().map(|x| u8::from(x.is_one())).collect())
            } else {
                Err(Error::NonBinary)
            }
        })
        .collect()
}

/// Encodes a maximal configuration whose side B is binary.
pub fn compress(cfg: &Configuration) -> Result<CompressedConfig> {
    if !cfg.is_maximal() {
        return Err(Error::Invalid("configuration is not maximal".into()));
    }
    let b = binary_side(cfg.b())?;
    let gens = select_generators(&b, cfg.dim())?;
    let face = lifted_face(&b, &gens)?;
    let cert = encode_unchecked(&face, gens.k());
    Ok(CompressedConfig { gens, cert })
}

/// Recovers `A = {a : zeta(a) in A'}` from the decoded face `A'`, then `B = closure(A)`.
pub fn decompress(cc: &CompressedConfig) -> Result<Configuration> {
    let (d, k) = (cc.gens.d, cc.gens.k());
    if cc.cert.d != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: cc.cert.d,
        });
    }
    let face = certificate_decode(&cc.cert)?;
    let g_rows: Vec<RatVec> = cc.gens.gens.iter().map(|g| point_to_rat(g)).collect();
    let g = RatMatrix::from_rows(&g_rows, d)?;
    let mut a: Vec<RatVec> = Vec::new();
    for ap in &face {
        let target = point_to_rat(ap);
        if let Some(sol) = solve(&g, &target)? {
            a.push(sol);
        }
    }
    if a.is_empty() {
        return Err(Error::EmptyDecode);
    }
    a.sort();
    a.dedup();
    let b = closure(&a, d)?;
    Configuration::new(d, a, b)
}

/// Text form: `k d`, the `k` generator rows, the upper triangle of the
/// symmetric `k x k` certificate block (row `i` holds columns `i..k`), and
/// the length-`k` tail.
pub fn weighted_graph_serialize(cc: &CompressedConfig) -> String {
    let (d, k) = (cc.gens.d, cc.gens.k());
    let mut out = format!("{k} {d}\n");
    for g in &cc.gens.gens {
        out.extend(g.iter().map(|&b| if b == 1 { '1' } else { '0' }));
        out.push('\n');
    }
    let s = &cc.cert.s;
    for i in 0..k {
        let row: Vec<String> = (i..k).map(|j| s[i * k + j].to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    let tail: Vec<String> = s[k * k..].iter().map(|x| x.to_string()).collect();
    out.push_str(&tail.join(" "));
    out.push('\n');
    out
}

pub fn weighted_graph_parse(text: &str) -> Result<CompressedConfig> {
    let lines: Vec<&str> = text.lines().collect();
    let bad =
        |line: usize, msg: &str| Error::Invalid(format!("weighted graph line {}: {msg}", line + 1));
    let ints = |line: usize| -> Result<Vec<i64>> {
        lines
            .get(line)
            .ok_or_else(|| bad(line, "missing line"))?
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| bad(line, &format!("bad integer {t:?}")))
            })
            .collect()
    };
    let header = ints(0)?;
    let [k, d] = header[..] else {
        return Err(bad(0, "expected `k d`"));
    };
    let (k, d) = (
        usize::try_from(k).map_err(|_| bad(0, "negative k"))?,
        usize::try_from(d).map_err(|_| bad(0, "negative d"))?,
    );
    let mut gens = Vec::with_capacity(k);
    for i in 0..k {
        let line = lines
            .get(1 + i)
            .ok_or_else(|| bad(1 + i, "missing generator"))?
            .trim_end();
        let g: Point = line
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(bad(1 + i, &format!("unexpected character {c:?}"))),
            })
            .collect::<Result<_>>()?;
        if g.len() != d {
            return Err(bad(1 + i, "generator length differs from d"));
        }
        gens.push(g);
    }
    let mut s = vec![0i64; k * k + k];
    for i in 0..k {
        let line = 1 + k + i;
        let row = ints(line)?;
        if row.len() != k - i {
            return Err(bad(line, "wrong number of weights"));
        }
        for (off, w) in row.into_iter().enumerate() {
            s[i * k + i + off] = w;
            s[(i + off) * k + i] = w;
        }
    }
    let tail_line = 1 + 2 * k;
    let tail = ints(tail_line)?;
    if tail.len() != k {
        return Err(bad(tail_line, "wrong tail length"));
    }
    s[k * k..].copy_from_slice(&tail);
    if lines[tail_line + 1..].iter().any(|l| !l.trim().is_empty()) {
        return Err(bad(tail_line + 1, "trailing content"));
    }
    Ok(CompressedConfig {
        gens: GeneratorSet::new(d, gens)?,
        cert: FaceCertificate { d: k, s },
    })
}
