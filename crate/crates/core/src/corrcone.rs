//! Faces of the correlation cone `K = cone{(x x^T, x) : x in {0,1}^d}`.
//!
//! Faces are represented by their 0/1 point sets, which always contain the
//! origin. Internally lifts are handled in reduced coordinates (the upper
//! triangle of `x x^T`, diagonal included), which determine the full lift.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::{lp_feasible, nullspace, rank_of, IncrementalBasis, Rat, RatMatrix, RatVec};

/// A 0/1 point of `{0,1}^d`.
pub type Point = Vec<u8>;

/// Largest dimension accepted by [`enumerate_faces`].
pub const MAX_FACE_ENUM_DIM: usize = 3;

/// `(x x^T, x)` with the matrix block in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiftedVector {
    pub d: usize,
    pub z: Vec<i64>,
}

/// A sum of linearly independent lifts of points of a face.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceCertificate {
    pub d: usize,
    pub s: Vec<i64>,
}

impl FaceCertificate {
    /// `d` on the first line, the `d^2 + d` entries on the second.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.s.iter().map(|x| x.to_string()).collect();
        format!("{}\n{}\n", self.d, body.join(" "))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let d: usize = lines
            .next()
            .and_then(|l| l.trim().parse().ok())
            .ok_or_else(|| Error::Invalid("certificate: missing dimension line".into()))?;
        let s: Vec<i64> = lines
            .next()
            .unwrap_or("")
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Invalid(format!("certificate: bad entry {t:?}")))
            })
            .collect::<Result<_>>()?;
        if lines.next().is_some() {
            return Err(Error::Invalid("certificate: trailing content".into()));
        }
        if s.len() != d * d + d {
            return Err(Error::DimensionMismatch {
                expected: d * d + d,
                found: s.len(),
            });
        }
        Ok(FaceCertificate { d, s })
    }

    /// Largest entry, bounded by `d(d+1)/2` for encoder output.
    pub fn max_entry(&self) -> i64 {
        self.s.iter().copied().max().unwrap_or(0)
    }
}

fn check_point(x: &[u8], d: usize) -> Result<()> {
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.len(),
        });
    }
    if x.iter().any(|&b| b > 1) {
        return Err(Error::NonBinary);
    }
    Ok(())
}

pub fn lift(x: &[u8]) -> Result<LiftedVector> {
    let d = x.len();
    check_point(x, d)?;
    Ok(LiftedVector { d, z: full_lift(x) })
}

fn full_lift(x: &[u8]) -> Vec<i64> {
    let d = x.len();
    let mut z = Vec::with_capacity(d * d + d);
    for i in 0..d {
        for j in 0..d {
            z.push(i64::from(x[i] & x[j]));
        }
    }
    z.extend(x.iter().map(|&b| i64::from(b)));
    z
}

/// Dimension of the reduced coordinate space, `d(d+1)/2`.
pub fn reduced_dim(d: usize) -> usize {
    d * (d + 1) / 2
}

fn reduced_lift(x: &[u8]) -> RatVec {
    let d = x.len();
    let mut z = Vec::with_capacity(reduced_dim(d));
    for i in 0..d {
        for j in i..d {
            z.push(Rat::from_integer((x[i] & x[j]).into()));
        }
    }
    z
}

/// All points of `{0,1}^d` in lexicographic order.
pub fn cube(d: usize) -> Vec<Point> {
    (0u64..1 << d)
        .map(|m| (0..d).map(|c| ((m >> (d - 1 - c)) & 1) as u8).collect())
        .collect()
}

/// `{x in {0,1}^d : <b,x>(<b,x> - 1) = 0 for all b in bs}`, sorted.
pub fn face_points(bs: &[Vec<i64>], d: usize) -> Result<Vec<Point>> {
    for b in bs {
        if b.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: b.len(),
            });
        }
    }
    Ok(cube(d)
        .into_par_iter()
        .filter(|x| {
            bs.iter().all(|b| {
                let p: i64 = b.iter().zip(x).map(|(bi, &xi)| bi * i64::from(xi)).sum();
                p == 0 || p == 1
            })
        })
        .collect())
}

fn normalize_set(xs: &[Point], d: usize) -> Result<Vec<Point>> {
    for x in xs {
        check_point(x, d)?;
    }
    let set: BTreeSet<Point> = xs.iter().cloned().collect();
    Ok(set.into_iter().collect())
}

/// Whether `xs` is the point set of a face of `K`: some linear functional
/// vanishes on the lifts of `xs` and is at least 1 on every other lift.
pub fn is_face(xs: &[Point], d: usize) -> Result<bool> {
    let xs = normalize_set(xs, d)?;
    if !xs.contains(&vec![0; d]) {
        return Ok(false);
    }
    let others: Vec<Point> = cube(d).into_iter().filter(|y| !xs.contains(y)).collect();
    if others.is_empty() {
        return Ok(true);
    }
    let r = reduced_dim(d);
    let members: Vec<&Point> = xs.iter().filter(|x| x.contains(&1)).collect();
    let rows = members.len() + others.len();
    let cols = r + others.len();
    let mut a = RatMatrix::zeros(rows, cols);
    let mut rhs = vec![Rat::from_integer(0.into()); rows];
    for (i, x) in members.iter().enumerate() {
        for (j, v) in reduced_lift(x).into_iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    for (k, y) in others.iter().enumerate() {
        let i = members.len() + k;
        for (j, v) in reduced_lift(y).into_iter().enumerate() {
            a[(i, j)] = v;
        }
        a[(i, r + k)] = Rat::from_integer((-1).into());
        rhs[i] = Rat::from_integer(1.into());
    }
    let mut nonneg = vec![false; r];
    nonneg.extend(std::iter::repeat_n(true, others.len()));
    Ok(lp_feasible(&a, &rhs, &nonneg)?.is_some())
}

/// Certificate of a face: the sum of the lifts of a greedily chosen maximal
/// independent subset of its nonzero points, scanned in sorted order.
pub fn certificate_encode(xs: &[Point], d: usize) -> Result<FaceCertificate> {
    if !is_face(xs, d)? {
        return Err(Error::NotAFace);
    }
    Ok(encode_unchecked(&normalize_set(xs, d)?, d))
}

/// [`certificate_encode`] without the face test; `xs` must be sorted, valid points.
pub(crate) fn encode_unchecked(xs: &[Point], d: usize) -> FaceCertificate {
    let mut basis = IncrementalBasis::new(reduced_dim(d));
    let mut s = vec![0i64; d * d + d];
    for x in xs {
        if x.iter().all(|&b| b == 0) {
            continue;
        }
        if basis.insert(&reduced_lift(x)) {
            for (si, zi) in s.iter_mut().zip(full_lift(x)) {
                *si += zi;
            }
        }
    }
    FaceCertificate { d, s }
}

/// The point set of the smallest face containing the certificate.
///
/// A point belongs to it exactly when its lift can carry positive weight in
/// some nonnegative decomposition of `s`; each candidate is settled either by
/// lying in the span of already-found members or by an exact LP.
pub fn certificate_decode(cert: &FaceCertificate) -> Result<Vec<Point>> {
    let d = cert.d;
    if cert.s.len() != d * d + d {
        return Err(Error::DimensionMismatch {
            expected: d * d + d,
            found: cert.s.len(),
        });
    }
    let at = |i: usize, j: usize| cert.s[i * d + j];
    for i in 0..d {
        if at(i, i) != cert.s[d * d + i] {
            return Err(Error::NotInCone);
        }
        for j in 0..d {
            if at(i, j) != at(j, i) || at(i, j) < 0 {
                return Err(Error::NotInCone);
            }
        }
    }
    let zero = vec![0u8; d];
    let candidates: Vec<Point> = cube(d)
        .into_iter()
        .filter(|x| x.contains(&1))
        .filter(|x| (0..d).all(|i| (i..d).all(|j| x[i] & x[j] == 0 || at(i, j) > 0)))
        .collect();
    let target: RatVec = (0..d)
        .flat_map(|i| (i..d).map(move |j| (i, j)))
        .map(|(i, j)| Rat::from_integer(at(i, j).into()))
        .collect();
    if cert.s.iter().all(|&v| v == 0) {
        return Ok(vec![zero]);
    }
    let r = reduced_dim(d);
    let lifts: Vec<RatVec> = candidates.iter().map(|x| reduced_lift(x)).collect();
    let gens = RatMatrix::from_columns(&lifts, r)?;

    let lambda =
        lp_feasible(&gens, &target, &vec![true; candidates.len()])?.ok_or(Error::NotInCone)?;
    let mut member = vec![false; candidates.len()];
    let mut rejected = vec![false; candidates.len()];
    let mut basis = IncrementalBasis::new(r);
    let admit = |idx: usize, member: &mut Vec<bool>, basis: &mut IncrementalBasis| {
        member[idx] = true;
        basis.insert(&lifts[idx]);
    };
    for (i, l) in lambda.iter().enumerate() {
        if l > &Rat::from_integer(0.into()) {
            admit(i, &mut member, &mut basis);
        }
    }
    for x in 0..candidates.len() {
        if member[x] || rejected[x] {
            continue;
        }
        if basis.contains(&lifts[x]) {
            admit(x, &mut member, &mut basis);
            continue;
        }
        // sum_g lambda_g lift(g) + mu lift(x) - alpha s = -lift(x), all variables >= 0,
        // i.e. s is a positive multiple of a decomposition with weight >= 1 on x.
        let n = candidates.len();
        let mut a = RatMatrix::zeros(r, n + 1);
        for j in 0..n {
            for i in 0..r {
                a[(i, j)] = gens[(i, j)].clone();
            }
        }
        for i in 0..r {
            a[(i, n)] = -target[i].clone();
        }
        let rhs: RatVec = lifts[x].iter().map(|v| -v.clone()).collect();
        match lp_feasible(&a, &rhs, &vec![true; n + 1])? {
            Some(sol) => {
                admit(x, &mut member, &mut basis);
                for j in 0..n {
                    if sol[j] > Rat::from_integer(0.into()) && !member[j] {
                        admit(j, &mut member, &mut basis);
                    }
                }
            }
            None => rejected[x] = true,
        }
    }
    let mut out = vec![zero];
    out.extend(
        candidates
            .into_iter()
            .zip(member)
            .filter(|(_, m)| *m)
            .map(|(x, _)| x),
    );
    out.sort();
    Ok(out)
}

fn check_enum_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if d > MAX_FACE_ENUM_DIM {
        return Err(Error::DimensionTooLarge {
            d,
            max: MAX_FACE_ENUM_DIM,
        });
    }
    Ok(())
}

/// Every face of `K` as a sorted point set, by testing every subset of the
/// cube that contains the origin. Output is sorted.
pub fn enumerate_faces(d: usize) -> Result<Vec<Vec<Point>>> {
    check_enum_dim(d)?;
    let pts = cube(d);
    let n = pts.len();
    // index 0 is the origin; every face contains it
    let masks: Vec<u64> = (0u64..1 << (n - 1)).map(|m| (m << 1) | 1).collect();
    let faces: Vec<Option<Vec<Point>>> = masks
        .par_iter()
        .map(|&m| {
            let xs: Vec<Point> = (0..n)
                .filter(|&i| (m >> i) & 1 == 1)
                .map(|i| pts[i].clone())
                .collect();
            is_face(&xs, d).map(|f| f.then_some(xs))
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<Vec<Point>> = faces.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// Every face of `K`, computed as the intersections of its facets. Facets are
/// found by brute force over hyperplanes spanned by lifted points.
pub fn enumerate_faces_by_facets(d: usize) -> Result<Vec<Vec<Point>>> {
    check_enum_dim(d)?;
    let r = reduced_dim(d);
    let pts: Vec<Point> = cube(d).into_iter().skip(1).collect();
    let lifts: Vec<RatVec> = pts.iter().map(|x| reduced_lift(x)).collect();
    let zero = vec![0u8; d];
    let full: BTreeSet<Point> = cube(d).into_iter().collect();
    let mut faces: BTreeSet<BTreeSet<Point>> = BTreeSet::new();
    faces.insert(full);
    for subset in k_subsets(lifts.len(), r - 1) {
        let rows: Vec<RatVec> = subset.iter().map(|&i| lifts[i].clone()).collect();
        if rank_of(&rows, r) != r - 1 {
            continue;
        }
        let normal = nullspace(&RatMatrix::from_rows(&rows, r)?)
            .pop()
            .expect("corank one");
        let vals: Vec<Rat> = lifts
            .iter()
            .map(|l| crate::exactlin::dot(&normal, l))
            .collect();
        let zero_r = Rat::from_integer(0.into());
        let nonneg = vals.iter().all(|v| *v >= zero_r);
        let nonpos = vals.iter().all(|v| *v <= zero_r);
        if !(nonneg || nonpos) {
            continue;
        }
        let mut f: BTreeSet<Point> = pts
            .iter()
            .zip(&vals)
            .filter(|(_, v)| **v == zero_r)
            .map(|(p, _)| p.clone())
            .collect();
        f.insert(zero.clone());
        faces.insert(f);
    }
    loop {
        let current: Vec<BTreeSet<Point>> = faces.iter().cloned().collect();
        let before = faces.len();
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                faces.insert(current[i].intersection(&current[j]).cloned().collect());
            }
        }
        if faces.len() == before {
            break;
        }
    }
    let mut out: Vec<Vec<Point>> = faces.into_iter().map(|f| f.into_iter().collect()).collect();
    out.sort();
    Ok(out)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Rank of the lifts of all cube points; equals `d(d+1)/2`.
pub fn lifted_rank(d: usize) -> usize {
    let lifts: Vec<RatVec> = cube(d).iter().map(|x| reduced_lift(x)).collect();
    let full: Vec<RatVec> = cube(d)
        .iter()
        .map(|x| {
            full_lift(x)
                .into_iter()
                .map(|v| Rat::from_integer(v.into()))
                .collect()
        })
        .collect();
    let r = rank_of(&full, d * d + d);
    debug_assert_eq!(r, rank_of(&lifts, reduced_dim(d)));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn p(s: &str) -> Point {
        s.bytes().map(|b| b - b'0').collect()
    }

    fn ps(xs: &[&str]) -> Vec<Point> {
        xs.iter().map(|s| p(s)).collect()
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift(&p("11")).unwrap().z, vec![1, 1, 1, 1, 1, 1]);
        assert_eq!(lift(&p("10")).unwrap().z, vec![1, 0, 0, 0, 1, 0]);
        assert_eq!(lift(&p("00")).unwrap().z, vec![0; 6]);
        assert_eq!(lift(&[2, 0]), Err(Error::NonBinary));
    }

    #[test]
    fn face_points_examples() {
        assert_eq!(
            face_points(&[vec![1, -1]], 2).unwrap(),
            ps(&["00", "10", "11"])
        );
        assert_eq!(face_points(&[], 2).unwrap(), cube(2));
        assert_eq!(
            face_points(&[vec![1, 0], vec![0, 1], vec![1, 1]], 2).unwrap(),
            ps(&["00", "01", "10"])
        );
    }

    #[test]
    fn is_face_examples() {
        assert!(is_face(&ps(&["00", "10", "11"]), 2).unwrap());
        assert!(!is_face(&ps(&["10", "01"]), 2).unwrap());
        assert!(is_face(&ps(&["00", "10", "01"]), 2).unwrap());
        assert!(is_face(&cube(2), 2).unwrap());
        assert!(is_face(&cube(3), 3).unwrap());
        assert!(is_face(&ps(&["000"]), 3).unwrap());
    }

    #[test]
    fn encode_examples() {
        let c = certificate_encode(&ps(&["00", "10", "11"]), 2).unwrap();
        assert_eq!(c.s, vec![2, 1, 1, 1, 2, 1]);
        assert_eq!(certificate_encode(&ps(&["0"]), 1).unwrap().s, vec![0, 0]);
        assert_eq!(
            certificate_encode(&ps(&["10", "01"]), 2),
            Err(Error::NotAFace)
        );
    }

    #[test]
    fn decode_examples() {
        let c = FaceCertificate {
            d: 2,
            s: vec![2, 1, 1, 1, 2, 1],
        };
        assert_eq!(certificate_decode(&c).unwrap(), ps(&["00", "10", "11"]));
        let z = FaceCertificate {
            d: 2,
            s: vec![0; 6],
        };
        assert_eq!(certificate_decode(&z).unwrap(), ps(&["00"]));
        let bad = FaceCertificate {
            d: 2,
            s: vec![1, 1, 0, 1, 1, 0],
        };
        assert_eq!(certificate_decode(&bad), Err(Error::NotInCone));
    }

    #[test]
    fn d1_faces() {
        let faces = enumerate_faces(1).unwrap();
        assert_eq!(faces, vec![ps(&["0"]), ps(&["0", "1"])]);
        assert_eq!(enumerate_faces_by_facets(1).unwrap(), faces);
    }

    #[test]
    fn face_counts_agree() {
        for d in 1..=3 {
            let a = enumerate_faces(d).unwrap();
            let b = enumerate_faces_by_facets(d).unwrap();
            assert_eq!(a, b, "d = {d}");
        }
        assert_eq!(enumerate_faces(2).unwrap().len(), 8);
        assert!(matches!(
            enumerate_faces(4),
            Err(Error::DimensionTooLarge { d: 4, max: 3 })
        ));
    }

    #[test]
    fn roundtrip_all_faces() {
        for d in 1..=3 {
            let bound = reduced_dim(d) as i64;
            for f in enumerate_faces(d).unwrap() {
                let c = certificate_encode(&f, d).unwrap();
                assert!(c.max_entry() <= bound);
                assert!(c.s.iter().all(|&v| v >= 0));
                assert_eq!(certificate_decode(&c).unwrap(), f);
            }
        }
    }

    #[test]
    fn lifted_rank_is_full() {
        for d in 1..=4 {
            assert_eq!(lifted_rank(d), reduced_dim(d));
        }
    }

    #[test]
    fn certificate_text_roundtrip() {
        let c = FaceCertificate {
            d: 2,
            s: vec![2, 1, 1, 1, 2, 1],
        };
        assert_eq!(c.to_text(), "2\n2 1 1 1 2 1\n");
        assert_eq!(FaceCertificate::parse(&c.to_text()).unwrap(), c);
        assert!(FaceCertificate::parse("2\n1 2 3").is_err());
        assert!(FaceCertificate::parse("x").is_err());
    }

    #[test]
    fn key_inequality_exhaustive() {
        for d in 1..=3 {
            let vals: Vec<i64> = (-3..=3).collect();
            let mut b = vec![-3i64; d];
            loop {
                for x in cube(d) {
                    let z = full_lift(&x);
                    let mut c: Vec<i64> = Vec::new();
                    for i in 0..d {
                        for j in 0..d {
                            c.push(b[i] * b[j]);
                        }
                    }
                    c.extend(b.iter().map(|v| -v));
                    let ip: i64 = c.iter().zip(&z).map(|(a, b)| a * b).sum();
                    let bx: i64 = b.iter().zip(&x).map(|(a, &b)| a * i64::from(b)).sum();
                    assert_eq!(ip, bx * bx - bx);
                    assert!(ip >= 0);
                }
                let mut i = 0;
                while i < d && b[i] == *vals.last().unwrap() {
                    b[i] = -3;
                    i += 1;
                }
                if i == d {
                    break;
                }
                b[i] += 1;
            }
        }
    }

    #[test]
    fn face_points_match_closure() {
        use crate::config::closure;
        use crate::exactlin::rat_vec;
        let bs = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 1], vec![0, 0, 1]];
        let rb: Vec<RatVec> = bs.iter().map(|b| rat_vec(b)).collect();
        let mut from_closure: Vec<Point> = closure(&rb, 3)
            .unwrap()
            .into_iter()
            .filter(|v| crate::config::is_binary_vector(v))
            .map(|v| v.iter().map(|x| u8::from(x.is_one())).collect())
            .collect();
        from_closure.sort();
        assert_eq!(face_points(&bs, 3).unwrap(), from_closure);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn face_points_are_faces(
            d in 1usize..=3,
            entries in proptest::collection::vec(-2i64..=2, 12),
            count in 0usize..=4,
        ) {
            let bs: Vec<Vec<i64>> = entries.chunks(3).take(count).map(|c| c[..d].to_vec()).collect();
            let f = face_points(&bs, d).unwrap();
            prop_assert!(is_face(&f, d).unwrap());
            let c = certificate_encode(&f, d).unwrap();
            prop_assert_eq!(certificate_decode(&c).unwrap(), f);
        }
    }
}
