//! Generators for joins and the standard example families.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::simplex::LatticeSimplex;

/// `P ⋆ Q = conv({(0, x, 0_e) : x ∈ P} ∪ {(1, 0_d, y) : y ∈ Q})` in
/// `R^{d+e+1}`, with the vertices of `P` listed first.
pub fn join(p: &LatticeSimplex, q: &LatticeSimplex) -> Result<LatticeSimplex> {
    let (d, e) = (p.ambient_dim(), q.ambient_dim());
    let mut vertices = Vec::with_capacity(p.num_vertices() + q.num_vertices());
    for x in p.vertices() {
        let mut v = Vec::with_capacity(d + e + 1);
        v.push(BigInt::zero());
        v.extend(x.iter().cloned());
        v.extend(std::iter::repeat_n(BigInt::zero(), e));
        vertices.push(v);
    }
    for y in q.vertices() {
        let mut v = Vec::with_capacity(d + e + 1);
        v.push(BigInt::one());
        v.extend(std::iter::repeat_n(BigInt::zero(), d));
        v.extend(y.iter().cloned());
        vertices.push(v);
    }
    LatticeSimplex::from_vertices(d + e + 1, vertices)
}

/// A `(2m - 1)`-dimensional simplex with h*-polynomial `1 + c t^m`.
///
/// With `q = c + 1` the vertices are `0, e_1, ..., e_{2m-2}` and
/// `w = (q-1, 1, q-1, 1, ..., q-1, 1, q)`. The box group is cyclic of order
/// `q`, generated by the point with `w`-weight `1/q`; its nonzero multiples
/// pair up coordinates as `(j/q, (q-j)/q)`, `m` pairs in all, so each has
/// height `m`.
pub fn delta_cm(c: u64, m: u64) -> Result<LatticeSimplex> {
    if c == 0 || m == 0 {
        return Err(Error::InvalidParameters(format!("delta_cm needs c, m >= 1 (got c = {c}, m = {m})")));
    }
    let q = BigInt::from(c) + 1;
    let dim = usize::try_from(2 * m - 1).map_err(|_| Error::InvalidParameters("m too large".into()))?;
    let mut vertices = vec![vec![BigInt::zero(); dim]];
    for i in 0..dim - 1 {
        let mut e = vec![BigInt::zero(); dim];
        e[i] = BigInt::one();
        vertices.push(e);
    }
    let mut w: Vec<BigInt> = (0..dim - 1).map(|i| if i % 2 == 0 { &q - 1 } else { BigInt::one() }).collect();
    w.push(q);
    vertices.push(w);
    LatticeSimplex::from_vertices(dim, vertices)
}

/// `delta_cm(a, k) ⋆ delta_cm(b, l)`. Its h*-polynomial is the product
/// `(1 + a t^k)(1 + b t^l) = 1 + a t^k + b t^l + ab t^{k+l}`.
pub fn lemma41_simplex(a: u64, b: u64, k: u64, l: u64) -> Result<LatticeSimplex> {
    join(&delta_cm(a, k)?, &delta_cm(b, l)?)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Simplices whose h* vanishes on `k+1..=2k-1` except at `j`, and whose
/// truncation to degree `k` is not the h*-polynomial of any lattice
/// polytope.
///
/// * `j >= k + 2`: `delta_cm(1, j - k) ⋆ delta_cm(p - 2, k)`.
/// * `j = k + 1`, `k >= 4`: `delta_cm(1, 2) ⋆ delta_cm(p - 2, k - 1)`.
/// * `j = k + 1 = 4`: `conv(0, e_1, ..., e_4, (1, 4, 7, 8, 9))`, with
///   h* = `1 + 2t^2 + 4t^3 + 2t^4` (`p` is unused).
pub fn prop43_instance(k: u64, j: u64, p: u64) -> Result<LatticeSimplex> {
    if k < 3 || j < k + 1 || j > 2 * k - 1 {
        return Err(Error::InvalidParameters(format!("need k >= 3 and k+1 <= j <= 2k-1 (got k = {k}, j = {j})")));
    }
    if j == k + 1 && k == 3 {
        return LatticeSimplex::from_i64(
            5,
            &[
                &[0, 0, 0, 0, 0],
                &[1, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0],
                &[0, 0, 1, 0, 0],
                &[0, 0, 0, 1, 0],
                &[1, 4, 7, 8, 9],
            ],
        );
    }
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidParameters(format!("p must be a prime >= 5 (got {p})")));
    }
    if j >= k + 2 {
        lemma41_simplex(1, p - 2, j - k, k)
    } else {
        lemma41_simplex(1, p - 2, 2, k - 1)
    }
}

/// `conv(0, e_1, ..., e_{d-1}, 2(e_1 + ... + e_{d-1}) + 3 e_d)` with
/// `d = 3k - 1`; h* = `1 + t^k + t^{2k}`.
pub fn remark44_simplex(k: u64) -> Result<LatticeSimplex> {
    if k < 2 {
        return Err(Error::InvalidParameters(format!("need k >= 2 (got {k})")));
    }
    let d = usize::try_from(3 * k - 1).map_err(|_| Error::InvalidParameters("k too large".into()))?;
    let mut vertices = vec![vec![BigInt::zero(); d]];
    for i in 0..d - 1 {
        let mut e = vec![BigInt::zero(); d];
        e[i] = BigInt::one();
        vertices.push(e);
    }
    let mut apex = vec![BigInt::from(2); d];
    apex[d - 1] = BigInt::from(3);
    vertices.push(apex);
    LatticeSimplex::from_vertices(d, vertices)
}

/// A simplex whose box group is the cyclic group generated by
/// `(a_0/q, ..., a_n/q)`, with vertex `i` carrying weight `a_i/q`.
///
/// Requires `0 <= a_i < q`, `sum a_i ≡ 0 (mod q)` and `gcd(a, q) = 1`.
///
/// The lattice `N = Z^{n+1} + Z a/q` is written in coordinates where the
/// first coordinate is the coordinate sum; a row-style Hermite basis of `qN`
/// then has one vector of sum `q` and `n` vectors of sum zero. Expressing the
/// unit vectors in that basis gives integer vertex coordinates whose box
/// points are exactly `N ∩ [0, 1)^{n+1}`.
pub fn cyclic_simplex(q: u64, a: &[u64]) -> Result<LatticeSimplex> {
    if q == 0 || a.is_empty() {
        return Err(Error::InvalidParameters("need q >= 1 and a nonempty generator".into()));
    }
    if a.iter().any(|&x| x >= q) {
        return Err(Error::InvalidParameters("generator entries must lie in [0, q)".into()));
    }
    let sum: u128 = a.iter().map(|&x| u128::from(x)).sum();
    if !sum.is_multiple_of(u128::from(q)) {
        return Err(Error::InvalidParameters("generator coordinates must sum to a multiple of q".into()));
    }
    if a.iter().fold(q, |g, &x| g.gcd(&x)) != 1 {
        return Err(Error::InvalidParameters("gcd(a, q) must be 1".into()));
    }
    let n1 = a.len();
    let qb = BigInt::from(q);
    // T x = (sum x, x_1, ..., x_n), unimodular
    let t = |x: &[BigInt]| -> Vec<BigInt> {
        let mut out = Vec::with_capacity(n1);
        out.push(x.iter().sum());
        out.extend(x[1..].iter().cloned());
        out
    };
    let mut gens = Vec::with_capacity(n1 + 1);
    for i in 0..n1 {
        let mut e = vec![BigInt::zero(); n1];
        e[i] = qb.clone();
        gens.push(t(&e));
    }
    gens.push(t(&a.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()));
    let (h, _) = linalg::hermite_normal_form(&IntMatrix::from_rows(gens)?);
    if h[(0, 0)] != qb {
        return Err(Error::Internal(format!("expected sum pivot {q}, found {}", h[(0, 0)])));
    }
    // basis of N in T-coordinates: columns b_1..b_n (sum zero) then b_0
    let mut basis = IntMatrix::zeros(n1, n1);
    for c in 0..n1 {
        let src = (c + 1) % n1;
        for r in 0..n1 {
            basis[(r, c)] = h[(src, r)].clone();
        }
    }
    // unit vectors in T-coordinates, scaled by q to match the basis of qN
    let mut vertices = Vec::with_capacity(n1);
    for i in 0..n1 {
        let mut e = vec![BigInt::zero(); n1];
        e[i] = qb.clone();
        let coords = linalg::solve_rational(&basis, &t(&e))?;
        let mut v = Vec::with_capacity(n1 - 1);
        for x in &coords[..n1 - 1] {
            if !x.is_integer() {
                return Err(Error::Internal("non-integral vertex coordinate".into()));
            }
            v.push(x.to_integer());
        }
        vertices.push(v);
    }
    LatticeSimplex::from_vertices(n1 - 1, vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::box_group::{BoxGroup, BoxPoint};
    use crate::hstar::HStarVector;
    use crate::oracle;

    fn hstar(s: &LatticeSimplex) -> Vec<u64> {
        HStarVector::of_simplex(s).unwrap().coeffs().to_vec()
    }

    #[test]
    fn join_examples() {
        let pt = LatticeSimplex::unit(0);
        let j = join(&pt, &pt).unwrap();
        assert_eq!(j.dim(), 1);
        assert_eq!(j.normalized_volume(), BigInt::one());
        assert_eq!(hstar(&j), vec![1]);

        let s2 = LatticeSimplex::from_i64(1, &[&[0], &[2]]).unwrap();
        let s3 = LatticeSimplex::from_i64(1, &[&[0], &[3]]).unwrap();
        let j = join(&s2, &s3).unwrap();
        assert_eq!(j.dim(), 3);
        assert_eq!(j.ambient_dim(), 3);
        assert_eq!(j.vertex(0), &[BigInt::zero(), BigInt::zero(), BigInt::zero()]);
        assert_eq!(j.vertex(3), &[BigInt::one(), BigInt::zero(), BigInt::from(3)]);
        assert_eq!(hstar(&j), vec![1, 3, 2]);
        assert_eq!(oracle::hstar_by_interpolation(&j).unwrap().coeffs(), &[1, 3, 2]);
    }

    #[test]
    fn delta_cm_examples() {
        let s = delta_cm(1, 1).unwrap();
        assert_eq!(s.normalized_volume(), BigInt::from(2));
        assert_eq!(hstar(&s), vec![1, 1]);
        assert_eq!(hstar(&delta_cm(2, 2).unwrap()), vec![1, 0, 2]);
        let s = delta_cm(2, 3).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(hstar(&s), vec![1, 0, 0, 2]);
        assert_eq!(oracle::hstar_by_interpolation(&s).unwrap().coeffs(), &[1, 0, 0, 2]);
        assert!(delta_cm(0, 2).is_err());
        assert!(delta_cm(2, 0).is_err());
    }

    #[test]
    fn lemma41_examples() {
        assert_eq!(hstar(&lemma41_simplex(1, 1, 1, 1).unwrap()), vec![1, 2, 1]);
        // (1 + t^2)(1 + 3t^3)
        assert_eq!(hstar(&lemma41_simplex(1, 3, 2, 3).unwrap()), vec![1, 0, 1, 3, 0, 3]);
    }

    #[test]
    fn prop43_examples() {
        let s = prop43_instance(3, 5, 5).unwrap();
        assert_eq!(hstar(&s), vec![1, 0, 1, 3, 0, 3]);
        let s = prop43_instance(4, 5, 5).unwrap();
        assert_eq!(hstar(&s), vec![1, 0, 1, 3, 0, 3]);
        let s = prop43_instance(3, 4, 5).unwrap();
        assert_eq!(hstar(&s), vec![1, 0, 2, 4, 2]);
        assert!(prop43_instance(2, 3, 5).is_err());
        assert!(prop43_instance(3, 6, 5).is_err());
        assert!(prop43_instance(4, 6, 4).is_err());
        assert!(prop43_instance(4, 6, 3).is_err());
    }

    #[test]
    fn remark44_examples() {
        let s = remark44_simplex(2).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(hstar(&s), vec![1, 0, 1, 0, 1]);
        let s = remark44_simplex(3).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(hstar(&s), vec![1, 0, 0, 1, 0, 0, 1]);
        assert!(remark44_simplex(1).is_err());
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn cyclic_simplex_realizes_its_generator() {
        let cases: &[(u64, &[u64])] = &[
            (2, &[0, 1, 1]),
            (3, &[1, 1, 1, 1, 1, 1]),
            (5, &[1, 4, 2, 3]),
            (6, &[2, 3, 3, 4]),
            (7, &[1, 2, 4, 0]),
            (12, &[3, 4, 5, 6, 6]),
            (1, &[0, 0, 0]),
        ];
        for &(q, a) in cases {
            let s = cyclic_simplex(q, a).unwrap();
            assert_eq!(s.num_vertices(), a.len());
            let g = BoxGroup::enumerate(&s).unwrap();
            assert_eq!(g.order() as u64, q);
            let gen = BoxPoint::from_numerators(q, a.to_vec()).unwrap();
            let expected: Vec<BoxPoint> = {
                let mut v: Vec<BoxPoint> = (0..q).map(|j| gen.scale(j)).collect();
                v.sort();
                v
            };
            assert_eq!(g.elements(), expected.as_slice(), "q = {q}, a = {a:?}");
        }
    }

    #[test]
    fn cyclic_simplex_validation() {
        assert!(cyclic_simplex(4, &[1, 1]).is_err());
        assert!(cyclic_simplex(4, &[2, 2]).is_err());
        assert!(cyclic_simplex(4, &[4, 0]).is_err());
        assert!(cyclic_simplex(0, &[0]).is_err());
    }
}
