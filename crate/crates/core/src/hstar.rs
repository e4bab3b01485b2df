//! h*-vectors and the quantities derived from them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::box_group::BoxGroup;
use crate::error::{Error, Result};
use crate::oracle::PointCounter;
use crate::simplex::LatticeSimplex;

/// `C(a, b)`, defined as zero when `a < b`.
pub fn binomial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Coefficients `h*_0, h*_1, ...` with trailing zeros trimmed.
///
/// `dim` records the dimension of the polytope the vector came from, when
/// known; several classical facts are indexed by it rather than by degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HStarVector {
    coeffs: Vec<u64>,
    dim: Option<usize>,
}

impl HStarVector {
    pub fn new(mut coeffs: Vec<u64>, dim: Option<usize>) -> Result<Self> {
        if coeffs.first() != Some(&1) {
            return Err(Error::InvalidHStar("h*_0 must be 1".into()));
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if let Some(d) = dim {
            if coeffs.len() > d + 1 {
                return Err(Error::InvalidHStar(format!("degree {} exceeds dimension {d}", coeffs.len() - 1)));
            }
        }
        Ok(HStarVector { coeffs, dim })
    }

    /// `h*_h = |{α : height(α) = h}|`.
    pub fn from_box_group(group: &BoxGroup) -> Self {
        let degree = group.max_height() as usize;
        let mut coeffs = vec![0u64; degree + 1];
        for p in group.elements() {
            coeffs[p.height() as usize] += 1;
        }
        HStarVector { coeffs, dim: Some(group.simplex().dim()) }
    }

    /// Enumerates the box group (default cap) and reads off h*.
    pub fn of_simplex(simplex: &LatticeSimplex) -> Result<Self> {
        Ok(Self::from_box_group(&BoxGroup::enumerate(simplex)?))
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `h*_i`, zero past the degree.
    pub fn get(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(self.coeffs.clone(), Some(dim))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Sum of the coefficients.
    pub fn normalized_volume(&self) -> BigInt {
        self.coeffs.iter().map(|&c| BigInt::from(c)).sum()
    }

    /// `E(n) = sum_i h*_i C(n + d - i, d)`.
    pub fn ehrhart(&self, d: usize, n: u64) -> Result<BigInt> {
        if self.coeffs.len() > d + 1 {
            return Err(Error::PreconditionNotMet(format!(
                "h*-vector of degree {} does not fit dimension {d}",
                self.degree()
            )));
        }
        let d = d as u64;
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != 0)
            .map(|(i, &h)| {
                // n + d - i >= 0 since i <= d
                BigInt::from(h) * binomial(n + d - i as u64, d)
            })
            .sum())
    }

    /// Polynomial product; the dimension context is dropped.
    pub fn multiply(&self, other: &HStarVector) -> HStarVector {
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        HStarVector { coeffs, dim: None }
    }

    /// `sum_{i <= k} h*_i t^i`, without dimension context.
    pub fn truncate(&self, k: usize) -> HStarVector {
        let mut coeffs: Vec<u64> = self.coeffs.iter().take(k + 1).copied().collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        HStarVector { coeffs, dim: None }
    }

    /// Coefficient equality, ignoring the dimension context.
    pub fn same_polynomial(&self, other: &HStarVector) -> bool {
        self.coeffs == other.coeffs
    }
}

/// Formats as a polynomial in `t`, e.g. `1 + 2t^2 + 4t^3`.
impl fmt::Display for HStarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// How a [`Fact`] compares its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    AtLeast,
}

/// One evaluated identity or inequality: `lhs (= | >=) rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub relation: Relation,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl Fact {
    fn new(name: impl Into<String>, relation: Relation, lhs: impl Into<BigInt>, rhs: impl Into<BigInt>) -> Self {
        Fact { name: name.into(), relation, lhs: lhs.into(), rhs: rhs.into() }
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Equal => self.lhs == self.rhs,
            Relation::AtLeast => self.lhs >= self.rhs,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Equal => "=",
            Relation::AtLeast => ">=",
        };
        write!(f, "{}: {} {op} {}", self.name, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactReport {
    pub facts: Vec<Fact>,
}

impl FactReport {
    pub fn all_hold(&self) -> bool {
        self.facts.iter().all(Fact::holds)
    }

    pub fn first_failure(&self) -> Option<&Fact> {
        self.facts.iter().find(|f| !f.holds())
    }
}

/// Checks the classical facts relating `h` to point counts of the simplex:
/// `h*_0 = 1`, normalized volume equals the group order,
/// `h*_1 = |S ∩ Z^d| - (d + 1)`, `h*_i = |interior of (d + 1 - i) S|` for
/// `deg <= i <= d`, `h*_1 >= h*_d`, and Hibi's lower bound when `h*_d > 0`.
///
/// These are theorems, so any failure is reported as [`Error::Internal`]
/// carrying the violated fact.
pub fn structural_facts(
    simplex: &LatticeSimplex,
    group: &BoxGroup,
    h: &HStarVector,
    counter: &PointCounter,
) -> Result<FactReport> {
    let full = simplex.restrict_to_affine_lattice();
    let d = full.dim();
    let mut facts = vec![
        Fact::new("h*_0 = 1", Relation::Equal, h.get(0), 1u64),
        Fact::new("h*_i >= 0", Relation::AtLeast, h.coeffs().iter().min().copied().unwrap_or(0), 0u64),
        Fact::new("normalized volume = box group order", Relation::Equal, h.normalized_volume(), group.order() as u64),
        Fact::new("normalized volume = |det|", Relation::Equal, h.normalized_volume(), full.homogenize()?.volume()),
        Fact::new(
            "h*_1 = |S ∩ Z^d| - (d+1)",
            Relation::Equal,
            BigInt::from(h.get(1)),
            counter.count(1)? - (d as u64 + 1),
        ),
    ];
    for i in h.degree()..=d {
        facts.push(Fact::new(
            format!("h*_{i} = interior points of {}S", d + 1 - i),
            Relation::Equal,
            h.get(i),
            counter.count_interior((d + 1 - i) as u64)?,
        ));
    }
    if d >= 1 {
        facts.push(Fact::new(format!("h*_1 >= h*_{d}"), Relation::AtLeast, h.get(1), h.get(d)));
        if h.get(d) > 0 {
            for i in 1..d {
                facts.push(Fact::new(format!("h*_{i} >= h*_1 (h*_d > 0)"), Relation::AtLeast, h.get(i), h.get(1)));
            }
        }
    }
    let report = FactReport { facts };
    if let Some(bad) = report.first_failure() {
        return Err(Error::Internal(format!("structural fact violated: {bad}")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;

    fn hv(c: &[u64]) -> HStarVector {
        HStarVector::new(c.to_vec(), None).unwrap()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(40, 20), BigInt::from(137_846_528_820u64));
    }

    #[test]
    fn construction_validation() {
        assert!(HStarVector::new(vec![], None).is_err());
        assert!(HStarVector::new(vec![2, 1], None).is_err());
        assert_eq!(hv(&[1, 0, 2, 0, 0]).coeffs(), &[1, 0, 2]);
        assert!(HStarVector::new(vec![1, 0, 1], Some(1)).is_err());
        assert!(HStarVector::new(vec![1, 0, 1, 0], Some(2)).is_ok());
    }

    #[test]
    fn degree_and_volume() {
        assert_eq!(hv(&[1]).degree(), 0);
        assert_eq!(hv(&[1]).normalized_volume(), BigInt::one());
        let p = hv(&[1, 0, 2, 4, 2]);
        assert_eq!(p.degree(), 4);
        assert_eq!(p.normalized_volume(), BigInt::from(9));
        assert_eq!(hv(&[1, 1, 0, 1]).degree(), 3);
    }

    #[test]
    fn ehrhart_examples() {
        assert_eq!(hv(&[1]).ehrhart(2, 3).unwrap(), BigInt::from(10));
        assert_eq!(hv(&[1, 1, 0]).ehrhart(2, 1).unwrap(), BigInt::from(4));
        assert_eq!(hv(&[1, 0, 2, 4, 2]).ehrhart(5, 1).unwrap(), BigInt::from(6));
        assert_eq!(hv(&[1, 0, 2, 4, 2]).ehrhart(5, 0).unwrap(), BigInt::one());
        assert!(hv(&[1, 0, 2, 4, 2]).ehrhart(3, 1).is_err());
    }

    #[test]
    fn hstar_from_groups() {
        assert_eq!(HStarVector::of_simplex(&LatticeSimplex::unit(3)).unwrap().coeffs(), &[1]);
        let t = LatticeSimplex::from_i64(2, &[&[0, 0], &[1, 0], &[1, 2]]).unwrap();
        assert_eq!(HStarVector::of_simplex(&t).unwrap().coeffs(), &[1, 1]);
        let p = constructions::prop43_instance(3, 4, 5).unwrap();
        let h = HStarVector::of_simplex(&p).unwrap();
        assert_eq!(h.coeffs(), &[1, 0, 2, 4, 2]);
        assert_eq!(h.dim(), Some(5));
        assert_eq!(h.to_string(), "1 + 2t^2 + 4t^3 + 2t^4");
    }

    #[test]
    fn product_and_truncation() {
        let a = hv(&[1, 1]);
        let b = hv(&[1, 2]);
        assert_eq!(a.multiply(&b).coeffs(), &[1, 3, 2]);
        assert_eq!(hv(&[1, 0, 2, 4, 2]).truncate(3).coeffs(), &[1, 0, 2, 4]);
        assert_eq!(hv(&[1, 0, 0, 0, 2]).truncate(3).coeffs(), &[1]);
    }

    fn facts_for(s: &LatticeSimplex) -> FactReport {
        let g = BoxGroup::enumerate(s).unwrap();
        let h = HStarVector::from_box_group(&g);
        let counter = PointCounter::new(s).unwrap();
        structural_facts(s, &g, &h, &counter).unwrap()
    }

    fn fact_value(r: &FactReport, prefix: &str) -> (BigInt, BigInt) {
        let f = r.facts.iter().find(|f| f.name.starts_with(prefix)).unwrap();
        (f.lhs.clone(), f.rhs.clone())
    }

    #[test]
    fn structural_fact_examples() {
        let r = facts_for(&LatticeSimplex::unit(2));
        assert_eq!(fact_value(&r, "h*_1 ="), (BigInt::zero(), BigInt::zero()));
        assert_eq!(fact_value(&r, "h*_2 = interior"), (BigInt::zero(), BigInt::zero()));

        let t = LatticeSimplex::from_i64(2, &[&[0, 0], &[1, 0], &[1, 2]]).unwrap();
        let r = facts_for(&t);
        assert_eq!(fact_value(&r, "h*_1 ="), (BigInt::one(), BigInt::one()));
        assert_eq!(fact_value(&r, "h*_1 >= h*_2"), (BigInt::one(), BigInt::zero()));

        let r = facts_for(&constructions::prop43_instance(3, 4, 5).unwrap());
        assert_eq!(fact_value(&r, "h*_5 = interior"), (BigInt::zero(), BigInt::zero()));
        assert_eq!(fact_value(&r, "h*_1 ="), (BigInt::zero(), BigInt::zero()));
        assert!(r.all_hold());

        // h*_d > 0 exercises the Hibi bound
        let reflexive = LatticeSimplex::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]).unwrap();
        let r = facts_for(&reflexive);
        assert_eq!(fact_value(&r, "h*_3 = interior"), (BigInt::one(), BigInt::one()));
        assert!(r.facts.iter().any(|f| f.name == "h*_2 >= h*_1 (h*_d > 0)"));

        let big_triangle = LatticeSimplex::from_i64(2, &[&[0, 0], &[3, 0], &[0, 3]]).unwrap();
        let r = facts_for(&big_triangle);
        assert_eq!(fact_value(&r, "h*_1 ="), (BigInt::from(7), BigInt::from(7)));
    }

    #[test]
    fn corrupted_hstar_is_reported() {
        let t = LatticeSimplex::from_i64(2, &[&[0, 0], &[1, 0], &[1, 2]]).unwrap();
        let g = BoxGroup::enumerate(&t).unwrap();
        let bad = HStarVector::new(vec![1, 0, 1], Some(2)).unwrap();
        let counter = PointCounter::new(&t).unwrap();
        assert!(matches!(structural_facts(&t, &g, &bad, &counter), Err(Error::Internal(_))));
    }
}
