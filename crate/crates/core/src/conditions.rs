//! Known necessary conditions on h*-vectors, evaluated with witnesses.
//!
//! Every checker returns the comparisons it evaluated (both sides as
//! numbers) so callers can show exactly which inequality held or failed.

use std::fmt;

use num_traits::ToPrimitive;

use crate::constructions::is_prime;
use crate::error::{Error, Result};
use crate::hstar::HStarVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Eq,
    Le,
    Ge,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Eq => "=",
            Op::Le => "<=",
            Op::Ge => ">=",
        }
    }
}

/// `lhs op rhs`, both sides evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub expr: String,
    pub lhs: u64,
    pub op: Op,
    pub rhs: u64,
}

impl Comparison {
    pub fn new(expr: impl Into<String>, lhs: u64, op: Op, rhs: u64) -> Self {
        Comparison { expr: expr.into(), lhs, op, rhs }
    }

    pub fn holds(&self) -> bool {
        match self.op {
            Op::Eq => self.lhs == self.rhs,
            Op::Le => self.lhs <= self.rhs,
            Op::Ge => self.lhs >= self.rhs,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} {} {})", self.expr, self.lhs, self.op.symbol(), self.rhs)
    }
}

/// Which form of the `(h*_1, h*_2)` classification to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScottMode {
    /// Polygons: `h*_2 = 0`, or `h*_2 <= h*_1 <= 3h*_2 + 3`, or `(7, 1)`.
    Dimension2,
    /// Degree at most two: as above without the lower bound on `h*_1`.
    Degree2,
    /// Any polytope with `h*_3 = 0`; same conditions as `Degree2`.
    Universal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScottVerdict {
    /// First satisfied condition (1, 2 or 3) and its comparisons.
    Satisfied { condition: u8, witness: Vec<Comparison> },
    /// The failing comparison of each condition.
    ViolatesAll { witness: Vec<Comparison> },
}

impl ScottVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, ScottVerdict::Satisfied { .. })
    }
}

pub fn check_scott(h: &HStarVector, mode: ScottMode) -> Result<ScottVerdict> {
    match mode {
        ScottMode::Dimension2 if h.coeffs().len() > 3 || h.dim().is_some_and(|d| d != 2) => {
            return Err(Error::PreconditionNotMet(
                "dimension-2 form needs a vector of length at most 3 from a polygon".into(),
            ));
        }
        ScottMode::Degree2 if h.degree() > 2 => {
            return Err(Error::PreconditionNotMet("degree-2 form needs degree at most 2".into()));
        }
        ScottMode::Universal if h.get(3) != 0 => {
            return Err(Error::PreconditionNotMet("universal form needs h*_3 = 0".into()));
        }
        _ => {}
    }
    let (h1, h2) = (h.get(1), h.get(2));
    let cond1 = vec![Comparison::new("h*_2 = 0", h2, Op::Eq, 0)];
    let mut cond2 = Vec::new();
    if mode == ScottMode::Dimension2 {
        cond2.push(Comparison::new("h*_2 <= h*_1", h2, Op::Le, h1));
    }
    cond2.push(Comparison::new("h*_1 <= 3h*_2 + 3", h1, Op::Le, 3 * h2 + 3));
    let cond3 = vec![Comparison::new("h*_1 = 7", h1, Op::Eq, 7), Comparison::new("h*_2 = 1", h2, Op::Eq, 1)];
    let mut failures = Vec::new();
    for (n, cond) in [(1u8, cond1), (2, cond2), (3, cond3)] {
        if cond.iter().all(Comparison::holds) {
            return Ok(ScottVerdict::Satisfied { condition: n, witness: cond });
        }
        failures.extend(cond.into_iter().filter(|c| !c.holds()).take(1));
    }
    Ok(ScottVerdict::ViolatesAll { witness: failures })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HhhVerdict {
    /// `h* = 1 + t^i + (p - 2) t^j` with `2 <= i < j` and `p >= 5` prime: no
    /// lattice polytope has this h*-polynomial.
    NotRealizable {
        p: u64,
        i: usize,
        j: usize,
    },
    Inconclusive {
        reason: String,
    },
}

/// Recognizes the shape `1 + t^i + (p - 2) t^j`, `2 <= i < j`, with prime
/// normalized volume `p >= 5`. One-directional: anything else is
/// inconclusive.
pub fn check_lemma_hhh(h: &HStarVector) -> HhhVerdict {
    let inconclusive = |reason: &str| HhhVerdict::Inconclusive { reason: reason.to_string() };
    let support: Vec<usize> = (1..h.coeffs().len()).filter(|&i| h.get(i) != 0).collect();
    let [i, j] = support[..] else {
        return inconclusive("not of the form 1 + t^i + c t^j");
    };
    if i < 2 {
        return inconclusive("needs i >= 2");
    }
    if h.get(i) != 1 {
        return inconclusive("coefficient of t^i is not 1");
    }
    let Some(p) = h.normalized_volume().to_u64() else {
        return inconclusive("volume too large");
    };
    if p < 5 || !is_prime(p) {
        return inconclusive("normalized volume is not a prime >= 5");
    }
    debug_assert_eq!(h.get(j), p - 2);
    HhhVerdict::NotRealizable { p, i, j }
}

/// `h*_{i+1} = h*_{d-i}` for `0 <= i <= d - 1`.
pub fn check_shifted_symmetric(h: &HStarVector, d: usize) -> bool {
    shifted_symmetry_failure(h, d).is_none()
}

/// First index pair breaking shifted symmetry, if any.
pub fn shifted_symmetry_failure(h: &HStarVector, d: usize) -> Option<Comparison> {
    (0..d).find_map(|i| {
        let c = Comparison::new(format!("h*_{} = h*_{}", i + 1, d - i), h.get(i + 1), Op::Eq, h.get(d - i));
        (!c.holds()).then_some(c)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSymmetry {
    NotApplicable {
        reason: String,
    },
    /// The nonzero part `h*_lo, ..., h*_s` is a palindrome.
    Holds {
        volume: u64,
        lo: usize,
        s: usize,
    },
    Fails {
        volume: u64,
        witness: Comparison,
    },
}

/// Symmetry forced on simplices of prime normalized volume `p`.
///
/// The box group is then cyclic of prime order and all nonzero elements
/// share one support of size `m`. Since `|α| = height(α) + height(-α)`, the
/// heights of nonzero elements are symmetric under `h -> m - h`, so
/// `h*_{lo + t} = h*_{s - t}` where `lo` is the smallest positive index with
/// `h*_lo != 0` and `s` is the degree. When `h*_1 != 0` this reads
/// `h*_{i+1} = h*_{s-i}`.
pub fn check_prime_symmetry(h: &HStarVector) -> PrimeSymmetry {
    let Some(volume) = h.normalized_volume().to_u64() else {
        return PrimeSymmetry::NotApplicable { reason: "volume too large".into() };
    };
    if !is_prime(volume) {
        return PrimeSymmetry::NotApplicable { reason: format!("normalized volume {volume} is not prime") };
    }
    let s = h.degree();
    let lo = (1..=s).find(|&i| h.get(i) != 0).expect("volume > 1");
    for t in 0..=(s - lo) {
        let c = Comparison::new(format!("h*_{} = h*_{}", lo + t, s - t), h.get(lo + t), Op::Eq, h.get(s - t));
        if !c.holds() {
            return PrimeSymmetry::Fails { volume, witness: c };
        }
    }
    PrimeSymmetry::Holds { volume, lo, s }
}

/// Generic outcome for report entries that are not Scott-style.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Holds(Vec<Comparison>),
    Fails(Vec<Comparison>),
    NotApplicable(String),
}

impl Check {
    fn from_comparisons(cs: Vec<Comparison>) -> Check {
        if cs.iter().all(Comparison::holds) {
            Check::Holds(cs)
        } else {
            Check::Fails(cs.into_iter().filter(|c| !c.holds()).collect())
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self, Check::Fails(_))
    }
}

/// Non-realizability certificate from prime volume with `h*_1 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeVolumeObstruction {
    /// Any polytope with `h*_1 = 0` is a simplex (its lattice points are
    /// its vertices), and a simplex of prime volume must satisfy
    /// [`check_prime_symmetry`]; this vector does not.
    NotRealizable {
        volume: u64,
        witness: Comparison,
    },
    Inconclusive {
        reason: String,
    },
}

pub fn check_prime_volume_obstruction(h: &HStarVector) -> PrimeVolumeObstruction {
    if h.get(1) != 0 {
        return PrimeVolumeObstruction::Inconclusive { reason: "h*_1 != 0, realizations need not be simplices".into() };
    }
    match check_prime_symmetry(h) {
        PrimeSymmetry::Fails { volume, witness } => PrimeVolumeObstruction::NotRealizable { volume, witness },
        PrimeSymmetry::Holds { .. } => {
            PrimeVolumeObstruction::Inconclusive { reason: "prime-volume symmetry holds".into() }
        }
        PrimeSymmetry::NotApplicable { reason } => PrimeVolumeObstruction::Inconclusive { reason },
    }
}

/// All checkers applied to one vector. Entries that need the dimension
/// are `NotApplicable` when it is unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub hstar: HStarVector,
    pub dim: Option<usize>,
    pub scott_dimension2: Result<ScottVerdict>,
    pub scott_degree2: Result<ScottVerdict>,
    pub scott_universal: Result<ScottVerdict>,
    pub eq1: Check,
    pub hibi: Check,
    pub lemma_hhh: HhhVerdict,
    pub prime_volume: PrimeVolumeObstruction,
    pub shifted_symmetric: Check,
    pub prime_symmetry: PrimeSymmetry,
}

impl ConditionReport {
    /// Some checker proves that no lattice polytope has this h*-vector.
    pub fn proves_non_realizable(&self) -> bool {
        matches!(self.lemma_hhh, HhhVerdict::NotRealizable { .. })
            || matches!(self.prime_volume, PrimeVolumeObstruction::NotRealizable { .. })
    }
}

pub fn condition_report(h: &HStarVector, dim: Option<usize>) -> ConditionReport {
    let with_dim = match dim {
        Some(d) => h.with_dim(d).unwrap_or_else(|_| h.clone()),
        None => h.clone(),
    };
    let (eq1, hibi, shifted) = match dim {
        None => {
            let na = || Check::NotApplicable("dimension unknown".into());
            (na(), na(), na())
        }
        Some(0) => {
            let na = || Check::NotApplicable("dimension 0".into());
            (na(), na(), na())
        }
        Some(d) => {
            let eq1 =
                Check::from_comparisons(vec![Comparison::new(format!("h*_1 >= h*_{d}"), h.get(1), Op::Ge, h.get(d))]);
            let hibi = if h.get(d) == 0 {
                Check::NotApplicable(format!("h*_{d} = 0"))
            } else {
                Check::from_comparisons(
                    (2..d).map(|i| Comparison::new(format!("h*_{i} >= h*_1"), h.get(i), Op::Ge, h.get(1))).collect(),
                )
            };
            let shifted = match shifted_symmetry_failure(h, d) {
                None => Check::Holds(Vec::new()),
                Some(c) => Check::Fails(vec![c]),
            };
            (eq1, hibi, shifted)
        }
    };
    ConditionReport {
        hstar: h.clone(),
        dim,
        scott_dimension2: check_scott(&with_dim, ScottMode::Dimension2),
        scott_degree2: check_scott(h, ScottMode::Degree2),
        scott_universal: check_scott(h, ScottMode::Universal),
        eq1,
        hibi,
        lemma_hhh: check_lemma_hhh(h),
        prime_volume: check_prime_volume_obstruction(h),
        shifted_symmetric: shifted,
        prime_symmetry: check_prime_symmetry(h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hv(c: &[u64]) -> HStarVector {
        HStarVector::new(c.to_vec(), None).unwrap()
    }

    fn cond(v: &ScottVerdict) -> Option<u8> {
        match v {
            ScottVerdict::Satisfied { condition, .. } => Some(*condition),
            ScottVerdict::ViolatesAll { .. } => None,
        }
    }

    #[test]
    fn scott_examples() {
        let v = check_scott(&hv(&[1, 7, 1]), ScottMode::Dimension2).unwrap();
        assert_eq!(cond(&v), Some(3));
        let v = check_scott(&hv(&[1, 3, 1]), ScottMode::Dimension2).unwrap();
        assert_eq!(cond(&v), Some(2));
        let v = check_scott(&hv(&[1, 10, 2, 0]), ScottMode::Universal).unwrap();
        let ScottVerdict::ViolatesAll { witness } = v else {
            panic!("expected violation");
        };
        assert_eq!(witness.len(), 3);
        assert_eq!((witness[1].lhs, witness[1].rhs), (10, 9));
    }

    #[test]
    fn scott_preconditions() {
        assert!(check_scott(&hv(&[1, 0, 0, 1]), ScottMode::Dimension2).is_err());
        assert!(check_scott(&hv(&[1, 0, 0, 1]), ScottMode::Degree2).is_err());
        assert!(check_scott(&hv(&[1, 0, 0, 1]), ScottMode::Universal).is_err());
        assert!(check_scott(&hv(&[1, 0, 0, 0, 1]), ScottMode::Universal).is_ok());
        let in_dim3 = HStarVector::new(vec![1, 2], Some(3)).unwrap();
        assert!(check_scott(&in_dim3, ScottMode::Dimension2).is_err());
    }

    #[test]
    fn degree2_drops_lower_bound() {
        // h*_2 > h*_1 is impossible for polygons but allowed in degree 2
        let h = hv(&[1, 0, 2]);
        assert_eq!(cond(&check_scott(&h, ScottMode::Dimension2).unwrap()), None);
        assert_eq!(cond(&check_scott(&h, ScottMode::Degree2).unwrap()), Some(2));
    }

    #[test]
    fn hhh_examples() {
        assert_eq!(check_lemma_hhh(&hv(&[1, 0, 1, 3])), HhhVerdict::NotRealizable { p: 5, i: 2, j: 3 });
        assert!(matches!(check_lemma_hhh(&hv(&[1, 0, 1, 2])), HhhVerdict::Inconclusive { .. }));
        assert!(matches!(check_lemma_hhh(&hv(&[1, 0, 2, 4])), HhhVerdict::Inconclusive { .. }));
        assert!(matches!(check_lemma_hhh(&hv(&[1, 1, 0, 3])), HhhVerdict::Inconclusive { .. }));
        // p = 3 gives 1 + t^i + t^j, which is realizable
        assert!(matches!(check_lemma_hhh(&hv(&[1, 0, 1, 1])), HhhVerdict::Inconclusive { .. }));
    }

    #[test]
    fn prime_volume_obstruction_covers_1_0_2_4() {
        let r = check_prime_volume_obstruction(&hv(&[1, 0, 2, 4]));
        let PrimeVolumeObstruction::NotRealizable { volume, witness } = r else {
            panic!("expected certificate");
        };
        assert_eq!(volume, 7);
        assert_eq!((witness.lhs, witness.rhs), (2, 4));
        assert!(matches!(
            check_prime_volume_obstruction(&hv(&[1, 0, 1, 0, 1])),
            PrimeVolumeObstruction::Inconclusive { .. }
        ));
    }

    #[test]
    fn shifted_symmetry_examples() {
        assert!(check_shifted_symmetric(&hv(&[1, 0, 1, 0, 1]), 5));
        assert!(!check_shifted_symmetric(&hv(&[1, 0, 1, 0, 1]), 4));
        for d in 0..8 {
            assert!(check_shifted_symmetric(&hv(&[1]), d));
        }
    }

    #[test]
    fn prime_symmetry_examples() {
        assert!(matches!(check_prime_symmetry(&hv(&[1, 0, 1, 0, 1])), PrimeSymmetry::Holds { volume: 3, .. }));
        assert!(matches!(check_prime_symmetry(&hv(&[1, 0, 3])), PrimeSymmetry::NotApplicable { .. }));
        assert!(matches!(check_prime_symmetry(&hv(&[1, 0, 1, 3])), PrimeSymmetry::Fails { volume: 5, .. }));
        assert!(matches!(check_prime_symmetry(&hv(&[1, 2, 2])), PrimeSymmetry::Holds { .. }));
    }

    #[test]
    fn report_assembles_everything() {
        let r = condition_report(&hv(&[1, 7, 1]), Some(2));
        assert_eq!(cond(r.scott_dimension2.as_ref().unwrap()), Some(3));
        assert!(matches!(r.eq1, Check::Holds(_)));
        assert!(matches!(r.hibi, Check::Holds(_)));
        assert!(!r.proves_non_realizable());

        let r = condition_report(&hv(&[1, 0, 1, 3]), None);
        assert!(r.proves_non_realizable());
        assert!(matches!(r.eq1, Check::NotApplicable(_)));

        let r = condition_report(&hv(&[1, 0, 2, 4]), Some(3));
        assert!(matches!(r.lemma_hhh, HhhVerdict::Inconclusive { .. }));
        assert!(r.proves_non_realizable());
        assert!(r.eq1.failed());
    }
}
