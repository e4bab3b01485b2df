//! Brute-force lattice point counting.
//!
//! This path shares nothing with the box-group enumeration beyond the
//! homogenized vertex matrix: it scans the integer bounding box of a dilate
//! and decides membership from exact barycentric coordinates. Along the last
//! coordinate the barycentric constraints are linear, so each scan line is
//! counted by intersecting integer intervals instead of testing every point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::box_group::{BoxGroup, BoxPoint, DEFAULT_VOLUME_CAP};
use crate::error::{Error, Result};
use crate::hstar::{binomial, HStarVector};
use crate::linalg;
use crate::simplex::LatticeSimplex;

/// Default cap on the number of search nodes visited in one count.
pub const DEFAULT_SCAN_CAP: u64 = 100_000_000;

/// Largest volume for which [`box_points_by_scan`] is meant to be used.
pub const SCAN_ORACLE_MAX_VOLUME: u64 = 200;

/// Lattice point counter for the dilates of one simplex.
///
/// Holds the integer matrix `|det| * M^{-1}` (acting on `y = (x, n)` with the
/// homogenized vertex matrix `M`), whose `i`-th output is nonnegative exactly when
/// the `i`-th barycentric coordinate of `x` in `nS` is.
#[derive(Debug, Clone)]
pub struct PointCounter {
    simplex: LatticeSimplex,
    bary: Vec<Vec<i128>>,
    abs_det: i128,
    lo: Vec<i128>,
    hi: Vec<i128>,
    scan_cap: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Region {
    Closed,
    Interior,
}

impl PointCounter {
    pub fn new(simplex: &LatticeSimplex) -> Result<Self> {
        Self::with_cap(simplex, DEFAULT_SCAN_CAP)
    }

    pub fn with_cap(simplex: &LatticeSimplex, scan_cap: u64) -> Result<Self> {
        let simplex = simplex.restrict_to_affine_lattice();
        let m = simplex.homogenize()?;
        let det = m.det();
        let n = simplex.num_vertices();
        let mut bary = vec![vec![0i128; n]; n];
        for j in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            let col = linalg::solve_rational(m.matrix(), &e)?;
            for (i, x) in col.iter().enumerate() {
                let scaled = x * BigRational::from_integer(det.abs());
                debug_assert!(scaled.is_integer());
                bary[i][j] = to_i128(&scaled.to_integer())?;
            }
        }
        let d = simplex.dim();
        let mut lo = vec![0i128; d];
        let mut hi = vec![0i128; d];
        for c in 0..d {
            let col = simplex.vertices().iter().map(|v| &v[c]);
            lo[c] = to_i128(col.clone().min().expect("nonempty"))?;
            hi[c] = to_i128(col.max().expect("nonempty"))?;
        }
        Ok(PointCounter { simplex, bary, abs_det: to_i128(&det.abs())?, lo, hi, scan_cap })
    }

    /// Full-dimensional simplex the counter works on.
    pub fn simplex(&self) -> &LatticeSimplex {
        &self.simplex
    }

    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }

    /// `|nS ∩ Z^d|`.
    pub fn count(&self, n: u64) -> Result<BigInt> {
        self.count_region(n, Region::Closed)
    }

    /// Lattice points of `nS` with every barycentric coordinate positive.
    pub fn count_interior(&self, n: u64) -> Result<BigInt> {
        self.count_region(n, Region::Interior)
    }

    /// Depth-first scan over the coordinates. At each level the barycentric
    /// inequalities, relaxed by the best case for the remaining coordinates,
    /// cut the range of the current coordinate; the last coordinate is
    /// counted as an interval. Visited nodes are charged against the cap.
    fn count_region(&self, n: u64, region: Region) -> Result<BigInt> {
        let d = self.dim();
        let nn = i128::from(n);
        if d == 0 {
            let inside = region == Region::Closed || n > 0;
            return Ok(BigInt::from(u8::from(inside)));
        }
        let min = match region {
            Region::Closed => 0,
            Region::Interior => 1,
        };
        let lo = self.lo.iter().map(|&x| mul(x, nn)).collect::<Result<Vec<_>>>()?;
        let hi = self.hi.iter().map(|&x| mul(x, nn)).collect::<Result<Vec<_>>>()?;
        let mut scan = Scan {
            counter: self,
            constant: self.bary.iter().map(|row| mul(row[d], nn)).collect::<Result<Vec<_>>>()?,
            min,
            visited: 0,
        };
        Ok(BigInt::from(scan.descend(lo, hi)?))
    }

    /// `E(0), ..., E(max_n)`.
    pub fn count_table(&self, max_n: u64) -> Result<CountTable> {
        let counts = (0..=max_n).map(|n| self.count(n)).collect::<Result<Vec<_>>>()?;
        Ok(CountTable { dim: self.dim(), counts })
    }

    /// Interpolates the h*-vector from `E(0), ..., E(d)` through
    /// `h_j = sum_{i <= j} (-1)^i C(d+1, i) E(j - i)`.
    pub fn hstar(&self) -> Result<HStarVector> {
        let table = self.count_table(self.dim() as u64)?;
        table.hstar()
    }
}

/// Branch-and-propagate count of the integer points with every row of
/// `bary` at least `min`.
struct Scan<'a> {
    counter: &'a PointCounter,
    constant: Vec<i128>,
    min: i128,
    visited: u64,
}

const PROPAGATION_PASSES: usize = 16;

impl Scan<'_> {
    /// Shrinks the box `[lo, hi]` using each row against the others' best
    /// case. `Some(true)` means a full pass changed nothing, so with at most
    /// one open coordinate the box is exact; `None` means infeasible.
    fn tighten(&self, lo: &mut [i128], hi: &mut [i128]) -> Result<Option<bool>> {
        for _ in 0..PROPAGATION_PASSES {
            let mut changed = false;
            for (row, &c0) in self.counter.bary.iter().zip(&self.constant) {
                let mut top = c0;
                for c in 0..lo.len() {
                    top = add(top, mul(row[c], lo[c])?.max(mul(row[c], hi[c])?))?;
                }
                if top < self.min {
                    return Ok(None);
                }
                for c in 0..lo.len() {
                    let a = row[c];
                    if a == 0 || lo[c] == hi[c] {
                        continue;
                    }
                    let rest = top - mul(a, lo[c])?.max(mul(a, hi[c])?);
                    let (l, h) = solve_at_least(a, rest, self.min);
                    if l > lo[c] || h < hi[c] {
                        lo[c] = lo[c].max(l);
                        hi[c] = hi[c].min(h);
                        if lo[c] > hi[c] {
                            return Ok(None);
                        }
                        top = add(rest, mul(a, lo[c])?.max(mul(a, hi[c])?))?;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(Some(true));
            }
        }
        Ok(Some(false))
    }

    fn descend(&mut self, mut lo: Vec<i128>, mut hi: Vec<i128>) -> Result<i128> {
        self.visited += 1;
        if self.visited > self.counter.scan_cap {
            return Err(Error::ScanTooLarge { points: BigInt::from(self.visited), cap: self.counter.scan_cap });
        }
        let open = loop {
            let Some(converged) = self.tighten(&mut lo, &mut hi)? else {
                return Ok(0);
            };
            let open: Vec<usize> = (0..lo.len()).filter(|&c| lo[c] < hi[c]).collect();
            if converged || open.len() > 1 {
                break open;
            }
        };
        match open.as_slice() {
            [] => return Ok(1),
            // with one coordinate left the tightened range is exact
            [c] => return Ok(hi[*c] - lo[*c] + 1),
            _ => {}
        }
        let branch = *open.iter().min_by_key(|&&c| hi[c] - lo[c]).expect("nonempty");
        let mut total = 0i128;
        for x in lo[branch]..=hi[branch] {
            let (mut l, mut h) = (lo.clone(), hi.clone());
            l[branch] = x;
            h[branch] = x;
            total = add(total, self.descend(l, h)?)?;
        }
        Ok(total)
    }
}

/// Interval of integers `t` with `a t + b >= min`, as `[lo, hi]`; an empty
/// set is returned as `lo > hi`.
fn solve_at_least(a: i128, b: i128, min: i128) -> (i128, i128) {
    let rhs = min - b;
    match a.signum() {
        1 => (-(-rhs).div_euclid(a), i128::MAX),
        -1 => (i128::MIN, (-rhs).div_euclid(-a)),
        _ if b >= min => (i128::MIN, i128::MAX),
        _ => (1, 0),
    }
}

fn odometer(x: &mut [i128], lo: &[i128], hi: &[i128]) -> bool {
    for c in 0..x.len() {
        if x[c] < hi[c] {
            x[c] += 1;
            return true;
        }
        x[c] = lo[c];
    }
    false
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("lattice point scan"))
}

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("lattice point scan"))
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow("lattice point scan"))
}

/// `E(0), ..., E(k)` for a simplex of dimension `dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub dim: usize,
    pub counts: Vec<BigInt>,
}

impl CountTable {
    /// Finite-difference transform of the first `dim + 1` counts.
    pub fn hstar(&self) -> Result<HStarVector> {
        let d = self.dim as u64;
        if self.counts.len() < self.dim + 1 {
            return Err(Error::PreconditionNotMet(format!("need {} counts, have {}", self.dim + 1, self.counts.len())));
        }
        let mut coeffs = Vec::with_capacity(self.dim + 1);
        for j in 0..=self.dim {
            let mut h = BigInt::zero();
            for i in 0..=j {
                let term = binomial(d + 1, i as u64) * &self.counts[j - i];
                if i % 2 == 0 {
                    h += term;
                } else {
                    h -= term;
                }
            }
            let h =
                h.to_u64().ok_or_else(|| Error::Internal(format!("interpolated h*_{j} = {h} is negative or huge")))?;
            coeffs.push(h);
        }
        HStarVector::new(coeffs, Some(self.dim))
    }
}

/// `|nS ∩ Z^d|` with the default scan cap.
pub fn count_lattice_points(simplex: &LatticeSimplex, n: u64) -> Result<BigInt> {
    PointCounter::new(simplex)?.count(n)
}

/// Interior lattice points of `nS` with the default scan cap.
pub fn count_interior_points(simplex: &LatticeSimplex, n: u64) -> Result<BigInt> {
    PointCounter::new(simplex)?.count_interior(n)
}

/// h*-vector from brute-force counts, with the default scan cap.
pub fn hstar_by_interpolation(simplex: &LatticeSimplex) -> Result<HStarVector> {
    PointCounter::new(simplex)?.hstar()
}

/// Outcome of comparing the box-group and counting paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossValidation {
    pub box_hstar: HStarVector,
    pub oracle_hstar: HStarVector,
    pub matches: bool,
    /// Dilation `d + 1`, not used for interpolation.
    pub held_out_n: u64,
    pub held_out_count: BigInt,
    /// `E(d + 1)` predicted from the box-group h*.
    pub held_out_predicted: BigInt,
    pub held_out_matches: bool,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.matches && self.held_out_matches
    }
}

pub fn cross_validate(simplex: &LatticeSimplex) -> Result<CrossValidation> {
    cross_validate_with_caps(simplex, DEFAULT_VOLUME_CAP, DEFAULT_SCAN_CAP)
}

pub fn cross_validate_with_caps(simplex: &LatticeSimplex, volume_cap: u64, scan_cap: u64) -> Result<CrossValidation> {
    let group = BoxGroup::enumerate_with_cap(simplex, volume_cap)?;
    let box_hstar = HStarVector::from_box_group(&group);
    let counter = PointCounter::with_cap(simplex, scan_cap)?;
    let d = counter.dim() as u64;
    let table = counter.count_table(d + 1)?;
    let oracle_hstar = table.hstar()?;
    let held_out_count = table.counts[d as usize + 1].clone();
    let held_out_predicted = box_hstar.ehrhart(counter.dim(), d + 1)?;
    Ok(CrossValidation {
        matches: box_hstar == oracle_hstar,
        held_out_matches: held_out_count == held_out_predicted,
        box_hstar,
        oracle_hstar,
        held_out_n: d + 1,
        held_out_count,
        held_out_predicted,
    })
}

/// Box points found by scanning the integer points of the half-open
/// parallelepiped spanned by the homogenized vertices. Slow; intended as a
/// check on [`BoxGroup::enumerate`] for volumes up to
/// [`SCAN_ORACLE_MAX_VOLUME`].
pub fn box_points_by_scan(simplex: &LatticeSimplex, scan_cap: u64) -> Result<Vec<BoxPoint>> {
    let counter = PointCounter::with_cap(simplex, scan_cap)?;
    let full = counter.simplex();
    let n = full.num_vertices();
    let d = full.dim();
    let vol = counter.abs_det;
    let modulus = u64::try_from(vol).map_err(|_| Error::Overflow("parallelepiped scan"))?;

    // bounding box of the parallelepiped in homogeneous coordinates
    let mut lo = vec![0i128; n];
    let mut hi = vec![0i128; n];
    for c in 0..d {
        for v in full.vertices() {
            let x = to_i128(&v[c])?;
            if x < 0 {
                lo[c] += x;
            } else {
                hi[c] += x;
            }
        }
    }
    hi[d] = d as i128;
    let points: BigInt = lo.iter().zip(&hi).map(|(l, h)| BigInt::from(h - l + 1)).product();
    if points > BigInt::from(scan_cap) {
        return Err(Error::ScanTooLarge { points, cap: scan_cap });
    }

    let mut found = Vec::new();
    let mut y = lo.clone();
    loop {
        let lambda: Vec<i128> = counter.bary.iter().map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum()).collect();
        if lambda.iter().all(|&l| (0..vol).contains(&l)) {
            let num = lambda.iter().map(|&l| l as u64).collect();
            found.push(BoxPoint::from_numerators(modulus, num)?);
        }
        if !odometer(&mut y, &lo, &hi) {
            break;
        }
    }
    found.sort();
    Ok(found)
}
