//! The box-point group of a lattice simplex.
//!
//! For a full-dimensional simplex with vertices `v_0..v_n`, a box point is a
//! tuple `(r_0, ..., r_n)` with every `r_i` in `[0, 1)` such that
//! `sum r_i (v_i, 1)` is a lattice point. Under coordinatewise addition
//! modulo 1 these tuples form a finite abelian group whose order is the
//! normalized volume, and counting its elements by coordinate sum (the
//! height) gives the h*-polynomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg;
use crate::simplex::LatticeSimplex;

/// Default cap on the group order accepted by [`BoxGroup::enumerate`].
pub const DEFAULT_VOLUME_CAP: u64 = 1_000_000;

/// One element of a box group.
///
/// Stored as integer numerators over the smallest common denominator, so
/// equal tuples have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoxPoint {
    modulus: u64,
    num: Vec<u64>,
    height: u64,
}

impl BoxPoint {
    pub fn zero(len: usize) -> Self {
        BoxPoint { modulus: 1, num: vec![0; len], height: 0 }
    }

    /// Builds the point `(num_0 / modulus, ..., num_n / modulus)`.
    pub fn from_numerators(modulus: u64, num: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameters("zero denominator".into()));
        }
        if let Some(&bad) = num.iter().find(|&&x| x >= modulus) {
            return Err(Error::CoordinateOutOfRange(format!("{bad}/{modulus}")));
        }
        let sum: u128 = num.iter().map(|&x| u128::from(x)).sum();
        if !sum.is_multiple_of(u128::from(modulus)) {
            return Err(Error::NonIntegralHeight(format!("{sum}/{modulus}")));
        }
        Ok(Self::reduced(modulus, num))
    }

    /// Builds a point from exact rationals, checking `0 <= r < 1` and that
    /// the coordinate sum is an integer.
    pub fn from_rationals(coords: &[BigRational]) -> Result<Self> {
        let mut modulus = BigInt::one();
        for r in coords {
            if r.is_negative() || *r >= BigRational::one() {
                return Err(Error::CoordinateOutOfRange(r.to_string()));
            }
            modulus = modulus.lcm(r.denom());
        }
        let m = modulus.to_u64().ok_or(Error::Overflow("box point denominator"))?;
        let num = coords
            .iter()
            .map(|r| (r.numer() * (&modulus / r.denom())).to_u64().expect("numerator below denominator"))
            .collect();
        Self::from_numerators(m, num)
    }

    /// Caller guarantees `num[i] < modulus` and an integral sum.
    fn reduced(modulus: u64, mut num: Vec<u64>) -> Self {
        let sum: u128 = num.iter().map(|&x| u128::from(x)).sum();
        debug_assert_eq!(sum % u128::from(modulus), 0);
        let height = (sum / u128::from(modulus)) as u64;
        let g = num.iter().fold(modulus, |g, &x| g.gcd(&x));
        if g > 1 {
            for x in &mut num {
                *x /= g;
            }
        }
        BoxPoint { modulus: modulus / g, num, height }
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> u64 {
        self.modulus
    }

    /// Numerators over [`denominator`](Self::denominator).
    pub fn numerators(&self) -> &[u64] {
        &self.num
    }

    pub fn coord(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].into(), self.modulus.into())
    }

    pub fn coords(&self) -> Vec<BigRational> {
        (0..self.len()).map(|i| self.coord(i)).collect()
    }

    /// Coordinate sum.
    pub fn height(&self) -> u64 {
        self.height
    }

    pub fn is_zero(&self) -> bool {
        self.height == 0
    }

    /// Indices of the strictly positive coordinates (0-based).
    pub fn support(&self) -> Vec<usize> {
        self.num.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i).collect()
    }

    /// `|support|`.
    pub fn support_size(&self) -> usize {
        self.num.iter().filter(|&&x| x > 0).count()
    }

    /// Coordinatewise fractional part of the sum.
    pub fn add(&self, other: &BoxPoint) -> Result<BoxPoint> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        let m = self.modulus.lcm(&other.modulus);
        let (fa, fb) = (m / self.modulus, m / other.modulus);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(&a, &b)| ((u128::from(a) * u128::from(fa) + u128::from(b) * u128::from(fb)) % u128::from(m)) as u64)
            .collect();
        Ok(Self::reduced(m, num))
    }

    /// `(frac(1 - r_1), ..., frac(1 - r_n))`.
    pub fn neg(&self) -> BoxPoint {
        let num = self.num.iter().map(|&x| if x == 0 { 0 } else { self.modulus - x }).collect();
        Self::reduced(self.modulus, num)
    }

    /// `j * self`, reduced modulo 1.
    pub fn scale(&self, j: u64) -> BoxPoint {
        let m = u128::from(self.modulus);
        let j = u128::from(j) % m;
        let num = self.num.iter().map(|&x| (u128::from(x) * j % m) as u64).collect();
        Self::reduced(self.modulus, num)
    }

    /// Order of the point in any group containing it.
    pub fn order(&self) -> u64 {
        self.modulus
    }

    /// Drops the listed coordinates, which must all be zero.
    pub fn restrict_to(&self, keep: &[usize]) -> Option<BoxPoint> {
        let kept: Vec<u64> = keep.iter().map(|&i| self.num[i]).collect();
        let dropped: u64 = self.num.iter().sum::<u64>() - kept.iter().sum::<u64>();
        (dropped == 0).then(|| Self::reduced(self.modulus, kept))
    }

    fn cmp_coords(&self, other: &BoxPoint) -> Ordering {
        let (ma, mb) = (u128::from(self.modulus), u128::from(other.modulus));
        for (&a, &b) in self.num.iter().zip(&other.num) {
            match (u128::from(a) * mb).cmp(&(u128::from(b) * ma)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.len().cmp(&other.len())
    }
}

/// Height first, then coordinates lexicographically.
impl Ord for BoxPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height.cmp(&other.height).then_with(|| self.cmp_coords(other))
    }
}

impl PartialOrd for BoxPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BoxPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.len() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.coord(i))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for BoxPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Union of the supports of a set of points.
pub fn support_of_set<'a>(points: impl IntoIterator<Item = &'a BoxPoint>) -> Vec<usize> {
    let mut seen: Vec<bool> = Vec::new();
    for p in points {
        if seen.len() < p.len() {
            seen.resize(p.len(), false);
        }
        for i in p.support() {
            seen[i] = true;
        }
    }
    seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect()
}

/// All box points of a simplex, in canonical order.
#[derive(Debug, Clone)]
pub struct BoxGroup {
    simplex: LatticeSimplex,
    invariant_factors: Vec<BigInt>,
    elements: Vec<BoxPoint>,
}

impl BoxGroup {
    /// [`enumerate_with_cap`](Self::enumerate_with_cap) with
    /// [`DEFAULT_VOLUME_CAP`].
    pub fn enumerate(simplex: &LatticeSimplex) -> Result<BoxGroup> {
        Self::enumerate_with_cap(simplex, DEFAULT_VOLUME_CAP)
    }

    /// Enumerates the group through the Smith form `U M W = D` of the
    /// homogenized matrix `M`: the quotient `Z^{n+1} / M Z^{n+1}` is
    /// represented by residue vectors `y` with `0 <= y_i < d_i`, and each maps
    /// to the box point `frac(W D^{-1} y)`.
    ///
    /// Lower-dimensional simplices are first restricted to their affine
    /// lattice.
    pub fn enumerate_with_cap(simplex: &LatticeSimplex, cap: u64) -> Result<BoxGroup> {
        let simplex = simplex.restrict_to_affine_lattice();
        let m = simplex.homogenize()?;
        let volume = m.volume();
        if volume > BigInt::from(cap) {
            return Err(Error::VolumeTooLarge { volume, cap });
        }
        let snf = linalg::smith_normal_form(m.matrix())?;
        let factors = snf.invariant_factors();
        let n = factors.len();
        let exponent = factors.last().and_then(ToPrimitive::to_u64).ok_or(Error::Overflow("group exponent"))?;

        // generator i has numerators (W_ji mod d_i) * (N / d_i) over N
        let mut radices = Vec::new();
        let mut generators: Vec<Vec<u64>> = Vec::new();
        for (i, d) in factors.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let scale = BigInt::from(exponent) / d;
            let g = (0..n)
                .map(|j| {
                    let r = snf.w[(j, i)].mod_floor(d) * &scale;
                    r.to_u64().expect("below exponent")
                })
                .collect();
            radices.push(d.to_u64().expect("divides exponent"));
            generators.push(g);
        }

        let order = volume.to_usize().ok_or(Error::Overflow("group order"))?;
        log::debug!(
            "enumerating box group of order {order} (factors {:?})",
            factors.iter().map(ToString::to_string).collect::<Vec<_>>()
        );
        let mut elements = Vec::with_capacity(order);
        let mut digits = vec![0u64; radices.len()];
        let mut acc = vec![0u64; n];
        loop {
            elements.push(
                BoxPoint::from_numerators(exponent, acc.clone())
                    .map_err(|e| Error::Internal(format!("enumerated point is not a box point: {e}")))?,
            );
            // odometer step; a wrapping digit adds d_i * g_i = 0 mod 1, so
            // every changed digit just adds its generator once
            let mut pos = 0;
            loop {
                if pos == radices.len() {
                    break;
                }
                for (a, &g) in acc.iter_mut().zip(&generators[pos]) {
                    *a = (*a + g) % exponent;
                }
                digits[pos] += 1;
                if digits[pos] < radices[pos] {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == radices.len() {
                break;
            }
        }
        elements.sort();
        if elements.len() != order || elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Internal(format!(
                "enumerated {} points, expected {order} distinct ones",
                elements.len()
            )));
        }
        Ok(BoxGroup { simplex, invariant_factors: factors, elements })
    }

    /// The full-dimensional simplex the group was computed from.
    pub fn simplex(&self) -> &LatticeSimplex {
        &self.simplex
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Smith invariant factors of the homogenized matrix, including ones.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn elements(&self) -> &[BoxPoint] {
        &self.elements
    }

    /// Length of every element tuple (number of vertices).
    pub fn tuple_len(&self) -> usize {
        self.simplex.num_vertices()
    }

    pub fn zero(&self) -> &BoxPoint {
        &self.elements[0]
    }

    pub fn contains(&self, p: &BoxPoint) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Number of elements of each height.
    pub fn level_counts(&self) -> BTreeMap<u64, u64> {
        let mut counts = BTreeMap::new();
        for p in &self.elements {
            *counts.entry(p.height()).or_insert(0) += 1;
        }
        counts
    }

    pub fn max_height(&self) -> u64 {
        self.elements.last().map_or(0, BoxPoint::height)
    }
}
