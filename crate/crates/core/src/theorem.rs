//! Face extraction from a zero window in the h*-vector.
//!
//! If `h*_{k+1} = ... = h*_{2k} = 0` for a lattice simplex, the box points of
//! height at most `k` form a subgroup, every such point of height `h` has
//! support of size at most `k + h`, and the union of their supports has at
//! most `4k - 1` indices. The face spanned by the vertices in that union has
//! exactly this subgroup as its box group, so its h*-polynomial is the
//! truncation `h*_0 + ... + h*_k t^k`.
//!
//! Everything here recomputes those statements on concrete groups and
//! records the outcome in an [`ExtractionCertificate`].

use crate::box_group::{support_of_set, BoxGroup, BoxPoint, DEFAULT_VOLUME_CAP};
use crate::error::{Error, Result};
use crate::hstar::HStarVector;
use crate::simplex::{FaceSelector, LatticeSimplex};

/// Smallest `k` for which the extraction theorem is stated.
pub const THEOREM_MIN_K: u64 = 3;

/// `h*_{k+1} = ... = h*_{2k} = 0`.
pub fn check_zero_window(h: &HStarVector, k: u64) -> bool {
    let k = k as usize;
    (k + 1..=2 * k).all(|i| h.get(i) == 0)
}

/// `h*_{k+1} = ... = h*_{2k-1} = 0`.
pub fn check_weak_window(h: &HStarVector, k: u64) -> bool {
    let k = k as usize;
    (k + 1..2 * k).all(|i| h.get(i) == 0)
}

/// Whether strict mode enforces the theorem's hypotheses or only records
/// them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Strict,
    #[default]
    Permissive,
}

/// Elements of height at most `k`, in canonical order.
pub fn low_subgroup(group: &BoxGroup, k: u64) -> Vec<BoxPoint> {
    group.elements().iter().take_while(|p| p.height() <= k).cloned().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma31Violation {
    pub point: BoxPoint,
    pub height: u64,
    pub support_size: u64,
    pub bound: u64,
}

/// Outcome of checking `|α| <= k + height(α)` on every low element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma31Verdict {
    pub checked: usize,
    pub violation: Option<Lemma31Violation>,
}

impl Lemma31Verdict {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

fn require_window(group: &BoxGroup, k: u64) -> Result<HStarVector> {
    let h = HStarVector::from_box_group(group);
    if !check_zero_window(&h, k) {
        return Err(Error::HypothesisNotMet(format!("h*_{}..h*_{} of {h} are not all zero", k + 1, 2 * k)));
    }
    Ok(h)
}

/// Support-size bound on low elements. Requires the zero window.
pub fn verify_lemma31(group: &BoxGroup, k: u64) -> Result<Lemma31Verdict> {
    require_window(group, k)?;
    Ok(lemma31_scan(group, k))
}

fn lemma31_scan(group: &BoxGroup, k: u64) -> Lemma31Verdict {
    let low = group.elements().iter().take_while(|p| p.height() <= k);
    let mut checked = 0;
    for p in low {
        checked += 1;
        let bound = k + p.height();
        let size = p.support_size() as u64;
        if size > bound {
            return Lemma31Verdict {
                checked,
                violation: Some(Lemma31Violation { point: p.clone(), height: p.height(), support_size: size, bound }),
            };
        }
    }
    Lemma31Verdict { checked, violation: None }
}

/// Subgroup and support checks on the low elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma32Verdict {
    pub size: usize,
    pub contains_zero: bool,
    pub closed_under_add: bool,
    pub closed_under_neg: bool,
    /// Union of supports (0-based vertex indices).
    pub support: Vec<usize>,
    /// `4k - 1`.
    pub support_bound: u64,
    /// Largest height among the low elements.
    pub max_height: u64,
    /// `4s - 1` for `s = max_height >= 1`; `None` when only zero is low.
    pub sharp_bound: Option<u64>,
}

impl Lemma32Verdict {
    pub fn is_subgroup(&self) -> bool {
        self.contains_zero && self.closed_under_add && self.closed_under_neg
    }

    pub fn support_bound_ok(&self) -> bool {
        self.support.len() as u64 <= self.support_bound
    }

    pub fn sharp_bound_ok(&self) -> bool {
        self.sharp_bound.is_none_or(|b| self.support.len() as u64 <= b)
    }

    pub fn holds(&self) -> bool {
        self.is_subgroup() && self.support_bound_ok() && self.sharp_bound_ok()
    }
}

/// Exhaustive closure check of the low elements plus the support bounds.
/// Requires the zero window.
pub fn verify_lemma32(group: &BoxGroup, k: u64) -> Result<Lemma32Verdict> {
    require_window(group, k)?;
    lemma32_scan(group, k)
}

fn lemma32_scan(group: &BoxGroup, k: u64) -> Result<Lemma32Verdict> {
    let low = low_subgroup(group, k);
    let member = |p: &BoxPoint| low.binary_search(p).is_ok();
    let contains_zero = low.first().is_some_and(BoxPoint::is_zero);
    let closed_under_neg = low.iter().all(|a| member(&a.neg()));
    let mut closed_under_add = true;
    'outer: for (i, a) in low.iter().enumerate() {
        for b in &low[i..] {
            if !member(&a.add(b)?) {
                closed_under_add = false;
                break 'outer;
            }
        }
    }
    let max_height = low.last().map_or(0, BoxPoint::height);
    Ok(Lemma32Verdict {
        size: low.len(),
        contains_zero,
        closed_under_add,
        closed_under_neg,
        support: support_of_set(&low),
        support_bound: 4 * k - 1,
        max_height,
        sharp_bound: (max_height >= 1).then(|| 4 * max_height - 1),
    })
}

/// Box points of `group` supported on the selected vertices, with the
/// other (zero) coordinates dropped. For a face this is its own box group.
pub fn points_supported_on(group: &BoxGroup, sel: &FaceSelector) -> Vec<BoxPoint> {
    let mut pts: Vec<BoxPoint> = group.elements().iter().filter_map(|p| p.restrict_to(sel.indices())).collect();
    pts.sort();
    pts
}

/// Everything computed while extracting a face for a given `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionCertificate {
    pub k: u64,
    pub hstar: HStarVector,
    /// The zero window `h*_{k+1..2k} = 0` holds.
    pub window_holds: bool,
    /// `k >= 3` and the window holds, so the face must realize the
    /// truncation.
    pub theorem_applies: bool,
    pub lambda_prime: Vec<BoxPoint>,
    pub support: Vec<usize>,
    pub face_selector: FaceSelector,
    pub face_hstar: HStarVector,
    pub truncation: HStarVector,
    pub lemma31: Lemma31Verdict,
    pub lemma32: Lemma32Verdict,
    pub hstar_match: bool,
}

impl ExtractionCertificate {
    pub fn lemma31_ok(&self) -> bool {
        self.lemma31.holds()
    }

    pub fn subgroup_ok(&self) -> bool {
        self.lemma32.is_subgroup()
    }

    pub fn support_bound_ok(&self) -> bool {
        self.lemma32.support_bound_ok()
    }
}

pub fn extract_face(simplex: &LatticeSimplex, k: u64, mode: Mode) -> Result<ExtractionCertificate> {
    extract_face_with_cap(simplex, k, mode, DEFAULT_VOLUME_CAP)
}

/// Takes the vertices in the support of the low subgroup and computes the
/// h*-vector of the face they span. An empty support selects the first
/// vertex alone.
///
/// In strict mode a `k < 3` or a failed window is an error; in permissive
/// mode they are recorded in the certificate. When the theorem applies and
/// the face does not realize the truncation, the result is
/// [`Error::Internal`].
pub fn extract_face_with_cap(
    simplex: &LatticeSimplex,
    k: u64,
    mode: Mode,
    volume_cap: u64,
) -> Result<ExtractionCertificate> {
    if k == 0 {
        return Err(Error::InvalidParameters("k must be at least 1".into()));
    }
    if mode == Mode::Strict && k < THEOREM_MIN_K {
        return Err(Error::HypothesisNotMet(format!("k = {k} is below {THEOREM_MIN_K}")));
    }
    let group = BoxGroup::enumerate_with_cap(simplex, volume_cap)?;
    let hstar = HStarVector::from_box_group(&group);
    let window_holds = check_zero_window(&hstar, k);
    if mode == Mode::Strict && !window_holds {
        return Err(Error::HypothesisNotMet(format!("h*_{}..h*_{} of {hstar} are not all zero", k + 1, 2 * k)));
    }
    let theorem_applies = window_holds && k >= THEOREM_MIN_K;

    let lambda_prime = low_subgroup(&group, k);
    let support = support_of_set(&lambda_prime);
    let n = group.tuple_len();
    let face_selector =
        if support.is_empty() { FaceSelector::new(vec![0], n)? } else { FaceSelector::new(support.clone(), n)? };
    let face = simplex.face(&face_selector)?;
    let face_group = BoxGroup::enumerate_with_cap(&face, volume_cap)?;
    let face_hstar = HStarVector::from_box_group(&face_group);
    let truncation = hstar.truncate(k as usize);
    let hstar_match = face_hstar.same_polynomial(&truncation);

    let cert = ExtractionCertificate {
        k,
        window_holds,
        theorem_applies,
        lemma31: lemma31_scan(&group, k),
        lemma32: lemma32_scan(&group, k)?,
        lambda_prime,
        support,
        face_selector,
        face_hstar,
        truncation,
        hstar_match,
        hstar,
    };
    if cert.theorem_applies && !cert.hstar_match {
        return Err(Error::Internal(format!(
            "face {:?} has h* {} but the truncation is {}",
            cert.face_selector.indices(),
            cert.face_hstar,
            cert.truncation
        )));
    }
    Ok(cert)
}
