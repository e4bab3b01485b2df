//! Batch verification of a corpus directory, one JSON line per
//! (instance, invariant).

use std::io::Write;
use std::path::{Path, PathBuf};

use hstarkit::conditions::{check_prime_symmetry, PrimeSymmetry};
use hstarkit::hstar::structural_facts;
use hstarkit::oracle::{cross_validate_with_caps, PointCounter, DEFAULT_SCAN_CAP};
use hstarkit::theorem::{check_zero_window, extract_face, points_supported_on, Mode};
use hstarkit::{BoxGroup, BoxPoint, FaceSelector, HStarVector, LatticeSimplex, DEFAULT_VOLUME_CAP};
use num_bigint::BigInt;
use serde::Serialize;

use crate::document::{to_json_line, SimplexDocument};
use crate::{CliError, CliResult, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};

/// Largest dimension for the lattice-point oracle checks.
pub const ORACLE_MAX_DIM: usize = 5;
/// Bounding-box points allowed per dilate in the structural-fact check.
pub const FACTS_SCAN_CAP: u64 = 1_000_000;
/// Largest group order for the pairwise subadditivity and step checks.
pub const PAIRWISE_MAX_ORDER: usize = 500;
/// Largest group order for the exhaustive group-axiom check.
pub const AXIOM_MAX_ORDER: usize = 200;
/// Largest vertex count for the sweep over all faces.
pub const FACE_SWEEP_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub instance: String,
    pub file: String,
    pub invariant: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

type Outcome = (Status, String);

fn pass() -> Outcome {
    (Status::Pass, String::new())
}

fn fail(detail: impl Into<String>) -> Outcome {
    (Status::Fail, detail.into())
}

fn skip(detail: impl Into<String>) -> Outcome {
    (Status::Skip, detail.into())
}

fn check(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        pass()
    } else {
        fail(detail())
    }
}

/// `*.json` files in `dir`, sorted by file name.
pub fn corpus_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| CliError::Usage(format!("cannot read corpus {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!("no .json documents in {}", dir.display())));
    }
    Ok(files)
}

/// Runs every invariant over the corpus. Exit code 0 when everything
/// passes or is skipped, 2 when a document fails to parse, 4 otherwise.
pub fn run_suite(dir: &Path, max_volume: u64, out: &mut dyn Write) -> CliResult<u8> {
    let files = corpus_files(dir)?;
    let mut parse_failed = false;
    let mut failed = 0usize;
    let mut total = 0usize;
    for path in &files {
        let records = verify_file(path, max_volume);
        for r in &records {
            total += 1;
            if r.status == Status::Fail {
                failed += 1;
                if r.invariant == "parse" {
                    parse_failed = true;
                }
            }
            out.write_all(to_json_line(r).as_bytes())?;
        }
    }
    log::info!("{} documents, {total} checks, {failed} failures", files.len());
    Ok(if parse_failed {
        EXIT_USAGE
    } else if failed > 0 {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    })
}

/// All records for one document, in a fixed order.
pub fn verify_file(path: &Path, max_volume: u64) -> Vec<Record> {
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let parsed = SimplexDocument::read(path).and_then(|d| d.simplex().map(|s| (d, s)));
    let (doc, simplex) = match parsed {
        Ok(x) => x,
        Err(e) => {
            return vec![Record {
                instance: file.trim_end_matches(".json").to_string(),
                file,
                invariant: "parse",
                status: Status::Fail,
                detail: e.to_string(),
            }]
        }
    };
    let instance = doc.name.clone().unwrap_or_else(|| file.trim_end_matches(".json").to_string());
    let mut records = Vec::new();
    let mut push = |invariant: &'static str, (status, detail): Outcome| {
        records.push(Record { instance: instance.clone(), file: file.clone(), invariant, status, detail })
    };
    push("parse", pass());
    for (name, outcome) in check_document(&doc, &simplex, max_volume) {
        push(name, outcome);
    }
    records
}

fn check_document(doc: &SimplexDocument, simplex: &LatticeSimplex, max_volume: u64) -> Vec<(&'static str, Outcome)> {
    let mut out = Vec::new();
    let round_trip = SimplexDocument::parse(&doc.to_json_line());
    out.push((
        "round_trip",
        check(round_trip.as_ref() == Ok(doc), || "document changed after serialize and parse".into()),
    ));

    let group = match BoxGroup::enumerate_with_cap(simplex, DEFAULT_VOLUME_CAP) {
        Ok(g) => g,
        Err(e) => {
            out.push(("box_group", skip(e.to_string())));
            return out;
        }
    };
    let h = HStarVector::from_box_group(&group);
    let order = group.order();
    let volume = simplex.restrict_to_affine_lattice().normalized_volume();
    let small = BigInt::from(order) <= BigInt::from(max_volume);

    out.push((
        "group_order_equals_volume",
        check(BigInt::from(order) == volume, || format!("|G| = {order}, volume = {volume}")),
    ));
    let sum: u64 = h.coeffs().iter().sum();
    out.push(("hstar_sums_to_order", check(sum as usize == order, || format!("sum {sum} vs {order}"))));
    out.push((
        "expected_hstar",
        match &doc.expected_hstar {
            None => skip("no expected h* in document"),
            Some(e) => match HStarVector::new(e.clone(), None) {
                Ok(exp) => check(exp.same_polynomial(&h), || format!("computed {:?}, expected {e:?}", h.coeffs())),
                Err(err) => fail(format!("expected h* {e:?} is invalid: {err}")),
            },
        },
    ));

    let oracle_gate = if simplex.dim() > ORACLE_MAX_DIM {
        Some(format!("dimension {} above {ORACLE_MAX_DIM}", simplex.dim()))
    } else if !small {
        Some(format!("volume {order} above {max_volume}"))
    } else {
        None
    };
    match &oracle_gate {
        Some(reason) => {
            out.push(("oracle_match", skip(reason.clone())));
            out.push(("ehrhart_counts", skip(reason.clone())));
        }
        None => {
            out.push(("oracle_match", oracle_match(doc, simplex, max_volume)));
            out.push(("ehrhart_counts", ehrhart_counts(simplex, &h)));
        }
    }
    out.push(("structural_facts", facts(simplex, &group, &h)));

    out.push(("support_height_identity", support_height_identity(&group)));
    if order <= PAIRWISE_MAX_ORDER {
        out.push(("subadditivity", subadditivity(&group)));
        out.push(("step_bound", step_bound(&group)));
    } else {
        out.push(("subadditivity", skip(format!("order {order} above {PAIRWISE_MAX_ORDER}"))));
        out.push(("step_bound", skip(format!("order {order} above {PAIRWISE_MAX_ORDER}"))));
    }
    if order <= AXIOM_MAX_ORDER {
        out.push(("group_axioms", group_axioms(&group)));
    } else {
        out.push(("group_axioms", skip(format!("order {order} above {AXIOM_MAX_ORDER}"))));
    }

    out.push(("permutation_invariance", permutation_invariance(simplex, &h)));
    out.push(("embedding_invariance", embedding_invariance(simplex, &h)));
    out.push(("full_face", full_face(simplex, &h)));
    out.push(("face_identification", face_identification(simplex, &group, small)));
    out.push((
        "prime_symmetry",
        match check_prime_symmetry(&h) {
            PrimeSymmetry::Holds { .. } => pass(),
            PrimeSymmetry::Fails { witness, .. } => fail(witness.to_string()),
            PrimeSymmetry::NotApplicable { reason } => skip(reason),
        },
    ));
    out.push(("extract_face_k3", extraction(simplex, &h, 3)));
    out.push(("extract_face_k4", extraction(simplex, &h, 4)));
    out
}

fn oracle_match(doc: &SimplexDocument, simplex: &LatticeSimplex, max_volume: u64) -> Outcome {
    match cross_validate_with_caps(simplex, max_volume, DEFAULT_SCAN_CAP) {
        Ok(cv) => {
            let expected_ok = doc
                .expected_hstar
                .as_ref()
                .is_none_or(|e| HStarVector::new(e.clone(), None).is_ok_and(|e| e.same_polynomial(&cv.oracle_hstar)));
            check(cv.passed() && expected_ok, || {
                format!(
                    "box {:?}, interpolated {:?}, expected {:?}, E({}) counted {} predicted {}",
                    cv.box_hstar.coeffs(),
                    cv.oracle_hstar.coeffs(),
                    doc.expected_hstar,
                    cv.held_out_n,
                    cv.held_out_count,
                    cv.held_out_predicted
                )
            })
        }
        Err(e @ hstarkit::Error::ScanTooLarge { .. }) => skip(e.to_string()),
        Err(e) => fail(e.to_string()),
    }
}

fn ehrhart_counts(simplex: &LatticeSimplex, h: &HStarVector) -> Outcome {
    let run = || -> hstarkit::Result<Option<String>> {
        let counter = PointCounter::new(simplex)?;
        let d = simplex.dim();
        for n in 0..=d as u64 + 1 {
            let count = counter.count(n)?;
            let predicted = h.ehrhart(d, n)?;
            if count != predicted {
                return Ok(Some(format!("E({n}) counted {count}, from h* {predicted}")));
            }
            let interior = counter.count_interior(n)?;
            if interior > count {
                return Ok(Some(format!("dilate {n}: {interior} interior points > {count} points")));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(None) => pass(),
        Ok(Some(msg)) => fail(msg),
        Err(e @ hstarkit::Error::ScanTooLarge { .. }) => skip(e.to_string()),
        Err(e) => fail(e.to_string()),
    }
}

/// Point-count facts need only a few small dilates, so they run in any
/// dimension as long as each scan stays under [`FACTS_SCAN_CAP`].
fn facts(simplex: &LatticeSimplex, group: &BoxGroup, h: &HStarVector) -> Outcome {
    let counter = match PointCounter::with_cap(simplex, FACTS_SCAN_CAP) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    match structural_facts(simplex, group, h, &counter) {
        Ok(report) => match report.first_failure() {
            None => pass(),
            Some(f) => fail(format!("{}: {} vs {}", f.name, f.lhs, f.rhs)),
        },
        Err(e @ hstarkit::Error::ScanTooLarge { .. }) => skip(e.to_string()),
        Err(e) => fail(e.to_string()),
    }
}

fn support_height_identity(group: &BoxGroup) -> Outcome {
    for a in group.elements() {
        let lhs = a.support_size() as u64;
        let rhs = a.height() + a.neg().height();
        if lhs != rhs {
            return fail(format!("{a}: support {lhs}, heights sum to {rhs}"));
        }
    }
    pass()
}

fn subadditivity(group: &BoxGroup) -> Outcome {
    let els = group.elements();
    for (i, a) in els.iter().enumerate() {
        for b in &els[i..] {
            let s = match a.add(b) {
                Ok(s) => s,
                Err(e) => return fail(e.to_string()),
            };
            if s.height() > a.height() + b.height() {
                return fail(format!("height({a} + {b}) = {} > {} + {}", s.height(), a.height(), b.height()));
            }
        }
    }
    pass()
}

fn step_bound(group: &BoxGroup) -> Outcome {
    for a in group.elements() {
        let mut prev = BoxPoint::zero(a.len());
        for j in 1..=a.order() {
            let cur = a.scale(j);
            if cur.height() > prev.height() + a.height() {
                return fail(format!("height({j} * {a}) = {} exceeds the step bound", cur.height()));
            }
            prev = cur;
        }
    }
    pass()
}

fn group_axioms(group: &BoxGroup) -> Outcome {
    let els = group.elements();
    let zero = group.zero();
    for a in els {
        if a.add(zero).as_ref() != Ok(a) {
            return fail(format!("{a} + 0 != {a}"));
        }
        if !a.add(&a.neg()).is_ok_and(|s| s.is_zero()) {
            return fail(format!("{a} has no inverse"));
        }
        for b in els {
            match a.add(b) {
                Ok(s) if group.contains(&s) => {}
                _ => return fail(format!("{a} + {b} is not in the group")),
            }
        }
    }
    // associativity on a deterministic spread of triples
    let step = (els.len() / 12).max(1);
    for a in els.iter().step_by(step) {
        for b in els.iter().step_by(step) {
            for c in els.iter().step_by(step) {
                let l = a.add(b).and_then(|x| x.add(c));
                let r = b.add(c).and_then(|x| a.add(&x));
                if l.is_err() || l != r {
                    return fail(format!("({a} + {b}) + {c} != {a} + ({b} + {c})"));
                }
            }
        }
    }
    pass()
}

fn permutation_invariance(simplex: &LatticeSimplex, h: &HStarVector) -> Outcome {
    let n = simplex.num_vertices();
    let perm: Vec<usize> = (0..n).rev().collect();
    match simplex.permute_vertices(&perm).and_then(|p| HStarVector::of_simplex(&p)) {
        Ok(p) => check(p.same_polynomial(h), || format!("reversed order gives {:?}", p.coeffs())),
        Err(e) => fail(e.to_string()),
    }
}

/// Maps `x` to `(x, x_1 + ... + x_d) + (1, ..., 1)` in one more dimension.
fn embedding_invariance(simplex: &LatticeSimplex, h: &HStarVector) -> Outcome {
    let d = simplex.ambient_dim();
    let verts: Vec<Vec<BigInt>> = simplex
        .vertices()
        .iter()
        .map(|v| {
            let sum: BigInt = v.iter().sum();
            v.iter().chain(std::iter::once(&sum)).map(|x| x + 1).collect()
        })
        .collect();
    match LatticeSimplex::from_vertices(d + 1, verts).and_then(|e| HStarVector::of_simplex(&e)) {
        Ok(e) => check(e.same_polynomial(h), || format!("embedded copy gives {:?}", e.coeffs())),
        Err(e) => fail(e.to_string()),
    }
}

fn full_face(simplex: &LatticeSimplex, h: &HStarVector) -> Outcome {
    let sel = FaceSelector::full(simplex.num_vertices());
    match simplex.face(&sel).and_then(|f| HStarVector::of_simplex(&f)) {
        Ok(f) => check(f.same_polynomial(h), || format!("full face gives {:?}", f.coeffs())),
        Err(e) => fail(e.to_string()),
    }
}

fn face_identification(simplex: &LatticeSimplex, group: &BoxGroup, small: bool) -> Outcome {
    if !small {
        return skip("volume above the suite limit");
    }
    if simplex.num_vertices() > FACE_SWEEP_MAX_VERTICES {
        return skip(format!("{} vertices above {FACE_SWEEP_MAX_VERTICES}", simplex.num_vertices()));
    }
    let faces = match simplex.all_faces() {
        Ok(f) => f,
        Err(e) => return skip(e.to_string()),
    };
    for (sel, face) in faces {
        let fg = match BoxGroup::enumerate(&face) {
            Ok(g) => g,
            Err(e) => return fail(e.to_string()),
        };
        if fg.elements() != points_supported_on(group, &sel).as_slice() {
            return fail(format!("face {:?}", sel.indices()));
        }
    }
    pass()
}

fn extraction(simplex: &LatticeSimplex, h: &HStarVector, k: u64) -> Outcome {
    if !check_zero_window(h, k) {
        return skip(format!("h*_{}..h*_{} not all zero", k + 1, 2 * k));
    }
    match extract_face(simplex, k, Mode::Strict) {
        Ok(c) => check(c.hstar_match && c.subgroup_ok() && c.support_bound_ok() && c.lemma31_ok(), || {
            format!(
                "match {}, subgroup {}, support bound {}, low support bound {}",
                c.hstar_match,
                c.subgroup_ok(),
                c.support_bound_ok(),
                c.lemma31_ok()
            )
        }),
        Err(e) => fail(e.to_string()),
    }
}
