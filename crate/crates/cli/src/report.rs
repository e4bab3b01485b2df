//! Serializable report documents. Field order in every struct is the
//! order written to JSON.

use hstarkit::conditions::{
    Check, Comparison, ConditionReport, HhhVerdict, PrimeSymmetry, PrimeVolumeObstruction, ScottVerdict,
};
use hstarkit::oracle::CrossValidation;
use hstarkit::theorem::{ExtractionCertificate, Lemma31Verdict, Lemma32Verdict};
use hstarkit::{BoxGroup, BoxPoint, HStarVector};
use serde::Serialize;

use crate::document::{JsonInt, SimplexDocument, SCHEMA_VERSION};

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub input: SimplexDocument,
    pub dim: usize,
    pub hstar: Vec<u64>,
    pub degree: usize,
    pub volume: String,
    pub box_group_order: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_hstar_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub box_group: Option<BoxGroupSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ehrhart: Option<EhrhartSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Certificates::is_empty")]
    pub certificates: Certificates,
}

impl ReportDocument {
    pub fn new(command: &'static str, input: &SimplexDocument, group: &BoxGroup) -> Self {
        let h = HStarVector::from_box_group(group);
        let expected_hstar_match = input.expected_hstar.as_ref().map(|e| trim(e) == h.coeffs());
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            command,
            input: input.clone(),
            dim: group.simplex().dim(),
            hstar: h.coeffs().to_vec(),
            degree: h.degree(),
            volume: group.order().to_string(),
            box_group_order: group.order().to_string(),
            expected_hstar_match,
            box_group: None,
            ehrhart: None,
            oracle: None,
            certificates: Certificates::default(),
        }
    }
}

fn trim(v: &[u64]) -> &[u64] {
    let end = v.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    &v[..end]
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Certificates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extraction: Option<ExtractionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionsSection>,
}

impl Certificates {
    fn is_empty(&self) -> bool {
        self.extraction.is_none() && self.conditions.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointJson {
    pub coords: Vec<String>,
    pub height: u64,
}

impl From<&BoxPoint> for PointJson {
    fn from(p: &BoxPoint) -> Self {
        PointJson { coords: p.coords().iter().map(ToString::to_string).collect(), height: p.height() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelJson {
    pub height: u64,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxGroupSection {
    pub invariant_factors: Vec<JsonInt>,
    pub levels: Vec<LevelJson>,
    pub elements: Vec<PointJson>,
}

impl From<&BoxGroup> for BoxGroupSection {
    fn from(g: &BoxGroup) -> Self {
        BoxGroupSection {
            invariant_factors: g.invariant_factors().iter().map(JsonInt::from).collect(),
            levels: g.level_counts().into_iter().map(|(height, count)| LevelJson { height, count }).collect(),
            elements: g.elements().iter().map(PointJson::from).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EhrhartSection {
    pub n: u64,
    pub count: JsonInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_count: Option<JsonInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSection {
    pub box_hstar: Vec<u64>,
    pub oracle_hstar: Vec<u64>,
    #[serde(rename = "match")]
    pub matches: bool,
    pub held_out_n: u64,
    pub held_out_count: JsonInt,
    pub held_out_predicted: JsonInt,
    pub held_out_match: bool,
}

impl From<&CrossValidation> for OracleSection {
    fn from(cv: &CrossValidation) -> Self {
        OracleSection {
            box_hstar: cv.box_hstar.coeffs().to_vec(),
            oracle_hstar: cv.oracle_hstar.coeffs().to_vec(),
            matches: cv.matches,
            held_out_n: cv.held_out_n,
            held_out_count: JsonInt::from(&cv.held_out_count),
            held_out_predicted: JsonInt::from(&cv.held_out_predicted),
            held_out_match: cv.held_out_matches,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma31Json {
    pub checked: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationJson {
    pub point: PointJson,
    pub support_size: u64,
    pub bound: u64,
}

impl From<&Lemma31Verdict> for Lemma31Json {
    fn from(v: &Lemma31Verdict) -> Self {
        Lemma31Json {
            checked: v.checked,
            holds: v.holds(),
            violation: v.violation.as_ref().map(|x| ViolationJson {
                point: PointJson::from(&x.point),
                support_size: x.support_size,
                bound: x.bound,
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma32Json {
    pub size: usize,
    pub contains_zero: bool,
    pub closed_under_add: bool,
    pub closed_under_neg: bool,
    pub support_size: usize,
    pub support_bound: u64,
    pub max_height: u64,
    pub sharp_bound: Option<u64>,
    pub holds: bool,
}

impl From<&Lemma32Verdict> for Lemma32Json {
    fn from(v: &Lemma32Verdict) -> Self {
        Lemma32Json {
            size: v.size,
            contains_zero: v.contains_zero,
            closed_under_add: v.closed_under_add,
            closed_under_neg: v.closed_under_neg,
            support_size: v.support.len(),
            support_bound: v.support_bound,
            max_height: v.max_height,
            sharp_bound: v.sharp_bound,
            holds: v.holds(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractionSection {
    pub k: u64,
    pub strict: bool,
    pub window_holds: bool,
    pub theorem_applies: bool,
    pub low_subgroup: Vec<PointJson>,
    pub support: Vec<usize>,
    pub face: Vec<usize>,
    pub face_hstar: Vec<u64>,
    pub truncation: Vec<u64>,
    pub hstar_match: bool,
    pub lemma31_ok: bool,
    pub subgroup_ok: bool,
    pub support_bound_ok: bool,
    pub lemma31: Lemma31Json,
    pub lemma32: Lemma32Json,
}

impl ExtractionSection {
    pub fn new(c: &ExtractionCertificate, strict: bool) -> Self {
        ExtractionSection {
            k: c.k,
            strict,
            window_holds: c.window_holds,
            theorem_applies: c.theorem_applies,
            low_subgroup: c.lambda_prime.iter().map(PointJson::from).collect(),
            support: c.support.clone(),
            face: c.face_selector.indices().to_vec(),
            face_hstar: c.face_hstar.coeffs().to_vec(),
            truncation: c.truncation.coeffs().to_vec(),
            hstar_match: c.hstar_match,
            lemma31_ok: c.lemma31_ok(),
            subgroup_ok: c.subgroup_ok(),
            support_bound_ok: c.support_bound_ok(),
            lemma31: Lemma31Json::from(&c.lemma31),
            lemma32: Lemma32Json::from(&c.lemma32),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonJson {
    pub expr: String,
    pub lhs: u64,
    pub op: &'static str,
    pub rhs: u64,
    pub holds: bool,
}

impl From<&Comparison> for ComparisonJson {
    fn from(c: &Comparison) -> Self {
        ComparisonJson { expr: c.expr.clone(), lhs: c.lhs, op: c.op.symbol(), rhs: c.rhs, holds: c.holds() }
    }
}

/// One row of a condition report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckJson {
    pub check: &'static str,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<u8>,
    pub witness: Vec<ComparisonJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckJson {
    fn new(check: &'static str, verdict: &'static str) -> Self {
        CheckJson { check, verdict, condition: None, witness: Vec::new(), note: None }
    }

    fn witness(mut self, cs: &[Comparison]) -> Self {
        self.witness = cs.iter().map(ComparisonJson::from).collect();
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionsSection {
    pub non_realizable: bool,
    pub checks: Vec<CheckJson>,
}

fn scott_row(check: &'static str, v: &hstarkit::Result<ScottVerdict>) -> CheckJson {
    match v {
        Ok(ScottVerdict::Satisfied { condition, witness }) => {
            let mut row = CheckJson::new(check, "satisfied").witness(witness);
            row.condition = Some(*condition);
            row
        }
        Ok(ScottVerdict::ViolatesAll { witness }) => CheckJson::new(check, "violated").witness(witness),
        Err(e) => CheckJson::new(check, "not_applicable").note(e.to_string()),
    }
}

fn check_row(check: &'static str, c: &Check) -> CheckJson {
    match c {
        Check::Holds(w) => CheckJson::new(check, "holds").witness(w),
        Check::Fails(w) => CheckJson::new(check, "fails").witness(w),
        Check::NotApplicable(reason) => CheckJson::new(check, "not_applicable").note(reason.clone()),
    }
}

impl From<&ConditionReport> for ConditionsSection {
    fn from(r: &ConditionReport) -> Self {
        let mut checks = vec![
            scott_row("scott_dimension2", &r.scott_dimension2),
            scott_row("scott_degree2", &r.scott_degree2),
            scott_row("scott_universal", &r.scott_universal),
            check_row("h1_ge_hd", &r.eq1),
            check_row("hibi", &r.hibi),
        ];
        checks.push(match &r.lemma_hhh {
            HhhVerdict::NotRealizable { p, i, j } => CheckJson::new("three_term_prime", "not_realizable")
                .note(format!("1 + t^{i} + {}t^{j} with prime volume p = {p}", p - 2)),
            HhhVerdict::Inconclusive { reason } => {
                CheckJson::new("three_term_prime", "inconclusive").note(reason.clone())
            }
        });
        checks.push(match &r.prime_volume {
            PrimeVolumeObstruction::NotRealizable { volume, witness } => {
                CheckJson::new("prime_volume_simplex", "not_realizable")
                    .witness(std::slice::from_ref(witness))
                    .note(format!("h*_1 = 0 forces a simplex; volume {volume} is prime but the symmetry fails"))
            }
            PrimeVolumeObstruction::Inconclusive { reason } => {
                CheckJson::new("prime_volume_simplex", "inconclusive").note(reason.clone())
            }
        });
        checks.push(check_row("shifted_symmetric", &r.shifted_symmetric));
        checks.push(match &r.prime_symmetry {
            PrimeSymmetry::Holds { volume, lo, s } => CheckJson::new("prime_symmetry", "holds")
                .note(format!("volume {volume}, palindrome on h*_{lo}..h*_{s}")),
            PrimeSymmetry::Fails { witness, .. } => {
                CheckJson::new("prime_symmetry", "fails").witness(std::slice::from_ref(witness))
            }
            PrimeSymmetry::NotApplicable { reason } => {
                CheckJson::new("prime_symmetry", "not_applicable").note(reason.clone())
            }
        });
        ConditionsSection { non_realizable: r.proves_non_realizable(), checks }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionsDocument {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub hstar: Vec<u64>,
    pub dim: Option<usize>,
    pub conditions: ConditionsSection,
}

/// Fixed-width text table of a condition report.
pub fn conditions_table(section: &ConditionsSection) -> String {
    let rows: Vec<(String, String, String)> = section
        .checks
        .iter()
        .map(|c| {
            let verdict = match c.condition {
                Some(n) => format!("{} ({n})", c.verdict),
                None => c.verdict.to_string(),
            };
            let mut detail: Vec<String> =
                c.witness.iter().map(|w| format!("{}: {} {} {}", w.expr, w.lhs, w.op, w.rhs)).collect();
            if let Some(n) = &c.note {
                detail.push(n.clone());
            }
            (c.check.to_string(), verdict, detail.join("; "))
        })
        .collect();
    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(5);
    let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(7);
    let mut out = format!("{:<w0$}  {:<w1$}  detail\n", "check", "verdict");
    for (a, b, c) in rows {
        out.push_str(format!("{a:<w0$}  {b:<w1$}  {c}").trim_end());
        out.push('\n');
    }
    out
}
