//! Exploratory enumeration of cyclic box groups.
//!
//! A generator `a/q` with `0 < a_i < q`, `sum a_i ≡ 0 (mod q)` and
//! `gcd(a, q) = 1` determines the box group of a simplex with `len(a)`
//! vertices. Heights of its multiples give the h*-vector directly, so
//! candidates are screened without building a simplex; only those matching
//! the window are realized and passed to face extraction.

use std::io::Write;

use hstarkit::constructions::cyclic_simplex;
use hstarkit::theorem::{extract_face, Mode};
use hstarkit::{HStarVector, LatticeSimplex};
use serde::Serialize;

use crate::args::WindowKind;
use crate::document::to_json_line;
use crate::{CliError, CliResult, EXIT_MISMATCH, EXIT_OK};

pub const MAX_ORDER_LIMIT: u64 = 10_000;
pub const MAX_DIM_LIMIT: usize = 20;

#[derive(Debug, Clone)]
pub struct SearchParams {
    pub k: u64,
    pub window: WindowKind,
    pub max_order: u64,
    pub max_dim: usize,
    pub max_candidates: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceRecord {
    pub record: &'static str,
    pub q: u64,
    pub generator: Vec<u64>,
    pub dim: usize,
    pub hstar: Vec<u64>,
    pub window: &'static str,
    pub k: u64,
    pub theorem_applies: bool,
    pub face: Vec<usize>,
    pub face_hstar: Vec<u64>,
    pub truncation: Vec<u64>,
    pub face_realizes_truncation: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRecord {
    pub record: &'static str,
    pub k: u64,
    pub window: &'static str,
    pub max_order: u64,
    pub max_dim: usize,
    pub candidates: u64,
    pub recorded: u64,
    pub truncated: bool,
    pub theorem_failures: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// h*-vector of the group generated by `a/q`, from the heights of its
/// multiples.
pub fn cyclic_hstar(q: u64, a: &[u64]) -> Vec<u64> {
    let mut h = vec![0u64; a.len().max(1)];
    h[0] = 1;
    for j in 1..q {
        let total: u64 = a.iter().map(|&x| x * j % q).sum();
        h[(total / q) as usize] += 1;
    }
    while h.len() > 1 && h[h.len() - 1] == 0 {
        h.pop();
    }
    h
}

/// `a` is the smallest sorted tuple among `sorted(u a mod q)` over units `u`.
pub fn is_canonical(q: u64, a: &[u64]) -> bool {
    let mut scaled = vec![0u64; a.len()];
    for u in 2..q {
        if gcd(u, q) != 1 {
            continue;
        }
        for (s, &x) in scaled.iter_mut().zip(a) {
            *s = x * u % q;
        }
        scaled.sort_unstable();
        if scaled.as_slice() < a {
            return false;
        }
    }
    true
}

fn window_holds(h: &[u64], k: u64, kind: WindowKind) -> bool {
    let k = k as usize;
    let end = match kind {
        WindowKind::Weak => 2 * k - 1,
        WindowKind::Strong => 2 * k,
    };
    (k + 1..=end).all(|i| h.get(i).copied().unwrap_or(0) == 0)
}

/// Calls `visit` on every nondecreasing tuple of length `len` over
/// `1..q` with sum divisible by `q`; stops when it returns `false`.
fn for_each_tuple(q: u64, len: usize, visit: &mut dyn FnMut(&[u64]) -> bool) -> bool {
    fn rec(q: u64, len: usize, buf: &mut Vec<u64>, sum: u64, visit: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        if buf.len() + 1 == len {
            let last = (q - sum % q) % q;
            let prev = buf.last().copied().unwrap_or(1);
            if last == 0 || last < prev {
                return true;
            }
            buf.push(last);
            let go_on = visit(buf);
            buf.pop();
            return go_on;
        }
        let start = buf.last().copied().unwrap_or(1);
        for x in start..q {
            buf.push(x);
            let go_on = rec(q, len, buf, sum + x, visit);
            buf.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(q, len, &mut Vec::with_capacity(len), 0, visit)
}

fn realize(q: u64, a: &[u64], params: &SearchParams) -> CliResult<(InstanceRecord, bool)> {
    let simplex = if q == 1 { LatticeSimplex::unit(0) } else { cyclic_simplex(q, a)? };
    let expected = cyclic_hstar(q, a);
    let (record, ok) = match extract_face(&simplex, params.k, Mode::Permissive) {
        Ok(c) => {
            if c.hstar.coeffs() != expected.as_slice() {
                return Err(CliError::Mismatch(format!(
                    "generator {a:?}/{q}: realized simplex has h* {:?}, group gives {expected:?}",
                    c.hstar.coeffs()
                )));
            }
            let rec = InstanceRecord {
                record: "instance",
                q,
                generator: a.to_vec(),
                dim: simplex.dim(),
                hstar: expected,
                window: params.window.as_str(),
                k: params.k,
                theorem_applies: c.theorem_applies,
                face: c.face_selector.indices().to_vec(),
                face_hstar: c.face_hstar.coeffs().to_vec(),
                truncation: c.truncation.coeffs().to_vec(),
                face_realizes_truncation: c.hstar_match,
            };
            (rec, true)
        }
        Err(hstarkit::Error::Internal(msg)) => {
            log::error!("generator {a:?}/{q}: {msg}");
            let truncation = HStarVector::new(expected.clone(), None)?.truncate(params.k as usize);
            let rec = InstanceRecord {
                record: "instance",
                q,
                generator: a.to_vec(),
                dim: simplex.dim(),
                hstar: expected,
                window: params.window.as_str(),
                k: params.k,
                theorem_applies: true,
                face: Vec::new(),
                face_hstar: Vec::new(),
                truncation: truncation.coeffs().to_vec(),
                face_realizes_truncation: false,
            };
            (rec, false)
        }
        Err(e) => return Err(e.into()),
    };
    Ok((record, ok))
}

/// Enumerates generators by increasing order `q`, then increasing length,
/// then lexicographically. Writes one line per recorded instance and a
/// final summary line.
pub fn run_search(params: &SearchParams, out: &mut dyn Write) -> CliResult<u8> {
    if params.k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    if params.max_order == 0 {
        return Err(CliError::Usage("max-order must be at least 1".into()));
    }
    if params.max_order > MAX_ORDER_LIMIT {
        return Err(CliError::Cap(format!("max-order {} above {MAX_ORDER_LIMIT}", params.max_order)));
    }
    if params.max_dim > MAX_DIM_LIMIT {
        return Err(CliError::Cap(format!("max-dim {} above {MAX_DIM_LIMIT}", params.max_dim)));
    }

    let mut candidates = 0u64;
    let mut recorded = 0u64;
    let mut failures = 0u64;
    let mut truncated = false;
    let mut error: Option<CliError> = None;

    let mut handle = |q: u64, a: &[u64], out: &mut dyn Write| -> bool {
        if candidates >= params.max_candidates {
            truncated = true;
            return false;
        }
        candidates += 1;
        let h = cyclic_hstar(q, a);
        if !window_holds(&h, params.k, params.window) {
            return true;
        }
        let result = realize(q, a, params).and_then(|(rec, ok)| {
            out.write_all(to_json_line(&rec).as_bytes())?;
            Ok(ok)
        });
        match result {
            Ok(ok) => {
                recorded += 1;
                failures += u64::from(!ok);
                true
            }
            Err(e) => {
                error = Some(e);
                false
            }
        }
    };

    // q = 1: the unimodular simplex, recorded once as a point
    let mut go_on = handle(1, &[], out);
    'outer: for q in 2..=params.max_order {
        if !go_on {
            break;
        }
        for len in 2..=params.max_dim + 1 {
            go_on = for_each_tuple(q, len, &mut |a| {
                if a.iter().fold(q, |g, &x| gcd(g, x)) != 1 || !is_canonical(q, a) {
                    return true;
                }
                handle(q, a, out)
            });
            if !go_on {
                break 'outer;
            }
        }
    }
    if let Some(e) = error {
        return Err(e);
    }
    if truncated {
        log::warn!("stopped after {candidates} candidates; raise --max-candidates to continue");
    }
    let summary = SummaryRecord {
        record: "summary",
        k: params.k,
        window: params.window.as_str(),
        max_order: params.max_order,
        max_dim: params.max_dim,
        candidates,
        recorded,
        truncated,
        theorem_failures: failures,
    };
    out.write_all(to_json_line(&summary).as_bytes())?;
    Ok(if failures > 0 { EXIT_MISMATCH } else { EXIT_OK })
}
