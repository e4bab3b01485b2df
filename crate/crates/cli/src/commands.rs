use std::io::Write;
use std::path::Path;

use hstarkit::conditions::condition_report;
use hstarkit::constructions;
use hstarkit::oracle::{cross_validate_with_caps, PointCounter};
use hstarkit::theorem::{extract_face_with_cap, Mode};
use hstarkit::{BoxGroup, HStarVector, LatticeSimplex};

use crate::args::{Cli, Command, Family};
use crate::document::{to_json_line, JsonInt, SimplexDocument};
use crate::report::{
    conditions_table, BoxGroupSection, ConditionsDocument, ConditionsSection, EhrhartSection, ExtractionSection,
    OracleSection, ReportDocument,
};
use crate::{search, suite, CliError, CliResult, EXIT_MISMATCH, EXIT_OK};

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<u8> {
    match &cli.command {
        Command::Hstar { file, max_volume } => cmd_hstar(cli, file, *max_volume, out),
        Command::BoxGroup { file, max_volume } => cmd_box_group(cli, file, *max_volume, out),
        Command::Ehrhart { file, n, max_volume, scan_cap } => cmd_ehrhart(cli, file, *n, *max_volume, *scan_cap, out),
        Command::OracleVerify { file, max_volume, scan_cap } => {
            cmd_oracle_verify(cli, file, *max_volume, *scan_cap, out)
        }
        Command::ExtractFace { file, k, max_volume } => cmd_extract_face(cli, file, *k, *max_volume, out),
        Command::Gen { family } => cmd_gen(family, out),
        Command::CheckConditions { hstar, dim } => cmd_check_conditions(cli, hstar, *dim, out),
        Command::VerifySuite { corpus, max_volume } => suite::run_suite(corpus, *max_volume, out),
        Command::Search { k, window, max_order, max_dim, out: path, max_candidates } => {
            let params = search::SearchParams {
                k: *k,
                window: *window,
                max_order: *max_order,
                max_dim: *max_dim,
                max_candidates: *max_candidates,
            };
            match path {
                Some(p) => {
                    let mut file = std::io::BufWriter::new(std::fs::File::create(p)?);
                    let code = search::run_search(&params, &mut file)?;
                    file.flush()?;
                    Ok(code)
                }
                None => search::run_search(&params, out),
            }
        }
    }
}

fn load(file: &Path) -> CliResult<(SimplexDocument, LatticeSimplex)> {
    let doc = SimplexDocument::read(file)?;
    let simplex = doc.simplex()?;
    Ok((doc, simplex))
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    out.write_all(to_json_line(value).as_bytes())?;
    Ok(())
}

fn write_header(out: &mut dyn Write, report: &ReportDocument) -> CliResult<()> {
    let h = HStarVector::new(report.hstar.clone(), None).map_err(|e| CliError::Internal(e.to_string()))?;
    writeln!(out, "name: {}", report.input.display_name())?;
    writeln!(out, "dim: {}", report.dim)?;
    writeln!(out, "h*: {h}")?;
    writeln!(out, "coefficients: {:?}", report.hstar)?;
    writeln!(out, "degree: {}", report.degree)?;
    writeln!(out, "volume: {}", report.volume)?;
    Ok(())
}

/// Exit code for a report whose document carries an expected h*.
fn expected_outcome(report: &ReportDocument) -> u8 {
    if report.expected_hstar_match == Some(false) {
        eprintln!("hstarkit: computed h* {:?} differs from expected {:?}", report.hstar, report.input.expected_hstar);
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}

fn cmd_hstar(cli: &Cli, file: &Path, max_volume: u64, out: &mut dyn Write) -> CliResult<u8> {
    let (doc, simplex) = load(file)?;
    let group = BoxGroup::enumerate_with_cap(&simplex, max_volume)?;
    let mut report = ReportDocument::new("hstar", &doc, &group);
    let h = HStarVector::from_box_group(&group);
    report.certificates.conditions = Some(ConditionsSection::from(&condition_report(&h, Some(report.dim))));
    if cli.json {
        emit_json(out, &report)?;
    } else {
        write_header(out, &report)?;
        if let Some(m) = report.expected_hstar_match {
            writeln!(out, "matches expected: {m}")?;
        }
    }
    Ok(expected_outcome(&report))
}

fn cmd_box_group(cli: &Cli, file: &Path, max_volume: u64, out: &mut dyn Write) -> CliResult<u8> {
    let (doc, simplex) = load(file)?;
    let group = BoxGroup::enumerate_with_cap(&simplex, max_volume)?;
    let mut report = ReportDocument::new("box-group", &doc, &group);
    let section = BoxGroupSection::from(&group);
    if cli.json {
        report.box_group = Some(section);
        emit_json(out, &report)?;
    } else {
        write_header(out, &report)?;
        let factors: Vec<String> = section.invariant_factors.iter().map(|f| f.0.to_string()).collect();
        writeln!(out, "invariant factors: [{}]", factors.join(", "))?;
        writeln!(out, "height  point")?;
        for p in group.elements() {
            writeln!(out, "{:>6}  {p}", p.height())?;
        }
    }
    Ok(expected_outcome(&report))
}

fn cmd_ehrhart(cli: &Cli, file: &Path, n: u64, max_volume: u64, scan_cap: u64, out: &mut dyn Write) -> CliResult<u8> {
    let (doc, simplex) = load(file)?;
    let group = BoxGroup::enumerate_with_cap(&simplex, max_volume)?;
    let mut report = ReportDocument::new("ehrhart", &doc, &group);
    let h = HStarVector::from_box_group(&group);
    let count = h.ehrhart(report.dim, n)?;
    let counter = PointCounter::with_cap(&simplex, scan_cap)?;
    let oracle_count = match counter.count(n) {
        Ok(c) => Some(c),
        Err(hstarkit::Error::ScanTooLarge { .. }) => {
            log::info!("dilate {n} is too large to scan; reporting the h*-based count only");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let matches = oracle_count.as_ref().map(|c| *c == count);
    if cli.json {
        report.ehrhart = Some(EhrhartSection {
            n,
            count: JsonInt::from(&count),
            oracle_count: oracle_count.as_ref().map(JsonInt::from),
            matches,
        });
        emit_json(out, &report)?;
    } else {
        writeln!(out, "E({n}) = {count}")?;
        if let Some(c) = &oracle_count {
            writeln!(out, "direct count: {c}")?;
        }
    }
    if matches == Some(false) {
        return Err(CliError::Mismatch(format!(
            "E({n}) from h* is {count} but the direct count is {}",
            oracle_count.expect("present when compared")
        )));
    }
    Ok(expected_outcome(&report))
}

fn cmd_oracle_verify(cli: &Cli, file: &Path, max_volume: u64, scan_cap: u64, out: &mut dyn Write) -> CliResult<u8> {
    let (doc, simplex) = load(file)?;
    let group = BoxGroup::enumerate_with_cap(&simplex, max_volume)?;
    let mut report = ReportDocument::new("oracle-verify", &doc, &group);
    let cv = cross_validate_with_caps(&simplex, max_volume, scan_cap)?;
    if cli.json {
        report.oracle = Some(OracleSection::from(&cv));
        emit_json(out, &report)?;
    } else {
        writeln!(out, "box-group h*:    {:?}", cv.box_hstar.coeffs())?;
        writeln!(out, "interpolated h*: {:?}", cv.oracle_hstar.coeffs())?;
        writeln!(out, "match: {}", cv.matches)?;
        writeln!(
            out,
            "E({}) counted {} predicted {} match: {}",
            cv.held_out_n, cv.held_out_count, cv.held_out_predicted, cv.held_out_matches
        )?;
    }
    if !cv.passed() {
        return Err(CliError::Mismatch("box-group and lattice-point counts disagree".into()));
    }
    Ok(expected_outcome(&report))
}

fn cmd_extract_face(cli: &Cli, file: &Path, k: u64, max_volume: u64, out: &mut dyn Write) -> CliResult<u8> {
    let (doc, simplex) = load(file)?;
    let mode = if cli.strict { Mode::Strict } else { Mode::Permissive };
    let group = BoxGroup::enumerate_with_cap(&simplex, max_volume)?;
    let cert = extract_face_with_cap(&simplex, k, mode, max_volume)?;
    let mut report = ReportDocument::new("extract-face", &doc, &group);
    let section = ExtractionSection::new(&cert, cli.strict);
    if cli.json {
        report.certificates.extraction = Some(section);
        emit_json(out, &report)?;
    } else {
        write_header(out, &report)?;
        writeln!(out, "k: {k}")?;
        writeln!(out, "window holds: {}", section.window_holds)?;
        writeln!(out, "theorem applies: {}", section.theorem_applies)?;
        writeln!(out, "low subgroup size: {}", section.low_subgroup.len())?;
        writeln!(out, "face vertices: {:?}", section.face)?;
        writeln!(out, "face h*: {}", cert.face_hstar)?;
        writeln!(out, "truncation: {}", cert.truncation)?;
        writeln!(out, "h* match: {}", section.hstar_match)?;
        writeln!(
            out,
            "support bound: {} <= {} ({})",
            section.lemma32.support_size, section.lemma32.support_bound, section.support_bound_ok
        )?;
        writeln!(out, "low subgroup closed: {}", section.subgroup_ok)?;
        writeln!(out, "support size bound on low points: {}", section.lemma31_ok)?;
    }
    Ok(EXIT_OK)
}

fn cmd_gen(family: &Family, out: &mut dyn Write) -> CliResult<u8> {
    let (name, simplex) = match family {
        Family::DeltaCm { c, m } => (format!("delta_cm_c{c}_m{m}"), constructions::delta_cm(*c, *m)?),
        Family::Join { left, right } => {
            let l = SimplexDocument::read(left)?;
            let r = SimplexDocument::read(right)?;
            let name = format!("join_{}_{}", l.display_name(), r.display_name());
            (name, constructions::join(&l.simplex()?, &r.simplex()?)?)
        }
        Family::Lemma41 { a, b, k, l } => {
            (format!("lemma41_a{a}_b{b}_k{k}_l{l}"), constructions::lemma41_simplex(*a, *b, *k, *l)?)
        }
        Family::Prop43 { k, j, p } => (format!("prop43_k{k}_j{j}_p{p}"), constructions::prop43_instance(*k, *j, *p)?),
        Family::Remark44 { k } => (format!("remark44_k{k}"), constructions::remark44_simplex(*k)?),
        Family::Unit { dim } => (format!("unit_d{dim}"), LatticeSimplex::unit(*dim)),
        Family::Cyclic { q, a } => {
            let parts: Vec<String> = a.iter().map(u64::to_string).collect();
            (format!("cyclic_q{q}_a{}", parts.join("-")), constructions::cyclic_simplex(*q, a)?)
        }
    };
    let doc = SimplexDocument::from_simplex(Some(name), &simplex);
    out.write_all(doc.to_json_line().as_bytes())?;
    Ok(EXIT_OK)
}

/// Parses `"1,7,1"` into coefficients.
pub fn parse_hstar(text: &str) -> CliResult<Vec<u64>> {
    let coeffs = text
        .split(',')
        .map(|s| {
            s.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("not a nonnegative integer: {:?}", s.trim())))
        })
        .collect::<CliResult<Vec<u64>>>()?;
    if coeffs.first() != Some(&1) {
        return Err(CliError::Usage("the first coefficient must be 1".into()));
    }
    Ok(coeffs)
}

fn cmd_check_conditions(cli: &Cli, text: &str, dim: Option<usize>, out: &mut dyn Write) -> CliResult<u8> {
    let coeffs = parse_hstar(text)?;
    let h = HStarVector::new(coeffs, dim)?;
    let section = ConditionsSection::from(&condition_report(&h, dim));
    if cli.json {
        emit_json(
            out,
            &ConditionsDocument {
                schema_version: crate::document::SCHEMA_VERSION,
                command: "check-conditions",
                hstar: h.coeffs().to_vec(),
                dim,
                conditions: section,
            },
        )?;
    } else {
        match dim {
            Some(d) => writeln!(out, "h* = {h} (dim {d})")?,
            None => writeln!(out, "h* = {h}")?,
        }
        out.write_all(conditions_table(&section).as_bytes())?;
        writeln!(out, "realizable: {}", if section.non_realizable { "no" } else { "not excluded" })?;
    }
    Ok(EXIT_OK)
}
