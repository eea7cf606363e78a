//! Command dispatch shared by the `hodgelab` binary and its tests.

use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, conjecture_statuses, Catalog, RunOptions};
use crate::chow::ChowRing;
use crate::correlation::correlation_bound_check;
use crate::error::{Error, Result};
use crate::hodge::{kahler_family, rotate_tuple, Report, Verifier};
use crate::invariants::{
    characteristic_polynomial, chromatic_polynomial, f_vector, h_vector, reduced_characteristic,
    reliability_polynomial, sequence_checks, whitney_numbers, IntSequencePoly,
};
use crate::io::{parse_matroid_file, parse_mixed_file, MixedDocument};
use crate::linalg::format_rational;
use crate::matroid::{Matroid, Provenance};
use crate::mixed::{
    af_boxes_check, af_discriminant_check, hr_discriminant_check, mixed_discriminant, mixed_volume_boxes, permanent,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Info,
    Invariants,
    ChowVerify,
    Mixed,
    Correlation,
    Catalog,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSpec {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub catalog: Option<String>,
    /// Restricts `chow-verify` to one degree.
    pub q: Option<usize>,
    pub kahler_samples: usize,
    pub seed: u64,
    pub json: bool,
    /// `catalog --verify` runs every suite instead of listing the corpus.
    pub verify: bool,
}

impl RunSpec {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            catalog: None,
            q: None,
            kahler_samples: 5,
            seed: 0,
            json: false,
            verify: false,
        }
    }
}

/// 0 when every theorem-backed check passed, 1 on a failed check, 2 on bad input.
pub fn exit_code(outcome: &Result<bool>) -> i32 {
    match outcome {
        Ok(true) => 0,
        Ok(false) | Err(Error::Internal(_)) => 1,
        Err(_) => 2,
    }
}

struct Emitter<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Emitter<'_> {
    fn emit(&mut self, kind: &str, value: Value, text: impl FnOnce() -> String) -> Result<()> {
        if self.json {
            let mut obj = json!({"kind": kind});
            if let (Value::Object(o), Value::Object(v)) = (&mut obj, value) {
                o.extend(v);
            }
            writeln!(self.out, "{}", serde_json::to_string(&obj)?)?;
        } else {
            writeln!(self.out, "{}", text())?;
        }
        Ok(())
    }

    fn report(&mut self, r: &Report) -> Result<()> {
        let value = serde_json::to_value(r)?;
        self.emit("report", value, || {
            let q = r.q.map_or(String::new(), |q| format!(" q={q}"));
            let mut line = format!(
                "{} {}{} {} {}",
                r.instance,
                r.check,
                q,
                r.kahler,
                if r.passed { "pass" } else { "FAIL" }
            );
            if let Some(note) = &r.note {
                line.push_str(&format!(" ({note})"));
            }
            if !r.passed {
                if let Some(w) = &r.witness {
                    line.push_str(&format!(" witness={w}"));
                }
            }
            line
        })
    }
}

fn load_matroid(spec: &RunSpec) -> Result<(String, Matroid)> {
    match (&spec.input, &spec.catalog) {
        (Some(path), None) => Ok((path.display().to_string(), parse_matroid_file(path)?)),
        (None, Some(name)) => Ok((name.clone(), catalog::lookup(name)?)),
        _ => Err(Error::Parse {
            location: "arguments".into(),
            message: "exactly one of --input and --catalog is required".into(),
        }),
    }
}

fn seq(s: &IntSequencePoly) -> Value {
    json!(s.coefficients)
}

pub fn run(spec: &RunSpec, out: &mut dyn Write) -> Result<bool> {
    let mut em = Emitter { out, json: spec.json };
    match spec.command {
        Command::Info => info(spec, &mut em),
        Command::Invariants => invariants(spec, &mut em),
        Command::ChowVerify => chow_verify(spec, &mut em),
        Command::Mixed => mixed(spec, &mut em),
        Command::Correlation => correlation(spec, &mut em),
        Command::Catalog => catalog_command(spec, &mut em),
    }
}

fn info(spec: &RunSpec, em: &mut Emitter) -> Result<bool> {
    let (name, m) = load_matroid(spec)?;
    let w = whitney_numbers(&m);
    let bases = m.bases().len();
    em.emit(
        "info",
        json!({"instance": name, "ground": m.ground_size(), "rank": m.rank(), "provenance": m.provenance(),
               "flats_by_rank": w.coefficients, "bases": bases}),
        || {
            format!(
                "{name}: ground set of size {}, rank {}, {:?}, flats by rank {:?}, {bases} bases",
                m.ground_size(),
                m.rank(),
                m.provenance(),
                w.coefficients
            )
        },
    )?;
    Ok(true)
}

fn invariants(spec: &RunSpec, em: &mut Emitter) -> Result<bool> {
    let (name, m) = load_matroid(spec)?;
    let mut ok = true;
    let f = f_vector(&m);
    let h = h_vector(&f, m.rank())?;
    let w = whitney_numbers(&m);
    let chi = characteristic_polynomial(&m);
    let e = reduced_characteristic(&m)?;
    let e_check = sequence_checks(&e);
    ok &= e_check.log_concave;
    let mut sequences = vec![
        ("f_vector", seq(&f), f.coefficients.clone()),
        ("h_vector", seq(&h), h.coefficients.clone()),
        ("w_vector", seq(&w), w.coefficients.clone()),
        ("charpoly", json!(chi.descending()), chi.descending()),
        ("e_sequence", seq(&e), e.coefficients.clone()),
    ];
    if let (Some(edges), Provenance::Graphic) = (m.graph_edges(), m.provenance()) {
        match chromatic_polynomial(edges) {
            Ok(c) => {
                ok &= sequence_checks(&c).log_concave;
                sequences.push(("chromatic", json!(c.descending()), c.descending()));
                let r = reliability_polynomial(edges)?;
                sequences.push(("reliability_o", seq(&r.o), r.o.coefficients.clone()));
                sequences.push(("reliability_h", seq(&r.h), r.h.coefficients.clone()));
            }
            Err(Error::Disconnected { .. }) => {}
            Err(err) => return Err(err),
        }
    }
    for (label, value, raw) in sequences {
        let verdict = sequence_checks(&IntSequencePoly::new(crate::invariants::SequenceKind::FVector, raw.clone()));
        em.emit(
            "sequence",
            json!({"instance": name, "name": label, "values": value,
                   "log_concave": verdict.log_concave, "unimodal": verdict.unimodal}),
            || format!("{name} {label} {raw:?} log-concave={} unimodal={}", verdict.log_concave, verdict.unimodal),
        )?;
    }
    let realizable = !matches!(m.provenance(), Provenance::Explicit);
    for c in conjecture_statuses(&name, &m, realizable)? {
        conjecture(em, &c)?;
    }
    Ok(ok)
}

fn conjecture(em: &mut Emitter, c: &catalog::ConjectureStatus) -> Result<()> {
    em.emit("conjecture", serde_json::to_value(c)?, || {
        format!(
            "{} conjecture '{}' on {:?}: {}",
            c.entry,
            c.conjecture,
            c.sequence,
            if c.holds { "holds" } else { "does not hold" }
        )
    })
}

fn chow_verify(spec: &RunSpec, em: &mut Emitter) -> Result<bool> {
    let (name, m) = load_matroid(spec)?;
    let ring = ChowRing::build(&m)?;
    let d = ring.d();
    let family = kahler_family(&ring, spec.kahler_samples, spec.seed)?;
    let v = Verifier::new(&ring, name.clone());
    em.emit("ring", json!({"instance": name, "dims": ring.dims()}), || {
        format!("{name}: Chow ring dimensions {:?}", ring.dims())
    })?;
    let mut reports = Vec::new();
    match spec.q {
        None => reports.extend(v.verify_all(&family)?),
        Some(q) => {
            if q > d {
                return Err(Error::DegreeOutOfRange { q, top: d });
            }
            reports.push(v.pd_check(q)?);
            if 2 * q <= d {
                for k in 0..family.len() {
                    let tuple = rotate_tuple(&family, k, d - 2 * q + 1);
                    reports.push(v.hl_check(q, &tuple[1..])?);
                    reports.push(v.hr_check(q, &tuple)?);
                }
            }
        }
    }
    if spec.q.is_none() && d >= 2 {
        let tuple = rotate_tuple(&family, 0, d - 2);
        let xi1 = family[0].element(&ring)?;
        let xi2 = family[family.len() - 1].element(&ring)?;
        reports.push(v.af_check(&tuple, &xi1, &xi2)?);
    }
    if spec.q.is_none() {
        reports.push(v.ei_crosscheck()?);
    }
    let mut ok = true;
    for r in &reports {
        ok &= r.passed;
        em.report(r)?;
    }
    Ok(ok)
}

fn correlation(spec: &RunSpec, em: &mut Emitter) -> Result<bool> {
    let (name, m) = load_matroid(spec)?;
    let r = correlation_bound_check(&m)?;
    let mut ok = r.bound_satisfied && r.restrictions_one_positive();
    if !r.hr_matrix.is_zero() {
        ok &= r.signature.positive == 1;
    }
    if m.provenance() == Provenance::Graphic {
        ok &= !r.exceeds_one;
    }
    let mut value = serde_json::to_value(&r)?;
    if let Value::Object(o) = &mut value {
        o.insert("instance".into(), json!(name));
    }
    em.emit("correlation", value, || {
        let mut s = format!("{name}: HR(M) =\n{}", r.hr_matrix);
        s.push_str(&format!("\nsignature {}", r.signature));
        s.push_str(&format!(
            "\nmax ratio {} at {:?}, bound {} {}",
            format_rational(&r.max_ratio),
            r.max_pair,
            format_rational(&r.bound),
            if r.bound_satisfied { "satisfied" } else { "VIOLATED" }
        ));
        if r.exceeds_one {
            s.push_str("\nsome pair is positively correlated");
        }
        s
    })?;
    Ok(ok)
}

fn mixed(spec: &RunSpec, em: &mut Emitter) -> Result<bool> {
    let path = spec.input.as_ref().ok_or_else(|| Error::Parse {
        location: "arguments".into(),
        message: "mixed requires --input".into(),
    })?;
    let instance = path.display().to_string();
    let value = |em: &mut Emitter, label: &str, v: &crate::linalg::Rational| {
        let s = format_rational(v);
        em.emit("value", json!({"instance": instance, "name": label, "value": s}), || {
            format!("{instance} {label} = {s}")
        })
    };
    match parse_mixed_file(path)? {
        MixedDocument::Permanent(m) => {
            value(em, "permanent", &permanent(&m)?)?;
            Ok(true)
        }
        MixedDocument::Boxes(b) => {
            value(em, "mixed_volume", &mixed_volume_boxes(&b)?)?;
            if b.d() >= 2 && b.widths().len() == b.d() {
                let r = af_boxes_check(&b)?;
                em.report(&r)?;
                return Ok(r.passed);
            }
            Ok(true)
        }
        MixedDocument::Discriminant(t) => {
            if t.len() == t.d() {
                value(em, "mixed_discriminant", &mixed_discriminant(&t)?)?;
                if t.d() >= 2 && t.check_psd().is_ok() {
                    let r = af_discriminant_check(&t)?;
                    em.report(&r)?;
                    return Ok(r.passed);
                }
                Ok(true)
            } else if t.d() >= 2 && t.len() + 2 == t.d() {
                let r = hr_discriminant_check(&t)?;
                em.report(&r)?;
                Ok(r.passed)
            } else {
                Err(Error::DimensionMismatch(format!(
                    "{} matrices of size {}; expected {} or {}",
                    t.len(),
                    t.d(),
                    t.d(),
                    t.d().saturating_sub(2)
                )))
            }
        }
    }
}

#[derive(Serialize)]
struct Listing<'a> {
    name: &'a str,
    realizable: bool,
    expected: Value,
}

fn catalog_command(spec: &RunSpec, em: &mut Emitter) -> Result<bool> {
    if !spec.verify {
        let c = Catalog::shipped()?;
        for e in &c.entries {
            if spec.catalog.as_deref().is_some_and(|n| n != e.name) {
                continue;
            }
            let expected = serde_json::to_value(&e.expected)?;
            let l = Listing {
                name: &e.name,
                realizable: e.realizable,
                expected: expected.clone(),
            };
            em.emit("entry", serde_json::to_value(&l)?, || {
                let vals: Vec<String> = e.expected.iter().map(|(k, v)| format!("{k}={:?}", v.values)).collect();
                format!("{} {}", e.name, vals.join(" "))
            })?;
        }
        return Ok(true);
    }
    let summary = catalog::run_all(RunOptions {
        kahler_samples: spec.kahler_samples,
        seed: spec.seed,
    })?;
    for s in &summary.suites {
        em.emit("suite", serde_json::to_value(s)?, || {
            let mut line = format!("{} {} checks {}", s.name, s.checks, if s.passed { "pass" } else { "FAIL" });
            for f in &s.failures {
                line.push_str(&format!("\n  {f}"));
            }
            line
        })?;
    }
    for c in &summary.conjectures {
        conjecture(em, c)?;
    }
    Ok(summary.passed())
}
