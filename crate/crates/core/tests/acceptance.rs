//! One line per acceptance criterion, each with its runtime budget.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{descartes_inertia, k4_edges, naive_permanent, q, reduced, Oracle, Q};
use hodgelab::catalog::{self, conjecture_statuses, Catalog, ConjectureStatus, RunOptions, SuiteResult, Summary};
use hodgelab::chow::ChowRing;
use hodgelab::correlation::{correlation_bound_check, hr_matrix};
use hodgelab::hodge::Verifier;
use hodgelab::invariants::{
    characteristic_polynomial, chromatic_polynomial, f_vector, h_vector, reliability_polynomial, sequence_checks,
};
use hodgelab::linalg::{signature, Inertia, RationalMatrix};
use hodgelab::matroid::Matroid;
use hodgelab::mixed::{
    af_discriminant_check, diagonal_tuple, hr_discriminant_check, mixed_discriminant, permanent, random_nonnegative,
    random_psd, SymMatrixTuple,
};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn catalog_matroids() -> Result<Vec<(String, Matroid)>, String> {
    let c = Catalog::shipped().map_err(err)?;
    c.names()
        .into_iter()
        .map(|n| c.build(n).map(|m| (n.to_string(), m)).map_err(err))
        .collect()
}

fn oracle_for(c: &Catalog, name: &str) -> Oracle {
    let resolve = |n: &str| c.entry(n).unwrap().matroid.clone();
    Oracle::from_document(&c.entry(name).unwrap().matroid, &resolve)
}

fn fano_f_vector() -> Outcome {
    let c = Catalog::shipped().map_err(err)?;
    let m = c.build("fano").map_err(err)?;
    let f = f_vector(&m).coefficients;
    ensure(f == vec![1, 7, 21, 28], format!("f = {f:?}"))?;
    ensure(oracle_for(&c, "fano").f_vector() == f, "subset enumeration disagrees")?;
    Ok(format!("f = {f:?}"))
}

fn c4_chromatic() -> Outcome {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 0)];
    let chrom = chromatic_polynomial(&edges).map_err(err)?.descending();
    let expected = vec![1, -4, 6, -3, 0];
    ensure(chrom == expected, format!("deletion-contraction gives {chrom:?}"))?;
    let m = Matroid::from_graph(&edges).map_err(err)?;
    let mut via_matroid = characteristic_polynomial(&m).descending();
    via_matroid.push(0);
    ensure(via_matroid == expected, format!("q·χ gives {via_matroid:?}"))?;
    for k in 0..=5i64 {
        let value: i64 = expected.iter().fold(0, |acc, &c| acc * k + c);
        ensure(value == common::count_colourings(4, &edges, k as usize), format!("colourings at q = {k}"))?;
    }
    Ok("q^4 - 4q^3 + 6q^2 - 3q by both routes".into())
}

fn hr_k4() -> Outcome {
    let m = Matroid::from_graph(&k4_edges()).map_err(err)?;
    let h = hr_matrix(&m).map_err(err)?;
    let display = RationalMatrix::from_i64(&common::hr_k4_display());
    ensure(h == display, format!("matrix differs:\n{h}"))?;
    let sig = signature(&h).map_err(err)?;
    ensure(sig == Inertia::new(1, 5, 0), format!("signature {sig}"))?;
    let rows: Vec<Vec<Q>> = common::hr_k4_display()
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();
    ensure(descartes_inertia(&rows) == (1, 5, 0), "Descartes count disagrees")?;
    Ok(format!("matrix matches, signature {sig}"))
}

fn k4_reliability() -> Outcome {
    let r = reliability_polynomial(&k4_edges()).map_err(err)?;
    ensure(r.o.coefficients == vec![16, 15, 6, 1], format!("o = {:?}", r.o.coefficients))?;
    ensure(r.h.coefficients == vec![1, 3, 6, 6], format!("h = {:?}", r.h.coefficients))?;
    let dual = Matroid::from_graph(&k4_edges()).and_then(|m| m.dual()).map_err(err)?;
    let h = h_vector(&f_vector(&dual), dual.rank()).map_err(err)?;
    ensure(h.coefficients == r.h.coefficients, format!("dual transform gives {:?}", h.coefficients))?;
    let oracle = Oracle::graph(&k4_edges()).dual();
    let oracle_f = oracle.f_vector();
    ensure(oracle_f == f_vector(&dual).coefficients, "dual f-vector disagrees with enumeration")?;
    Ok("o = (16, 15, 6, 1), h = (1, 3, 6, 6)".into())
}

fn hodge_suite() -> Outcome {
    let opts = RunOptions::default();
    let mut suite = SuiteResult {
        name: "pd-hl-hr".into(),
        checks: 0,
        passed: true,
        failures: vec![],
    };
    let all = catalog_matroids()?;
    for (name, m) in &all {
        let ring = ChowRing::build(m).map_err(|e| format!("{name}: {e}"))?;
        catalog::hodge_suite(name, &ring, opts, &mut suite).map_err(|e| format!("{name}: {e}"))?;
    }
    ensure(suite.passed, suite.failures.join("; "))?;
    Ok(format!(
        "{} checks on {} matroids with the default and {} random Kähler classes",
        suite.checks,
        all.len(),
        opts.kahler_samples
    ))
}

fn e_identity() -> Outcome {
    let c = Catalog::shipped().map_err(err)?;
    let mut n = 0;
    for (name, m) in catalog_matroids()? {
        let ring = ChowRing::build(&m).map_err(err)?;
        let report = Verifier::new(&ring, name.clone()).ei_crosscheck().map_err(err)?;
        ensure(report.passed, format!("{name}: {:?}", report.witness))?;
        let e = reduced(&oracle_for(&c, &name).charpoly());
        let degrees = hodgelab::hodge::alpha_beta_degrees(&ring).map_err(err)?;
        let as_q: Vec<Q> = e.iter().map(|&x| q(x)).collect();
        ensure(degrees == as_q, format!("{name}: degrees differ from the subset expansion"))?;
        let seq = hodgelab::invariants::IntSequencePoly::new(hodgelab::invariants::SequenceKind::ReducedCharpoly, e);
        ensure(sequence_checks(&seq).log_concave, format!("{name}: e not log-concave"))?;
        n += 1;
    }
    Ok(format!("{n} matroids, every e-sequence log-concave"))
}

fn correlation() -> Outcome {
    let c = Catalog::shipped().map_err(err)?;
    let mut checked = 0;
    for (name, m) in catalog_matroids()? {
        if m.rank() < 2 {
            continue;
        }
        let r = correlation_bound_check(&m).map_err(err)?;
        ensure(r.bound_satisfied, format!("{name}: ratio {} > {}", r.max_ratio, r.bound))?;
        // Pair ratios recomputed from enumerated bases.
        let oracle = oracle_for(&c, &name);
        let bases = oracle.bases();
        let b = bases.len() as i64;
        let count = |mask: usize| bases.iter().filter(|&&s| s & mask == mask).count() as i64;
        let mut best = Q::zero();
        for i in 0..m.ground_size() {
            for j in i + 1..m.ground_size() {
                let (bi, bj) = (count(1 << i), count(1 << j));
                if bi > 0 && bj > 0 {
                    best = best.max(Q::new((b * count(1 << i | 1 << j)).into(), (bi * bj).into()));
                }
            }
        }
        ensure(best == r.max_ratio, format!("{name}: enumeration gives {best}"))?;
        if m.graph_edges().is_some() {
            ensure(!r.exceeds_one, format!("{name}: graphic ratio above 1"))?;
        }
        if name == "k4" {
            ensure(r.max_ratio == q(1), "K4 maximum is not 1")?;
        }
        checked += 1;
    }
    Ok(format!("{checked} matroids within 2 - 2/rank, K4 maximum exactly 1"))
}

fn mixed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..20 {
        let a = random_nonnegative(&mut rng, 4);
        let lhs = mixed_discriminant(&diagonal_tuple(&a)).map_err(err)? * q(24);
        let rows: Vec<Vec<Q>> = (0..4).map(|i| a.row(i).to_vec()).collect();
        ensure(lhs == naive_permanent(&rows), format!("4!·D ≠ per for\n{a}"))?;
        ensure(permanent(&a).map_err(err)? == naive_permanent(&rows), "Ryser disagrees")?;
    }
    for k in 0..10 {
        let d = 2 + k % 3;
        let ms: Vec<RationalMatrix> = (0..d).map(|_| random_psd(&mut rng, d)).collect();
        let hr = hr_discriminant_check(&SymMatrixTuple::new(d, ms[2..].to_vec()).map_err(err)?).map_err(err)?;
        ensure(hr.passed, format!("HR(P) fails in d = {d}: {:?}", hr.witness))?;
        let af = af_discriminant_check(&SymMatrixTuple::new(d, ms).map_err(err)?).map_err(err)?;
        ensure(af.passed, format!("AF fails in d = {d}: {:?}", af.witness))?;
    }
    for d in 2..=6i64 {
        let j: Vec<Vec<Q>> = vec![vec![Q::new(1.into(), d.into()); d as usize]; d as usize];
        let fact: i64 = (1..=d).product();
        let expected = Q::new(fact.into(), d.pow(d as u32).into());
        let m = RationalMatrix::from_rows(j.clone()).map_err(err)?;
        ensure(permanent(&m).map_err(err)? == expected, format!("per(J/{d})"))?;
        ensure(naive_permanent(&j) == expected, format!("naive per(J/{d})"))?;
    }
    Ok("20 permanent identities, 10 HR(P) and AF tuples, per(J/d) = d!/d^d for d = 2..6".into())
}

fn properties() -> Outcome {
    let bad = catalog::congruence_cases(100, 0).map_err(err)?;
    ensure(bad == 0, format!("{bad} congruence failures"))?;
    let c = Catalog::shipped().map_err(err)?;
    let mut elements = 0;
    let mut duals = 0;
    for (name, m) in catalog_matroids()? {
        let oracle = oracle_for(&c, &name);
        let f = f_vector(&m).coefficients;
        for e in 0..m.ground_size() {
            // Deletion and contraction as rank tables, valid even when the minor has loops.
            let keep: Vec<usize> = (0..m.ground_size()).filter(|&x| x != e).collect();
            let del = Oracle::from_fn(keep.len(), |s| {
                oracle.rank[s.iter().fold(0, |a, &i| a | 1 << keep[i])]
            });
            let re = oracle.rank[1 << e];
            let con = Oracle::from_fn(keep.len(), |s| {
                oracle.rank[s.iter().fold(1 << e, |a, &i| a | 1 << keep[i])] - re
            });
            let (fd, fc) = (del.f_vector(), con.f_vector());
            for (k, &fk) in f.iter().enumerate() {
                let a = fd.get(k).copied().unwrap_or(0);
                let b = if k == 0 { 0 } else { fc.get(k - 1).copied().unwrap_or(0) };
                ensure(fk == a + b, format!("{name}: deletion-contraction at element {e}"))?;
            }
            if let (Ok(d), Ok(k)) = (m.delete(e), m.contract(e)) {
                ensure(f_vector(&d).coefficients == fd, format!("{name}: library deletion of {e}"))?;
                ensure(f_vector(&k).coefficients == fc, format!("{name}: library contraction of {e}"))?;
            }
            elements += 1;
        }
        if (0..m.ground_size()).all(|e| !m.is_coloop(e)) {
            let back = m.dual().and_then(|d| d.dual()).map_err(err)?;
            ensure(back == m, format!("{name}: dual is not an involution"))?;
            duals += 1;
        }
        let ring = ChowRing::build(&m).map_err(err)?;
        for j in 0..m.ground_size() {
            let (a, b) = ring.alpha_beta_at(j).map_err(err)?;
            let (a0, b0) = ring.alpha_beta_at(0).map_err(err)?;
            ensure(a == a0 && b == b0, format!("{name}: α, β depend on j = {j}"))?;
        }
        ensure(ring.chain_degrees_are_one().map_err(err)?, format!("{name}: flag of degree ≠ 1"))?;
    }
    Ok(format!(
        "100 congruences, deletion-contraction at {elements} elements, {duals} dual involutions, α/β and flag degrees"
    ))
}

fn conjectures() -> Outcome {
    let mut c = Catalog::shipped().map_err(err)?;
    c.entries.retain(|e| ["k4", "fano", "nonpappus"].contains(&e.name.as_str()));
    let summary = catalog::run_catalog(&c, RunOptions { kahler_samples: 1, seed: 0 }).map_err(err)?;
    ensure(summary.passed(), "small catalog run failed")?;
    ensure(
        summary.conjectures.iter().any(|s| s.entry == "nonpappus" && s.conjecture.contains("whitney")),
        "no Whitney report for the non-realizable entry",
    )?;
    ensure(summary.conjectures.len() == 4, format!("{} reports", summary.conjectures.len()))?;
    // A report that does not hold must leave the verdict untouched.
    let mut forced = Summary {
        conjectures: vec![ConjectureStatus {
            entry: "x".into(),
            conjecture: "h-vector log-concave".into(),
            sequence: vec![1, 1, 2],
            holds: false,
        }],
        ..summary.clone()
    };
    ensure(forced.passed(), "a failing conjecture report changed the verdict")?;
    forced.conjectures.clear();
    let m = Matroid::uniform(3, 5).map_err(err)?;
    let statuses = conjecture_statuses("u_3_5", &m, true).map_err(err)?;
    ensure(statuses.len() == 1, "realizable entries only get the h-vector report")?;
    let lines: Vec<String> = summary
        .conjectures
        .iter()
        .map(|s| format!("{} {}={}", s.entry, s.conjecture, s.holds))
        .collect();
    Ok(lines.join(", "))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Duration, fn() -> Outcome)> = vec![
        ("Fano f-vector", Duration::from_secs(1), fano_f_vector),
        ("C4 chromatic polynomial", Duration::from_secs(1), c4_chromatic),
        ("HR(K4) matrix and signature", Duration::from_secs(1), hr_k4),
        ("K4 reliability", Duration::from_secs(1), k4_reliability),
        ("PD/HL/HR suite", Duration::from_secs(300), hodge_suite),
        ("e_i identity and log-concavity", Duration::from_secs(60), e_identity),
        ("correlation bound", Duration::from_secs(60), correlation),
        ("mixed forms", Duration::from_secs(60), mixed_forms),
        ("property suites", Duration::from_secs(60), properties),
        ("conjecture reports", Duration::from_secs(60), conjectures),
    ];
    let mut failed = 0;
    for (i, (label, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed < budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget {budget:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {label} ({:.2?} of {budget:?}): {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
