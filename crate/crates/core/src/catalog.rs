//! The shipped corpus of matroids with expected invariants, and the suites run against it.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chow::ChowRing;
use crate::correlation::correlation_bound_check;
use crate::error::{Error, Result};
use crate::hodge::{kahler_family, rotate_tuple, Check, Verifier};
use crate::invariants::{
    characteristic_polynomial, f_vector, h_vector, reduced_characteristic, sequence_checks, whitney_numbers,
};
use crate::io::matroid_from_value;
use crate::linalg::{rat, ratio, signature, Rational, RationalMatrix};
use crate::matroid::{Matroid, Provenance};
use crate::mixed::{
    af_discriminant_check, diagonal_tuple, hr_discriminant_check, mixed_discriminant, permanent, random_nonnegative,
    random_psd, SymMatrixTuple,
};

pub const CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    WorkedExample,
    ByDefinition,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub values: Vec<i64>,
    pub provenance: Source,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    /// A matroid input document, or `{"dual_of": name}`.
    pub matroid: Value,
    pub realizable: bool,
    pub expected: BTreeMap<String, Expected>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

/// Quantities stored per entry. `charpoly` is listed from the leading coefficient down.
pub const QUANTITIES: [&str; 5] = ["f_vector", "w_vector", "charpoly", "e_sequence", "bases"];

impl Catalog {
    pub fn shipped() -> Result<Self> {
        Self::from_json(CATALOG_JSON)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownCatalog(name.to_string()))
    }

    pub fn build(&self, name: &str) -> Result<Matroid> {
        let entry = self.entry(name)?;
        match entry.matroid.get("dual_of").and_then(Value::as_str) {
            Some(base) => self.build(base)?.dual(),
            None => matroid_from_value(&entry.matroid),
        }
    }
}

/// Normalises `u_{3}_{5}` to `u_3_5`.
fn canonical_name(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace(['{', '}'], "")
}

/// Resolves a catalog name. Uniform matroids `u_r_n` are accepted for any valid `r`, `n`.
pub fn lookup(name: &str) -> Result<Matroid> {
    let name = canonical_name(name);
    let catalog = Catalog::shipped()?;
    if catalog.entry(&name).is_ok() {
        return catalog.build(&name);
    }
    let parts: Vec<&str> = name.split('_').collect();
    if let ["u", r, n] = parts.as_slice() {
        if let (Ok(r), Ok(n)) = (r.parse(), n.parse()) {
            return Matroid::uniform(r, n);
        }
    }
    Err(Error::UnknownCatalog(name))
}

pub fn compute(m: &Matroid, quantity: &str) -> Result<Vec<i64>> {
    Ok(match quantity {
        "f_vector" => f_vector(m).coefficients,
        "w_vector" => whitney_numbers(m).coefficients,
        "charpoly" => characteristic_polynomial(m).descending(),
        "e_sequence" => reduced_characteristic(m)?.coefficients,
        "bases" => vec![m.bases().len() as i64],
        other => return Err(Error::Internal(format!("unknown quantity {other}"))),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenFailure {
    pub entry: String,
    pub quantity: String,
    pub expected: Vec<i64>,
    pub actual: Option<Vec<i64>>,
    pub error: Option<String>,
}

/// Compares every stored value with the library's computation.
pub fn golden(catalog: &Catalog) -> (usize, Vec<GoldenFailure>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for entry in &catalog.entries {
        let m = catalog.build(&entry.name);
        for (quantity, exp) in &entry.expected {
            checked += 1;
            let actual = m.as_ref().map_err(|e| e.to_string()).and_then(|m| {
                compute(m, quantity).map_err(|e| e.to_string())
            });
            match actual {
                Ok(v) if v == exp.values => {}
                Ok(v) => failures.push(GoldenFailure {
                    entry: entry.name.clone(),
                    quantity: quantity.clone(),
                    expected: exp.values.clone(),
                    actual: Some(v),
                    error: None,
                }),
                Err(e) => failures.push(GoldenFailure {
                    entry: entry.name.clone(),
                    quantity: quantity.clone(),
                    expected: exp.values.clone(),
                    actual: None,
                    error: Some(e),
                }),
            }
        }
    }
    (checked, failures)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            checks: 0,
            passed: true,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            self.failures.push(what());
        }
    }

    fn record_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, what),
            Err(e) => self.record(false, || format!("{}: {e}", what())),
        }
    }
}

/// Status of an open conjecture on one entry; never affects the outcome of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureStatus {
    pub entry: String,
    pub conjecture: String,
    pub sequence: Vec<i64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub kahler_samples: usize,
    pub suites: Vec<SuiteResult>,
    pub conjectures: Vec<ConjectureStatus>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub kahler_samples: usize,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            kahler_samples: 5,
            seed: 0,
        }
    }
}

/// PD for all q, HL and HR for every q ≤ d/2 and every rotation of the sampled family,
/// and HR ⇒ HL on each tuple.
pub fn hodge_suite(name: &str, ring: &ChowRing, opts: RunOptions, suite: &mut SuiteResult) -> Result<()> {
    let family = kahler_family(ring, opts.kahler_samples, opts.seed)?;
    let reports = Verifier::new(ring, name).verify_all(&family)?;
    for pair in reports.iter().filter(|r| r.check != Check::PD).collect::<Vec<_>>().chunks(2) {
        if let [hl, hr] = pair {
            suite.record(!hr.passed || hl.passed, || format!("{name}: HR passed but HL failed at q={:?}", hr.q));
        }
    }
    for r in reports {
        suite.record(r.passed, || {
            format!("{name}: {} q={:?} {} {}", r.check, r.q, r.kahler, r.witness.clone().unwrap_or_default())
        });
    }
    Ok(())
}

/// The e-sequence from degrees matches the characteristic polynomial and is log-concave.
pub fn ei_suite(name: &str, ring: &ChowRing, suite: &mut SuiteResult) -> Result<()> {
    let r = Verifier::new(ring, name).ei_crosscheck()?;
    suite.record(r.passed, || format!("{name}: {}", r.witness.clone().unwrap_or_default()));
    let e = reduced_characteristic(ring.matroid())?;
    suite.record(sequence_checks(&e).log_concave, || format!("{name}: e = {:?} is not log-concave", e.coefficients));
    Ok(())
}

fn af_suite(name: &str, ring: &ChowRing, opts: RunOptions, suite: &mut SuiteResult) -> Result<()> {
    let d = ring.d();
    if d < 2 {
        return Ok(());
    }
    let family = kahler_family(ring, opts.kahler_samples.min(1), opts.seed)?;
    let v = Verifier::new(ring, name);
    let tuple = rotate_tuple(&family, 0, d - 2);
    let xi1 = family[0].element(ring)?;
    let xi2 = family[family.len() - 1].element(ring)?;
    let r = v.af_check(&tuple, &xi1, &xi2)?;
    suite.record(r.passed, || format!("{name}: {}", r.witness.clone().unwrap_or_default()));
    Ok(())
}

fn correlation_suite(name: &str, m: &Matroid, suite: &mut SuiteResult) -> Result<()> {
    if m.rank() < 2 {
        return Ok(());
    }
    let r = correlation_bound_check(m)?;
    suite.record(r.bound_satisfied, || format!("{name}: max ratio {} above {}", r.max_ratio, r.bound));
    if !r.hr_matrix.is_zero() {
        suite.record(r.signature.positive == 1, || format!("{name}: signature {}", r.signature));
    }
    suite.record(r.restrictions_one_positive(), || format!("{name}: a 3x3 restriction has the wrong signature"));
    if m.provenance() == Provenance::Graphic {
        suite.record(!r.exceeds_one, || format!("{name}: graphic entry with ratio {}", r.max_ratio));
    }
    Ok(())
}

/// f_k(M) = f_k(M∖e) + f_{k−1}(M/e) wherever both minors are loopless matroids.
pub fn deletion_contraction_holds(m: &Matroid) -> Result<(usize, bool)> {
    let f = f_vector(m).coefficients;
    let mut tried = 0;
    for e in 0..m.ground_size() {
        let (Ok(del), Ok(con)) = (m.delete(e), m.contract(e)) else {
            continue;
        };
        tried += 1;
        let fd = f_vector(&del).coefficients;
        let fc = f_vector(&con).coefficients;
        for (k, &fk) in f.iter().enumerate() {
            let a = fd.get(k).copied().unwrap_or(0);
            let b = if k == 0 { 0 } else { fc.get(k - 1).copied().unwrap_or(0) };
            if fk != a + b {
                return Ok((tried, false));
            }
        }
    }
    Ok((tried, true))
}

fn properties_suite(name: &str, ring: &ChowRing, suite: &mut SuiteResult) -> Result<()> {
    let m = ring.matroid();
    suite.record_result(deletion_contraction_holds(m).map(|x| x.1), || format!("{name}: deletion-contraction"));
    if (0..m.ground_size()).all(|e| !m.is_coloop(e)) {
        let back = m.dual().and_then(|d| d.dual());
        suite.record_result(back.map(|b| b == *m), || format!("{name}: dual is not an involution"));
    }
    suite.record_result(ring.alpha_beta().map(|_| true), || format!("{name}: α/β depend on j"));
    suite.record_result(ring.chain_degrees_are_one(), || format!("{name}: complete flags of degree ≠ 1"));
    Ok(())
}

/// Signature of CᵀSC equals that of S for random symmetric S and invertible C.
pub fn congruence_cases(cases: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..cases {
        let n = rng.gen_range(1..=6);
        let mut s = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rat(rng.gen_range(-4..=4));
                s[(i, j)] = v.clone();
                s[(j, i)] = v;
            }
        }
        let c = loop {
            let c = RationalMatrix::from_fn(n, n, |_, _| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
            if !crate::linalg::determinant(&c)?.is_zero() {
                break c;
            }
        };
        let t = c.transpose().mul(&s)?.mul(&c)?;
        if signature(&t)? != signature(&s)? {
            failures += 1;
        }
    }
    Ok(failures)
}

/// Permanent identity, one-positive-eigenvalue and AF checks on seeded random inputs.
pub fn mixed_suite(seed: u64, suite: &mut SuiteResult) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let a = random_nonnegative(&mut rng, 4);
        let lhs = mixed_discriminant(&diagonal_tuple(&a))? * rat(24);
        suite.record(lhs == permanent(&a)?, || format!("4!·D(diag) ≠ per for {a}"));
    }
    for k in 0..10 {
        let d = 2 + k % 3;
        let ms: Vec<_> = (0..d).map(|_| random_psd(&mut rng, d)).collect();
        let hr = hr_discriminant_check(&SymMatrixTuple::new(d, ms[2..].to_vec())?)?;
        suite.record(hr.passed, || format!("HR(P) in d={d}: {}", hr.witness.clone().unwrap_or_default()));
        let af = af_discriminant_check(&SymMatrixTuple::new(d, ms)?)?;
        suite.record(af.passed, || format!("AF in d={d}: {}", af.witness.clone().unwrap_or_default()));
        suite.record(!hr.passed || af.passed, || format!("HR(P) passed but AF failed in d={d}"));
    }
    for d in 2..=6usize {
        let j = RationalMatrix::from_fn(d, d, |_, _| Rational::new(1.into(), (d as i64).into()));
        let fact: i64 = (1..=d as i64).product();
        let expected = Rational::new(fact.into(), (d as i64).pow(d as u32).into());
        suite.record(permanent(&j)? == expected, || format!("per(J/{d}) ≠ {d}!/{d}^{d}"));
    }
    Ok(())
}

/// h-vector log-concavity of every entry and Whitney-number unimodality of the
/// non-realizable ones.
pub fn conjecture_statuses(name: &str, m: &Matroid, realizable: bool) -> Result<Vec<ConjectureStatus>> {
    let f = f_vector(m);
    let h = h_vector(&f, m.rank())?;
    let mut out = vec![ConjectureStatus {
        entry: name.into(),
        conjecture: "h-vector log-concave".into(),
        holds: sequence_checks(&h).log_concave,
        sequence: h.coefficients,
    }];
    if !realizable {
        let w = whitney_numbers(m);
        out.push(ConjectureStatus {
            entry: name.into(),
            conjecture: "whitney numbers unimodal".into(),
            holds: sequence_checks(&w).unimodal,
            sequence: w.coefficients,
        });
    }
    Ok(out)
}

/// Runs every suite against `catalog`.
pub fn run_catalog(catalog: &Catalog, opts: RunOptions) -> Result<Summary> {
    let mut gold = SuiteResult::new("golden");
    let (checked, failures) = golden(catalog);
    gold.checks = checked;
    gold.passed = failures.is_empty();
    gold.failures = failures
        .iter()
        .map(|f| match &f.actual {
            Some(a) => format!("{} {}: expected {:?}, computed {:?}", f.entry, f.quantity, f.expected, a),
            None => format!("{} {}: {}", f.entry, f.quantity, f.error.clone().unwrap_or_default()),
        })
        .collect();

    let mut hodge = SuiteResult::new("pd-hl-hr");
    let mut ei = SuiteResult::new("e-sequence");
    let mut af = SuiteResult::new("af");
    let mut corr = SuiteResult::new("correlation");
    let mut props = SuiteResult::new("properties");
    let mut conjectures = Vec::new();
    for entry in &catalog.entries {
        let name = entry.name.as_str();
        let m = match catalog.build(name) {
            Ok(m) => m,
            Err(e) => {
                props.record(false, || format!("{name}: {e}"));
                continue;
            }
        };
        let ring = match ChowRing::build(&m) {
            Ok(r) => r,
            Err(e) => {
                hodge.record(false, || format!("{name}: {e}"));
                continue;
            }
        };
        let r = hodge_suite(name, &ring, opts, &mut hodge);
        hodge.record_result(r.map(|_| true), || name.to_string());
        let r = ei_suite(name, &ring, &mut ei);
        ei.record_result(r.map(|_| true), || name.to_string());
        let r = af_suite(name, &ring, opts, &mut af);
        af.record_result(r.map(|_| true), || name.to_string());
        let r = correlation_suite(name, &m, &mut corr);
        corr.record_result(r.map(|_| true), || name.to_string());
        let r = properties_suite(name, &ring, &mut props);
        props.record_result(r.map(|_| true), || name.to_string());
        conjectures.extend(conjecture_statuses(name, &m, entry.realizable)?);
    }
    let mut congruence = SuiteResult::new("congruence");
    let bad = congruence_cases(100, opts.seed)?;
    congruence.checks = 100;
    congruence.passed = bad == 0;
    if bad > 0 {
        congruence.failures.push(format!("{bad} congruent pairs with different signatures"));
    }
    let mut mixed = SuiteResult::new("mixed-forms");
    mixed_suite(opts.seed, &mut mixed)?;
    Ok(Summary {
        seed: opts.seed,
        kahler_samples: opts.kahler_samples,
        suites: vec![gold, hodge, ei, af, corr, props, congruence, mixed],
        conjectures,
    })
}

pub fn run_all(opts: RunOptions) -> Result<Summary> {
    run_catalog(&Catalog::shipped()?, opts)
}
