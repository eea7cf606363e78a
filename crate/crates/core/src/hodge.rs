//! Poincaré duality, hard Lefschetz and Hodge–Riemann checks on a Chow ring.
//!
//! All matrices are built over the integers as positive multiples of the true pairing
//! and Lefschetz matrices (the ring's integral rescaling and the integral Kähler
//! coefficients only contribute positive factors), so ranks and inertias are exact.
//!
//! The Hodge–Riemann form on A^q is `Q(η₁, η₂) = (−1)^q deg(L_1⋯L_{d−2q} η₁η₂)` and the
//! primitive part is `K = ker(L_0 L_1⋯L_{d−2q})`. Small degrees restrict `Q` to an exact
//! kernel basis. Larger ones use the orthogonal splitting `A^q = L_0A^{q−1} ⊕ K`, valid
//! whenever the pairing on A^{q−1} × A^{d−q+1} and the form
//! `Q'(ξ₁, ξ₂) = (−1)^{q−1} deg(L_0² L_1⋯L_{d−2q} ξ₁ξ₂)` on A^{q−1} are nondegenerate:
//! `Q` restricted to `L_0A^{q−1}` is `−Q'`, so `Q|_K` is positive definite exactly when
//! `n₊(Q) − n₋(Q') = dim A^q − dim A^{q−1}` and `Q` is nondegenerate.

use std::cell::OnceCell;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chow::{integral_coefficients, kahler_coefficients, ChowRing, GradedElement, SubmodularWeights};
use crate::error::{Error, Result};
use crate::invariants::reduced_characteristic;
use crate::linalg::certify::{exact_mul, exact_sparse_mul, inertia};
use crate::linalg::modular::certify_full_rank;
use crate::linalg::rational::{format_rational, to_i128};
use crate::linalg::{
    is_positive_definite, kernel_basis, rank, restrict_form, signature, Inertia, IntMatrix, Rational,
    RationalMatrix,
};

/// Largest degree-q dimension handled by restricting to an explicit kernel basis.
pub const DIRECT_HR_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Check {
    PD,
    HL,
    HR,
    AF,
    EI,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub instance: String,
    pub check: Check,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    pub kahler: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Report {
    pub fn new(instance: &str, check: Check, q: Option<usize>, kahler: String, passed: bool, witness: Value) -> Self {
        Self {
            instance: instance.to_string(),
            check,
            q,
            kahler,
            passed,
            witness: (!passed || !witness.is_null()).then_some(witness),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A Kähler class `L_c` with its rational flat coefficients and a positive integral multiple.
#[derive(Clone, Debug)]
pub struct KahlerClass {
    pub label: String,
    pub coeffs: Vec<(usize, Rational)>,
    pub integral: Vec<(usize, i128)>,
}

impl KahlerClass {
    pub fn new(ring: &ChowRing, label: impl Into<String>, weights: &SubmodularWeights) -> Result<Self> {
        let coeffs = kahler_coefficients(ring, weights)?;
        let integral = integral_coefficients(&coeffs)?;
        Ok(Self {
            label: label.into(),
            coeffs,
            integral,
        })
    }

    pub fn element(&self, ring: &ChowRing) -> Result<GradedElement> {
        ring.linear_element(&self.coeffs)
    }
}

/// The default class followed by `samples` seeded random ones.
pub fn kahler_family(ring: &ChowRing, samples: usize, seed: u64) -> Result<Vec<KahlerClass>> {
    let n = ring.matroid().ground_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![KahlerClass::new(ring, "default", &SubmodularWeights::default_for(n)?)?];
    for i in 0..samples {
        let w = SubmodularWeights::random(n, &mut rng)?;
        out.push(KahlerClass::new(ring, format!("random{}", i + 1), &w)?);
    }
    Ok(out)
}

/// Tuple number `k` of length `len`: L_i = K_{(k + i) mod m}.
pub fn rotate_tuple(family: &[KahlerClass], k: usize, len: usize) -> Vec<&KahlerClass> {
    (0..len).map(|i| &family[(k + i) % family.len()]).collect()
}

fn describe(tuple: &[&KahlerClass]) -> String {
    if tuple.is_empty() {
        "()".into()
    } else {
        format!("({})", tuple.iter().map(|l| l.label.as_str()).collect::<Vec<_>>().join(","))
    }
}

fn inertia_json(i: &Inertia) -> Value {
    json!({"positive": i.positive, "negative": i.negative, "zero": i.zero})
}

fn int_to_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

/// Witness matrices above this size are summarised instead of printed.
const WITNESS_LIMIT: usize = 12;

fn matrix_witness(m: &IntMatrix) -> Value {
    if m.rows() <= WITNESS_LIMIT && m.cols() <= WITNESS_LIMIT {
        json!(int_to_strings(m))
    } else {
        json!({"rows": m.rows(), "cols": m.cols()})
    }
}

/// Rank of an integer matrix. Full rank modulo a prime certifies full rank; anything else
/// falls back to exact elimination.
fn full_rank(m: &IntMatrix) -> (bool, usize) {
    let full = m.rows().min(m.cols());
    if certify_full_rank(m) == Some(true) {
        return (true, full);
    }
    let r = rank(&m.to_rational());
    (r == full, r)
}

pub struct Verifier<'a> {
    ring: &'a ChowRing,
    instance: String,
    pairings: OnceCell<Vec<IntMatrix>>,
    pd_ok: Vec<OnceCell<bool>>,
    middle: OnceCell<Result<Inertia, String>>,
}

impl<'a> Verifier<'a> {
    pub fn new(ring: &'a ChowRing, instance: impl Into<String>) -> Self {
        Self {
            ring,
            instance: instance.into(),
            pairings: OnceCell::new(),
            pd_ok: (0..=ring.d()).map(|_| OnceCell::new()).collect(),
            middle: OnceCell::new(),
        }
    }

    pub fn ring(&self) -> &ChowRing {
        self.ring
    }

    fn check_q(&self, q: usize) -> Result<()> {
        if q > self.ring.d() {
            return Err(Error::DegreeOutOfRange { q, top: self.ring.d() });
        }
        Ok(())
    }

    /// Positive multiples of the pairing matrices deg(b_i b'_j) on A^q × A^{d−q}, q ≤ d/2.
    fn pairings(&self) -> &[IntMatrix] {
        self.pairings.get_or_init(|| self.build_pairings().expect("pairing construction"))
    }

    fn build_pairings(&self) -> Result<Vec<IntMatrix>> {
        let r = self.ring;
        let d = r.d();
        let sign = if r.top_degree() > &Rational::from_integer(0.into()) { 1 } else { -1 };
        let mut out = vec![IntMatrix::from_fn(1, 1, |_, _| sign)];
        for q in 1..=d / 2 {
            let prev = &out[q - 1];
            let cols = r.dim(d - q);
            let mut p = IntMatrix::zeros(r.dim(q), cols);
            for (i, mono) in r.basis(q).iter().enumerate() {
                // b_i = x_G · m' with G the largest flat of the monomial.
                let &(g, _) = mono.last().expect("positive degree monomial");
                let mut rest = mono.clone();
                let last = rest.len() - 1;
                rest[last].1 -= 1;
                rest.retain(|x| x.1 > 0);
                let c = r.reduce(&rest)?;
                let mut u = vec![0i128; prev.cols()];
                for (k, ck) in c.coords.iter().enumerate() {
                    if ck.is_zero() {
                        continue;
                    }
                    let ck = to_i128(ck).ok_or(Error::Overflow("pairing recursion"))?;
                    for (x, &y) in u.iter_mut().zip(prev.row(k)) {
                        *x = x
                            .checked_add(ck.checked_mul(y).ok_or(Error::Overflow("pairing recursion"))?)
                            .ok_or(Error::Overflow("pairing recursion"))?;
                    }
                }
                let t = r.table(d - q, g);
                let row = p.row_mut(i);
                for (l, entries) in t.row_entries.iter().enumerate() {
                    if u[l] == 0 {
                        continue;
                    }
                    for &(j, v) in entries {
                        row[j] = row[j]
                            .checked_add(u[l].checked_mul(v).ok_or(Error::Overflow("pairing recursion"))?)
                            .ok_or(Error::Overflow("pairing recursion"))?;
                    }
                }
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Pairing on A^q × A^{d−q} for any q.
    pub fn pairing(&self, q: usize) -> Result<IntMatrix> {
        self.check_q(q)?;
        let d = self.ring.d();
        Ok(if 2 * q <= d {
            self.pairings()[q].clone()
        } else {
            self.pairings()[d - q].transpose()
        })
    }

    fn pd_holds(&self, q: usize) -> bool {
        let q = q.min(self.ring.d() - q);
        *self.pd_ok[q].get_or_init(|| {
            let p = &self.pairings()[q];
            p.rows() == p.cols() && full_rank(p).0
        })
    }

    pub fn pd_check(&self, q: usize) -> Result<Report> {
        self.check_q(q)?;
        let d = self.ring.d();
        let p = if 2 * q <= d { &self.pairings()[q] } else { &self.pairings()[d - q] };
        let passed = self.pd_holds(q);
        let witness = if passed {
            Value::Null
        } else {
            json!({"rows": p.rows(), "cols": p.cols(), "rank": full_rank(p).1, "matrix": matrix_witness(p)})
        };
        Ok(Report::new(&self.instance, Check::PD, Some(q), "()".into(), passed, witness))
    }

    /// Dense integer matrix of η ↦ (Π L_i) η from A^q.
    pub fn lefschetz_matrix(&self, q: usize, tuple: &[&KahlerClass]) -> Result<IntMatrix> {
        if q + tuple.len() > self.ring.d() {
            return Ok(IntMatrix::zeros(0, self.ring.dim(q)));
        }
        let mut m = IntMatrix::identity(self.ring.dim(q));
        for (i, l) in tuple.iter().enumerate() {
            let step = self.ring.linear_map(q + i, &l.integral)?;
            m = exact_sparse_mul(&step, &m)?;
        }
        Ok(m)
    }

    pub fn hl_check(&self, q: usize, tuple: &[&KahlerClass]) -> Result<Report> {
        let d = self.ring.d();
        if 2 * q > d {
            return Err(Error::DegreeOutOfRange { q, top: d });
        }
        if tuple.len() != d - 2 * q {
            return Err(Error::WrongTupleLength {
                expected: d - 2 * q,
                found: tuple.len(),
            });
        }
        let kahler = describe(tuple);
        if tuple.is_empty() {
            // The empty product is the identity of A^q.
            return Ok(Report::new(&self.instance, Check::HL, Some(q), kahler, true, Value::Null));
        }
        let m = self.lefschetz_matrix(q, tuple)?;
        let (ok, r) = full_rank(&m);
        let passed = ok && m.rows() == m.cols();
        let witness = if passed {
            Value::Null
        } else {
            json!({"rows": m.rows(), "cols": m.cols(), "rank": r, "matrix": matrix_witness(&m)})
        };
        Ok(Report::new(&self.instance, Check::HL, Some(q), kahler, passed, witness))
    }

    /// Positive multiple of the Gram matrix (−1)^q deg(Π η₁η₂) on A^q.
    pub fn hr_form(&self, q: usize, tuple: &[&KahlerClass]) -> Result<IntMatrix> {
        let d = self.ring.d();
        if 2 * q + tuple.len() != d {
            return Err(Error::WrongTupleLength {
                expected: d - 2 * q,
                found: tuple.len(),
            });
        }
        let p = &self.pairings()[q];
        let m = self.lefschetz_matrix(q, tuple)?;
        let g = exact_mul(p, &m)?;
        let g = if q % 2 == 1 { g.negated()? } else { g };
        if !g.is_symmetric() {
            return Err(Error::Internal(format!("Hodge–Riemann form in degree {q} is not symmetric")));
        }
        Ok(g)
    }

    fn middle_inertia(&self, q: usize) -> Result<Inertia> {
        self.middle
            .get_or_init(|| {
                let g = self.hr_form(q, &[]).map_err(|e| e.to_string())?;
                inertia(&g).map_err(|e| e.to_string())
            })
            .clone()
            .map_err(Error::Internal)
    }

    pub fn hr_check(&self, q: usize, tuple: &[&KahlerClass]) -> Result<Report> {
        let d = self.ring.d();
        if 2 * q > d {
            return Err(Error::DegreeOutOfRange { q, top: d });
        }
        if tuple.len() != d - 2 * q + 1 {
            return Err(Error::WrongTupleLength {
                expected: d - 2 * q + 1,
                found: tuple.len(),
            });
        }
        if q == 0 || self.ring.dim(q) <= DIRECT_HR_LIMIT {
            return self.hr_direct(q, tuple);
        }
        match self.hr_by_counting(q, tuple)? {
            Some(report) => Ok(report),
            None => self.hr_direct(q, tuple),
        }
    }

    /// Restricts the form to an explicit basis of the primitive kernel.
    pub fn hr_direct(&self, q: usize, tuple: &[&KahlerClass]) -> Result<Report> {
        let g = self.hr_form(q, &tuple[1..])?.to_rational();
        let map = self.lefschetz_matrix(q, tuple)?.to_rational();
        let k = kernel_basis(&map);
        let restricted = restrict_form(&g, &k)?;
        let passed = is_positive_definite(&restricted)?;
        let witness = if passed {
            Value::Null
        } else {
            json!({
                "route": "kernel",
                "kernel_dim": k.cols(),
                "restricted_inertia": inertia_json(&signature(&restricted)?),
            })
        };
        Ok(Report::new(&self.instance, Check::HR, Some(q), describe(tuple), passed, witness))
    }

    /// Decides HR from two inertias; `None` if the splitting's hypotheses fail.
    pub fn hr_by_counting(&self, q: usize, tuple: &[&KahlerClass]) -> Result<Option<Report>> {
        if q == 0 || !self.pd_holds(q - 1) {
            return Ok(None);
        }
        let rest = &tuple[1..];
        let form = if rest.is_empty() {
            self.middle_inertia(q)?
        } else {
            inertia(&self.hr_form(q, rest)?)?
        };
        let mut twisted: Vec<&KahlerClass> = vec![tuple[0], tuple[0]];
        twisted.extend_from_slice(rest);
        let lower = inertia(&self.hr_form(q - 1, &twisted)?)?;
        if lower.zero != 0 {
            return Ok(None);
        }
        let primitive = self.ring.dim(q) as i64 - self.ring.dim(q - 1) as i64;
        let passed = form.zero == 0
            && form.positive as i64 - lower.negative as i64 == primitive
            && form.negative == lower.positive;
        let witness = if passed {
            Value::Null
        } else {
            json!({
                "route": "splitting",
                "form_inertia": inertia_json(&form),
                "lower_inertia": inertia_json(&lower),
                "primitive_dim": primitive,
            })
        };
        Ok(Some(Report::new(&self.instance, Check::HR, Some(q), describe(tuple), passed, witness)))
    }

    /// One positive eigenvalue and the determinant inequality for ξ₁, ξ₂ ∈ A¹.
    pub fn af_check(&self, tuple: &[&KahlerClass], xi1: &GradedElement, xi2: &GradedElement) -> Result<Report> {
        let r = self.ring;
        let d = r.d();
        if d < 2 {
            return Err(Error::DegreeOutOfRange { q: 1, top: d });
        }
        if tuple.len() != d - 2 {
            return Err(Error::WrongTupleLength {
                expected: d - 2,
                found: tuple.len(),
            });
        }
        for xi in [xi1, xi2] {
            if xi.degree != 1 {
                return Err(Error::DegreeMismatch {
                    expected: 1,
                    found: xi.degree,
                });
            }
        }
        let mut pi = r.one();
        for l in tuple {
            pi = r.multiply_linear(&l.coeffs, &pi)?;
        }
        let xs = [xi1, xi2];
        let mut m = RationalMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in a..2 {
                let v = r.degree(&r.multiply(&r.multiply(&pi, xs[a])?, xs[b])?)?;
                m[(a, b)] = v.clone();
                m[(b, a)] = v;
            }
        }
        let sig = signature(&m)?;
        let det = &m[(0, 0)] * &m[(1, 1)] - &m[(0, 1)] * &m[(0, 1)];
        let af = &m[(0, 1)] * &m[(0, 1)] >= &m[(0, 0)] * &m[(1, 1)];
        if af != (det <= Rational::from_integer(0.into())) {
            return Err(Error::Internal("determinant and inequality disagree".into()));
        }
        let passed = sig.positive == 1 && af;
        let witness = json!({
            "matrix": m.to_strings(),
            "inertia": inertia_json(&sig),
            "determinant": format_rational(&det),
        });
        Ok(Report::new(&self.instance, Check::AF, Some(1), describe(tuple), passed, witness))
    }

    /// deg(α^{d−i} β^i) against the unsigned coefficients of χ_M(q)/(q−1).
    pub fn ei_crosscheck(&self) -> Result<Report> {
        let degrees = alpha_beta_degrees(self.ring)?;
        let e = reduced_characteristic(self.ring.matroid())?;
        let expected: Vec<Rational> = e
            .coefficients
            .iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect();
        let passed = degrees == expected;
        let witness = json!({
            "degrees": degrees.iter().map(format_rational).collect::<Vec<_>>(),
            "reduced_characteristic": e.coefficients,
        });
        Ok(Report::new(&self.instance, Check::EI, None, "(alpha,beta)".into(), passed, witness))
    }

    /// PD for every q, then HL and HR for every q ≤ d/2 and every rotation of the family.
    pub fn verify_all(&self, family: &[KahlerClass]) -> Result<Vec<Report>> {
        let d = self.ring.d();
        let mut out = Vec::new();
        for q in 0..=d {
            out.push(self.pd_check(q)?);
        }
        for q in 0..=d / 2 {
            for k in 0..family.len() {
                let tuple = rotate_tuple(family, k, d - 2 * q + 1);
                out.push(self.hl_check(q, &tuple[1..])?);
                out.push(self.hr_check(q, &tuple)?);
            }
        }
        Ok(out)
    }
}

/// (deg(α^d), deg(α^{d−1}β), …, deg(β^d)).
pub fn alpha_beta_degrees(ring: &ChowRing) -> Result<Vec<Rational>> {
    let (alpha, beta) = ring.alpha_beta()?;
    let d = ring.d();
    if d == 0 {
        return Ok(vec![ring.degree(&ring.one())?]);
    }
    let mut alpha_powers = vec![ring.one()];
    for i in 1..=d {
        alpha_powers.push(ring.multiply(&alpha_powers[i - 1], &alpha)?);
    }
    let mut out = Vec::with_capacity(d + 1);
    let mut beta_power = ring.one();
    for i in 0..=d {
        if i > 0 {
            beta_power = ring.multiply(&beta_power, &beta)?;
        }
        out.push(ring.degree(&ring.multiply(&alpha_powers[d - i], &beta_power)?)?);
    }
    Ok(out)
}
