//! Chow rings of loopless matroids.
//!
//! Every ring is stored the same way regardless of how it was built: a monomial basis
//! per degree, and for each nonempty flat `F` an integer matrix for multiplication by
//! `x_F` from degree `q` to `q + 1`. The top flat is included as the variable
//! `x_E := −α`, which keeps the normal-form basis closed under division.
//!
//! Two constructions are available. `Route::Elimination` row-reduces the span of
//! chain-supported monomials against the linear relations, degree by degree.
//! `Route::NormalForm` uses the Gröbner basis of the presentation with all nonempty flats
//! as generators, whose standard monomials are `x_{F_1}^{a_1}⋯x_{F_k}^{a_k}` over chains
//! `∅ < F_1 < ⋯ < F_k` with `a_t < rk F_t − rk F_{t−1}`. The elimination basis can carry
//! denominators; those are absorbed by rescaling each degree's basis by a positive
//! integer so that all tables stay integral.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rref, Rational, RationalMatrix, SparseIntMatrix};
use crate::matroid::{elements, ElementSet, Matroid};

/// `(flat index, exponent)` pairs sorted by flat index; nonzero monomials are chains.
pub type Monomial = Vec<(usize, u32)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Elimination,
    NormalForm,
}

/// Per-degree chain-monomial count above which elimination is not attempted by default.
pub const ELIMINATION_LIMIT: usize = 400;

#[derive(Clone, Debug)]
pub struct ChowRing {
    matroid: Matroid,
    d: usize,
    route: Route,
    basis: Vec<Vec<Monomial>>,
    /// The basis of degree q is `monomial / scale[q]`.
    scale: Vec<i128>,
    /// `tables[q][f]` maps A^q → A^{q+1}; rows index the target basis.
    tables: Vec<Vec<SparseIntMatrix>>,
    /// Degree of the single basis element of A^d.
    top_degree: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedElement {
    pub degree: usize,
    pub coords: Vec<Rational>,
}

impl GradedElement {
    pub fn zero(degree: usize, dim: usize) -> Self {
        Self {
            degree,
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(Self {
            degree: self.degree,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            degree: self.degree,
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }
}

fn is_chain(m: &Matroid, mono: &[(usize, u32)]) -> bool {
    let flats = m.flats();
    mono.windows(2).all(|w| {
        let (a, b) = (flats[w[0].0], flats[w[1].0]);
        a & b == a && a != b
    })
}

/// Multiplies a monomial by `x_f`; `None` when the support stops being a chain.
fn times_var(m: &Matroid, mono: &[(usize, u32)], f: usize) -> Option<Monomial> {
    let mut out: Monomial = Vec::with_capacity(mono.len() + 1);
    let mut placed = false;
    for &(g, e) in mono {
        if !placed && g >= f {
            if g == f {
                out.push((g, e + 1));
                placed = true;
                continue;
            }
            out.push((f, 1));
            placed = true;
        }
        out.push((g, e));
    }
    if !placed {
        out.push((f, 1));
    }
    is_chain(m, &out).then_some(out)
}

fn mono_degree(mono: &[(usize, u32)]) -> usize {
    mono.iter().map(|&(_, e)| e as usize).sum()
}

fn int_rat(x: i128) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

impl ChowRing {
    /// Builds the ring, choosing elimination when the monomial universe is small.
    pub fn build(m: &Matroid) -> Result<Self> {
        let counts = chain_monomial_counts(m);
        if counts.iter().all(|&c| c <= ELIMINATION_LIMIT) {
            Self::build_with(m, Route::Elimination)
        } else {
            Self::build_with(m, Route::NormalForm)
        }
    }

    pub fn build_with(m: &Matroid, route: Route) -> Result<Self> {
        if m.rank() < 1 {
            return Err(Error::RankTooSmall {
                rank: m.rank(),
                required: 1,
            });
        }
        let mut ring = match route {
            Route::Elimination => build_elimination(m)?,
            Route::NormalForm => build_normal_form(m)?,
        };
        ring.normalise_degree()?;
        Ok(ring)
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    /// Top degree d = rank − 1.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn dim(&self, q: usize) -> usize {
        self.basis.get(q).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.d).map(|q| self.dim(q)).collect()
    }

    pub fn basis(&self, q: usize) -> &[Monomial] {
        &self.basis[q]
    }

    pub fn scale(&self, q: usize) -> i128 {
        self.scale[q]
    }

    pub fn top_degree(&self) -> &Rational {
        &self.top_degree
    }

    /// Flat indices of the generators `x_F`, F a nonempty proper flat.
    pub fn generators(&self) -> std::ops::Range<usize> {
        1..self.matroid.flats().len() - 1
    }

    pub fn top_flat(&self) -> usize {
        self.matroid.flats().len() - 1
    }

    /// Multiplication by `x_f` from degree `q` (with `f` the top flat meaning `−α`).
    pub fn table(&self, q: usize, f: usize) -> &SparseIntMatrix {
        &self.tables[q][f]
    }

    /// Integer matrix of multiplication by `Σ_F c_F x_F` from degree `q`.
    pub fn linear_map(&self, q: usize, coeffs: &[(usize, i128)]) -> Result<SparseIntMatrix> {
        SparseIntMatrix::linear_combination(
            self.dim(q + 1),
            self.dim(q),
            coeffs.iter().map(|&(f, c)| (c, &self.tables[q][f])),
        )
    }

    pub fn one(&self) -> GradedElement {
        GradedElement {
            degree: 0,
            coords: vec![Rational::one()],
        }
    }

    fn apply(&self, f: usize, e: &GradedElement) -> Result<GradedElement> {
        if e.degree >= self.d {
            return Err(Error::DegreeOverflow {
                degree: e.degree + 1,
                top: self.d,
            });
        }
        let t = &self.tables[e.degree][f];
        let coords = t
            .row_entries
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(i, _)| !e.coords[*i].is_zero())
                    .fold(Rational::zero(), |acc, &(i, v)| acc + &e.coords[i] * int_rat(v))
            })
            .collect();
        Ok(GradedElement {
            degree: e.degree + 1,
            coords,
        })
    }

    /// Multiplies by a degree-one element given by flat coefficients.
    pub fn multiply_linear(&self, coeffs: &[(usize, Rational)], e: &GradedElement) -> Result<GradedElement> {
        if e.degree >= self.d {
            return Err(Error::DegreeOverflow {
                degree: e.degree + 1,
                top: self.d,
            });
        }
        let mut acc = GradedElement::zero(e.degree + 1, self.dim(e.degree + 1));
        for (f, c) in coeffs {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&self.apply(*f, e)?.scale(c))?;
        }
        Ok(acc)
    }

    /// Coordinates of a raw monomial. Non-chain supports reduce to zero.
    pub fn reduce(&self, mono: &[(usize, u32)]) -> Result<GradedElement> {
        let q = mono_degree(mono);
        if q > self.d {
            return Err(Error::DegreeOverflow { degree: q, top: self.d });
        }
        let mut sorted = mono.to_vec();
        sorted.sort_unstable();
        let mut e = self.one();
        for (f, k) in sorted {
            if f == 0 || f >= self.matroid.flats().len() {
                return Err(Error::DimensionMismatch(format!("{f} is not a nonempty flat index")));
            }
            for _ in 0..k {
                e = self.apply(f, &e)?;
            }
        }
        Ok(e)
    }

    /// The basis element of index `j` in degree `q`, as coordinates.
    pub fn basis_element(&self, q: usize, j: usize) -> GradedElement {
        let mut coords = vec![Rational::zero(); self.dim(q)];
        coords[j] = Rational::one();
        GradedElement { degree: q, coords }
    }

    pub fn element(&self, degree: usize, coords: Vec<Rational>) -> Result<GradedElement> {
        if degree > self.d || coords.len() != self.dim(degree) {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates in degree {degree}",
                coords.len()
            )));
        }
        Ok(GradedElement { degree, coords })
    }

    pub fn multiply(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
        let degree = a.degree + b.degree;
        if degree > self.d {
            return Err(Error::DegreeOverflow { degree, top: self.d });
        }
        let mut acc = GradedElement::zero(degree, self.dim(degree));
        for (j, bj) in b.coords.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let mut term = a.clone();
            for &(f, k) in &self.basis[b.degree][j] {
                for _ in 0..k {
                    term = self.apply(f, &term)?;
                }
            }
            acc = acc.add(&term.scale(&(bj / int_rat(self.scale[b.degree]))))?;
        }
        Ok(acc)
    }

    pub fn degree(&self, e: &GradedElement) -> Result<Rational> {
        if e.degree != self.d {
            return Err(Error::DegreeMismatch {
                expected: self.d,
                found: e.degree,
            });
        }
        Ok(&e.coords[0] * &self.top_degree)
    }

    /// `Σ_F c_F x_F` over the nonempty proper flats.
    pub fn linear_element(&self, coeffs: &[(usize, Rational)]) -> Result<GradedElement> {
        if self.d == 0 {
            return Ok(GradedElement::zero(1, 0));
        }
        self.multiply_linear(coeffs, &self.one())
    }

    /// α and β computed with the element `j`.
    pub fn alpha_beta_at(&self, j: usize) -> Result<(GradedElement, GradedElement)> {
        let flats = self.matroid.flats();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for f in self.generators() {
            if flats[f] >> j & 1 == 1 {
                a.push((f, Rational::one()));
            } else {
                b.push((f, Rational::one()));
            }
        }
        Ok((self.linear_element(&a)?, self.linear_element(&b)?))
    }

    /// α and β, checked to agree for every choice of the auxiliary element.
    pub fn alpha_beta(&self) -> Result<(GradedElement, GradedElement)> {
        let first = self.alpha_beta_at(0)?;
        for j in 1..self.matroid.ground_size() {
            if self.alpha_beta_at(j)? != first {
                return Err(Error::Internal(format!("α or β depends on the choice j = {j}")));
            }
        }
        Ok(first)
    }

    /// Every complete flag monomial has degree one.
    pub fn chain_degrees_are_one(&self) -> Result<bool> {
        for chain in maximal_chains(&self.matroid) {
            let mono: Monomial = chain.into_iter().map(|f| (f, 1)).collect();
            if !self.degree(&self.reduce(&mono)?)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks that `x_E` acts as −α and fixes the degree so that complete flags have degree 1.
    fn normalise_degree(&mut self) -> Result<()> {
        let m = self.matroid.clone();
        let top = self.top_flat();
        // x_E = −α, checked for every choice of j.
        for j in (0..m.ground_size()).filter(|_| self.d > 0) {
            let xe = self.reduce(&[(top, 1)])?;
            let (alpha, _) = self.alpha_beta_at(j)?;
            if xe.add(&alpha)?.coords.iter().any(|c| !c.is_zero()) {
                return Err(Error::Internal("the top-flat variable is not −α".into()));
            }
        }
        if self.dim(self.d) != 1 || self.dim(0) != 1 {
            return Err(Error::Internal(format!("unexpected dimensions {:?}", self.dims())));
        }
        let mut value: Option<Rational> = None;
        for chain in maximal_chains(&m) {
            let mono: Monomial = chain.into_iter().map(|f| (f, 1)).collect();
            let c = self.reduce(&mono)?.coords[0].clone();
            match &value {
                None => value = Some(c),
                Some(v) if *v != c => {
                    return Err(Error::Internal("complete flags reduce to different classes".into()))
                }
                _ => {}
            }
        }
        let c = value.ok_or_else(|| Error::Internal("no complete flags".into()))?;
        if c.is_zero() {
            return Err(Error::Internal("complete flags reduce to zero".into()));
        }
        self.top_degree = c.recip();
        Ok(())
    }
}

/// Sequences of flat indices F_1 ⊊ ⋯ ⊊ F_d of ranks 1..d.
pub fn maximal_chains(m: &Matroid) -> Vec<Vec<usize>> {
    let d = m.rank() - 1;
    let flats = m.flats();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = m.rank_range(1).map(|f| vec![f]).collect();
    while let Some(chain) = stack.pop() {
        if chain.len() == d {
            out.push(chain);
            continue;
        }
        let last = flats[*chain.last().unwrap()];
        for g in m.rank_range(chain.len() + 1) {
            if flats[g] & last == last {
                let mut next = chain.clone();
                next.push(g);
                stack.push(next);
            }
        }
    }
    if d == 0 {
        out.push(Vec::new());
    }
    out.sort();
    out
}

/// Number of chain-supported monomials in the proper flats, per degree 0..=d.
pub fn chain_monomial_counts(m: &Matroid) -> Vec<usize> {
    let d = m.rank() - 1;
    let flats = m.flats();
    let proper: Vec<usize> = (1..flats.len() - 1).collect();
    // w[f][t]: chain monomials of degree t whose largest flat is f.
    let mut w = vec![vec![0usize; d + 1]; flats.len()];
    for &f in &proper {
        for t in 1..=d {
            let mut total = 0usize;
            for a in 1..=t {
                if a == t {
                    total = total.saturating_add(1);
                } else {
                    for &g in proper.iter().take_while(|&&g| g < f) {
                        if flats[g] & flats[f] == flats[g] && flats[g] != flats[f] {
                            total = total.saturating_add(w[g][t - a]);
                        }
                    }
                }
            }
            w[f][t] = total;
        }
    }
    let mut counts = vec![0usize; d + 1];
    counts[0] = 1;
    for t in 1..=d {
        counts[t] = proper.iter().map(|&f| w[f][t]).fold(0usize, usize::saturating_add);
    }
    counts
}

fn chain_monomials(m: &Matroid, q: usize) -> Vec<Monomial> {
    let flats = m.flats();
    let proper: Vec<usize> = (1..flats.len() - 1).collect();
    let mut out = Vec::new();
    fn rec(
        flats: &[ElementSet],
        proper: &[usize],
        current: &mut Monomial,
        remaining: usize,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        let start = current.last().map_or(0, |&(f, _)| f + 1);
        for &g in proper.iter().filter(|&&g| g >= start) {
            if let Some(&(f, _)) = current.last() {
                if flats[f] & flats[g] != flats[f] {
                    continue;
                }
            }
            for e in 1..=remaining {
                current.push((g, e as u32));
                rec(flats, proper, current, remaining - e, out);
                current.pop();
            }
        }
    }
    rec(flats, &proper, &mut Vec::new(), q, &mut out);
    out.sort();
    out
}

type Reduction = Vec<(usize, Rational)>;

fn build_elimination(m: &Matroid) -> Result<ChowRing> {
    let d = m.rank() - 1;
    let flats = m.flats();
    let nflats = flats.len();
    let top = nflats - 1;
    let n = m.ground_size();
    let contains = |f: usize, e: usize| flats[f] >> e & 1 == 1;

    let mut basis: Vec<Vec<Monomial>> = Vec::with_capacity(d + 1);
    // reductions[q]: chain monomial → coordinates in the monomial basis of degree q.
    let mut reductions: Vec<HashMap<Monomial, Reduction>> = Vec::with_capacity(d + 1);
    basis.push(vec![Vec::new()]);
    reductions.push(HashMap::from([(Vec::new(), vec![(0, Rational::one())])]));

    for q in 1..=d {
        let cols = chain_monomials(m, q);
        let col_index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let lower = chain_monomials(m, q - 1);
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for low in &lower {
            for k in 1..n {
                let mut row = vec![Rational::zero(); cols.len()];
                let mut nonzero = false;
                for f in 1..top {
                    let sign: i64 = i64::from(contains(f, 0)) - i64::from(contains(f, k));
                    if sign == 0 {
                        continue;
                    }
                    if let Some(prod) = times_var(m, low, f) {
                        row[col_index[&prod]] += Rational::from_integer(BigInt::from(sign));
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
        let (red, pivots) = if rows.is_empty() {
            (RationalMatrix::zeros(0, cols.len()), Vec::new())
        } else {
            rref(&RationalMatrix::from_rows(rows)?)
        };
        let free: Vec<usize> = (0..cols.len()).filter(|c| !pivots.contains(c)).collect();
        let free_pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut map: HashMap<Monomial, Reduction> = HashMap::with_capacity(cols.len());
        for (&c, &i) in &free_pos {
            map.insert(cols[c].clone(), vec![(i, Rational::one())]);
        }
        for (r, &p) in pivots.iter().enumerate() {
            let coords: Reduction = free
                .iter()
                .enumerate()
                .filter(|&(_, &c)| !red[(r, c)].is_zero())
                .map(|(i, &c)| (i, -red[(r, c)].clone()))
                .collect();
            map.insert(cols[p].clone(), coords);
        }
        basis.push(free.iter().map(|&c| cols[c].clone()).collect());
        reductions.push(map);
    }

    // Rational tables in the monomial bases, then rescale every degree to make them integral.
    let mut rational_tables: Vec<Vec<Vec<Reduction>>> = Vec::with_capacity(d);
    for q in 0..d {
        let mut per_flat = vec![Vec::new(); nflats];
        for (f, slot) in per_flat.iter_mut().enumerate().take(top).skip(1) {
            *slot = basis[q]
                .iter()
                .map(|b| match times_var(m, b, f) {
                    Some(prod) => reductions[q + 1][&prod].clone(),
                    None => Vec::new(),
                })
                .collect();
        }
        // x_E = −α with α taken at element 0.
        per_flat[top] = (0..basis[q].len())
            .map(|i| {
                let mut acc: HashMap<usize, Rational> = HashMap::new();
                for f in (1..top).filter(|&f| contains(f, 0)) {
                    for (k, v) in &per_flat[f][i] {
                        *acc.entry(*k).or_insert_with(Rational::zero) -= v;
                    }
                }
                let mut v: Reduction = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                v.sort_by_key(|x| x.0);
                v
            })
            .collect();
        rational_tables.push(per_flat);
    }
    let mut scale = vec![1i128; d + 1];
    for q in 1..=d {
        let mut l = BigInt::one();
        for per_flat in &rational_tables[q - 1] {
            for col in per_flat {
                for (_, v) in col {
                    l = l.lcm(v.denom());
                }
            }
        }
        let lf = l.to_i128().ok_or(Error::Overflow("rescaling the basis"))?;
        scale[q] = scale[q - 1].checked_mul(lf).ok_or(Error::Overflow("rescaling the basis"))?;
    }
    let mut tables = Vec::with_capacity(d);
    for (q, per_flat) in rational_tables.into_iter().enumerate() {
        let factor = Rational::new(BigInt::from(scale[q + 1]), BigInt::from(scale[q]));
        let mut out = vec![SparseIntMatrix::zeros(basis[q + 1].len(), basis[q].len()); nflats];
        for (f, cols) in per_flat.into_iter().enumerate().skip(1) {
            for (i, col) in cols.into_iter().enumerate() {
                for (k, v) in col {
                    let x = (v * &factor)
                        .to_integer()
                        .to_i128()
                        .ok_or(Error::Overflow("rescaling the basis"))?;
                    out[f].row_entries[k].push((i, x));
                }
            }
        }
        tables.push(out);
    }
    Ok(ChowRing {
        matroid: m.clone(),
        d,
        route: Route::Elimination,
        basis,
        scale,
        tables,
        top_degree: Rational::one(),
    })
}

struct NormalForm<'a> {
    m: &'a Matroid,
    index: Vec<HashMap<Monomial, usize>>,
    memo: HashMap<Monomial, Vec<(usize, i128)>>,
    /// above[f]: flats containing flat f, itself included, in index order.
    above: Vec<Vec<usize>>,
}

impl NormalForm<'_> {
    fn first_violation(&self, mono: &[(usize, u32)]) -> Option<usize> {
        let mut prev_rank = 0;
        for (t, &(f, a)) in mono.iter().enumerate() {
            let r = self.m.flat_rank(f);
            if a as usize >= r - prev_rank {
                return Some(t);
            }
            prev_rank = r;
        }
        None
    }

    fn reduce(&mut self, mono: &Monomial) -> Result<Vec<(usize, i128)>> {
        if let Some(v) = self.memo.get(mono) {
            return Ok(v.clone());
        }
        let Some(t) = self.first_violation(mono) else {
            let q = mono_degree(mono);
            let i = *self.index[q]
                .get(mono)
                .ok_or_else(|| Error::Internal("standard monomial missing from basis".into()))?;
            return Ok(vec![(i, 1)]);
        };
        let flats = self.m.flats();
        let (ft, at) = mono[t];
        let prev_rank = if t == 0 { 0 } else { self.m.flat_rank(mono[t - 1].0) };
        let delta = self.m.flat_rank(ft) - prev_rank;
        // rest · x_{F_{t−1}} · x_{F_t}^δ = mono
        let mut rest: Monomial = mono.clone();
        rest[t].1 = at - delta as u32;
        if t > 0 {
            rest[t - 1].1 -= 1;
        }
        rest.retain(|&(_, e)| e > 0);
        let higher: Vec<usize> = mono[t + 1..].iter().map(|&(f, _)| f).collect();
        let candidates: Vec<usize> = self.above[ft]
            .iter()
            .copied()
            .filter(|&g| {
                higher.iter().all(|&h| {
                    let (a, b) = (flats[g], flats[h]);
                    a & b == a || a & b == b
                })
            })
            .collect();
        let mut acc: HashMap<usize, i128> = HashMap::new();
        let mut chosen: Vec<usize> = Vec::with_capacity(delta);
        self.expand(&candidates, 0, delta, &mut chosen, &rest, mono[..t].last().map(|x| x.0), &mut acc)?;
        let mut out: Vec<(usize, i128)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        out.sort_unstable();
        self.memo.insert(mono.clone(), out.clone());
        Ok(out)
    }

    /// Sums −multinomial · reduce(rest · x_prev · Π chosen) over multichains of size δ
    /// drawn from `candidates`, skipping the pure power of the first candidate.
    #[allow(clippy::too_many_arguments)]
    fn expand(
        &mut self,
        candidates: &[usize],
        from: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        rest: &Monomial,
        prev: Option<usize>,
        acc: &mut HashMap<usize, i128>,
    ) -> Result<()> {
        let flats = self.m.flats();
        if remaining == 0 {
            if chosen.iter().all(|&g| g == candidates[0]) {
                return Ok(());
            }
            let mut prod = rest.clone();
            let mut factors: Vec<usize> = chosen.clone();
            if let Some(p) = prev {
                factors.push(p);
            }
            for f in factors {
                match times_var(self.m, &prod, f) {
                    Some(p) => prod = p,
                    None => return Ok(()),
                }
            }
            let coef = multinomial(chosen)?;
            for (i, v) in self.reduce(&prod)? {
                let add = coef.checked_mul(v).ok_or(Error::Overflow("normal form reduction"))?;
                let slot = acc.entry(i).or_insert(0);
                *slot = slot.checked_sub(add).ok_or(Error::Overflow("normal form reduction"))?;
            }
            return Ok(());
        }
        for k in from..candidates.len() {
            let g = candidates[k];
            if let Some(&last) = chosen.last() {
                if flats[last] & flats[g] != flats[last] {
                    continue;
                }
            }
            chosen.push(g);
            self.expand(candidates, k, remaining - 1, chosen, rest, prev, acc)?;
            chosen.pop();
        }
        Ok(())
    }
}

fn multinomial(chosen: &[usize]) -> Result<i128> {
    let mut out: i128 = 1;
    let mut run = 0i128;
    for (i, &g) in chosen.iter().enumerate() {
        run = if i > 0 && chosen[i - 1] == g { run + 1 } else { 1 };
        // multiply by (i+1)/run incrementally keeps integrality
        out = out.checked_mul(i as i128 + 1).ok_or(Error::Overflow("multinomial"))? / run;
    }
    Ok(out)
}

/// Standard monomials of the normal-form presentation, per degree.
pub fn normal_form_basis(m: &Matroid) -> Vec<Vec<Monomial>> {
    let d = m.rank() - 1;
    let flats = m.flats();
    let mut out = vec![Vec::new(); d + 1];
    fn rec(
        m: &Matroid,
        flats: &[ElementSet],
        current: &mut Monomial,
        degree: usize,
        d: usize,
        out: &mut Vec<Vec<Monomial>>,
    ) {
        out[degree].push(current.clone());
        let (last, last_rank) = current
            .last()
            .map_or((0usize, 0usize), |&(f, _)| (f, m.flat_rank(f)));
        for g in last + 1..flats.len() {
            if flats[last] & flats[g] != flats[last] || m.flat_rank(g) <= last_rank {
                continue;
            }
            let delta = m.flat_rank(g) - last_rank;
            for a in 1..delta {
                if degree + a > d {
                    break;
                }
                current.push((g, a as u32));
                rec(m, flats, current, degree + a, d, out);
                current.pop();
            }
        }
    }
    rec(m, flats, &mut Vec::new(), 0, d, &mut out);
    out.iter_mut().for_each(|v| v.sort());
    out
}

fn build_normal_form(m: &Matroid) -> Result<ChowRing> {
    let d = m.rank() - 1;
    let flats = m.flats();
    let nflats = flats.len();
    let basis = normal_form_basis(m);
    let index: Vec<HashMap<Monomial, usize>> = basis
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect())
        .collect();
    let above: Vec<Vec<usize>> = (0..nflats)
        .map(|f| (f..nflats).filter(|&g| flats[g] & flats[f] == flats[f]).collect())
        .collect();
    let mut nf = NormalForm {
        m,
        index,
        memo: HashMap::new(),
        above,
    };
    let mut tables = Vec::with_capacity(d);
    for q in 0..d {
        let mut per_flat = vec![SparseIntMatrix::zeros(basis[q + 1].len(), basis[q].len()); nflats];
        for (f, table) in per_flat.iter_mut().enumerate().skip(1) {
            for (i, b) in basis[q].iter().enumerate() {
                if let Some(prod) = times_var(m, b, f) {
                    for (k, v) in nf.reduce(&prod)? {
                        table.row_entries[k].push((i, v));
                    }
                }
            }
        }
        tables.push(per_flat);
    }
    Ok(ChowRing {
        matroid: m.clone(),
        d,
        route: Route::NormalForm,
        basis,
        scale: vec![1; d + 1],
        tables,
        top_degree: Rational::one(),
    })
}

/// A set function on all subsets of the ground set, indexed by bit mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmodularWeights {
    n: usize,
    values: Vec<Rational>,
}

/// Validation enumerates all pairs of subsets; beyond this it is not desk-scale.
pub const MAX_WEIGHT_GROUND: usize = 12;

impl SubmodularWeights {
    /// Checks c_∅ = c_E = 0 and strict submodularity on every incomparable pair.
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        if n > MAX_WEIGHT_GROUND {
            return Err(Error::GroundTooLarge(n));
        }
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} subsets",
                values.len(),
                1usize << n
            )));
        }
        let all = (1usize << n) - 1;
        if !values[0].is_zero() || !values[all].is_zero() {
            return Err(Error::InvalidWeights {
                witness: "c_∅ and c_E must both be 0".into(),
            });
        }
        for a in 0..=all {
            for b in a + 1..=all {
                let (i, u) = (a & b, a | b);
                if i == a || i == b {
                    continue;
                }
                if values[a].clone() + &values[b] <= values[i].clone() + &values[u] {
                    return Err(Error::InvalidWeights {
                        witness: format!(
                            "I1 = {:?}, I2 = {:?}",
                            elements(a as ElementSet),
                            elements(b as ElementSet)
                        ),
                    });
                }
            }
        }
        Ok(Self { n, values })
    }

    /// c_I = |I|(n − |I|).
    pub fn default_for(n: usize) -> Result<Self> {
        let values = (0..1usize << n)
            .map(|s| {
                let k = s.count_ones() as i64;
                Rational::from_integer(BigInt::from(k * (n as i64 - k)))
            })
            .collect();
        Self::new(n, values)
    }

    /// A positive multiple of the default plus the cut function of a random weighted
    /// digraph; cut functions are submodular, so the sum stays strictly submodular.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Result<Self> {
        let lambda: i64 = rng.gen_range(1..=3);
        let mut w = vec![vec![0i64; n]; n];
        for (u, row) in w.iter_mut().enumerate() {
            for (v, x) in row.iter_mut().enumerate() {
                if u != v {
                    *x = rng.gen_range(0..=3);
                }
            }
        }
        let values = (0..1usize << n)
            .map(|s| {
                let k = s.count_ones() as i64;
                let mut c = lambda * k * (n as i64 - k);
                for (u, row) in w.iter().enumerate() {
                    if s >> u & 1 == 1 {
                        for (v, x) in row.iter().enumerate() {
                            if s >> v & 1 == 0 {
                                c += x;
                            }
                        }
                    }
                }
                Rational::from_integer(BigInt::from(c))
            })
            .collect();
        Self::new(n, values)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn value(&self, s: ElementSet) -> &Rational {
        &self.values[s as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn scaled(&self, lambda: &Rational) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::InvalidWeights {
                witness: "scaling factor must be positive".into(),
            });
        }
        Ok(Self {
            n: self.n,
            values: self.values.iter().map(|v| v * lambda).collect(),
        })
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("weights on different ground sets".into()));
        }
        Ok(Self {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }
}

/// L_c = Σ_F c_F x_F over nonempty proper flats.
pub fn kahler_from_submodular(ring: &ChowRing, c: &SubmodularWeights) -> Result<GradedElement> {
    ring.linear_element(&kahler_coefficients(ring, c)?)
}

pub fn kahler_coefficients(ring: &ChowRing, c: &SubmodularWeights) -> Result<Vec<(usize, Rational)>> {
    if c.ground_size() != ring.matroid().ground_size() {
        return Err(Error::DimensionMismatch("weights and matroid ground sets differ".into()));
    }
    let flats = ring.matroid().flats();
    Ok(ring
        .generators()
        .map(|f| (f, c.value(flats[f]).clone()))
        .collect())
}

/// The same coefficients multiplied by the least positive integer making them integral.
pub fn integral_coefficients(coeffs: &[(usize, Rational)]) -> Result<Vec<(usize, i128)>> {
    let l = coeffs.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    coeffs
        .iter()
        .map(|(f, c)| {
            (c * Rational::from_integer(l.clone()))
                .to_integer()
                .to_i128()
                .map(|x| (*f, x))
                .ok_or(Error::Overflow("clearing denominators"))
        })
        .collect()
}
