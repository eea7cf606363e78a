//! Integer sequences attached to matroids and graphs, and their log-concavity checks.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::{graph_components, Matroid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    Charpoly,
    ReducedCharpoly,
    Chromatic,
    FVector,
    HVector,
    WVector,
    ReliabilityH,
    OVector,
}

/// Integer coefficients with an explicit length. For polynomials (`Charpoly`, `Chromatic`)
/// index `k` is the coefficient of `q^k`; every other kind is a plain sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntSequencePoly {
    pub coefficients: Vec<i64>,
    pub kind: SequenceKind,
}

impl IntSequencePoly {
    pub fn new(kind: SequenceKind, coefficients: Vec<i64>) -> Self {
        Self { coefficients, kind }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficients from the highest power down.
    pub fn descending(&self) -> Vec<i64> {
        self.coefficients.iter().rev().copied().collect()
    }

    /// Polynomial value at an integer point.
    pub fn eval(&self, q: i64) -> i128 {
        self.coefficients
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * q as i128 + c as i128)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceVerdict {
    pub log_concave: bool,
    pub unimodal: bool,
    /// Only evaluated for Whitney numbers.
    pub top_heavy: Option<bool>,
    pub first_violation: Option<usize>,
    /// Some entry was negative, so the checks ran on absolute values.
    pub used_absolute_values: bool,
}

pub fn f_vector(m: &Matroid) -> IntSequencePoly {
    let mut f = vec![0i64; m.rank() + 1];
    for s in 0..=m.ground() {
        if m.is_independent(s) {
            f[s.count_ones() as usize] += 1;
        }
    }
    IntSequencePoly::new(SequenceKind::FVector, f)
}

pub fn whitney_numbers(m: &Matroid) -> IntSequencePoly {
    let w = (0..=m.rank()).map(|k| m.flats_of_rank(k).len() as i64).collect();
    IntSequencePoly::new(SequenceKind::WVector, w)
}

/// χ_M(q) = Σ_F μ(∅, F) q^{r − rk F}.
pub fn characteristic_polynomial(m: &Matroid) -> IntSequencePoly {
    let r = m.rank();
    let mut c = vec![0i64; r + 1];
    for (i, mu) in m.mobius_from_bottom().into_iter().enumerate() {
        c[r - m.flat_rank(i)] += mu;
    }
    IntSequencePoly::new(SequenceKind::Charpoly, c)
}

/// The unsigned coefficients e_0, …, e_d of χ_M(q)/(q − 1), leading one first.
pub fn reduced_characteristic(m: &Matroid) -> Result<IntSequencePoly> {
    let chi = characteristic_polynomial(m);
    let quotient = divide_by_linear(&chi.coefficients, 1)
        .ok_or_else(|| Error::Internal("χ_M(1) ≠ 0".into()))?;
    let d = quotient.len() - 1;
    let mut e = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let c = quotient[d - i];
        let expected_sign = if i % 2 == 0 { 1 } else { -1 };
        if c != 0 && c.signum() != expected_sign {
            return Err(Error::Internal(format!("coefficient of q^{} has the wrong sign", d - i)));
        }
        e.push(c.abs());
    }
    Ok(IntSequencePoly::new(SequenceKind::ReducedCharpoly, e))
}

/// Divides an ascending coefficient list by (q − root); `None` if the remainder is nonzero.
fn divide_by_linear(c: &[i64], root: i64) -> Option<Vec<i64>> {
    let n = c.len();
    if n < 2 {
        return None;
    }
    let mut q = vec![0i64; n - 1];
    let mut carry = 0i64;
    for k in (1..n).rev() {
        carry = c[k] + carry * root;
        q[k - 1] = carry;
    }
    (c[0] + carry * root == 0).then_some(q)
}

/// Σ h_i x^i = Σ f_i x^i (1 − x)^{d − i}.
pub fn h_vector(f: &IntSequencePoly, d: usize) -> Result<IntSequencePoly> {
    if f.len() != d + 1 {
        return Err(Error::DimensionMismatch(format!(
            "f-vector of length {} for d = {d}",
            f.len()
        )));
    }
    let mut h = vec![0i64; d + 1];
    for (i, &fi) in f.coefficients.iter().enumerate() {
        for k in i..=d {
            let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
            h[k] += sign * fi * binomial(d - i, k - i);
        }
    }
    Ok(IntSequencePoly::new(SequenceKind::HVector, h))
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn vertex_count(edges: &[(usize, usize)]) -> usize {
    edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0)
}

fn require_connected(edges: &[(usize, usize)]) -> Result<usize> {
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if let Some((index, &(u, _))) = edges.iter().enumerate().find(|(_, e)| e.0 == e.1) {
        return Err(Error::SelfLoop { index, vertex: u });
    }
    let v = vertex_count(edges);
    let components = graph_components(v, edges);
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    Ok(v)
}

/// Chromatic polynomial by memoised deletion–contraction.
pub fn chromatic_polynomial(edges: &[(usize, usize)]) -> Result<IntSequencePoly> {
    let v = require_connected(edges)?;
    let mut memo = HashMap::new();
    let c = chromatic_rec(v, simplify(edges), &mut memo);
    Ok(IntSequencePoly::new(SequenceKind::Chromatic, c))
}

/// Drops parallel copies and orients each edge as (small, large). Self-loops survive.
fn simplify(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Relabels vertices by (degree, sorted neighbour degrees) and sorts the edges. Two graphs
/// with the same key are isomorphic, so they share a chromatic polynomial.
fn canonical_key(v: usize, edges: &[(usize, usize)]) -> (usize, Vec<(usize, usize)>) {
    let mut deg = vec![0usize; v];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let mut nbr: Vec<Vec<usize>> = vec![Vec::new(); v];
    for &(a, b) in edges {
        nbr[a].push(deg[b]);
        nbr[b].push(deg[a]);
    }
    nbr.iter_mut().for_each(|x| x.sort_unstable());
    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by(|&a, &b| (deg[a], &nbr[a], a).cmp(&(deg[b], &nbr[b], b)));
    let mut label = vec![0; v];
    for (new, &old) in order.iter().enumerate() {
        label[old] = new;
    }
    let relabelled: Vec<(usize, usize)> =
        edges.iter().map(|&(a, b)| (label[a], label[b])).collect();
    (v, simplify(&relabelled))
}

type ChromaticMemo = HashMap<(usize, Vec<(usize, usize)>), Vec<i64>>;

fn chromatic_rec(v: usize, edges: Vec<(usize, usize)>, memo: &mut ChromaticMemo) -> Vec<i64> {
    if edges.iter().any(|&(a, b)| a == b) {
        return vec![0; v + 1];
    }
    if edges.is_empty() {
        let mut c = vec![0; v + 1];
        c[v] = 1;
        return c;
    }
    let key = canonical_key(v, &edges);
    if let Some(c) = memo.get(&key) {
        return c.clone();
    }
    let (a, b) = edges[edges.len() - 1];
    let deleted: Vec<(usize, usize)> = edges[..edges.len() - 1].to_vec();
    // Contract b into a, then shift the labels above b down by one.
    let relabel = |x: usize| {
        let x = if x == b { a } else { x };
        if x > b {
            x - 1
        } else {
            x
        }
    };
    let contracted: Vec<(usize, usize)> =
        deleted.iter().map(|&(x, y)| (relabel(x), relabel(y))).collect();
    let pd = chromatic_rec(v, simplify(&deleted), memo);
    let pc = chromatic_rec(v - 1, simplify(&contracted), memo);
    let mut c = pd;
    for (k, x) in pc.into_iter().enumerate() {
        c[k] -= x;
    }
    memo.insert(key, c.clone());
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reliability {
    pub vertices: usize,
    pub edges: usize,
    /// o_{v−1}, …, o_n: counts of connected spanning edge subsets by size.
    pub o: IntSequencePoly,
    /// h_0, …, h_d with d = n − v + 1.
    pub h: IntSequencePoly,
}

pub fn reliability_polynomial(edges: &[(usize, usize)]) -> Result<Reliability> {
    let v = require_connected(edges)?;
    let n = edges.len();
    if n > crate::matroid::MAX_GROUND {
        return Err(Error::GroundTooLarge(n));
    }
    let mut o = vec![0i64; n + 1];
    for s in 0u32..(1 << n) {
        let chosen: Vec<(usize, usize)> = (0..n).filter(|&e| s >> e & 1 == 1).map(|e| edges[e]).collect();
        if graph_components(v, &chosen) == 1 {
            o[chosen.len()] += 1;
        }
    }
    let d = n + 1 - v;
    // R(q)/(1 − q)^{v−1} = Σ_i o_i (1 − q)^{i − v + 1} q^{n − i}; collect powers of q.
    let mut h = vec![0i64; d + 1];
    for (i, &oi) in o.iter().enumerate().skip(v - 1) {
        let a = i + 1 - v;
        for j in 0..=a {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            h[n - i + j] += sign * oi * binomial(a, j);
        }
    }
    Ok(Reliability {
        vertices: v,
        edges: n,
        o: IntSequencePoly::new(SequenceKind::OVector, o[v - 1..].to_vec()),
        h: IntSequencePoly::new(SequenceKind::ReliabilityH, h),
    })
}

pub fn sequence_checks(s: &IntSequencePoly) -> SequenceVerdict {
    let a: Vec<i128> = s.coefficients.iter().map(|&x| (x as i128).abs()).collect();
    let used_absolute_values = s.coefficients.iter().any(|&x| x < 0);
    let lc_violation = (1..a.len().saturating_sub(1)).find(|&i| a[i] * a[i] < a[i - 1] * a[i + 1]);
    let peak = a
        .iter()
        .enumerate()
        .fold(0, |best, (i, &x)| if x > a[best] { i } else { best });
    let unimodal_violation = (0..peak)
        .find(|&i| a[i] > a[i + 1])
        .or_else(|| (peak..a.len().saturating_sub(1)).find(|&i| a[i] < a[i + 1]));
    let unimodal = unimodal_violation.is_none();
    let log_concave = lc_violation.is_none();
    if log_concave && a.iter().all(|&x| x > 0) {
        debug_assert!(unimodal, "positive log-concave sequence must be unimodal");
    }
    let top_heavy = (s.kind == SequenceKind::WVector).then(|| {
        let d = a.len().saturating_sub(1);
        (0..a.len()).filter(|&i| 2 * i < d).all(|i| a[i] <= a[d - i] && a[i] <= a[i + 1])
    });
    SequenceVerdict {
        log_concave,
        unimodal,
        top_heavy,
        first_violation: lc_violation.or(unimodal_violation),
        used_absolute_values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_examples() {
        let u23 = Matroid::uniform(2, 3).unwrap();
        assert_eq!(characteristic_polynomial(&u23).coefficients, vec![2, -3, 1]);
        assert_eq!(reduced_characteristic(&u23).unwrap().coefficients, vec![1, 2]);
    }

    #[test]
    fn chromatic_examples() {
        let c4 = [(0, 1), (1, 2), (2, 3), (3, 0)];
        assert_eq!(chromatic_polynomial(&c4).unwrap().descending(), vec![1, -4, 6, -3, 0]);
        let p3 = [(0, 1), (1, 2)];
        assert_eq!(chromatic_polynomial(&p3).unwrap().descending(), vec![1, -2, 1, 0]);
        let tri = [(0, 1), (1, 2), (2, 0)];
        assert_eq!(chromatic_polynomial(&tri).unwrap().descending(), vec![1, -3, 2, 0]);
        assert!(matches!(
            chromatic_polynomial(&[(0, 1), (2, 3)]),
            Err(Error::Disconnected { components: 2 })
        ));
    }

    #[test]
    fn h_vector_examples() {
        let f = IntSequencePoly::new(SequenceKind::FVector, vec![1, 3, 3]);
        assert_eq!(h_vector(&f, 2).unwrap().coefficients, vec![1, 1, 1]);
        let unit = IntSequencePoly::new(SequenceKind::FVector, vec![1, 0, 0, 0]);
        assert_eq!(h_vector(&unit, 3).unwrap().coefficients, vec![1, -3, 3, -1]);
        assert!(h_vector(&f, 3).is_err());
    }

    #[test]
    fn reliability_of_a_tree() {
        let r = reliability_polynomial(&[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(r.o.coefficients, vec![1]);
        assert_eq!(r.h.coefficients, vec![1]);
    }

    #[test]
    fn verdict_examples() {
        let v = sequence_checks(&IntSequencePoly::new(SequenceKind::Chromatic, vec![1, 4, 6, 3]));
        assert!(v.log_concave && v.unimodal);
        let v = sequence_checks(&IntSequencePoly::new(SequenceKind::FVector, vec![1, 1, 2]));
        assert!(!v.log_concave && v.unimodal);
        assert_eq!(v.first_violation, Some(1));
        let v = sequence_checks(&IntSequencePoly::new(SequenceKind::FVector, vec![1, 0, 1]));
        assert!(!v.log_concave && !v.unimodal);
        let v = sequence_checks(&IntSequencePoly::new(SequenceKind::FVector, vec![0, 0, 1]));
        assert!(v.log_concave);
        let w = sequence_checks(&IntSequencePoly::new(SequenceKind::WVector, vec![1, 7, 7, 1]));
        assert_eq!(w.top_heavy, Some(true));
        let signed = sequence_checks(&IntSequencePoly::new(SequenceKind::Chromatic, vec![0, -3, 6, -4, 1]));
        assert!(signed.used_absolute_values);
    }
}
