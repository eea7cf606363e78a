//! Basis correlation: the pair-count matrix of a matroid and the bound `2 − 2/rank`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::rational::serialize_rational;
use crate::linalg::{rat, signature, Inertia, Rational, RationalMatrix};
use crate::matroid::Matroid;

#[derive(Clone, Debug, Serialize)]
pub struct PairCorrelation {
    pub i: usize,
    pub j: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub ratio: Rational,
    /// Inertia of the form restricted to span{e_i, e_j, (1, …, 1)}.
    pub restriction: Inertia,
    /// Determinant of that 3×3 restriction; nonnegative exactly when the pair obeys the bound.
    #[serde(serialize_with = "serialize_rational")]
    pub restriction_det: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationReport {
    pub hr_matrix: RationalMatrix,
    pub signature: Inertia,
    #[serde(serialize_with = "serialize_rational")]
    pub max_ratio: Rational,
    pub max_pair: Option<(usize, usize)>,
    #[serde(serialize_with = "serialize_rational")]
    pub bound: Rational,
    pub bound_satisfied: bool,
    /// Some pair is positively correlated.
    pub exceeds_one: bool,
    pub pairs: Vec<PairCorrelation>,
    pub skipped: Vec<(usize, usize)>,
}

fn check_rank(m: &Matroid) -> Result<()> {
    if m.rank() < 2 {
        return Err(Error::RankTooSmall {
            rank: m.rank(),
            required: 2,
        });
    }
    Ok(())
}

/// Zero diagonal, `b_ij` (bases containing both i and j) off the diagonal.
pub fn hr_matrix(m: &Matroid) -> Result<RationalMatrix> {
    check_rank(m)?;
    let stats = m.basis_statistics()?;
    let n = m.ground_size();
    Ok(RationalMatrix::from_fn(n, n, |i, j| {
        if i == j {
            rat(0)
        } else {
            Rational::from_integer(stats.b_ij[i][j].into())
        }
    }))
}

pub fn correlation_bound_check(m: &Matroid) -> Result<CorrelationReport> {
    let h = hr_matrix(m)?;
    let stats = m.basis_statistics()?;
    let n = m.ground_size();
    let r = m.rank() as i64;
    let bound = rat(2) - Rational::new(2.into(), r.into());
    let ones = vec![rat(1); n];
    let quad = |u: &[Rational], v: &[Rational]| -> Rational {
        let hv = h.mul_vec(v).expect("dimensions agree");
        u.iter().zip(&hv).map(|(a, b)| a * b).sum()
    };
    let unit = |k: usize| -> Vec<Rational> { (0..n).map(|t| rat((t == k) as i64)).collect() };
    let mut pairs = Vec::new();
    let mut skipped = Vec::new();
    let b = Rational::from_integer(stats.b.into());
    for i in 0..n {
        for j in i + 1..n {
            if stats.b_i[i] == 0 || stats.b_i[j] == 0 {
                skipped.push((i, j));
                continue;
            }
            let ratio = &b * Rational::from_integer(stats.b_ij[i][j].into())
                / Rational::from_integer((stats.b_i[i] * stats.b_i[j]).into());
            let vs = [unit(i), unit(j), ones.clone()];
            let g = RationalMatrix::from_fn(3, 3, |a, c| quad(&vs[a], &vs[c]));
            pairs.push(PairCorrelation {
                i,
                j,
                ratio,
                restriction: signature(&g)?,
                restriction_det: crate::linalg::determinant(&g)?,
            });
        }
    }
    let best = pairs.iter().max_by(|a, b| a.ratio.cmp(&b.ratio));
    let max_ratio = best.map_or_else(Rational::zero, |p| p.ratio.clone());
    let max_pair = best.map(|p| (p.i, p.j));
    Ok(CorrelationReport {
        signature: signature(&h)?,
        hr_matrix: h,
        bound_satisfied: max_ratio <= bound,
        exceeds_one: max_ratio > rat(1),
        max_ratio,
        max_pair,
        bound,
        pairs,
        skipped,
    })
}

impl CorrelationReport {
    /// Every 3×3 restriction with a nonzero pair count has exactly one positive direction.
    pub fn restrictions_one_positive(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| p.restriction.positive == 1 && !p.restriction_det.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    #[test]
    fn u23() {
        let m = Matroid::uniform(2, 3).unwrap();
        let h = hr_matrix(&m).unwrap();
        assert_eq!(h, RationalMatrix::from_i64(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]));
        let r = correlation_bound_check(&m).unwrap();
        assert_eq!(r.max_ratio, ratio(3, 4));
        assert!(r.bound_satisfied && !r.exceeds_one && r.restrictions_one_positive());
    }

    #[test]
    fn rank_one_rejected() {
        assert!(matches!(
            hr_matrix(&Matroid::uniform(1, 3).unwrap()),
            Err(Error::RankTooSmall { rank: 1, required: 2 })
        ));
    }

    #[test]
    fn k4_ratios() {
        let m = Matroid::from_graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let r = correlation_bound_check(&m).unwrap();
        assert_eq!(r.signature, Inertia::new(1, 5, 0));
        assert_eq!(r.max_ratio, rat(1));
        assert_eq!(r.bound, ratio(4, 3));
        let mut seen: Vec<Rational> = r.pairs.iter().map(|p| p.ratio.clone()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen, vec![ratio(3, 4), rat(1)]);
        assert!(r.restrictions_one_positive());
    }
}
