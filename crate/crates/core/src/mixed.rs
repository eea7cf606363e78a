//! Mixed discriminants, permanents and mixed volumes of axis-aligned boxes.
//!
//! Both forms use the normalisation `D(A, …, A) = det A` and `V(P, …, P) = vol P`, so
//! that `d!·D(diag a_1, …, diag a_d) = per(a_1 | … | a_d)`.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::hodge::{Check, Report};
use crate::linalg::{determinant, format_rational, rat, signature, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrixTuple {
    d: usize,
    matrices: Vec<RationalMatrix>,
}

impl SymMatrixTuple {
    pub fn new(d: usize, matrices: Vec<RationalMatrix>) -> Result<Self> {
        for (i, m) in matrices.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {i} is {}x{}, expected {d}x{d}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_symmetric() {
                return Err(Error::NotSymmetric);
            }
        }
        Ok(Self { d, matrices })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrices(&self) -> &[RationalMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Exact: no negative eigenvalue in any member.
    pub fn check_psd(&self) -> Result<()> {
        for (index, m) in self.matrices.iter().enumerate() {
            if signature(m)?.negative > 0 {
                return Err(Error::NotPsd { index });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxTuple {
    d: usize,
    widths: Vec<Vec<Rational>>,
}

impl BoxTuple {
    pub fn new(d: usize, widths: Vec<Vec<Rational>>) -> Result<Self> {
        for (j, w) in widths.iter().enumerate() {
            if w.len() != d {
                return Err(Error::DimensionMismatch(format!("box {j} has {} widths, expected {d}", w.len())));
            }
            if w.iter().any(|x| x.is_negative()) {
                return Err(Error::DimensionMismatch(format!("box {j} has a negative width")));
            }
        }
        Ok(Self { d, widths })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn widths(&self) -> &[Vec<Rational>] {
        &self.widths
    }
}

fn factorial(d: usize) -> Rational {
    (1..=d).fold(Rational::one(), |acc, k| acc * rat(k as i64))
}

/// Polarisation over the 2^d subsets.
pub fn mixed_discriminant(t: &SymMatrixTuple) -> Result<Rational> {
    let d = t.d;
    if t.len() != d {
        return Err(Error::DimensionMismatch(format!("expected {d} matrices, found {}", t.len())));
    }
    let mut total = Rational::zero();
    for mask in 0u32..(1 << d) {
        let mut sum = RationalMatrix::zeros(d, d);
        for (i, a) in t.matrices.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum = sum.add(a)?;
            }
        }
        let det = determinant(&sum)?;
        if (d - mask.count_ones() as usize).is_multiple_of(2) {
            total += det;
        } else {
            total -= det;
        }
    }
    Ok(total / factorial(d))
}

/// Ryser's formula, with Gray-code updates of the row sums.
pub fn permanent(m: &RationalMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut sums = vec![Rational::zero(); n];
    let mut total = Rational::zero();
    let mut prev_gray = 0u64;
    for k in 1u64..(1 << n) {
        let gray = k ^ (k >> 1);
        let j = (gray ^ prev_gray).trailing_zeros() as usize;
        let added = gray >> j & 1 == 1;
        for (i, s) in sums.iter_mut().enumerate() {
            if added {
                *s += &m[(i, j)];
            } else {
                *s -= &m[(i, j)];
            }
        }
        prev_gray = gray;
        let prod = sums.iter().fold(Rational::one(), |acc, s| acc * s);
        if (n - gray.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// V = per(W)/d! with W_{ij} the width of box j along axis i.
pub fn mixed_volume_boxes(b: &BoxTuple) -> Result<Rational> {
    let d = b.d;
    if b.widths.len() != d {
        return Err(Error::DimensionMismatch(format!("expected {d} boxes, found {}", b.widths.len())));
    }
    let w = RationalMatrix::from_fn(d, d, |i, j| b.widths[j][i].clone());
    Ok(permanent(&w)? / factorial(d))
}

/// Basis of symmetric d×d matrices: E_ii, then E_ij + E_ji for i < j.
pub fn symmetric_basis(d: usize) -> Vec<RationalMatrix> {
    let mut out: Vec<RationalMatrix> = (0..d)
        .map(|i| RationalMatrix::from_fn(d, d, |a, b| if a == i && b == i { rat(1) } else { rat(0) }))
        .collect();
    for i in 0..d {
        for j in i + 1..d {
            out.push(RationalMatrix::from_fn(d, d, |a, b| {
                if (a, b) == (i, j) || (a, b) == (j, i) {
                    rat(1)
                } else {
                    rat(0)
                }
            }));
        }
    }
    out
}

/// Gram matrix of (η₁, η₂) ↦ D(η₁, η₂, P_1, …, P_{d−2}) on `symmetric_basis(d)`.
pub fn hr_discriminant_matrix(p: &SymMatrixTuple) -> Result<RationalMatrix> {
    let d = p.d;
    if d < 2 || p.len() != d - 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected {} matrices, found {}",
            d.saturating_sub(2),
            p.len()
        )));
    }
    let basis = symmetric_basis(d);
    let n = basis.len();
    let mut g = RationalMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mut ms = vec![basis[a].clone(), basis[b].clone()];
            ms.extend(p.matrices.iter().cloned());
            let v = mixed_discriminant(&SymMatrixTuple { d, matrices: ms })?;
            g[(a, b)] = v.clone();
            g[(b, a)] = v;
        }
    }
    Ok(g)
}

/// Exactly one positive eigenvalue of the form D(·, ·, P).
pub fn hr_discriminant_check(p: &SymMatrixTuple) -> Result<Report> {
    p.check_psd()?;
    let g = hr_discriminant_matrix(p)?;
    let kahler = format!("P_1..P_{}", p.len());
    if g.is_zero() {
        return Ok(Report::new("mixed-discriminant", Check::HR, Some(1), kahler, true, json!(null))
            .with_note("vacuous: the form vanishes identically"));
    }
    let sig = signature(&g)?;
    let passed = sig.positive == 1;
    let witness = json!({
        "matrix": g.to_strings(),
        "inertia": {"positive": sig.positive, "negative": sig.negative, "zero": sig.zero},
    });
    Ok(Report::new("mixed-discriminant", Check::HR, Some(1), kahler, passed, witness))
}

/// D(A₁, A₂, rest)² ≥ D(A₁, A₁, rest)·D(A₂, A₂, rest).
pub fn af_discriminant_check(t: &SymMatrixTuple) -> Result<Report> {
    let d = t.d;
    if d < 2 || t.len() != d {
        return Err(Error::DimensionMismatch(format!("expected {d} matrices, found {}", t.len())));
    }
    t.check_psd()?;
    let rest = &t.matrices[2..];
    let eval = |a: &RationalMatrix, b: &RationalMatrix| {
        let mut ms = vec![a.clone(), b.clone()];
        ms.extend(rest.iter().cloned());
        mixed_discriminant(&SymMatrixTuple { d, matrices: ms })
    };
    let (a1, a2) = (&t.matrices[0], &t.matrices[1]);
    let d12 = eval(a1, a2)?;
    let d11 = eval(a1, a1)?;
    let d22 = eval(a2, a2)?;
    let det = &d11 * &d22 - &d12 * &d12;
    let passed = !det.is_positive();
    let witness = json!({
        "d12": format_rational(&d12),
        "d11": format_rational(&d11),
        "d22": format_rational(&d22),
        "determinant": format_rational(&det),
    });
    Ok(Report::new("mixed-discriminant", Check::AF, None, "A_3..A_d".into(), passed, witness))
}

/// V(P₁, P₂, rest)² ≥ V(P₁, P₁, rest)·V(P₂, P₂, rest) for boxes.
pub fn af_boxes_check(b: &BoxTuple) -> Result<Report> {
    let d = b.d;
    if d < 2 || b.widths.len() != d {
        return Err(Error::DimensionMismatch(format!("expected {d} boxes, found {}", b.widths.len())));
    }
    let eval = |i: usize, j: usize| {
        let mut widths = vec![b.widths[i].clone(), b.widths[j].clone()];
        widths.extend(b.widths[2..].iter().cloned());
        mixed_volume_boxes(&BoxTuple { d, widths })
    };
    let (v12, v11, v22) = (eval(0, 1)?, eval(0, 0)?, eval(1, 1)?);
    let det = &v11 * &v22 - &v12 * &v12;
    let witness = json!({
        "v12": format_rational(&v12),
        "v11": format_rational(&v11),
        "v22": format_rational(&v22),
        "determinant": format_rational(&det),
    });
    Ok(Report::new("mixed-volume", Check::AF, None, "P_3..P_d".into(), !det.is_positive(), witness)
        .with_note("axis-aligned boxes only"))
}

/// Random `d×d` matrix with entries in 0..=9.
pub fn random_nonnegative<R: Rng>(rng: &mut R, d: usize) -> RationalMatrix {
    RationalMatrix::from_fn(d, d, |_, _| rat(rng.gen_range(0..=9)))
}

/// `BBᵀ` for a random integer `B` with entries in −3..=3.
pub fn random_psd<R: Rng>(rng: &mut R, d: usize) -> RationalMatrix {
    let b = RationalMatrix::from_fn(d, d, |_, _| rat(rng.gen_range(-3..=3)));
    b.mul(&b.transpose()).expect("square")
}

pub fn diagonal_tuple(a: &RationalMatrix) -> SymMatrixTuple {
    let d = a.rows();
    let matrices = (0..d).map(|j| RationalMatrix::diagonal(&a.column(j))).collect();
    SymMatrixTuple { d, matrices }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, Inertia};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn naive_permanent(m: &RationalMatrix) -> Rational {
        fn go(m: &RationalMatrix, row: usize, used: &mut Vec<bool>) -> Rational {
            if row == m.rows() {
                return Rational::one();
            }
            let mut s = Rational::zero();
            for j in 0..m.cols() {
                if !used[j] && !m[(row, j)].is_zero() {
                    used[j] = true;
                    s += &m[(row, j)] * go(m, row + 1, used);
                    used[j] = false;
                }
            }
            s
        }
        go(m, 0, &mut vec![false; m.cols()])
    }

    #[test]
    fn identity_discriminant_is_one() {
        for d in 1..=5 {
            let t = SymMatrixTuple::new(d, vec![RationalMatrix::identity(d); d]).unwrap();
            assert_eq!(mixed_discriminant(&t).unwrap(), rat(1));
        }
    }

    #[test]
    fn permanents() {
        assert_eq!(permanent(&RationalMatrix::identity(4)).unwrap(), rat(1));
        assert_eq!(permanent(&RationalMatrix::from_fn(3, 3, |_, _| rat(1))).unwrap(), rat(6));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 1..=6 {
            let m = RationalMatrix::from_fn(d, d, |_, _| rat(rng.gen_range(-4..=4)));
            assert_eq!(permanent(&m).unwrap(), naive_permanent(&m));
        }
        assert!(permanent(&RationalMatrix::zeros(2,3)).is_err());
    }

    #[test]
    fn diagonal_tuples_give_permanents() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let a = random_nonnegative(&mut rng, 4);
            let dd = mixed_discriminant(&diagonal_tuple(&a)).unwrap();
            assert_eq!(dd * rat(24), naive_permanent(&a));
        }
    }

    #[test]
    fn discriminant_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ms: Vec<_> = (0..3).map(|_| random_psd(&mut rng, 3)).collect();
        let base = mixed_discriminant(&SymMatrixTuple::new(3, ms.clone()).unwrap()).unwrap();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let p = perm.iter().map(|&i| ms[i].clone()).collect();
            assert_eq!(mixed_discriminant(&SymMatrixTuple::new(3, p).unwrap()).unwrap(), base);
        }
    }

    #[test]
    fn two_by_two_form() {
        let p = SymMatrixTuple::new(2, vec![]).unwrap();
        let g = hr_discriminant_matrix(&p).unwrap();
        let half = ratio(1, 2);
        let expected = RationalMatrix::from_rows(vec![
            vec![rat(0), half.clone(), rat(0)],
            vec![half, rat(0), rat(0)],
            vec![rat(0), rat(0), rat(-1)],
        ])
        .unwrap();
        assert_eq!(g, expected);
        assert_eq!(signature(&g).unwrap(), Inertia::new(1, 2, 0));
        assert!(hr_discriminant_check(&p).unwrap().passed);
    }

    #[test]
    fn identity_in_dimension_three() {
        let p = SymMatrixTuple::new(3, vec![RationalMatrix::identity(3)]).unwrap();
        let r = hr_discriminant_check(&p).unwrap();
        assert!(r.passed && r.note.is_none());
    }

    #[test]
    fn zero_matrix_is_vacuous() {
        let p = SymMatrixTuple::new(4, vec![RationalMatrix::zeros(4, 4); 2]).unwrap();
        let r = hr_discriminant_check(&p).unwrap();
        assert!(r.passed && r.note.is_some());
    }

    #[test]
    fn non_psd_rejected() {
        let m = RationalMatrix::diagonal(&[rat(1), rat(-1), rat(1)]);
        let p = SymMatrixTuple::new(3, vec![m]).unwrap();
        assert!(matches!(hr_discriminant_check(&p), Err(Error::NotPsd { index: 0 })));
    }

    #[test]
    fn af_with_equal_pair_is_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_psd(&mut rng, 3);
        let b = random_psd(&mut rng, 3);
        let r = af_discriminant_check(&SymMatrixTuple::new(3, vec![a.clone(), a, b]).unwrap()).unwrap();
        assert!(r.passed);
        assert_eq!(r.witness.unwrap()["determinant"], "0");
    }

    #[test]
    fn box_volumes() {
        let cube = BoxTuple::new(3, vec![vec![rat(1); 3]; 3]).unwrap();
        assert_eq!(mixed_volume_boxes(&cube).unwrap(), rat(1));
        let segs = BoxTuple::new(2, vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]).unwrap();
        assert_eq!(mixed_volume_boxes(&segs).unwrap(), ratio(1, 2));
        let w = vec![rat(2), ratio(1, 3), rat(5)];
        let same = BoxTuple::new(3, vec![w.clone(); 3]).unwrap();
        assert_eq!(mixed_volume_boxes(&same).unwrap(), ratio(10, 3));
        assert!(BoxTuple::new(2, vec![vec![rat(-1), rat(1)]]).is_err());
    }

    #[test]
    fn box_af() {
        // Unit segments along the two axes: V(S₁, S₂)² = 1/4 while V(S₁, S₁) = 0.
        let segs = BoxTuple::new(2, vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]).unwrap();
        let r = af_boxes_check(&segs).unwrap();
        assert!(r.passed && r.note.is_some());
        assert_eq!(r.witness.unwrap()["determinant"], "-1/4");
        let w = vec![rat(2), rat(3)];
        let equal = af_boxes_check(&BoxTuple::new(2, vec![w.clone(), w]).unwrap()).unwrap();
        assert!(equal.passed);
    }
}
