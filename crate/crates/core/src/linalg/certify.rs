//! Fast paths for large integer matrices.
//!
//! Floating point is used in two ways only. Products of integer matrices run in `f64`
//! when an a-priori bound shows every partial sum is an integer below 2^53, so the
//! result is exact. Inertia is certified by a congruence `T = CᵀSC`: `C` is found by a
//! floating-point symmetric factorisation, `T` is evaluated in floating point together
//! with a rigorous bound on the rounding error, and strict diagonal dominance of `T`
//! beyond that bound proves, by Sylvester's law, that the signs of its diagonal are
//! the inertia of `S`. When the certificate fails the caller falls back to exact
//! rational elimination.

use super::integer::{IntMatrix, SparseIntMatrix};
use super::matrix::{signature, Inertia};
use crate::error::{Error, Result};

const EXACT_F64: f64 = 9_007_199_254_740_992.0; // 2^53
const UNIT_ROUNDOFF: f64 = 1.1102230246251565e-16; // 2^-53

/// Dimension up to which exact rational elimination is used directly.
pub const EXACT_SIGNATURE_LIMIT: usize = 16;

fn row_abs_sums(m: &IntMatrix) -> Vec<u128> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.unsigned_abs()).sum())
        .collect()
}

/// Exact integer product, via `f64` when that is provably exact.
pub fn exact_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch("integer matrix product".into()));
    }
    let bound = row_abs_sums(a).into_iter().max().unwrap_or(0) as f64 * b.max_abs() as f64;
    if bound >= EXACT_F64 {
        return a.mul(b);
    }
    let (n, k, m) = (a.rows(), a.cols(), b.cols());
    let bf: Vec<f64> = b.data().iter().map(|&x| x as f64).collect();
    let mut out = IntMatrix::zeros(n, m);
    let mut acc = vec![0.0f64; m];
    for i in 0..n {
        acc.iter_mut().for_each(|x| *x = 0.0);
        for (kk, &x) in a.row(i).iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as f64;
            for (o, &y) in acc.iter_mut().zip(&bf[kk * m..(kk + 1) * m]) {
                *o += x * y;
            }
        }
        for (o, &v) in out.row_mut(i).iter_mut().zip(&acc) {
            *o = v as i128;
        }
    }
    debug_assert_eq!(k, a.cols());
    Ok(out)
}

/// Exact sparse-times-dense product, via `f64` when that is provably exact.
pub fn exact_sparse_mul(s: &SparseIntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if s.cols != b.rows() {
        return Err(Error::DimensionMismatch("sparse-dense product".into()));
    }
    let row_max = s
        .row_entries
        .iter()
        .map(|r| r.iter().map(|&(_, v)| v.unsigned_abs()).sum::<u128>())
        .max()
        .unwrap_or(0);
    if row_max as f64 * b.max_abs() as f64 >= EXACT_F64 {
        return s.mul_dense(b);
    }
    let m = b.cols();
    let bf: Vec<f64> = b.data().iter().map(|&x| x as f64).collect();
    let mut out = IntMatrix::zeros(s.rows, m);
    let mut acc = vec![0.0f64; m];
    for (i, entries) in s.row_entries.iter().enumerate() {
        acc.iter_mut().for_each(|x| *x = 0.0);
        for &(k, v) in entries {
            let v = v as f64;
            for (o, &y) in acc.iter_mut().zip(&bf[k * m..(k + 1) * m]) {
                *o += v * y;
            }
        }
        for (o, &v) in out.row_mut(i).iter_mut().zip(&acc) {
            *o = v as i128;
        }
    }
    Ok(out)
}

/// Inertia of a symmetric integer matrix: exact elimination for small sizes,
/// the dominance certificate otherwise, exact elimination as the last resort.
pub fn inertia(s: &IntMatrix) -> Result<Inertia> {
    if !s.is_symmetric() {
        return Err(if s.rows() == s.cols() {
            Error::NotSymmetric
        } else {
            Error::NotSquare {
                rows: s.rows(),
                cols: s.cols(),
            }
        });
    }
    if s.rows() > EXACT_SIGNATURE_LIMIT {
        if let Some(inertia) = certified_inertia(s) {
            return Ok(inertia);
        }
    }
    signature(&s.to_rational())
}

/// Attempts the dominance certificate. `None` means inconclusive, never wrong.
pub fn certified_inertia(s: &IntMatrix) -> Option<Inertia> {
    let n = s.rows();
    if n == 0 {
        return Some(Inertia::new(0, 0, 0));
    }
    if s.max_abs() as f64 >= EXACT_F64 {
        return None;
    }
    let sf: Vec<f64> = s.data().iter().map(|&x| x as f64).collect();
    let ct = congruence(&sf, n)?;
    check_dominance(&sf, &ct, n)
}

/// Rows of the returned matrix are the columns of `C`, scaled so that `CᵀSC` is close
/// to a signed identity.
fn congruence(sf: &[f64], n: usize) -> Option<Vec<f64>> {
    let alpha = (1.0 + 17f64.sqrt()) / 8.0;
    let mut a = sf.to_vec();
    let mut ct = vec![0.0f64; n * n];
    for i in 0..n {
        ct[i * n + i] = 1.0;
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut scale = vec![0.0f64; n];

    while !active.is_empty() {
        // Bunch–Kaufman partial pivoting over the active index set.
        let p = active[0];
        let (r, colmax) = active[1..]
            .iter()
            .map(|&i| (i, a[i * n + p].abs()))
            .fold((p, 0.0), |best, x| if x.1 > best.1 { x } else { best });
        let app = a[p * n + p].abs();
        let mut pivots = vec![p];
        if app < alpha * colmax {
            let rowmax = active
                .iter()
                .filter(|&&i| i != r)
                .map(|&i| a[i * n + r].abs())
                .fold(0.0, f64::max);
            if app * rowmax >= alpha * colmax * colmax {
                // keep p
            } else if a[r * n + r].abs() >= alpha * rowmax {
                pivots = vec![r];
            } else {
                pivots = vec![p, r];
            }
        }
        if app == 0.0 && colmax == 0.0 {
            // Whole column vanishes: the matrix is (numerically) singular here.
            return None;
        }
        active.retain(|i| !pivots.contains(i));

        if let [k] = pivots[..] {
            let d = a[k * n + k];
            if d == 0.0 || !d.is_finite() {
                return None;
            }
            let f: Vec<(usize, f64)> = active.iter().map(|&i| (i, a[i * n + k] / d)).collect();
            for &(i, fi) in &f {
                if fi != 0.0 {
                    for &j in &active {
                        a[i * n + j] -= fi * a[k * n + j];
                    }
                    let (src, dst) = split_rows(&mut ct, k, i, n);
                    for (x, &y) in dst.iter_mut().zip(src.iter()) {
                        *x -= fi * y;
                    }
                }
            }
            for &i in &active {
                a[k * n + i] = 0.0;
                a[i * n + k] = 0.0;
            }
            scale[k] = d.abs();
        } else {
            let (k, l) = (pivots[0], pivots[1]);
            let (e11, e12, e22) = (a[k * n + k], a[k * n + l], a[l * n + l]);
            let det = e11 * e22 - e12 * e12;
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            for &i in &active {
                let (bk, bl) = (a[i * n + k], a[i * n + l]);
                let fk = (bk * e22 - bl * e12) / det;
                let fl = (bl * e11 - bk * e12) / det;
                if fk == 0.0 && fl == 0.0 {
                    continue;
                }
                for &j in &active {
                    a[i * n + j] -= fk * a[k * n + j] + fl * a[l * n + j];
                }
                for c in 0..n {
                    let v = fk * ct[k * n + c] + fl * ct[l * n + c];
                    ct[i * n + c] -= v;
                }
            }
            for &i in &active {
                for t in [k, l] {
                    a[t * n + i] = 0.0;
                    a[i * n + t] = 0.0;
                }
            }
            // Diagonalise the 2×2 block by a rotation.
            let theta = 0.5 * (2.0 * e12).atan2(e11 - e22);
            let (sn, cs) = theta.sin_cos();
            for c in 0..n {
                let (u, v) = (ct[k * n + c], ct[l * n + c]);
                ct[k * n + c] = cs * u + sn * v;
                ct[l * n + c] = -sn * u + cs * v;
            }
            let d1 = cs * cs * e11 + 2.0 * cs * sn * e12 + sn * sn * e22;
            let d2 = sn * sn * e11 - 2.0 * cs * sn * e12 + cs * cs * e22;
            if d1 == 0.0 || d2 == 0.0 {
                return None;
            }
            scale[k] = d1.abs();
            scale[l] = d2.abs();
        }
    }
    for i in 0..n {
        let f = 1.0 / scale[i].sqrt();
        if !f.is_finite() {
            return None;
        }
        ct[i * n..(i + 1) * n].iter_mut().for_each(|x| *x *= f);
    }
    Some(ct)
}

fn split_rows(m: &mut [f64], src: usize, dst: usize, n: usize) -> (&[f64], &mut [f64]) {
    if src < dst {
        let (lo, hi) = m.split_at_mut(dst * n);
        (&lo[src * n..(src + 1) * n], &mut hi[..n])
    } else {
        let (lo, hi) = m.split_at_mut(src * n);
        (&hi[..n], &mut lo[dst * n..(dst + 1) * n])
    }
}

fn check_dominance(sf: &[f64], ct: &[f64], n: usize) -> Option<Inertia> {
    // Y = Ct·S, then T = Y·Ctᵀ.
    let mut y = vec![0.0f64; n * n];
    for i in 0..n {
        let yrow = &mut y[i * n..(i + 1) * n];
        for k in 0..n {
            let c = ct[i * n + k];
            if c != 0.0 {
                for (o, &s) in yrow.iter_mut().zip(&sf[k * n..(k + 1) * n]) {
                    *o += c * s;
                }
            }
        }
    }
    let mut t = vec![0.0f64; n * n];
    for i in 0..n {
        let yrow = &y[i * n..(i + 1) * n];
        for j in i..n {
            let v: f64 = yrow.iter().zip(&ct[j * n..(j + 1) * n]).map(|(a, b)| a * b).sum();
            t[i * n + j] = v;
            t[j * n + i] = v;
        }
    }

    // |T̂ − CᵀSC| ≤ γ(|Ŷ||Ct|ᵀ + |Ct||S||Ct|ᵀ) entrywise; only its row sums are needed.
    let nu = (n as f64 + 2.0) * UNIT_ROUNDOFF;
    if nu >= 0.01 {
        return None;
    }
    let gamma = nu / (1.0 - nu);
    let mut w = vec![0.0f64; n]; // w = |Ct|ᵀ·1
    for i in 0..n {
        for (o, &c) in w.iter_mut().zip(&ct[i * n..(i + 1) * n]) {
            *o += c.abs();
        }
    }
    let abs_mv = |m: &[f64], v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| m[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a.abs() * b).sum())
            .collect()
    };
    let yw = abs_mv(&y, &w);
    let sw = abs_mv(sf, &w);
    let csw = abs_mv(ct, &sw);

    let mut inertia = Inertia::new(0, 0, 0);
    for i in 0..n {
        let d = t[i * n + i];
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| t[i * n + j].abs()).sum();
        let err = gamma * (yw[i] + csw[i]);
        let need = (off + err) * (1.0 + 4.0 * nu) + f64::MIN_POSITIVE * n as f64;
        if !d.is_finite() || !need.is_finite() || d.abs() <= need {
            return None;
        }
        if d > 0.0 {
            inertia.positive += 1;
        } else {
            inertia.negative += 1;
        }
    }
    Some(inertia)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-20..=20);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    #[test]
    fn certificate_agrees_with_exact_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut certified = 0;
        for n in [1usize, 2, 5, 17, 40] {
            for _ in 0..4 {
                let m = random_symmetric(n, &mut rng);
                let exact = signature(&m.to_rational()).unwrap();
                if let Some(c) = certified_inertia(&m) {
                    assert_eq!(c, exact, "n = {n}");
                    certified += 1;
                }
            }
        }
        assert!(certified >= 15, "only {certified} certified");
    }

    #[test]
    fn zero_diagonal_needs_block_pivots() {
        // [[0, B], [Bᵀ, 0]] has inertia (k, k, 0) for invertible B.
        let k = 30;
        let mut m = IntMatrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            m[(i, k + i)] = 3;
            m[(k + i, i)] = 3;
            if i + 1 < k {
                m[(i, k + i + 1)] = 1;
                m[(k + i + 1, i)] = 1;
            }
        }
        assert_eq!(certified_inertia(&m), Some(Inertia::new(k, k, 0)));
    }

    #[test]
    fn singular_matrices_are_not_certified() {
        let m = IntMatrix::from_fn(3, 3, |_, _| 1);
        assert_eq!(certified_inertia(&m), None);
        assert_eq!(inertia(&m).unwrap(), Inertia::new(1, 0, 2));
    }

    #[test]
    fn f64_products_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = IntMatrix::from_fn(20, 30, |_, _| rng.gen_range(-1000..1000));
        let b = IntMatrix::from_fn(30, 10, |_, _| rng.gen_range(-1000..1000));
        assert_eq!(exact_mul(&a, &b).unwrap(), a.mul(&b).unwrap());
        let big = IntMatrix::from_fn(2, 2, |_, _| 1i128 << 60);
        assert_eq!(exact_mul(&big, &IntMatrix::identity(2)).unwrap(), big);
    }
}
