use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::rational::{bit_size, format_rational, rat, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                values[i].clone()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rat(rows[i][j]))
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector product".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Entries as `p/q` strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_strings()).finish()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_strings();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Self {
            positive,
            negative,
            zero,
        }
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !a[(i, c)].is_zero())
            .min_by_key(|&i| bit_size(&a[(i, c)]))
        else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.entries.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..cols {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        let pivot_row: Vec<Rational> = a.row(r)[c..].to_vec();
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for (off, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    let v = &a[(i, c + off)] - &f * pv;
                    a[(i, c + off)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).1.len()
}

/// Columns of the result form a basis of the right null space.
pub fn kernel_basis(m: &RationalMatrix) -> RationalMatrix {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut basis = RationalMatrix::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            basis[(p, k)] = -r[(row, f)].clone();
        }
    }
    basis
}

pub fn determinant(m: &RationalMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut a = m.to_rows();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &piv;
            for j in c..n {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
    }
    Ok(det)
}

/// Exact inertia by symmetric elimination (congruence transforms), with 2x2 block
/// pivots when every remaining diagonal entry vanishes.
pub fn signature(m: &RationalMatrix) -> Result<Inertia> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut a = m.to_rows();
    let mut active: Vec<usize> = (0..m.rows).collect();
    let mut inertia = Inertia::default();
    while !active.is_empty() {
        let diag = active
            .iter()
            .enumerate()
            .filter(|(_, &i)| !a[i][i].is_zero())
            .min_by_key(|(_, &i)| bit_size(&a[i][i]))
            .map(|(pos, _)| pos);
        if let Some(pos) = diag {
            let p = active.swap_remove(pos);
            let piv = a[p][p].clone();
            if piv.is_positive() {
                inertia.positive += 1;
            } else {
                inertia.negative += 1;
            }
            let col: Vec<(usize, Rational)> = active
                .iter()
                .filter(|&&i| !a[i][p].is_zero())
                .map(|&i| (i, &a[i][p] / &piv))
                .collect();
            for (x, (i, f)) in col.iter().enumerate() {
                for (j, _) in &col[x..] {
                    let v = &a[*i][*j] - f * &a[p][*j];
                    a[*j][*i] = v.clone();
                    a[*i][*j] = v;
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(x, &i)| {
            active[x + 1..]
                .iter()
                .position(|&j| !a[i][j].is_zero())
                .map(|y| (x, x + 1 + y))
        });
        let Some((x, y)) = pair else {
            inertia.zero += active.len();
            break;
        };
        // Block [[0, b], [b, 0]] contributes one positive and one negative eigenvalue.
        let (i, j) = (active[x], active[y]);
        active.remove(y);
        active.remove(x);
        let b = a[i][j].clone();
        inertia.positive += 1;
        inertia.negative += 1;
        let ci: Vec<Rational> = active.iter().map(|&k| a[k][i].clone()).collect();
        let cj: Vec<Rational> = active.iter().map(|&k| a[k][j].clone()).collect();
        for s in 0..active.len() {
            for t in s..active.len() {
                let corr = (&ci[s] * &cj[t] + &cj[s] * &ci[t]) / &b;
                if corr.is_zero() {
                    continue;
                }
                let (k, l) = (active[s], active[t]);
                let v = &a[k][l] - corr;
                a[l][k] = v.clone();
                a[k][l] = v;
            }
        }
    }
    Ok(inertia)
}

/// Returns `basisᵀ · g · basis`.
pub fn restrict_form(g: &RationalMatrix, basis: &RationalMatrix) -> Result<RationalMatrix> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if basis.rows() != g.rows() {
        return Err(Error::DimensionMismatch(format!(
            "form is {}x{} but basis has {} rows",
            g.rows(),
            g.cols(),
            basis.rows()
        )));
    }
    let gb = g.mul(basis)?;
    let k = basis.cols();
    let mut out = RationalMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let mut acc = Rational::zero();
            for r in 0..basis.rows() {
                let b = &basis[(r, i)];
                if !b.is_zero() && !gb[(r, j)].is_zero() {
                    acc += b * &gb[(r, j)];
                }
            }
            out[(j, i)] = acc.clone();
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

pub fn is_positive_definite(m: &RationalMatrix) -> Result<bool> {
    let s = signature(m)?;
    Ok(s.positive == m.rows())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::ratio;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn rref_examples() {
        let id = RationalMatrix::identity(3);
        assert_eq!(rref(&id), (id.clone(), vec![0, 1, 2]));
        let z = RationalMatrix::zeros(2, 2);
        assert_eq!(rref(&z), (z.clone(), vec![]));
        let (r, p) = rref(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&RationalMatrix::identity(3)).cols(), 0);
        assert_eq!(kernel_basis(&RationalMatrix::zeros(2, 2)).cols(), 2);
        let k = kernel_basis(&m(&[&[1, 1]]));
        assert_eq!(k, m(&[&[-1], &[1]]));
    }

    #[test]
    fn signature_examples() {
        let d = RationalMatrix::diagonal(&[rat(1), rat(-1), rat(0)]);
        assert_eq!(signature(&d).unwrap(), Inertia::new(1, 1, 1));
        let h = RationalMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 1) | (1, 0) => ratio(1, 2),
            (2, 2) => rat(-1),
            _ => rat(0),
        });
        assert_eq!(signature(&h).unwrap(), Inertia::new(1, 2, 0));
        assert!(matches!(
            signature(&m(&[&[1, 2], &[0, 1]])),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn signature_needs_block_pivot_midway() {
        // Diagonal vanishes after the first elimination step.
        let a = m(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 0]]);
        assert_eq!(signature(&a).unwrap(), Inertia::new(2, 1, 0));
    }

    #[test]
    fn restrict_form_examples() {
        let id = RationalMatrix::identity(2);
        assert_eq!(restrict_form(&id, &id).unwrap(), id);
        let ones = m(&[&[1], &[1]]);
        let g = RationalMatrix::diagonal(&[rat(1), rat(-1)]);
        assert_eq!(restrict_form(&g, &ones).unwrap(), m(&[&[0]]));
        let g = RationalMatrix::diagonal(&[rat(2), rat(3)]);
        assert_eq!(restrict_form(&g, &ones).unwrap(), m(&[&[5]]));
        assert!(restrict_form(&g, &m(&[&[1]])).is_err());
    }

    #[test]
    fn definiteness_examples() {
        assert!(is_positive_definite(&RationalMatrix::identity(3)).unwrap());
        assert!(!is_positive_definite(&RationalMatrix::diagonal(&[rat(1), rat(0)])).unwrap());
        assert!(is_positive_definite(&m(&[&[2, 1], &[1, 2]])).unwrap());
        assert!(is_positive_definite(&RationalMatrix::zeros(0, 0)).unwrap());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[&[2, 1], &[1, 2]])).unwrap(), rat(3));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])).unwrap(), rat(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])).unwrap(), rat(0));
    }
}
