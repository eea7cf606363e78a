use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::RationalMatrix;
use super::rational::{to_i128, Rational};
use crate::error::{Error, Result};

/// Dense row-major `i128` matrix for the large integral computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i128) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i128::from(i == j))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [i128] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[i128] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn max_abs(&self) -> u128 {
        self.data.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn negated(&self) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|x| x.checked_neg().ok_or(Error::Overflow("negating a matrix")))
            .collect::<Result<_>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Checked product; fails rather than wrapping.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("integer matrix product".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    if b != 0 {
                        let p = a.checked_mul(b).ok_or(Error::Overflow("multiplying"))?;
                        *o = o.checked_add(p).ok_or(Error::Overflow("multiplying"))?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Fails if some entry is not an integer fitting in `i128`.
    pub fn from_rational(m: &RationalMatrix) -> Result<Self> {
        let data = m
            .entries()
            .iter()
            .map(|r| to_i128(r).ok_or(Error::Overflow("converting to integers")))
            .collect::<Result<_>>()?;
        Ok(Self {
            rows: m.rows(),
            cols: m.cols(),
            data,
        })
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| {
            Rational::from_integer(BigInt::from(self[(i, j)]))
        })
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

/// Sparse matrix stored by rows, used for multiplication tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub row_entries: Vec<Vec<(usize, i128)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_entries: vec![Vec::new(); rows],
        }
    }

    pub fn nnz(&self) -> usize {
        self.row_entries.iter().map(Vec::len).sum()
    }

    /// `self * dense`, checked.
    pub fn mul_dense(&self, dense: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != dense.rows() {
            return Err(Error::DimensionMismatch("sparse-dense product".into()));
        }
        let mut out = IntMatrix::zeros(self.rows, dense.cols());
        for (i, entries) in self.row_entries.iter().enumerate() {
            let orow = out.row_mut(i);
            for &(k, a) in entries {
                for (o, &b) in orow.iter_mut().zip(dense.row(k)) {
                    if b != 0 {
                        let p = a.checked_mul(b).ok_or(Error::Overflow("multiplying"))?;
                        *o = o.checked_add(p).ok_or(Error::Overflow("multiplying"))?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for (i, entries) in self.row_entries.iter().enumerate() {
            for &(j, v) in entries {
                out[(i, j)] += v;
            }
        }
        out
    }

    /// `Σ weight_k · M_k` over matrices of equal shape.
    pub fn linear_combination<'a>(
        rows: usize,
        cols: usize,
        terms: impl IntoIterator<Item = (i128, &'a SparseIntMatrix)>,
    ) -> Result<Self> {
        let mut acc = vec![std::collections::BTreeMap::<usize, i128>::new(); rows];
        for (w, m) in terms {
            if w == 0 {
                continue;
            }
            if (m.rows, m.cols) != (rows, cols) {
                return Err(Error::DimensionMismatch("linear combination".into()));
            }
            for (i, entries) in m.row_entries.iter().enumerate() {
                for &(j, v) in entries {
                    let p = w.checked_mul(v).ok_or(Error::Overflow("combining tables"))?;
                    let slot = acc[i].entry(j).or_insert(0);
                    *slot = slot.checked_add(p).ok_or(Error::Overflow("combining tables"))?;
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            row_entries: acc
                .into_iter()
                .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        })
    }
}
