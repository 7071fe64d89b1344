//! Dense matrices over the integers with unbounded entries.

use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::word::ParikhVector;

/// A `rows x cols` integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor; panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("ragged matrix literal")
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

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        self.entries[row * self.cols + col] = value;
    }

    pub(crate) fn get_mut(&mut self, row: usize, col: usize) -> &mut BigInt {
        &mut self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[BigInt] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> ParikhVector {
        ParikhVector::new((0..self.rows).map(|r| self.get(r, col).clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|e| e.is_positive())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// `self + scalar * I`.
    pub fn add_scalar_identity(&self, scalar: &BigInt) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            *m.get_mut(i, i) += scalar;
        }
        m
    }

    pub fn scale(&self, scalar: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * scalar).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Square-and-multiply power; `pow(0)` is the identity.
    pub fn pow(&self, mut exp: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_vector(&self, v: &ParikhVector) -> ParikhVector {
        assert_eq!(self.cols, v.dim(), "dimension mismatch");
        ParikhVector::new(
            (0..self.rows)
                .map(|r| {
                    self.row(r)
                        .iter()
                        .zip(v.counts())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    /// `self * v` for an integer column vector.
    pub fn mul_ints(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).to_f64().unwrap_or(f64::NAN)
        })
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}", self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for (c, e) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}
