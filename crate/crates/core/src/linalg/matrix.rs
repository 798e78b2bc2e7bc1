use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    /// Matrix unit `E_ij` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m[(i, j)] = S::one();
        m
    }

    pub fn diag(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, |i, j| if i == j { entries[i].clone() } else { S::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    /// Entrywise complex conjugate in the standard basis.
    pub fn conj(&self) -> Self {
        self.map(S::conj)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    pub fn trace(&self) -> S {
        (0..self.n).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|x| {
                let a = x.abs_f64();
                a * a
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(S::abs_f64).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// `‖x − x*‖_F ≤ tol·(1 + ‖x‖_F)`; exact equality for the exact backend.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let residual = self.hermitian_residual();
        match S::BACKEND {
            crate::Backend::Exact => residual == 0.0 && *self == self.adjoint(),
            crate::Backend::Float => residual <= tol * (1.0 + self.frobenius_norm()),
        }
    }

    pub fn hermitian_residual(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// Whether every entry is negligible relative to `scale`.
    pub fn is_negligible(&self, scale: f64, rel_tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(scale, rel_tol))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Row-major vectorization: `E_ij` maps to basis index `i·n + j`.
    pub fn vec(&self) -> Vec<S> {
        self.data.clone()
    }

    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    pub fn unvec(v: Vec<S>) -> Result<Self> {
        let n = (v.len() as f64).sqrt().round() as usize;
        if n * n != v.len() || n == 0 {
            return Err(Error::LengthMismatch {
                expected: n.max(1) * n.max(1),
                found: v.len(),
            });
        }
        Ok(Self { n, data: v })
    }

    /// `unvec` with a known size.
    pub fn unvec_sized(n: usize, v: Vec<S>) -> Result<Self> {
        if v.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                found: v.len(),
            });
        }
        Ok(Self { n, data: v })
    }

    pub fn mat_vec(&self, v: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.n, other.n);
        Self::from_fn(a * b, |r, c| {
            self[(r / b, c / b)].clone() * other[(r % b, c % b)].clone()
        })
    }

    pub fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    ///
    /// Returns `None` when a pivot is negligible relative to the largest entry.
    pub fn inverse(&self, rel_tol: f64) -> Option<Self> {
        let n = self.n;
        let scale = self.max_abs();
        if n == 0 || scale == 0.0 {
            return None;
        }
        let mut a: Vec<Vec<S>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<S>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[p][col].abs_f64().total_cmp(&a[q][col].abs_f64()))
                .expect("nonempty pivot range");
            if a[pivot][col].is_negligible(scale, rel_tol) {
                return None;
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] = a[col][j].clone() / p.clone();
                inv[col][j] = inv[col][j].clone() / p.clone();
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    let t = f.clone() * a[col][j].clone();
                    a[i][j] = a[i][j].clone() - t;
                    let t = f.clone() * inv[col][j].clone();
                    inv[i][j] = inv[i][j].clone() - t;
                }
            }
        }
        Some(Self {
            n,
            data: inv.into_iter().flatten().collect(),
        })
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n + j]
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Self) -> Matrix<S> {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: Self) -> Matrix<S> {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Matrix<S> {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        let n = self.n;
        let mut out: Matrix<S> = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a.clone() * b.clone();
                    let slot = &mut out.data[i * n + j];
                    *slot = slot.clone() + t;
                }
            }
        }
        out
    }
}

impl<S: Scalar> std::iter::Sum for Matrix<S> {
    /// Panics on an empty iterator; the size of the zero matrix is unknown.
    fn sum<I: Iterator<Item = Self>>(mut iter: I) -> Self {
        let first = iter.next().expect("sum of an empty matrix family");
        iter.fold(first, |acc, m| &acc + &m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{scalar::gauss_ratio, GaussRational, C64};

    #[test]
    fn vec_is_row_major() {
        let e12 = Matrix::<C64>::unit(2, 0, 1);
        let v: Vec<f64> = e12.vec().iter().map(|z| z.re).collect();
        assert_eq!(v, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn unvec_rejects_bad_length() {
        let v = vec![C64::new(1.0, 0.0); 5];
        assert!(matches!(Matrix::unvec(v), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn adjoint_is_an_involution_exactly() {
        let m = Matrix::from_fn(3, |i, j| gauss_ratio(i as i64 + 1, 3, j as i64 - 1, 7));
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn exact_inverse() {
        let m = Matrix::from_fn(3, |i, j| {
            GaussRational::from_ratio(((i + 1) * (j + 2) % 5) as i64 + (i == j) as i64, 1)
        });
        let inv = m.inverse(0.0).unwrap();
        assert_eq!(&m * &inv, Matrix::identity(3));
    }

    #[test]
    fn singular_inverse_is_none() {
        let m = Matrix::<GaussRational>::from_fn(2, |_, _| GaussRational::from_ratio(1, 1));
        assert!(m.inverse(0.0).is_none());
    }

    #[test]
    fn kron_of_units() {
        let a = Matrix::<C64>::unit(2, 0, 1);
        let b = Matrix::<C64>::unit(2, 1, 0);
        let k = a.kron(&b);
        assert_eq!(k[(1, 2)], C64::new(1.0, 0.0));
        assert_eq!(k.entries().iter().filter(|z| z.re != 0.0).count(), 1);
    }
}
