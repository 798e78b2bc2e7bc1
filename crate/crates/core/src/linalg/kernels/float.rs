//! Floating-point kernels backed by nalgebra's SVD and Hermitian eigensolver.

use nalgebra::{ComplexField, DMatrix, RealField, SymmetricEigen, SVD};
use num_complex::Complex;

use super::{PsdReport, RankEvidence, RankReport};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, TolerancePolicy};
use crate::scalar::Scalar;

/// Real types usable as the component type of the float backend.
pub trait FloatField: RealField + Copy {}
impl FloatField for f32 {}
impl FloatField for f64 {}

fn to_f64<T: FloatField>(x: T) -> f64 {
    nalgebra::try_convert::<T, f64>(x).unwrap_or(f64::NAN)
}

fn rows_to_dmatrix<T: FloatField>(rows: &[Vec<Complex<T>>], pad_to: usize) -> DMatrix<Complex<T>> {
    let width = rows.first().map_or(0, Vec::len);
    let m = rows.len().max(pad_to);
    DMatrix::from_fn(m, width, |i, j| {
        rows.get(i).map_or(Complex::new(T::zero(), T::zero()), |r| r[j])
    })
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn rank<T: FloatField>(rows: &[Vec<Complex<T>>], tol: &TolerancePolicy) -> RankReport
where
    Complex<T>: ComplexField<RealField = T>,
{
    let m = rows_to_dmatrix(rows, 0);
    let sv = sorted_desc(m.singular_values().iter().map(|&s| to_f64(s)).collect());
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let sigma_min = sv.last().copied().unwrap_or(0.0);
    let rank = if sigma_max > 0.0 {
        sv.iter().filter(|&&s| s > tol.rank_rel_tol * sigma_max).count()
    } else {
        0
    };
    RankReport {
        rank,
        evidence: RankEvidence::Float { sigma_min, sigma_max },
    }
}

fn svd_with_v<T: FloatField>(m: DMatrix<Complex<T>>) -> (Vec<f64>, DMatrix<Complex<T>>)
where
    Complex<T>: ComplexField<RealField = T>,
{
    let svd = SVD::new(m, false, true);
    let sv = svd.singular_values.iter().map(|&s| to_f64(s)).collect();
    (sv, svd.v_t.expect("requested v_t"))
}

pub fn row_space<T: FloatField>(rows: &[Vec<Complex<T>>], tol: &TolerancePolicy) -> Vec<Vec<Complex<T>>>
where
    Complex<T>: ComplexField<RealField = T>,
{
    if rows.is_empty() {
        return Vec::new();
    }
    let (sv, v_t) = svd_with_v(rows_to_dmatrix(rows, 0));
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return Vec::new();
    }
    sv.iter()
        .enumerate()
        .filter(|(_, &s)| s > tol.rank_rel_tol * sigma_max)
        .map(|(k, _)| v_t.row(k).iter().copied().collect())
        .collect()
}

pub fn null_space<T: FloatField>(rows: &[Vec<Complex<T>>], width: usize, tol: &TolerancePolicy) -> Vec<Vec<Complex<T>>>
where
    Complex<T>: ComplexField<RealField = T>,
{
    let zero = Complex::new(T::zero(), T::zero());
    if rows.is_empty() {
        return (0..width)
            .map(|k| {
                let mut e = vec![zero; width];
                e[k] = Complex::new(T::one(), T::zero());
                e
            })
            .collect();
    }
    // pad so that v_t is square and carries the full null space
    let (sv, v_t) = svd_with_v(rows_to_dmatrix(rows, width));
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    sv.iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max == 0.0 || s <= tol.rank_rel_tol * sigma_max)
        .map(|(k, _)| v_t.row(k).iter().map(|z| z.conj()).collect())
        .collect()
}

fn to_dmatrix<T: FloatField>(m: &Matrix<Complex<T>>) -> DMatrix<Complex<T>>
where
    Complex<T>: Scalar,
{
    let n = m.n();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

pub fn psd<T: FloatField>(m: &Matrix<Complex<T>>, tol: &TolerancePolicy) -> PsdReport
where
    Complex<T>: Scalar + ComplexField<RealField = T>,
{
    let hermitian = m.is_hermitian(tol.psd_tol);
    if !hermitian {
        return PsdReport {
            hermitian,
            psd: false,
            min_eigenvalue: None,
            violation: m.hermitian_residual(),
        };
    }
    let eig = SymmetricEigen::new(to_dmatrix(m));
    let min = eig.eigenvalues.iter().map(|&x| to_f64(x)).fold(f64::INFINITY, f64::min);
    let slack = tol.psd_tol * (1.0 + m.frobenius_norm());
    PsdReport {
        hermitian,
        psd: min >= -slack,
        min_eigenvalue: Some(min),
        violation: (-min).max(0.0),
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<T: FloatField>(m: &Matrix<Complex<T>>, tol: &TolerancePolicy) -> Result<Vec<f64>>
where
    Complex<T>: Scalar + ComplexField<RealField = T>,
{
    if !m.is_hermitian(tol.psd_tol) {
        return Err(Error::NotHermitian {
            residual: m.hermitian_residual(),
        });
    }
    let eig = SymmetricEigen::new(to_dmatrix(m));
    let mut values: Vec<f64> = eig.eigenvalues.iter().map(|&x| to_f64(x)).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// `‖x − UΛU*‖_F` for the eigendecomposition nalgebra returns.
pub fn eigen_reconstruction_residual<T: FloatField>(m: &Matrix<Complex<T>>) -> f64
where
    Complex<T>: Scalar + ComplexField<RealField = T>,
{
    let a = to_dmatrix(m);
    let eig = SymmetricEigen::new(a.clone());
    let rec = eig.recompose();
    to_f64((a - rec).norm())
}
