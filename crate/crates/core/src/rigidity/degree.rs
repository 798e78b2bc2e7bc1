use crate::error::{Error, Result};
use crate::linalg::{gram, Matrix, TolerancePolicy, TraceMode};
use crate::opsys::OperatorTuple;
use crate::scalar::Scalar;

/// Degree data of the quantum graph spanned by a Hermitian tuple (unit excluded).
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeMatrices<S> {
    /// `Γ_ij = τ(X_i* X_j)`.
    pub gram: Matrix<S>,
    pub gram_inverse: Matrix<S>,
    /// `D = Σ_ij (Γ⁻¹)_ij X_i X_j*`.
    pub degree: Matrix<S>,
    /// `D₂ = Σ_kl (Γ⁻¹)_kl X_k D X_l*`.
    pub second_degree: Matrix<S>,
}

/// Computes `D` and `D₂` through `Γ⁻¹`, never through `Γ^{-1/2}`, so the
/// exact backend stays exact.
pub fn degree_matrices<S: Scalar>(
    tuple: &OperatorTuple<S>,
    mode: TraceMode,
    tol: &TolerancePolicy,
) -> Result<DegreeMatrices<S>> {
    tuple.check_hermitian(tol)?;
    let xs = tuple.matrices();
    let g = gram(xs, mode, true)?;
    let inv = g.inverse(tol.rank_rel_tol).ok_or(Error::GramSingular)?;
    let d = xs.len();
    let n = tuple.n();
    // W_j = Σ_i (Γ⁻¹)_ij X_i
    let w: Vec<Matrix<S>> = (0..d)
        .map(|j| {
            let mut acc = Matrix::zeros(n);
            for (i, x) in xs.iter().enumerate() {
                if !inv[(i, j)].is_zero() {
                    acc = &acc + &x.scale(&inv[(i, j)]);
                }
            }
            acc
        })
        .collect();
    let adj: Vec<Matrix<S>> = xs.iter().map(Matrix::adjoint).collect();
    let degree: Matrix<S> = w.iter().zip(&adj).map(|(wj, xj)| wj * xj).sum();
    let second_degree: Matrix<S> = w.iter().zip(&adj).map(|(wj, xj)| &(wj * &degree) * xj).sum();
    Ok(DegreeMatrices {
        gram: g,
        gram_inverse: inv,
        degree,
        second_degree,
    })
}

pub fn degree_matrix<S: Scalar>(tuple: &OperatorTuple<S>, mode: TraceMode, tol: &TolerancePolicy) -> Result<Matrix<S>> {
    degree_matrices(tuple, mode, tol).map(|m| m.degree)
}

pub fn second_degree_matrix<S: Scalar>(
    tuple: &OperatorTuple<S>,
    mode: TraceMode,
    tol: &TolerancePolicy,
) -> Result<Matrix<S>> {
    degree_matrices(tuple, mode, tol).map(|m| m.second_degree)
}
