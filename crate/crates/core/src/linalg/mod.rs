//! Dense linear algebra over either scalar backend.

mod inner;
pub mod kernels;
mod matrix;
mod span;
mod tol;

pub(crate) use inner::plain_inner;
pub use inner::{gram, hs_inner, TraceMode};
pub use kernels::{PsdReport, RankEvidence, RankReport};
pub use matrix::Matrix;
pub use span::SpanAccumulator;
pub use tol::TolerancePolicy;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Rank of a family of equal-length vectors.
///
/// Exact: fraction-free elimination. Float: singular values above
/// `rank_rel_tol · σ_max`, with `(σ_min, σ_max)` reported as evidence.
pub fn rank<S: Scalar>(vectors: &[Vec<S>], tol: &TolerancePolicy) -> Result<RankReport> {
    let first = vectors.first().ok_or(Error::EmptyInput)?;
    if first.is_empty() {
        return Err(Error::EmptyInput);
    }
    for v in vectors {
        if v.len() != first.len() {
            return Err(Error::DimensionMismatch {
                expected: first.len(),
                found: v.len(),
            });
        }
    }
    Ok(S::rank(vectors, tol))
}

/// Rank of the span of a family of matrices.
pub fn matrix_span_rank<S: Scalar>(mats: &[Matrix<S>], tol: &TolerancePolicy) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<S>> = mats.iter().map(Matrix::vec).collect();
    S::rank(&rows, tol).rank
}

/// Whether two matrix families span the same subspace.
pub fn same_span<S: Scalar>(a: &[Matrix<S>], b: &[Matrix<S>], tol: &TolerancePolicy) -> bool {
    let ra = matrix_span_rank(a, tol);
    let rb = matrix_span_rank(b, tol);
    let union: Vec<Matrix<S>> = a.iter().chain(b).cloned().collect();
    ra == rb && matrix_span_rank(&union, tol) == ra
}

/// Row-major vectorization of `x`.
pub fn vec<S: Scalar>(x: &Matrix<S>) -> Vec<S> {
    x.vec()
}

pub fn unvec<S: Scalar>(v: Vec<S>) -> Result<Matrix<S>> {
    Matrix::unvec(v)
}

/// Ascending real spectrum of a Hermitian matrix (float backend only).
pub fn eig_hermitian<S: Scalar>(x: &Matrix<S>, tol: &TolerancePolicy) -> Result<Vec<f64>> {
    S::hermitian_eigenvalues(x, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRational, C64};

    #[test]
    fn rank_errors() {
        let tol = TolerancePolicy::default();
        assert_eq!(rank::<C64>(&[], &tol).unwrap_err(), Error::EmptyInput);
        let bad = vec![vec![C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0); 2]];
        assert!(matches!(rank(&bad, &tol), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn standard_basis_has_full_rank_in_both_backends() {
        let tol = TolerancePolicy::default();
        let n = 3;
        let exact: Vec<Vec<GaussRational>> = (0..n * n).map(|k| Matrix::unit(n, k / n, k % n).vec()).collect();
        assert_eq!(rank(&exact, &tol).unwrap().rank, 9);
        let float: Vec<Vec<C64>> = (0..n * n).map(|k| Matrix::unit(n, k / n, k % n).vec()).collect();
        assert_eq!(rank(&float, &tol).unwrap().rank, 9);
    }

    #[test]
    fn vec_is_isometric_for_plain_trace() {
        let x = Matrix::from_fn(3, |i, j| C64::new(i as f64 - 1.0, j as f64 * 0.5));
        let y = Matrix::from_fn(3, |i, j| C64::new((i * j) as f64, 1.0 - i as f64));
        let lhs = plain_inner(&vec(&x), &vec(&y));
        let rhs = hs_inner(&x, &y, TraceMode::Plain).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
