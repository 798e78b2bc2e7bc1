//! Operator tuples and operator systems inside `M_n`.

use crate::error::{Error, Result};
use crate::linalg::{matrix_span_rank, same_span, Matrix, TolerancePolicy};
use crate::scalar::Scalar;

/// Ordered family of `d ≥ 1` matrices in `M_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTuple<S> {
    n: usize,
    matrices: Vec<Matrix<S>>,
}

impl<S: Scalar> OperatorTuple<S> {
    pub fn new(matrices: Vec<Matrix<S>>) -> Result<Self> {
        let n = matrices.first().ok_or(Error::EmptyInput)?.n();
        for m in &matrices {
            if m.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.n(),
                });
            }
        }
        Ok(Self { n, matrices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix<S>] {
        &self.matrices
    }

    pub fn into_matrices(self) -> Vec<Matrix<S>> {
        self.matrices
    }

    pub fn check_hermitian(&self, tol: &TolerancePolicy) -> Result<()> {
        match self.matrices.iter().position(|m| !m.is_hermitian(tol.psd_tol)) {
            Some(index) => Err(Error::NotHermitianTuple { index }),
            None => Ok(()),
        }
    }

    pub fn check_traceless(&self, tol: &TolerancePolicy) -> Result<()> {
        for (index, m) in self.matrices.iter().enumerate() {
            let tr = m.trace();
            let ok = match S::BACKEND {
                crate::Backend::Exact => tr.is_zero(),
                crate::Backend::Float => tr.abs_f64() <= tol.psd_tol * (1.0 + m.frobenius_norm()),
            };
            if !ok {
                return Err(Error::NotTraceless {
                    index,
                    trace: tr.abs_f64(),
                });
            }
        }
        Ok(())
    }

    pub fn is_hermitian(&self, tol: &TolerancePolicy) -> bool {
        self.check_hermitian(tol).is_ok()
    }

    pub fn is_traceless(&self, tol: &TolerancePolicy) -> bool {
        self.check_traceless(tol).is_ok()
    }

    /// Replaces each `X` by `X − (Tr X / n)·1`. The span with the unit
    /// adjoined is unchanged. Also returns the largest `|Tr X|` removed.
    pub fn traceless_part(&self) -> (Self, f64) {
        let n = self.n;
        let mut removed: f64 = 0.0;
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let tr = m.trace();
                removed = removed.max(tr.abs_f64());
                let shift = tr * S::from_ratio(1, n as i64);
                let mut out = m.clone();
                for i in 0..n {
                    out[(i, i)] = out[(i, i)].clone() - shift.clone();
                }
                out
            })
            .collect();
        (Self { n, matrices }, removed)
    }

    /// The tuple `X·M`, i.e. `X'_j = Σ_i M_ij X_i` for a `d×d` matrix `M`.
    pub fn recombine(&self, m: &Matrix<S>) -> Result<Self> {
        if m.n() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: m.n(),
            });
        }
        let d = self.d();
        let matrices = (0..d)
            .map(|j| {
                let mut acc = Matrix::zeros(self.n);
                for i in 0..d {
                    if !m[(i, j)].is_zero() {
                        acc = &acc + &self.matrices[i].scale(&m[(i, j)]);
                    }
                }
                acc
            })
            .collect();
        Ok(Self { n: self.n, matrices })
    }

    /// `X_i ↦ U X_i U*`.
    pub fn conjugate_by(&self, u: &Matrix<S>) -> Result<Self> {
        u.check_same_size(&self.matrices[0])?;
        let ua = u.adjoint();
        Ok(Self {
            n: self.n,
            matrices: self.matrices.iter().map(|x| &(u * x) * &ua).collect(),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            n: self.n,
            matrices: self.matrices.iter().map(|x| x.scale(c)).collect(),
        }
    }
}

/// Self-adjoint subspace of `M_n`, usually unital, given by a spanning family.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSystem<S> {
    n: usize,
    basis: Vec<Matrix<S>>,
    contains_unit: bool,
}

/// Warning raised when a tuple spans less than its length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DependentTuple {
    /// Dimension of the resulting system (unit included).
    pub dim: usize,
    /// `d + 1`, the dimension for an independent tuple.
    pub expected: usize,
}

impl<S: Scalar> OperatorSystem<S> {
    /// Validates self-adjointness of the span and records whether it holds the unit.
    pub fn new(basis: Vec<Matrix<S>>, tol: &TolerancePolicy) -> Result<Self> {
        let n = basis.first().ok_or(Error::EmptyInput)?.n();
        for m in &basis {
            if m.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.n(),
                });
            }
        }
        let mut s = Self {
            n,
            basis,
            contains_unit: false,
        };
        if !s.is_self_adjoint(tol) {
            return Err(Error::NotSelfAdjoint);
        }
        s.contains_unit = s.contains(&Matrix::identity(n), tol);
        Ok(s)
    }

    /// The unital system `span{1, X}` for a Hermitian family `X`.
    pub fn unital(tuple: &OperatorTuple<S>, tol: &TolerancePolicy) -> Result<Self> {
        let mut basis = vec![Matrix::identity(tuple.n())];
        basis.extend(tuple.matrices().iter().cloned());
        Self::new(basis, tol)
    }

    /// `span{1}`.
    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            basis: vec![Matrix::identity(n)],
            contains_unit: true,
        }
    }

    /// All of `M_n`, spanned by the matrix units.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            basis: (0..n * n).map(|k| Matrix::unit(n, k / n, k % n)).collect(),
            contains_unit: true,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Matrix<S>] {
        &self.basis
    }

    pub fn contains_unit(&self) -> bool {
        self.contains_unit
    }

    pub fn dim(&self, tol: &TolerancePolicy) -> usize {
        matrix_span_rank(&self.basis, tol)
    }

    pub fn contains(&self, x: &Matrix<S>, tol: &TolerancePolicy) -> bool {
        let mut ext = self.basis.clone();
        ext.push(x.clone());
        matrix_span_rank(&ext, tol) == matrix_span_rank(&self.basis, tol)
    }

    /// `dim span(basis ∪ basis*) = dim span(basis)`.
    pub fn is_self_adjoint(&self, tol: &TolerancePolicy) -> bool {
        let mut ext = self.basis.clone();
        ext.extend(self.basis.iter().map(Matrix::adjoint));
        matrix_span_rank(&ext, tol) == matrix_span_rank(&self.basis, tol)
    }

    pub fn same_span(&self, other: &Self, tol: &TolerancePolicy) -> bool {
        same_span(&self.basis, &other.basis, tol)
    }

    fn with_basis(&self, basis: Vec<Matrix<S>>) -> Self {
        Self {
            n: self.n,
            basis,
            contains_unit: self.contains_unit,
        }
    }
}

/// Adjoins the unit to a traceless Hermitian tuple and takes the span.
///
/// A dependent tuple is not an error here; the shortfall is returned as a warning.
pub fn adjoin_unit<S: Scalar>(
    tuple: &OperatorTuple<S>,
    tol: &TolerancePolicy,
) -> Result<(OperatorSystem<S>, Option<DependentTuple>)> {
    tuple.check_hermitian(tol).map_err(|e| match e {
        Error::NotHermitianTuple { index } => Error::NotHermitian {
            residual: tuple.matrices()[index].hermitian_residual(),
        },
        other => other,
    })?;
    tuple.check_traceless(tol)?;
    let system = OperatorSystem::unital(tuple, tol)?;
    let dim = system.dim(tol);
    let expected = tuple.d() + 1;
    let warning = (dim < expected).then_some(DependentTuple { dim, expected });
    Ok((system, warning))
}

/// Reflexive complement: the orthogonal complement of the traceless part of
/// `s` inside the traceless matrices, with the unit adjoined.
///
/// Equivalently `(span(s) + ℂ1)^⊥ ⊕ ℂ1`, so `dim s + dim s^⊥ = n² + 1`.
pub fn reflexive_complement<S: Scalar>(s: &OperatorSystem<S>, tol: &TolerancePolicy) -> OperatorSystem<S> {
    let n = s.n();
    let one = Matrix::<S>::identity(n);
    let rows: Vec<Vec<S>> = s
        .basis()
        .iter()
        .chain(std::iter::once(&one))
        .map(|b| b.conj().into_vec())
        .collect();
    let mut basis = vec![one];
    basis.extend(
        S::null_space(&rows, n * n, tol)
            .into_iter()
            .map(|v| Matrix::unvec_sized(n, v).expect("null vectors have length n²")),
    );
    OperatorSystem {
        n,
        basis,
        contains_unit: true,
    }
}

/// Entrywise complex conjugate of the system.
pub fn conjugate_system<S: Scalar>(s: &OperatorSystem<S>) -> OperatorSystem<S> {
    s.with_basis(s.basis().iter().map(Matrix::conj).collect())
}

pub fn transpose_system<S: Scalar>(s: &OperatorSystem<S>) -> OperatorSystem<S> {
    s.with_basis(s.basis().iter().map(Matrix::transpose).collect())
}

/// The 4-tuple `(T₁, T₂, Y₁, Y₂)` in `M₃`: two traceless diagonal matrices and
/// `Y_i = [[0, |α_i⟩], [⟨α_i|, 0]]` with the 2×2 block in the upper left.
///
/// With `check` set, enforces `(2/3)·Re⟨α_i|α_j⟩ = δ_ij`, the normalized-trace
/// orthonormality of the `Y_i`.
pub fn construct_block_tuple<S: Scalar>(
    alpha1: [S; 2],
    alpha2: [S; 2],
    check: Option<&TolerancePolicy>,
) -> Result<OperatorTuple<S>> {
    if let Some(tol) = check {
        let alphas = [&alpha1, &alpha2];
        let mut worst: f64 = 0.0;
        let mut exact_ok = true;
        for (i, a) in alphas.iter().enumerate() {
            for (j, b) in alphas.iter().enumerate() {
                let ip = a[0].conj() * b[0].clone() + a[1].conj() * b[1].clone();
                let lhs = S::from_ratio(2, 3) * ip.real_part();
                let target = if i == j { S::one() } else { S::zero() };
                let diff = lhs - target;
                exact_ok &= diff.is_zero();
                worst = worst.max(diff.abs_f64());
            }
        }
        let ok = match S::BACKEND {
            crate::Backend::Exact => exact_ok,
            crate::Backend::Float => worst <= tol.psd_tol.max(1e-12),
        };
        if !ok {
            return Err(Error::NormalizationViolated { residual: worst });
        }
    }
    let q = |p: i64| S::from_ratio(p, 1);
    let t1 = Matrix::diag(&[q(1), q(-1), q(0)]);
    let t2 = Matrix::diag(&[q(1), q(1), q(-2)]);
    let block = |a: &[S; 2]| {
        let mut y = Matrix::zeros(3);
        for k in 0..2 {
            y[(k, 2)] = a[k].clone();
            y[(2, k)] = a[k].conj();
        }
        y
    };
    OperatorTuple::new(vec![t1, t2, block(&alpha1), block(&alpha2)])
}

/// `α₁ = √(3/2)·e₁`, `α₂ = √(3/2)·(c·i·e₁ + √(1−c²)·e₂)`, so that
/// `⟨α₁|α₂⟩ = (3/2)·c·i` and both `Y_i` are normalized.
pub fn block_alphas(c: f64) -> ([crate::C64; 2], [crate::C64; 2]) {
    use crate::C64;
    let s = 1.5f64.sqrt();
    (
        [C64::new(s, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, s * c), C64::new(s * (1.0 - c * c).sqrt(), 0.0)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_hermitian, hs_inner, TraceMode};
    use crate::{GaussRational, C64};

    fn q(p: i64) -> GaussRational {
        GaussRational::from_ratio(p, 1)
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn adjoin_unit_single_diagonal() {
        let t = Matrix::diag(&[q(1), q(-1), q(0)]);
        let tuple = OperatorTuple::new(vec![t.clone()]).unwrap();
        let (s, warn) = adjoin_unit(&tuple, &tol()).unwrap();
        assert!(warn.is_none());
        assert_eq!(s.dim(&tol()), 2);
        assert!(s.contains_unit());
        assert!(s.contains(&t, &tol()));
        let one = Matrix::identity(3);
        assert_eq!(hs_inner(&one, &t, TraceMode::Normalized).unwrap(), q(0));
    }

    #[test]
    fn adjoin_unit_dependent_tuple_warns() {
        let t = Matrix::diag(&[q(1), q(-1), q(0)]);
        let tuple = OperatorTuple::new(vec![t.clone(), t.scale(&q(2))]).unwrap();
        let (_, warn) = adjoin_unit(&tuple, &tol()).unwrap();
        assert_eq!(warn, Some(DependentTuple { dim: 2, expected: 3 }));
    }

    #[test]
    fn adjoin_unit_rejects_bad_input() {
        let tuple = OperatorTuple::new(vec![Matrix::<GaussRational>::unit(2, 0, 1)]).unwrap();
        assert!(matches!(adjoin_unit(&tuple, &tol()), Err(Error::NotHermitian { .. })));
        let tuple = OperatorTuple::new(vec![Matrix::<GaussRational>::unit(2, 0, 0)]).unwrap();
        assert!(matches!(adjoin_unit(&tuple, &tol()), Err(Error::NotTraceless { .. })));
    }

    #[test]
    fn complement_of_trivial_and_full() {
        for n in 2..4 {
            let c = reflexive_complement(&OperatorSystem::<GaussRational>::trivial(n), &tol());
            assert_eq!(c.dim(&tol()), n * n);
            let c = reflexive_complement(&OperatorSystem::<GaussRational>::full(n), &tol());
            assert_eq!(c.dim(&tol()), 1);
        }
    }

    #[test]
    fn conjugate_flips_imaginary_generator() {
        let i = GaussRational::imag_unit();
        let g = Matrix::from_rows(vec![vec![q(0), i.clone()], vec![-i, q(0)]]).unwrap();
        let s = OperatorSystem::new(vec![Matrix::identity(2), g.clone()], &tol()).unwrap();
        let c = conjugate_system(&s);
        assert_eq!(c.basis()[1], g.scale(&q(-1)));
        assert!(c.same_span(&s, &tol()));
    }

    #[test]
    fn real_system_fixed_by_conjugation_and_transpose_is_involution() {
        let s = OperatorSystem::<C64>::full(2);
        assert_eq!(conjugate_system(&s), s);
        let x = Matrix::from_fn(2, |i, j| C64::new(i as f64, j as f64 + 1.0));
        let s = OperatorSystem::new(vec![Matrix::identity(2), x.clone(), x.adjoint()], &tol()).unwrap();
        assert_eq!(transpose_system(&transpose_system(&s)), s);
        for (t, b) in transpose_system(&s).basis().iter().zip(s.basis()) {
            assert_eq!(*t, b.conj().adjoint());
        }
    }

    #[test]
    fn non_self_adjoint_span_rejected() {
        let e12 = Matrix::<GaussRational>::unit(2, 0, 1);
        assert_eq!(
            OperatorSystem::new(vec![Matrix::identity(2), e12], &tol()).unwrap_err(),
            Error::NotSelfAdjoint
        );
    }

    #[test]
    fn block_tuple_spectrum() {
        let (a1, a2) = block_alphas(0.3);
        let t = construct_block_tuple(a1, a2, Some(&tol())).unwrap();
        assert!(t.is_hermitian(&tol()) && t.is_traceless(&tol()));
        let y = &t.matrices()[2..];
        let d = &(&y[0].adjoint() * &y[0]) + &(&y[1].adjoint() * &y[1]);
        let ev = eig_hermitian(&d, &tol()).unwrap();
        for (got, want) in ev.iter().zip([1.05, 1.95, 3.0]) {
            assert!((got - want).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn block_tuple_normalization_violation() {
        let a = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let err = construct_block_tuple(a, a, Some(&tol())).unwrap_err();
        assert!(matches!(err, Error::NormalizationViolated { .. }));
    }

    #[test]
    fn exact_block_tuple_normalization() {
        // |α₁|² = 1 + 1/4 + 1/4 = 3/2 and ⟨α₁|α₂⟩ purely imaginary
        let half = GaussRational::from_ratio(1, 2);
        let i = GaussRational::imag_unit();
        let a1 = [q(1), half.clone() + i.clone() * half.clone()];
        let a2 = [i.clone(), half.clone() - i * half.clone()];
        let t = construct_block_tuple(a1, a2, Some(&tol()));
        assert!(t.is_ok(), "{t:?}");
    }
}
