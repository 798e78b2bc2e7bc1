//! Linear maps `M_n → M_n` in matrix, Kraus and Choi form, and the
//! quantum-graph axioms.
//!
//! Conventions:
//! * the matrix representation acts on row-major `vec`, so column `i·n + j`
//!   of [`Superoperator::rep`] is `vec(Φ(E_ij))`;
//! * the Choi matrix is `C[(r,i),(q,j)] = Φ(E_ij)[r,q]`, bipartite index
//!   `(a,b) ↦ a·n + b`;
//! * `m*` is the adjoint of multiplication for the δ-form `τ = n·Tr`, which
//!   gives `m*(E_ij) = (1/n) Σ_k E_ik ⊗ E_kj`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, PsdReport, TolerancePolicy, TraceMode};
use crate::opsys::OperatorSystem;
use crate::scalar::{Backend, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator<S> {
    n: usize,
    rep: Matrix<S>,
}

fn isqrt_exact(m: usize) -> Option<usize> {
    let r = (m as f64).sqrt().round() as usize;
    (r * r == m && r > 0).then_some(r)
}

impl<S: Scalar> Superoperator<S> {
    pub fn from_rep(rep: Matrix<S>) -> Result<Self> {
        let n = isqrt_exact(rep.n()).ok_or(Error::LengthMismatch {
            expected: rep.n(),
            found: rep.n(),
        })?;
        Ok(Self { n, rep })
    }

    /// Builds the map from its values on the matrix units.
    pub fn from_images(n: usize, mut image: impl FnMut(usize, usize) -> Matrix<S>) -> Self {
        let nn = n * n;
        let mut rep = Matrix::zeros(nn);
        for i in 0..n {
            for j in 0..n {
                let col = i * n + j;
                let img = image(i, j);
                for (row, v) in img.into_vec().into_iter().enumerate() {
                    rep[(row, col)] = v;
                }
            }
        }
        Self { n, rep }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rep: Matrix::identity(n * n),
        }
    }

    /// Adjacency matrix of the complete quantum graph, `x ↦ n·Tr(x)·1`.
    pub fn complete_graph(n: usize) -> Self {
        let c = S::from_ratio(n as i64, 1);
        Self::from_images(n, |i, j| {
            if i == j {
                Matrix::identity(n).scale(&c)
            } else {
                Matrix::zeros(n)
            }
        })
    }

    /// The transpose map `x ↦ xᵀ`, positive but not completely positive.
    pub fn transpose_map(n: usize) -> Self {
        Self::from_images(n, |i, j| Matrix::unit(n, j, i))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rep(&self) -> &Matrix<S> {
        &self.rep
    }

    /// `Φ(E_ij)`.
    pub fn image(&self, i: usize, j: usize) -> Matrix<S> {
        let nn = self.n * self.n;
        let col = i * self.n + j;
        Matrix::unvec_sized(self.n, (0..nn).map(|r| self.rep[(r, col)].clone()).collect())
            .expect("column has length n²")
    }

    pub fn apply(&self, x: &Matrix<S>) -> Result<Matrix<S>> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n(),
            });
        }
        Matrix::unvec_sized(self.n, self.rep.mat_vec(x.entries()))
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        Ok(Self {
            n: self.n,
            rep: &self.rep * &other.rep,
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            n: self.n,
            rep: self.rep.scale(c),
        }
    }

    /// Frobenius norm of the representing matrix.
    pub fn norm(&self) -> f64 {
        self.rep.frobenius_norm()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.rep - &other.rep).frobenius_norm()
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

/// Kraus operators `Y_ℓ` of the completely positive map `x ↦ Σ Y_ℓ x Y_ℓ*`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausTuple<S> {
    n: usize,
    operators: Vec<Matrix<S>>,
}

impl<S: Scalar> KrausTuple<S> {
    pub fn new(operators: Vec<Matrix<S>>) -> Result<Self> {
        let n = operators.first().ok_or(Error::EmptyInput)?.n();
        for y in &operators {
            if y.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: y.n(),
                });
            }
        }
        Ok(Self { n, operators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn operators(&self) -> &[Matrix<S>] {
        &self.operators
    }
}

/// `x ↦ Σ_ℓ Y_ℓ x Y_ℓ*`.
pub fn superop_from_kraus<S: Scalar>(k: &KrausTuple<S>) -> Superoperator<S> {
    let n = k.n();
    // Y E_ij Y* = (Y e_i)(Y e_j)*, entry (r, q) = Y_ri conj(Y_qj)
    Superoperator::from_images(n, |i, j| {
        let mut out: Matrix<S> = Matrix::zeros(n);
        for y in k.operators() {
            for r in 0..n {
                let a = &y[(r, i)];
                if a.is_zero() {
                    continue;
                }
                for q in 0..n {
                    let t = a.clone() * y[(q, j)].conj();
                    out[(r, q)] = out[(r, q)].clone() + t;
                }
            }
        }
        out
    })
}

/// Quantum adjacency matrix `x ↦ Σ X_i x X_i*` of an operator system, for an
/// orthonormal basis `(X_i)` with respect to the normalized trace.
pub fn adjacency_from_system<S: Scalar>(s: &OperatorSystem<S>, tol: &TolerancePolicy) -> Result<Superoperator<S>> {
    if S::BACKEND == Backend::Exact {
        return Err(Error::ExactBackendUnsupported("adjacency_from_system"));
    }
    let kraus = orthonormal_basis(s.basis(), TraceMode::Normalized, tol)?;
    if kraus.is_empty() {
        return Err(Error::DegenerateSystem);
    }
    Ok(superop_from_kraus(&KrausTuple::new(kraus)?))
}

/// Gram–Schmidt with one re-orthogonalization pass; dependent members are dropped.
pub fn orthonormal_basis<S: Scalar>(
    family: &[Matrix<S>],
    mode: TraceMode,
    tol: &TolerancePolicy,
) -> Result<Vec<Matrix<S>>> {
    let mut out: Vec<Matrix<S>> = Vec::new();
    for b in family {
        let scale = crate::hs_inner(b, b, mode)?.re_f64().sqrt();
        if scale == 0.0 {
            continue;
        }
        let mut v = b.clone();
        for _ in 0..2 {
            for q in &out {
                let c = crate::hs_inner(q, &v, mode)?;
                v = &v - &q.scale(&c);
            }
        }
        let nrm2 = crate::hs_inner(&v, &v, mode)?.real_part();
        if nrm2.re_f64().sqrt() <= tol.rank_rel_tol * scale {
            continue;
        }
        let nrm = nrm2
            .sqrt_nonneg()
            .ok_or(Error::ExactBackendUnsupported("orthonormalization"))?;
        let inv = S::one() / nrm;
        out.push(v.scale(&inv));
    }
    Ok(out)
}

/// `x ↦ m(A ⊗ B)m*(x)`, computed as `E_ij ↦ (1/n) Σ_k A(E_ik)·B(E_kj)`.
pub fn mult_adjoint_product<S: Scalar>(a: &Superoperator<S>, b: &Superoperator<S>) -> Result<Superoperator<S>> {
    a.check_same_n(b)?;
    let n = a.n();
    let inv_n = S::from_ratio(1, n as i64);
    let a_img: Vec<Matrix<S>> = (0..n * n).map(|c| a.image(c / n, c % n)).collect();
    let b_img: Vec<Matrix<S>> = (0..n * n).map(|c| b.image(c / n, c % n)).collect();
    Ok(Superoperator::from_images(n, |i, j| {
        let sum: Matrix<S> = (0..n).map(|k| &a_img[i * n + k] * &b_img[k * n + j]).sum();
        sum.scale(&inv_n)
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub passed: bool,
    pub residual: f64,
}

/// The four quantum-graph axioms for a superoperator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub backend: Backend,
    pub n: usize,
    /// `m(A ⊗ A)m* = A`
    pub schur_idempotent: AxiomCheck,
    /// `m(A ⊗ id)m* = id`
    pub reflexive: AxiomCheck,
    /// `⟨A x, y⟩ = ⟨x, A y⟩`
    pub self_adjoint: AxiomCheck,
    /// Choi matrix positive semidefinite.
    pub completely_positive: AxiomCheck,
    pub tolerance: TolerancePolicy,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.schur_idempotent.passed
            && self.reflexive.passed
            && self.self_adjoint.passed
            && self.completely_positive.passed
    }
}

fn equality_check<S: Scalar>(diff: &Matrix<S>, scale: f64, tol: &TolerancePolicy) -> AxiomCheck {
    let residual = diff.frobenius_norm();
    let passed = match S::BACKEND {
        Backend::Exact => diff.is_zero(),
        Backend::Float => residual <= tol.rank_rel_tol * (1.0 + scale),
    };
    AxiomCheck { passed, residual }
}

pub fn check_quantum_graph<S: Scalar>(a: &Superoperator<S>, tol: &TolerancePolicy) -> AxiomReport {
    let n = a.n();
    let scale = a.norm();
    let id = Superoperator::identity(n);
    let aa = mult_adjoint_product(a, a).expect("same size");
    let a_id = mult_adjoint_product(a, &id).expect("same size");
    let schur_idempotent = equality_check(&(&aa.rep - &a.rep), scale, tol);
    let reflexive = equality_check(&(&a_id.rep - &id.rep), scale, tol);

    // ⟨A(E_ij), E_kl⟩ − ⟨E_ij, A(E_kl)⟩ under Tr
    let nn = n * n;
    let images: Vec<Matrix<S>> = (0..nn).map(|c| a.image(c / n, c % n)).collect();
    let sa = Matrix::from_fn(nn, |u, v| {
        let lhs = images[u][(v / n, v % n)].conj();
        let rhs = images[v][(u / n, u % n)].clone();
        lhs - rhs
    });
    let self_adjoint = equality_check(&sa, scale, tol);

    let PsdReport { psd, violation, .. } = S::psd(choi(a).matrix(), tol);
    let completely_positive = AxiomCheck {
        passed: psd,
        residual: violation,
    };
    AxiomReport {
        backend: S::BACKEND,
        n,
        schur_idempotent,
        reflexive,
        self_adjoint,
        completely_positive,
        tolerance: *tol,
    }
}

/// Choi matrix in `M_n ⊗ M_n` with `C[(r,i),(q,j)] = Φ(E_ij)[r,q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix<S> {
    n: usize,
    matrix: Matrix<S>,
}

impl<S: Scalar> ChoiMatrix<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        let n = isqrt_exact(matrix.n()).ok_or(Error::LengthMismatch {
            expected: matrix.n(),
            found: matrix.n(),
        })?;
        Ok(Self { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn psd(&self, tol: &TolerancePolicy) -> PsdReport {
        S::psd(&self.matrix, tol)
    }

    /// Basis of the range of `C_Φ` as the map `f^r ⊗ e_i ↦ Σ_{q,j} C[(r,i),(q,j)] f^q ⊗ e_j`
    /// (the row space of the stored block matrix), pulled back to `M_n` by `unvec`.
    pub fn range_basis(&self, tol: &TolerancePolicy) -> Vec<Matrix<S>> {
        let nn = self.n * self.n;
        let rows: Vec<Vec<S>> = (0..nn).map(|r| self.matrix.row(r).to_vec()).collect();
        S::row_space(&rows, tol)
            .into_iter()
            .map(|v| Matrix::unvec_sized(self.n, v).expect("row length n²"))
            .collect()
    }
}

pub fn choi<S: Scalar>(phi: &Superoperator<S>) -> ChoiMatrix<S> {
    let n = phi.n();
    let mut c = Matrix::zeros(n * n);
    for i in 0..n {
        for j in 0..n {
            let col = i * n + j;
            for r in 0..n {
                for q in 0..n {
                    c[(r * n + i, q * n + j)] = phi.rep[(r * n + q, col)].clone();
                }
            }
        }
    }
    ChoiMatrix { n, matrix: c }
}

pub fn superop_from_choi<S: Scalar>(c: &ChoiMatrix<S>) -> Superoperator<S> {
    let n = c.n();
    Superoperator::from_images(n, |i, j| {
        Matrix::from_fn(n, |r, q| c.matrix[(r * n + i, q * n + j)].clone())
    })
}

/// Range of the Choi matrix of `Σ Y_ℓ·Y_ℓ*`; it spans `{conj(Y_ℓ)}`.
pub fn choi_range_basis<S: Scalar>(k: &KrausTuple<S>, tol: &TolerancePolicy) -> Vec<Matrix<S>> {
    choi(&superop_from_kraus(k)).range_basis(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matrix_span_rank, same_span};
    use crate::{GaussRational, C64};
    use num_traits::Zero;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn delta_form_constant_by_brute_force() {
        // Find c with ⟨m*(E_ij), E_ab ⊗ E_cd⟩ = ⟨E_ij, E_ab E_cd⟩ for the ansatz
        // m*(E_ij) = c Σ_k E_ik ⊗ E_kj, inner product from τ = n·Tr.
        for n in 1..=3usize {
            let tau_inner = |x: &Matrix<GaussRational>, y: &Matrix<GaussRational>| {
                crate::hs_inner(x, y, TraceMode::DeltaForm).unwrap()
            };
            let mut ratio: Option<GaussRational> = None;
            for i in 0..n {
                for j in 0..n {
                    let eij = Matrix::unit(n, i, j);
                    for a in 0..n {
                        for b in 0..n {
                            for cc in 0..n {
                                for d in 0..n {
                                    let (eab, ecd) = (Matrix::unit(n, a, b), Matrix::unit(n, cc, d));
                                    let rhs = tau_inner(&eij, &(&eab * &ecd));
                                    let lhs_unit: GaussRational = (0..n)
                                        .map(|k| {
                                            tau_inner(&Matrix::unit(n, i, k), &eab)
                                                * tau_inner(&Matrix::unit(n, k, j), &ecd)
                                        })
                                        .fold(GaussRational::from_ratio(0, 1), |s, x| s + x);
                                    if lhs_unit.is_zero() {
                                        assert!(rhs.is_zero());
                                        continue;
                                    }
                                    let c = rhs / lhs_unit;
                                    if let Some(prev) = &ratio {
                                        assert_eq!(*prev, c);
                                    }
                                    ratio = Some(c);
                                }
                            }
                        }
                    }
                }
            }
            assert_eq!(ratio.unwrap(), GaussRational::from_ratio(1, n as i64));
        }
    }

    #[test]
    fn mm_star_is_identity() {
        for n in 1..=4 {
            let id = Superoperator::<GaussRational>::identity(n);
            assert_eq!(mult_adjoint_product(&id, &id).unwrap(), id);
        }
    }

    #[test]
    fn complete_graph_is_schur_idempotent() {
        let k = Superoperator::<GaussRational>::complete_graph(3);
        assert_eq!(mult_adjoint_product(&k, &k).unwrap(), k);
    }

    #[test]
    fn kraus_examples() {
        let n = 3;
        let id = superop_from_kraus(&KrausTuple::new(vec![Matrix::<GaussRational>::identity(n)]).unwrap());
        assert_eq!(id, Superoperator::identity(n));
        // {√n E_ij} realized as n × {E_ij}
        let units: Vec<_> = (0..n * n).map(|k| Matrix::unit(n, k / n, k % n)).collect();
        let full = superop_from_kraus(&KrausTuple::new(units).unwrap()).scale(&GaussRational::from_ratio(n as i64, 1));
        assert_eq!(full, Superoperator::complete_graph(n));
    }

    #[test]
    fn unitary_kraus_is_invertible() {
        let (c, s) = (0.6, 0.8);
        let u = Matrix::from_rows(vec![
            vec![C64::new(c, 0.0), C64::new(0.0, s)],
            vec![C64::new(0.0, s), C64::new(c, 0.0)],
        ])
        .unwrap();
        let phi = superop_from_kraus(&KrausTuple::new(vec![u.clone()]).unwrap());
        let back = superop_from_kraus(&KrausTuple::new(vec![u.adjoint()]).unwrap());
        assert!(phi.compose(&back).unwrap().distance(&Superoperator::identity(2)) < 1e-12);
    }

    #[test]
    fn adjacency_of_trivial_and_full_systems() {
        for n in 2..5 {
            let a = adjacency_from_system(&OperatorSystem::<C64>::trivial(n), &tol()).unwrap();
            assert!(a.distance(&Superoperator::identity(n)) < 1e-12);
            let a = adjacency_from_system(&OperatorSystem::<C64>::full(n), &tol()).unwrap();
            assert!(a.distance(&Superoperator::complete_graph(n)) < 1e-10);
        }
    }

    #[test]
    fn adjacency_rejects_exact_backend() {
        let s = OperatorSystem::<GaussRational>::trivial(2);
        assert_eq!(
            adjacency_from_system(&s, &tol()).unwrap_err(),
            Error::ExactBackendUnsupported("adjacency_from_system")
        );
    }

    #[test]
    fn axioms_of_trivial_and_complete_graphs() {
        for n in 2..=4 {
            for a in [
                Superoperator::<GaussRational>::identity(n),
                Superoperator::complete_graph(n),
            ] {
                let r = check_quantum_graph(&a, &tol());
                assert!(r.all_pass(), "{r:?}");
                assert_eq!(r.schur_idempotent.residual, 0.0);
                assert_eq!(r.reflexive.residual, 0.0);
                assert_eq!(r.self_adjoint.residual, 0.0);
            }
        }
    }

    #[test]
    fn transpose_map_is_not_cp() {
        let r = check_quantum_graph(&Superoperator::<C64>::transpose_map(3), &tol());
        assert!(!r.completely_positive.passed);
        let r = check_quantum_graph(&Superoperator::<GaussRational>::transpose_map(2), &tol());
        assert!(!r.completely_positive.passed);
    }

    #[test]
    fn choi_of_identity_is_rank_one_with_trace_n() {
        let n = 2;
        let c = choi(&Superoperator::<GaussRational>::identity(n));
        assert_eq!(matrix_span_rank(&c.range_basis(&tol()), &tol()), 1);
        assert_eq!(c.matrix().trace(), GaussRational::from_ratio(n as i64, 1));
        assert!(c.psd(&tol()).psd);
    }

    #[test]
    fn choi_of_complete_graph_is_scalar() {
        let n = 3;
        let c = choi(&Superoperator::<GaussRational>::complete_graph(n));
        assert_eq!(
            *c.matrix(),
            Matrix::identity(n * n).scale(&GaussRational::from_ratio(n as i64, 1))
        );
    }

    #[test]
    fn choi_round_trip_exact() {
        let phi = Superoperator::from_images(2, |i, j| {
            Matrix::from_fn(2, |r, q| {
                GaussRational::from_ratio((i + 2 * j + 3 * r + 5 * q) as i64, 7)
            })
        });
        assert_eq!(superop_from_choi(&choi(&phi)), phi);
    }

    #[test]
    fn choi_range_of_single_unit() {
        let e12 = Matrix::<GaussRational>::unit(3, 0, 1);
        let basis = choi_range_basis(&KrausTuple::new(vec![e12.clone()]).unwrap(), &tol());
        assert_eq!(basis.len(), 1);
        assert!(same_span(&basis, &[e12], &tol()));
    }

    #[test]
    fn choi_range_is_conjugate_span_not_original() {
        let i = GaussRational::imag_unit();
        let y = Matrix::from_rows(vec![
            vec![GaussRational::from_ratio(1, 1), i.clone()],
            vec![GaussRational::from_ratio(0, 1), GaussRational::from_ratio(2, 1)],
        ])
        .unwrap();
        let basis = choi_range_basis(&KrausTuple::new(vec![y.clone()]).unwrap(), &tol());
        assert!(same_span(&basis, &[y.conj()], &tol()));
        assert!(!same_span(&basis, &[y], &tol()));
    }
}
