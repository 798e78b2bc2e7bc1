use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::closure::generated_algebra_dimension;
use super::degree::degree_matrices;
use crate::error::Result;
use crate::linalg::{Matrix, RankEvidence, SpanAccumulator, TolerancePolicy, TraceMode};
use crate::opsys::OperatorTuple;
use crate::scalar::{Backend, GaussRational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CERTIFIED_RIGID")]
    CertifiedRigid,
    /// The certificate failed; this never asserts non-rigidity.
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedRigid => "CERTIFIED_RIGID",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Basis used for the polynomial algebras `ℂ[D]` and `ℂ[D₂]` when forming the
/// `n²` products.
///
/// Both choices span the same space `span{DⁱD₂ʲ : 0 ≤ i, j < n}`, so the rank
/// is identical in exact arithmetic. Raw monomials are what the exact backend
/// uses (giving a literal determinant); in floating point they are too
/// ill-conditioned past `n ≈ 4`, so the float backend orthonormalizes each
/// Krylov sequence `1, G, G², …` (Arnoldi) before multiplying.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerBasis {
    Monomial,
    Krylov,
}

impl PowerBasis {
    pub fn default_for(backend: Backend) -> Self {
        match backend {
            Backend::Exact => PowerBasis::Monomial,
            Backend::Float => PowerBasis::Krylov,
        }
    }
}

impl std::str::FromStr for PowerBasis {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "monomial" => Ok(PowerBasis::Monomial),
            "krylov" | "arnoldi" => Ok(PowerBasis::Krylov),
            other => Err(crate::Error::InvalidInput(format!("unknown power basis {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowersCertificate {
    pub rank: usize,
    pub evidence: RankEvidence,
    pub verdict: Verdict,
    pub basis: PowerBasis,
}

fn normalize<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let nrm2 = crate::linalg::plain_inner(m.entries(), m.entries()).real_part();
    match nrm2.sqrt_nonneg() {
        Some(r) if !r.is_zero() => m.scale(&(S::one() / r)),
        _ => m.clone(),
    }
}

/// Orthogonal basis of `span{1, G, …, G^{n−1}}` by Arnoldi iteration on `1`.
/// Stops early when the Krylov space becomes `G`-invariant.
fn krylov_basis<S: Scalar>(g: &Matrix<S>, tol: &TolerancePolicy) -> Vec<Matrix<S>> {
    let n = g.n();
    let mut acc = SpanAccumulator::new(tol);
    let mut out = Vec::with_capacity(n);
    let mut current = acc
        .push_matrix(&Matrix::identity(n))
        .map(|q| normalize(&q))
        .expect("identity is nonzero");
    out.push(current.clone());
    for _ in 1..n {
        match acc.push_matrix(&(g * &current)) {
            Some(q) => {
                current = normalize(&q);
                out.push(current.clone());
            }
            None => break,
        }
    }
    out
}

fn monomials<S: Scalar>(g: &Matrix<S>) -> Vec<Matrix<S>> {
    let n = g.n();
    let mut out = Vec::with_capacity(n);
    let mut p = Matrix::identity(n);
    for _ in 0..n {
        let next = &p * g;
        out.push(p);
        p = next;
    }
    out
}

/// Rank of the `n²` products `DⁱD₂ʲ` (`0 ≤ i, j < n`, `D⁰ = 1`), vectorized.
/// Full rank `n²` certifies that `D` and `D₂` generate `M_n`.
pub fn powers_basis_certificate<S: Scalar>(d: &Matrix<S>, d2: &Matrix<S>, tol: &TolerancePolicy) -> PowersCertificate {
    powers_basis_certificate_with(d, d2, tol, PowerBasis::default_for(S::BACKEND))
}

pub fn powers_basis_certificate_with<S: Scalar>(
    d: &Matrix<S>,
    d2: &Matrix<S>,
    tol: &TolerancePolicy,
    basis: PowerBasis,
) -> PowersCertificate {
    let n = d.n();
    let (left, right) = match basis {
        PowerBasis::Monomial => (monomials(d), monomials(d2)),
        PowerBasis::Krylov => (krylov_basis(d, tol), krylov_basis(d2, tol)),
    };
    let mut rows = Vec::with_capacity(left.len() * right.len());
    for p in &left {
        for q in &right {
            let prod = p * q;
            rows.push(match basis {
                PowerBasis::Krylov => normalize(&prod).into_vec(),
                PowerBasis::Monomial => prod.into_vec(),
            });
        }
    }
    let report = S::rank(&rows, tol);
    let full = report.rank == n * n && rows.len() == n * n;
    let certified = full
        && match &report.evidence {
            RankEvidence::Exact { determinant } => determinant.as_ref().is_some_and(|x| !x.is_zero()),
            RankEvidence::Float { .. } => report.evidence.margin().unwrap_or(0.0) > tol.cert_margin,
        };
    PowersCertificate {
        rank: report.rank,
        evidence: report.evidence,
        verdict: if certified {
            Verdict::CertifiedRigid
        } else {
            Verdict::Inconclusive
        },
        basis,
    }
}

/// Options for [`certify_tuple_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    pub mode: TraceMode,
    pub tol: TolerancePolicy,
    /// Defaults to [`PowerBasis::default_for`] the backend.
    pub power_basis: Option<PowerBasis>,
    /// Run the closure oracle when the powers test is inconclusive.
    pub closure_fallback: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            mode: TraceMode::Normalized,
            tol: TolerancePolicy::default(),
            power_basis: None,
            closure_fallback: true,
        }
    }
}

/// Result of the full `Γ → (D, D₂) → rank` pipeline on one tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidityCertificate<S> {
    pub n: usize,
    pub d: usize,
    pub backend: Backend,
    pub mode: TraceMode,
    pub power_basis: PowerBasis,
    pub gram: Matrix<S>,
    pub degree: Matrix<S>,
    pub second_degree: Matrix<S>,
    pub rank: usize,
    pub evidence: RankEvidence,
    pub verdict: Verdict,
    /// Dimension of the algebra generated by `D, D₂`, computed as a secondary
    /// attempt when the powers test is inconclusive.
    pub closure_dimension: Option<usize>,
    pub tolerance: TolerancePolicy,
}

impl<S: Scalar> RigidityCertificate<S> {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedRigid
    }

    /// `σ_min / σ_max` of the product family (float backend).
    pub fn margin(&self) -> Option<f64> {
        self.evidence.margin()
    }

    /// Exact determinant of the product family (exact backend, monomial basis).
    pub fn determinant(&self) -> Option<&GaussRational> {
        match &self.evidence {
            RankEvidence::Exact { determinant } => determinant.as_ref(),
            RankEvidence::Float { .. } => None,
        }
    }

    /// Closure oracle on `{D, D₂}`, independent of the powers test.
    pub fn oracle_dimension(&self) -> usize {
        generated_algebra_dimension(&[self.degree.clone(), self.second_degree.clone()], &self.tolerance)
            .expect("two generators")
    }
}

/// Certifies a traceless Hermitian tuple with default options for `mode` and `tol`.
pub fn certify_tuple<S: Scalar>(
    tuple: &OperatorTuple<S>,
    mode: TraceMode,
    tol: &TolerancePolicy,
) -> Result<RigidityCertificate<S>> {
    certify_tuple_with(
        tuple,
        &CertifyOptions {
            mode,
            tol: *tol,
            ..CertifyOptions::default()
        },
    )
}

pub fn certify_tuple_with<S: Scalar>(
    tuple: &OperatorTuple<S>,
    opts: &CertifyOptions,
) -> Result<RigidityCertificate<S>> {
    let tol = &opts.tol;
    tuple.check_hermitian(tol)?;
    tuple.check_traceless(tol)?;
    let deg = degree_matrices(tuple, opts.mode, tol)?;
    let basis = opts.power_basis.unwrap_or(PowerBasis::default_for(S::BACKEND));
    let cert = powers_basis_certificate_with(&deg.degree, &deg.second_degree, tol, basis);
    let closure_dimension = (cert.verdict == Verdict::Inconclusive && opts.closure_fallback).then(|| {
        generated_algebra_dimension(&[deg.degree.clone(), deg.second_degree.clone()], tol).expect("two generators")
    });
    Ok(RigidityCertificate {
        n: tuple.n(),
        d: tuple.d(),
        backend: S::BACKEND,
        mode: opts.mode,
        power_basis: basis,
        gram: deg.gram,
        degree: deg.degree,
        second_degree: deg.second_degree,
        rank: cert.rank,
        evidence: cert.evidence,
        verdict: cert.verdict,
        closure_dimension,
        tolerance: *tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRational, C64};

    fn q(p: i64) -> GaussRational {
        GaussRational::from_ratio(p, 1)
    }

    #[test]
    fn identity_pair_is_inconclusive() {
        let one = Matrix::<GaussRational>::identity(3);
        let c = powers_basis_certificate(&one, &one, &TolerancePolicy::default());
        assert_eq!(c.rank, 1);
        assert_eq!(c.verdict, Verdict::Inconclusive);
        let one = Matrix::<C64>::identity(3);
        let c = powers_basis_certificate(&one, &one, &TolerancePolicy::default());
        assert_eq!(c.rank, 1);
        assert_eq!(c.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn two_by_two_hand_example() {
        // D = diag(1,2), D₂ = D + E₁₂ + E₂₁; the 4×4 determinant is 1 by hand:
        // rows vec(1), vec(D₂), vec(D), vec(D·D₂) =
        // (1,0,0,1), (1,1,1,2), (1,0,0,2), (1,1,2,4)
        let d = Matrix::diag(&[q(1), q(2)]);
        let d2 = &(&d + &Matrix::unit(2, 0, 1)) + &Matrix::unit(2, 1, 0);
        let c = powers_basis_certificate(&d, &d2, &TolerancePolicy::default());
        assert_eq!(c.rank, 4);
        assert_eq!(c.verdict, Verdict::CertifiedRigid);
        let RankEvidence::Exact { determinant: Some(det) } = &c.evidence else {
            panic!()
        };
        let brute = brute_det(&[[1, 0, 0, 1], [1, 1, 1, 2], [1, 0, 0, 2], [1, 1, 2, 4]]);
        assert_eq!(*det, q(brute));
    }

    fn brute_det(m: &[[i64; 4]; 4]) -> i64 {
        // Leibniz expansion over all 24 permutations
        let mut total = 0;
        let idx = [0usize, 1, 2, 3];
        let mut perms = Vec::new();
        fn permute(rest: Vec<usize>, cur: Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(cur);
                return;
            }
            for k in 0..rest.len() {
                let mut r = rest.clone();
                let x = r.remove(k);
                let mut c = cur.clone();
                c.push(x);
                permute(r, c, out);
            }
        }
        permute(idx.to_vec(), vec![], &mut perms);
        for p in perms {
            let inversions = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            total += sign * (0..4).map(|i| m[i][p[i]]).product::<i64>();
        }
        total
    }

    #[test]
    fn float_two_by_two_example_certifies() {
        let d = Matrix::diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        let d2 = &(&d + &Matrix::unit(2, 0, 1)) + &Matrix::unit(2, 1, 0);
        for basis in [PowerBasis::Monomial, PowerBasis::Krylov] {
            let c = powers_basis_certificate_with(&d, &d2, &TolerancePolicy::default(), basis);
            assert_eq!(c.verdict, Verdict::CertifiedRigid);
        }
    }

    #[test]
    fn commuting_pair_is_inconclusive_with_closure_dim_n() {
        // single X with simple spectrum: D and D₂ are polynomials in X
        let x = Matrix::diag(&[q(1), q(2), q(-3)]);
        let t = OperatorTuple::new(vec![x]).unwrap();
        let c = certify_tuple(&t, TraceMode::Normalized, &TolerancePolicy::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.rank <= 3);
        assert_eq!(c.closure_dimension, Some(3));
    }
}
