//! Backend-specific kernels behind [`Scalar`](crate::Scalar).

pub mod exact;
pub mod float;

use crate::scalar::GaussRational;

/// Rank of a vector family together with the evidence that backs it.
#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    pub evidence: RankEvidence,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RankEvidence {
    /// Fraction-free elimination; the determinant is present for square families.
    Exact { determinant: Option<GaussRational> },
    /// Extreme singular values of the family (as rows of a matrix).
    Float { sigma_min: f64, sigma_max: f64 },
}

impl RankEvidence {
    /// `sigma_min / sigma_max` for float evidence.
    pub fn margin(&self) -> Option<f64> {
        match self {
            RankEvidence::Float { sigma_min, sigma_max } if *sigma_max > 0.0 => Some(sigma_min / sigma_max),
            RankEvidence::Float { .. } => Some(0.0),
            RankEvidence::Exact { .. } => None,
        }
    }
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdReport {
    pub hermitian: bool,
    pub psd: bool,
    /// Smallest eigenvalue (float backend only).
    pub min_eigenvalue: Option<f64>,
    /// Zero when PSD; otherwise the size of the offending negative pivot or eigenvalue.
    pub violation: f64,
}
