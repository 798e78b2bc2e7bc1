//! Rigidity certificate built from the degree matrices `D` and `D₂`.

mod certificate;
mod closure;
mod degree;
mod sweep;

pub use certificate::{
    certify_tuple, certify_tuple_with, powers_basis_certificate, powers_basis_certificate_with, CertifyOptions,
    PowerBasis, PowersCertificate, RigidityCertificate, Verdict,
};
pub use closure::generated_algebra_dimension;
pub use degree::{degree_matrices, degree_matrix, second_degree_matrix, DegreeMatrices};
pub use sweep::{sweep, CellReport, DPolicy, SweepConfig, SweepReport, TrialOutcome, MAX_SWEEP_N, THREADS_ENV};
