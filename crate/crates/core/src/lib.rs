//! Quantum graphs on the full matrix algebra `M_n`.
//!
//! The crate builds operator systems and their quantum adjacency matrices,
//! checks the quantum-graph axioms through superoperator and Choi
//! representations, and certifies that a quantum graph has trivial quantum
//! automorphism group by showing that its degree matrices `D = A(1)` and
//! `D₂ = A²(1)` generate all of `M_n`.
//!
//! Everything is generic over a [`Scalar`] backend:
//!
//! * [`ExactMatrix`] over [`GaussRational`] gives rigorous verdicts;
//! * [`FloatMatrix`] over [`C64`] gives fast verdicts with a reported margin.

pub mod error;
pub mod fixtures;
pub mod graded;
pub mod io;
pub mod linalg;
pub mod opsys;
pub mod rigidity;
pub mod sample;
pub mod scalar;
pub mod superop;

pub use error::{Error, Result};
pub use linalg::{gram, hs_inner, rank, Matrix, RankEvidence, RankReport, TolerancePolicy, TraceMode};
pub use opsys::{OperatorSystem, OperatorTuple};
pub use rigidity::{certify_tuple, RigidityCertificate, Verdict};
pub use sample::{RngSpec, Sampler, Shape};
pub use scalar::{Backend, GaussRational, Scalar, C32, C64};
pub use superop::{AxiomReport, ChoiMatrix, KrausTuple, Superoperator};

/// Matrix over the exact Gaussian rationals.
pub type ExactMatrix = Matrix<GaussRational>;
/// Matrix over double-precision complex numbers.
pub type FloatMatrix = Matrix<C64>;
/// Matrix over single-precision complex numbers.
pub type Float32Matrix = Matrix<C32>;

pub type ExactTuple = OperatorTuple<GaussRational>;
pub type FloatTuple = OperatorTuple<C64>;
pub type ExactSuperoperator = Superoperator<GaussRational>;
pub type FloatSuperoperator = Superoperator<C64>;
pub type ExactCertificate = RigidityCertificate<GaussRational>;
pub type FloatCertificate = RigidityCertificate<C64>;
