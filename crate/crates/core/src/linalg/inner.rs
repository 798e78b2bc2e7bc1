use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Normalization of the trace on `M_n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMode {
    /// `tr = Tr / n`, so `tr(1) = 1`.
    #[default]
    Normalized,
    /// The usual trace, `Tr(1) = n`.
    Plain,
    /// The δ-form `τ = n·Tr` on `M_n`, `τ(1) = n²`.
    DeltaForm,
}

impl TraceMode {
    pub const ALL: [TraceMode; 3] = [TraceMode::Normalized, TraceMode::Plain, TraceMode::DeltaForm];

    /// Factor `c` with `τ = c·Tr` on `M_n`.
    pub fn factor<S: Scalar>(self, n: usize) -> S {
        let n = n as i64;
        match self {
            TraceMode::Normalized => S::from_ratio(1, n),
            TraceMode::Plain => S::one(),
            TraceMode::DeltaForm => S::from_ratio(n, 1),
        }
    }

    pub fn tau<S: Scalar>(self, x: &Matrix<S>) -> S {
        self.factor::<S>(x.n()) * x.trace()
    }
}

impl std::str::FromStr for TraceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "normalized" => Ok(TraceMode::Normalized),
            "plain" => Ok(TraceMode::Plain),
            "delta_form" | "delta" => Ok(TraceMode::DeltaForm),
            other => Err(Error::InvalidInput(format!("unknown trace mode {other:?}"))),
        }
    }
}

/// `Tr(x* y)` without normalization.
pub(crate) fn plain_inner<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter()
        .zip(y)
        .fold(S::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
}

/// Trace inner product `⟨x|y⟩ = τ(x* y)`.
pub fn hs_inner<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>, mode: TraceMode) -> Result<S> {
    x.check_same_size(y)?;
    Ok(mode.factor::<S>(x.n()) * plain_inner(x.entries(), y.entries()))
}

/// Gram matrix of a family of matrices.
///
/// With `hermitian_fast_path` the entries are `τ(X_i X_j)`, which agrees with
/// the general `τ(X_i* X_j)` whenever the family is Hermitian.
pub fn gram<S: Scalar>(matrices: &[Matrix<S>], mode: TraceMode, hermitian_fast_path: bool) -> Result<Matrix<S>> {
    let first = matrices.first().ok_or(Error::EmptyInput)?;
    for m in matrices {
        first.check_same_size(m)?;
    }
    let n = first.n();
    let c = mode.factor::<S>(n);
    let d = matrices.len();
    let mut g = Matrix::zeros(d);
    for i in 0..d {
        for j in i..d {
            let v = if hermitian_fast_path {
                // τ(X_i X_j) = Σ_{a,b} (X_i)_{ab} (X_j)_{ba}
                let (xi, xj) = (&matrices[i], &matrices[j]);
                let mut acc = S::zero();
                for a in 0..n {
                    for b in 0..n {
                        acc = acc + xi[(a, b)].clone() * xj[(b, a)].clone();
                    }
                }
                acc
            } else {
                plain_inner(matrices[i].entries(), matrices[j].entries())
            };
            let v = c.clone() * v;
            g[(j, i)] = v.conj();
            g[(i, j)] = v;
        }
    }
    Ok(g)
}
