use serde::{Deserialize, Serialize};

/// Numerical thresholds used by the float backend. The exact backend ignores them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Singular values below `rank_rel_tol * sigma_max` count as zero.
    pub rank_rel_tol: f64,
    /// A float certificate needs `sigma_min > cert_margin * sigma_max`.
    pub cert_margin: f64,
    /// Slack for Hermiticity, tracelessness and positive semidefiniteness tests.
    pub psd_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-9,
            cert_margin: 1e-8,
            psd_tol: 1e-10,
        }
    }
}

impl TolerancePolicy {
    pub fn is_valid(&self) -> bool {
        [self.rank_rel_tol, self.cert_margin, self.psd_tol]
            .iter()
            .all(|t| t.is_finite() && *t >= 0.0)
    }
}
