use super::{plain_inner, Matrix, TolerancePolicy};
use crate::scalar::{Backend, Scalar};

/// Incrementally grown orthogonal basis of a span of vectors.
///
/// Uses unnormalized Gram–Schmidt so that the exact backend never needs a
/// square root. The float backend re-orthogonalizes once and treats a vector
/// as dependent when its residual is below `rank_rel_tol` times its norm.
#[derive(Clone, Debug)]
pub struct SpanAccumulator<S> {
    basis: Vec<(Vec<S>, S)>,
    rel_tol: f64,
}

impl<S: Scalar> SpanAccumulator<S> {
    pub fn new(tol: &TolerancePolicy) -> Self {
        Self {
            basis: Vec::new(),
            rel_tol: tol.rank_rel_tol,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal basis vectors accepted so far.
    pub fn vectors(&self) -> impl Iterator<Item = &Vec<S>> {
        self.basis.iter().map(|(v, _)| v)
    }

    /// Adds `v` if it is independent of the current span; returns the
    /// orthogonalized residual that was stored.
    pub fn push(&mut self, v: &[S]) -> Option<&Vec<S>> {
        let norm_v = norm(v);
        if norm_v == 0.0 {
            return None;
        }
        let mut r = v.to_vec();
        let passes = match S::BACKEND {
            Backend::Exact => 1,
            Backend::Float => 2,
        };
        for _ in 0..passes {
            for (q, qq) in &self.basis {
                let c = plain_inner(q, &r) / qq.clone();
                if c.is_zero() {
                    continue;
                }
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri = ri.clone() - c.clone() * qi.clone();
                }
            }
        }
        let independent = match S::BACKEND {
            Backend::Exact => r.iter().any(|x| !x.is_zero()),
            Backend::Float => norm(&r) > self.rel_tol * norm_v,
        };
        if !independent {
            return None;
        }
        let rr = plain_inner(&r, &r).real_part();
        self.basis.push((r, rr));
        self.basis.last().map(|(v, _)| v)
    }

    pub fn push_matrix(&mut self, m: &Matrix<S>) -> Option<Matrix<S>> {
        let n = m.n();
        self.push(m.entries())
            .map(|v| Matrix::unvec_sized(n, v.clone()).expect("length preserved"))
    }
}

fn norm<S: Scalar>(v: &[S]) -> f64 {
    v.iter()
        .map(|x| {
            let a = x.abs_f64();
            a * a
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRational, C64};

    #[test]
    fn exact_dependence_detected() {
        let tol = TolerancePolicy::default();
        let mut acc = SpanAccumulator::<GaussRational>::new(&tol);
        let q = |p: i64| GaussRational::from_ratio(p, 3);
        assert!(acc.push(&[q(1), q(2), q(0)]).is_some());
        assert!(acc.push(&[q(0), q(1), q(1)]).is_some());
        assert!(acc.push(&[q(2), q(5), q(1)]).is_none());
        assert_eq!(acc.dim(), 2);
    }

    #[test]
    fn float_dependence_detected() {
        let tol = TolerancePolicy::default();
        let mut acc = SpanAccumulator::<C64>::new(&tol);
        let a = [C64::new(1.0, 1.0), C64::new(0.0, 2.0)];
        let b = [C64::new(2.0, 2.0), C64::new(0.0, 4.0)];
        assert!(acc.push(&a).is_some());
        assert!(acc.push(&b).is_none());
    }
}
