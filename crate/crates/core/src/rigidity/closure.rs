use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanAccumulator, TolerancePolicy};
use crate::scalar::Scalar;

/// Dimension of the unital algebra generated by `generators`.
///
/// Starts from `span{1}` and closes under left multiplication by each
/// generator, one frontier at a time. Every round either grows the span or
/// stops, so at most `n²` rounds run.
pub fn generated_algebra_dimension<S: Scalar>(generators: &[Matrix<S>], tol: &TolerancePolicy) -> Result<usize> {
    let n = generators.first().ok_or(Error::EmptyInput)?.n();
    for g in generators {
        g.check_same_size(&Matrix::zeros(n))?;
    }
    let mut acc = SpanAccumulator::new(tol);
    let mut frontier: Vec<Matrix<S>> = acc.push_matrix(&Matrix::identity(n)).into_iter().collect();
    for _ in 0..n * n {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for b in &frontier {
            for g in generators {
                if let Some(r) = acc.push_matrix(&(g * b)) {
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    Ok(acc.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRational, C64};

    #[test]
    fn unit_generates_scalars() {
        let one = Matrix::<GaussRational>::identity(3);
        assert_eq!(
            generated_algebra_dimension(&[one], &TolerancePolicy::default()).unwrap(),
            1
        );
    }

    #[test]
    fn off_diagonal_units_generate_m2() {
        let gens = [Matrix::<GaussRational>::unit(2, 0, 1), Matrix::unit(2, 1, 0)];
        assert_eq!(
            generated_algebra_dimension(&gens, &TolerancePolicy::default()).unwrap(),
            4
        );
    }

    #[test]
    fn simple_spectrum_generates_masa() {
        // polynomials in a matrix with three distinct eigenvalues: dimension 3
        let d = Matrix::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(0.5, 0.5), C64::new(0.0, 0.0)],
            vec![C64::new(0.5, -0.5), C64::new(2.0, 0.0), C64::new(0.3, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(0.3, 0.0), C64::new(-1.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(
            generated_algebra_dimension(&[d], &TolerancePolicy::default()).unwrap(),
            3
        );
    }

    #[test]
    fn empty_generators_rejected() {
        assert_eq!(
            generated_algebra_dimension::<C64>(&[], &TolerancePolicy::default()).unwrap_err(),
            Error::EmptyInput
        );
    }
}
