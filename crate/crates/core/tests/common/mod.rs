#![allow(dead_code)]

use qrigid::{Matrix, OperatorTuple, RngSpec, Sampler, Scalar, Shape};

pub fn tuple<S: Scalar>(n: usize, d: usize, seed: u64) -> OperatorTuple<S> {
    Sampler::new(RngSpec::new(seed, 0)).tuple(n, d, Shape::Generic)
}

pub fn hermitian<S: Scalar>(n: usize, seed: u64) -> Matrix<S> {
    let mut h: Matrix<S> = Sampler::new(RngSpec::new(seed, 1)).traceless_hermitian(n, Shape::Generic);
    for i in 0..n {
        h[(i, i)] = h[(i, i)].clone() + S::from_ratio(i as i64, 3);
    }
    h
}

/// Cayley transform `(1 − iH)(1 + iH)⁻¹` of a Hermitian `H`; exact over the
/// Gaussian rationals.
pub fn unitary<S: Scalar>(n: usize, seed: u64) -> Matrix<S> {
    let h = hermitian::<S>(n, seed);
    let ih = h.scale(&S::imag_unit());
    let one = Matrix::identity(n);
    let inv = (&one + &ih).inverse(1e-12).expect("1 + iH is invertible");
    &(&one - &ih) * &inv
}

/// Real `d×d` matrix with a dominant diagonal, hence invertible.
pub fn real_invertible<S: Scalar>(d: usize, seed: u64) -> Matrix<S> {
    let mut s = Sampler::new(RngSpec::new(seed, 2));
    let mut m = Matrix::from_fn(d, |_, _| S::from_ratio(s.index(7) as i64 - 3, 4));
    for i in 0..d {
        m[(i, i)] = m[(i, i)].clone() + S::from_ratio(3 * d as i64, 1);
    }
    m
}

pub fn max_diff<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> f64 {
    (a - b).max_abs()
}
