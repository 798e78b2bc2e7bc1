//! Scalar backends: exact Gaussian rationals and floating complex numbers.
//!
//! Every algorithm in the crate is written once against [`Scalar`]. The trait
//! also carries the handful of kernels whose implementation genuinely differs
//! between backends (rank, null spaces, positivity, spectra).

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::kernels::{exact, float, PsdReport, RankReport};
use crate::linalg::{Matrix, TolerancePolicy};

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;
/// Complex number with arbitrary-precision rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

/// Field of scalars a [`Matrix`] is built over.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + PartialEq + Send + Sync + 'static {
    const BACKEND: Backend;

    fn conj(&self) -> Self;
    /// The real number `num / den`.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn imag_unit() -> Self;
    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;
    fn abs_f64(&self) -> f64 {
        self.re_f64().hypot(self.im_f64())
    }
    fn real_part(&self) -> Self;

    /// Zero test: exact equality for exact scalars, `|x| <= rel_tol * scale` for floats.
    fn is_negligible(&self, scale: f64, rel_tol: f64) -> bool;
    /// Square root of a nonnegative real, or `None` when the backend has none.
    fn sqrt_nonneg(&self) -> Option<Self>;

    /// A real draw: standard normal (float) or a uniform dyadic rational in [-1, 1] (exact).
    fn sample_real<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// A complex draw with independent real and imaginary parts.
    fn sample_complex<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn to_json_pair(&self) -> [Value; 2];
    fn from_json_pair(re: &Value, im: &Value) -> Result<Self>;

    /// Rank of the row family, with backend-specific evidence.
    fn rank(rows: &[Vec<Self>], tol: &TolerancePolicy) -> RankReport;
    /// A basis of the span of `rows`.
    fn row_space(rows: &[Vec<Self>], tol: &TolerancePolicy) -> Vec<Vec<Self>>;
    /// A basis of `{y : sum_k rows[r][k] * y[k] = 0 for all r}` inside `Self^width`.
    fn null_space(rows: &[Vec<Self>], width: usize, tol: &TolerancePolicy) -> Vec<Vec<Self>>;
    /// Positive semidefiniteness of a Hermitian matrix.
    fn psd(m: &Matrix<Self>, tol: &TolerancePolicy) -> PsdReport;
    /// Ascending spectrum of a Hermitian matrix.
    fn hermitian_eigenvalues(m: &Matrix<Self>, tol: &TolerancePolicy) -> Result<Vec<f64>>;
}

pub(crate) fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<BigRational>()
            .map_err(|_| Error::InvalidInput(format!("not a rational literal: {s:?}"))),
        _ => Err(Error::BackendMismatch),
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflowed f64; fall back to a scaled quotient
        let shift = q.numer().bits().max(q.denom().bits()) as i64 - 1000;
        if shift <= 0 {
            return 0.0;
        }
        let num = (q.numer() >> shift as usize).to_f64().unwrap_or(0.0);
        let den = (q.denom() >> shift as usize).to_f64().unwrap_or(1.0);
        num / den
    })
}

const DYADIC_BITS: u32 = 10;

impl Scalar for GaussRational {
    const BACKEND: Backend = Backend::Exact;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn re_f64(&self) -> f64 {
        rational_to_f64(&self.re)
    }
    fn im_f64(&self) -> f64 {
        rational_to_f64(&self.im)
    }
    fn real_part(&self) -> Self {
        Complex::new(self.re.clone(), BigRational::zero())
    }
    fn is_negligible(&self, _scale: f64, _rel_tol: f64) -> bool {
        self.is_zero()
    }
    fn sqrt_nonneg(&self) -> Option<Self> {
        None
    }
    fn sample_real<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let half = 1i64 << DYADIC_BITS;
        let k = rng.random_range(-half..=half);
        Self::from_ratio(k, half)
    }
    fn sample_complex<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re = Self::sample_real(rng).re;
        let im = Self::sample_real(rng).re;
        Complex::new(re, im)
    }
    fn to_json_pair(&self) -> [Value; 2] {
        [Value::String(self.re.to_string()), Value::String(self.im.to_string())]
    }
    fn from_json_pair(re: &Value, im: &Value) -> Result<Self> {
        Ok(Complex::new(parse_rational(re)?, parse_rational(im)?))
    }
    fn rank(rows: &[Vec<Self>], _tol: &TolerancePolicy) -> RankReport {
        exact::rank(rows)
    }
    fn row_space(rows: &[Vec<Self>], _tol: &TolerancePolicy) -> Vec<Vec<Self>> {
        exact::row_space(rows)
    }
    fn null_space(rows: &[Vec<Self>], width: usize, _tol: &TolerancePolicy) -> Vec<Vec<Self>> {
        exact::null_space(rows, width)
    }
    fn psd(m: &Matrix<Self>, _tol: &TolerancePolicy) -> PsdReport {
        exact::psd(m)
    }
    fn hermitian_eigenvalues(_m: &Matrix<Self>, _tol: &TolerancePolicy) -> Result<Vec<f64>> {
        Err(Error::ExactBackendUnsupported("eig_hermitian"))
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for Complex<$t> {
            const BACKEND: Backend = Backend::Float;

            fn conj(&self) -> Self {
                Complex::conj(self)
            }
            fn from_ratio(num: i64, den: i64) -> Self {
                Complex::new((num as f64 / den as f64) as $t, 0.0)
            }
            fn imag_unit() -> Self {
                Complex::new(0.0, 1.0)
            }
            fn re_f64(&self) -> f64 {
                self.re as f64
            }
            fn im_f64(&self) -> f64 {
                self.im as f64
            }
            fn real_part(&self) -> Self {
                Complex::new(self.re, 0.0)
            }
            fn is_negligible(&self, scale: f64, rel_tol: f64) -> bool {
                self.abs_f64() <= rel_tol * scale
            }
            fn sqrt_nonneg(&self) -> Option<Self> {
                (self.re >= 0.0).then(|| Complex::new(self.re.sqrt(), 0.0))
            }
            fn sample_real<R: Rng + ?Sized>(rng: &mut R) -> Self {
                let x: f64 = StandardNormal.sample(rng);
                Complex::new(x as $t, 0.0)
            }
            fn sample_complex<R: Rng + ?Sized>(rng: &mut R) -> Self {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex::new(
                    (re * std::f64::consts::FRAC_1_SQRT_2) as $t,
                    (im * std::f64::consts::FRAC_1_SQRT_2) as $t,
                )
            }
            fn to_json_pair(&self) -> [Value; 2] {
                [Value::from(self.re as f64), Value::from(self.im as f64)]
            }
            fn from_json_pair(re: &Value, im: &Value) -> Result<Self> {
                match (re.as_f64(), im.as_f64()) {
                    (Some(r), Some(i)) if re.is_number() && im.is_number() => Ok(Complex::new(r as $t, i as $t)),
                    _ => Err(Error::BackendMismatch),
                }
            }
            fn rank(rows: &[Vec<Self>], tol: &TolerancePolicy) -> RankReport {
                float::rank(rows, tol)
            }
            fn row_space(rows: &[Vec<Self>], tol: &TolerancePolicy) -> Vec<Vec<Self>> {
                float::row_space(rows, tol)
            }
            fn null_space(rows: &[Vec<Self>], width: usize, tol: &TolerancePolicy) -> Vec<Vec<Self>> {
                float::null_space(rows, width, tol)
            }
            fn psd(m: &Matrix<Self>, tol: &TolerancePolicy) -> PsdReport {
                float::psd(m, tol)
            }
            fn hermitian_eigenvalues(m: &Matrix<Self>, tol: &TolerancePolicy) -> Result<Vec<f64>> {
                float::hermitian_eigenvalues(m, tol)
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

/// Exact real rational as a Gaussian rational.
pub fn gauss(re: BigRational, im: BigRational) -> GaussRational {
    Complex::new(re, im)
}

/// Convenience constructor for exact scalars `p/q + (r/s) i`.
pub fn gauss_ratio(p: i64, q: i64, r: i64, s: i64) -> GaussRational {
    Complex::new(
        BigRational::new(p.into(), q.into()),
        BigRational::new(r.into(), s.into()),
    )
}
