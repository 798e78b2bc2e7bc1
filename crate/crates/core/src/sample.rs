//! Reproducible random sampling of operator tuples.
//!
//! The generator is ChaCha20 keyed by `seed` with the ChaCha stream id set to
//! `stream`, so a given [`RngSpec`] yields the same draws on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::opsys::OperatorTuple;
use crate::scalar::Scalar;

/// Name and version of the random generator; bump when sampling changes.
pub const GENERATOR: &str = "chacha20-stream/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub const DEFAULT_SEED: u64 = 20250;

    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// A child spec whose stream is a hash of this stream and `keys`.
    pub fn derive(&self, keys: &[u64]) -> RngSpec {
        let stream = keys
            .iter()
            .fold(splitmix64(self.stream), |h, &k| splitmix64(h ^ splitmix64(k)));
        RngSpec {
            seed: self.seed,
            stream,
        }
    }
}

impl Default for RngSpec {
    fn default() -> Self {
        Self::new(Self::DEFAULT_SEED, 0)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Structural constraint on sampled traceless Hermitian matrices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    #[default]
    Generic,
    ZeroDiagonal,
    Diagonal,
}

impl std::str::FromStr for Shape {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "generic" => Ok(Shape::Generic),
            "zero_diagonal" => Ok(Shape::ZeroDiagonal),
            "diagonal" => Ok(Shape::Diagonal),
            other => Err(crate::Error::InvalidInput(format!("unknown shape {other:?}"))),
        }
    }
}

pub struct Sampler {
    rng: ChaCha20Rng,
}

impl Sampler {
    pub fn new(spec: RngSpec) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
        rng.set_stream(spec.stream);
        Self { rng }
    }

    /// GUE-style traceless Hermitian draw: real diagonal, complex
    /// off-diagonal mirrored by conjugation, trace projected out.
    pub fn traceless_hermitian<S: Scalar>(&mut self, n: usize, shape: Shape) -> Matrix<S> {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            if shape != Shape::ZeroDiagonal {
                m[(i, i)] = S::sample_real(&mut self.rng);
            }
            if shape == Shape::Diagonal {
                continue;
            }
            for j in i + 1..n {
                let z = S::sample_complex(&mut self.rng);
                m[(j, i)] = z.conj();
                m[(i, j)] = z;
            }
        }
        if shape != Shape::ZeroDiagonal && n > 0 {
            let shift = m.trace() * S::from_ratio(1, n as i64);
            for i in 0..n {
                m[(i, i)] = m[(i, i)].clone() - shift.clone();
            }
        }
        m
    }

    pub fn tuple<S: Scalar>(&mut self, n: usize, d: usize, shape: Shape) -> OperatorTuple<S> {
        let mats = (0..d).map(|_| self.traceless_hermitian(n, shape)).collect();
        OperatorTuple::new(mats).expect("sampled tuple is well formed")
    }

    /// Matrix with independent complex entries.
    pub fn complex_matrix<S: Scalar>(&mut self, n: usize) -> Matrix<S> {
        Matrix::from_fn(n, |_, _| S::sample_complex(&mut self.rng))
    }

    /// Uniform index in `0..bound`.
    pub fn index(&mut self, bound: usize) -> usize {
        use rand::Rng;
        self.rng.random_range(0..bound)
    }
}

/// One traceless Hermitian draw from a fresh generator.
pub fn sample_traceless_hermitian<S: Scalar>(n: usize, rng: RngSpec, shape: Shape) -> Matrix<S> {
    Sampler::new(rng).traceless_hermitian(n, shape)
}
