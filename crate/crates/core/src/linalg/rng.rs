//! Seeded random sources for matrices, unit vectors and isometries.
//!
//! Everything here is a deterministic function of the seed: ChaCha8 as the bit
//! source, Box–Muller for Gaussians, and sign-normalized Householder QR for
//! isometries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::isometry::Isometry;
use super::matrix::{normalized, ComplexMatrix, C64};
use super::qr::householder_qr;
use crate::error::{input, Result};

/// Deterministic random stream.
#[derive(Clone, Debug)]
pub struct SeededRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box–Muller; the second variate of each pair is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    /// Complex Gaussian with independent standard normal parts.
    pub fn complex_normal(&mut self) -> C64 {
        let re = self.normal();
        let im = self.normal();
        C64::new(re, im)
    }

    pub fn gaussian_vector(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.complex_normal()).collect()
    }

    /// Uniform point on the unit sphere of `C^n`.
    pub fn unit_vector(&mut self, n: usize) -> Vec<C64> {
        loop {
            if let Some(v) = normalized(&self.gaussian_vector(n)) {
                return v;
            }
        }
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn isometry(&mut self, m: usize, k: usize) -> Result<Isometry> {
        if k == 0 || k > m {
            return Err(input(format!("isometry rank {k} must lie in 1..={m}")));
        }
        let g = self.gaussian_matrix(m, k);
        let (q, _) = householder_qr(&g);
        Ok(Isometry::from_trusted(q.column_range(0, k)))
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }
}

/// SplitMix64 finalizer; derives independent per-item seeds from a base seed and a counter.
pub fn derive_seed(seed: u64, counter: u64) -> u64 {
    let mut z = seed
        .wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Complex Gaussian `rows x cols` matrix.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    SeededRng::new(seed).gaussian_matrix(rows, cols)
}

/// Haar-distributed `m x k` isometry.
pub fn random_isometry(m: usize, k: usize, seed: u64) -> Result<Isometry> {
    SeededRng::new(seed).isometry(m, k)
}

pub fn random_unitary(n: usize, seed: u64) -> Result<Isometry> {
    random_isometry(n, n, seed)
}
