use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{qr, ComplexMatrix};
use crate::probability::ProbabilityVector;
use crate::scalar::Real;

/// Consecutive rejections tolerated by the mixedness filter.
pub const REJECTION_BUDGET: usize = 1_000_000;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the independent stream number `index` derived from `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

/// Seeded generator of random mixed states under the product measure
/// (Haar measure on the eigenbasis) x (uniform measure on the spectrum simplex).
///
/// Every draw is a pure function of `(dim, seed, floor)` and the number of
/// preceding draws, so equal configurations produce bit-identical streams.
#[derive(Clone, Debug)]
pub struct StateSampler {
    dim: usize,
    seed: u64,
    mixedness_floor: Option<f64>,
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            dim,
            seed,
            mixedness_floor: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Only accept states whose linear entropy `1 - Tr rho^2` is at least `floor`.
    pub fn with_mixedness_floor(mut self, floor: Option<f64>) -> Result<Self> {
        if let Some(f) = floor {
            if !(0.0..1.0).contains(&f) {
                return Err(Error::InvalidConfig(format!("mixedness floor {f} outside [0, 1)")));
            }
        }
        self.mixedness_floor = floor;
        Ok(self)
    }

    /// Fresh sampler on the stream derived from `(self.seed, index)`.
    pub fn derive(&self, index: u64) -> Self {
        Self {
            dim: self.dim,
            seed: derive_seed(self.seed, index),
            mixedness_floor: self.mixedness_floor,
            rng: ChaCha8Rng::seed_from_u64(derive_seed(self.seed, index)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mixedness_floor(&self) -> Option<f64> {
        self.mixedness_floor
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn gaussian_complex(&mut self) -> Complex<f64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex::new(re * h, im * h)
    }

    /// Haar-random unitary: QR of a complex Ginibre matrix, with the columns
    /// of `Q` rephased by `R_kk / |R_kk|` so the distribution is exactly Haar.
    pub fn sample_haar_unitary<T: Real>(&mut self) -> ComplexMatrix<T> {
        self.haar_f64().cast()
    }

    fn haar_f64(&mut self) -> ComplexMatrix<f64> {
        let n = self.dim;
        let g = ComplexMatrix::from_fn(n, |_, _| self.gaussian_complex());
        let (mut q, r) = qr(&g);
        for k in 0..n {
            let d = r[(k, k)];
            let mag = d.norm();
            if mag > 0.0 {
                let phase = d / mag;
                for i in 0..n {
                    q[(i, k)] *= phase;
                }
            }
        }
        q
    }

    fn simplex_f64(&mut self) -> Vec<f64> {
        let draws: Vec<f64> = (0..self.dim).map(|_| self.rng.sample(Exp1)).collect();
        let sum: f64 = draws.iter().sum();
        draws.into_iter().map(|x| x / sum).collect()
    }

    /// Uniform point of the probability simplex (normalized i.i.d. exponentials).
    pub fn sample_simplex<T: Real>(&mut self) -> ProbabilityVector<T> {
        let p = self.simplex_f64();
        ProbabilityVector::new(p.into_iter().map(T::lit).collect()).expect("normalized exponentials")
    }

    /// Random state `U diag(lambda) U^dagger`; the spectrum is drawn first and
    /// rejected (without drawing `U`) while it fails the mixedness floor.
    pub fn sample_state<T: Real>(&mut self) -> Result<DensityMatrix<T>> {
        let mut rejected = 0usize;
        let spectrum = loop {
            let lambda = self.simplex_f64();
            match self.mixedness_floor {
                Some(floor) if floor > 0.0 => {
                    let linear_entropy = 1.0 - lambda.iter().map(|x| x * x).sum::<f64>();
                    if linear_entropy >= floor {
                        break lambda;
                    }
                    rejected += 1;
                    if rejected >= REJECTION_BUDGET {
                        return Err(Error::RejectionBudgetExceeded(rejected));
                    }
                }
                _ => break lambda,
            }
        };
        let u = self.haar_f64();
        let values: Vec<T> = spectrum.iter().map(|&x| T::lit(x)).collect();
        DensityMatrix::from_spectrum(&values, &u.cast())
    }
}
