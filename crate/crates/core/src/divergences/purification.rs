//! The purification distance `d_H(rho, sigma)`: the smallest `sqrt(QJSD)`
//! between purifications of `rho` and `sigma`.
//!
//! For two pure states the QJSD is `Phi(|<psi|phi>|)`, which decreases in the
//! overlap, so the minimum is attained at the largest overlap. By Uhlmann's
//! theorem that is the fidelity, giving the closed form `sqrt(Phi(F))`.
//! [`d_h_by_optimization`] computes the same quantity by direct search.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::pure::phi_pure;
use super::quantum::fidelity;
use crate::anneal::{minimize, AnnealSchedule, Landscape};
use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, HermitianMatrix};
use crate::scalar::Real;
use crate::states::{derive_seed, purifications, DensityMatrix};

/// `sqrt(Phi(F(rho, sigma)))`.
pub fn d_h_closed_form<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    Ok(phi_pure(fidelity(rho, sigma)?)?.sqrt())
}

/// Schedule used by [`d_h_by_optimization`]. The minimum is smooth, so
/// proposals are kept much wider than the temperature.
pub fn d_h_schedule() -> AnnealSchedule {
    AnnealSchedule {
        t_initial: 1e-3,
        t_final: 1e-10,
        cooling_ratio: 0.85,
        steps_per_temperature: Some(300),
        proposal_scale_ratio: 1000.0,
    }
}

/// `exp(iH)` for the Hermitian `H` packed as `N` diagonal reals followed by
/// `(re, im)` pairs of the strict upper triangle, row by row.
pub(crate) fn unitary_from_params(params: &[f64], n: usize) -> Result<ComplexMatrix<f64>> {
    if params.len() != n * n {
        return Err(Error::DimMismatch(n * n, params.len()));
    }
    let mut h = ComplexMatrix::<f64>::zeros(n);
    let mut k = n;
    for i in 0..n {
        h[(i, i)] = Complex::new(params[i], 0.0);
        for j in (i + 1)..n {
            let z = Complex::new(params[k], params[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    let eig = eigh(&HermitianMatrix::symmetrize(&h))?;
    let u = &eig.eigenvectors;
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|m| u[(i, m)] * Complex::from_polar(1.0, eig.eigenvalues[m]) * u[(j, m)].conj())
            .sum()
    }))
}

/// Unitaries in a moving chart `base * exp(iH)`. Accepted moves are folded
/// into `base` and `H` is reset to zero.
struct UnitaryLandscape<F> {
    n: usize,
    base: ComplexMatrix<f64>,
    f: F,
    scratch: Vec<f64>,
}

impl<F: FnMut(&ComplexMatrix<f64>) -> Result<f64>> UnitaryLandscape<F> {
    fn at(&mut self, params: &[f64]) -> Result<f64> {
        let u = &self.base * &unitary_from_params(params, self.n)?;
        (self.f)(&u)
    }
}

impl<F: FnMut(&ComplexMatrix<f64>) -> Result<f64>> Landscape for UnitaryLandscape<F> {
    fn num_params(&self) -> usize {
        self.n * self.n
    }

    fn reset(&mut self, params: &[f64]) -> Result<f64> {
        self.at(params)
    }

    fn trial(&mut self, params: &[f64], coord: usize, value: f64) -> Result<f64> {
        let mut scratch = std::mem::take(&mut self.scratch);
        scratch.clear();
        scratch.extend_from_slice(params);
        scratch[coord] = value;
        let out = self.at(&scratch);
        self.scratch = scratch;
        out
    }

    fn commit(&mut self) {}

    fn canonicalize(&mut self, params: &mut [f64], _coord: usize) {
        if params.iter().all(|&x| x == 0.0) {
            return;
        }
        if let Ok(step) = unitary_from_params(params, self.n) {
            self.base = orthonormalize_columns(&(&self.base * &step));
            params.fill(0.0);
        }
    }
}

/// Gram-Schmidt on the columns; leaves a unitary matrix unchanged up to
/// round-off, phases included.
fn orthonormalize_columns(m: &ComplexMatrix<f64>) -> ComplexMatrix<f64> {
    let n = m.dim();
    let mut cols: Vec<Vec<Complex<f64>>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut c = m.column(k);
        for q in &cols {
            let proj: Complex<f64> = q.iter().zip(&c).map(|(a, b)| a.conj() * b).sum();
            for (ci, qi) in c.iter_mut().zip(q) {
                *ci -= proj * qi;
            }
        }
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        c.iter_mut().for_each(|z| *z /= norm);
        cols.push(c);
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

/// `d_H` by annealing over the purification freedom `V = exp(iH)` of `sigma`,
/// with the purification of `rho` held at the canonical one.
pub fn d_h_by_optimization(
    rho: &DensityMatrix<f64>,
    sigma: &DensityMatrix<f64>,
    restarts: usize,
    seed: u64,
) -> Result<f64> {
    d_h_by_optimization_with(rho, sigma, restarts, seed, &d_h_schedule())
}

pub fn d_h_by_optimization_with(
    rho: &DensityMatrix<f64>,
    sigma: &DensityMatrix<f64>,
    restarts: usize,
    seed: u64,
    schedule: &AnnealSchedule,
) -> Result<f64> {
    let n = rho.dim();
    if sigma.dim() != n {
        return Err(Error::DimMismatch(n, sigma.dim()));
    }
    if restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    let psi = purifications(rho, &ComplexMatrix::identity(n))?;
    let objective = |v: &ComplexMatrix<f64>| -> Result<f64> {
        let phi = purifications(sigma, v)?;
        Ok(phi_pure(psi.overlap(&phi)?)?.sqrt())
    };
    let mut best = f64::INFINITY;
    for r in 0..restarts as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r));
        let init: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
        let mut landscape = UnitaryLandscape {
            n,
            base: ComplexMatrix::identity(n),
            f: objective,
            scratch: Vec::new(),
        };
        let chain = minimize(&mut landscape, init, schedule, &mut rng)?;
        best = best.min(chain.best_objective);
    }
    Ok(best)
}
