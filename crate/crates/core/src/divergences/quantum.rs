//! Entropies and distances between density matrices.

use crate::divergences::classical::classical_jsd;
use crate::error::{Error, Result};
use crate::linalg::{
    clamp_nonnegative, eigh, psd_sqrt_from_eigen, zero_roundoff, ComplexMatrix, EigenDecomposition, HermitianMatrix,
};
use crate::probability::ProbabilityVector;
use crate::scalar::{neg_p_log2_p, tol, Real};
use crate::states::{DensityMatrix, Povm, PureState, StateSampler};

/// Eigenvalues below this count as outside the support in [`relative_entropy`].
pub const SUPPORT_CUTOFF: f64 = 1e-12;

fn check_dims<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch(rho.dim(), sigma.dim()));
    }
    Ok(())
}

/// `w[i][j] = |<a_i|b_j>|^2` between two eigenbases.
fn overlap_weights<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Vec<Vec<T>> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[(k, i)].conj() * b[(k, j)]).sum::<num_complex::Complex<T>>().norm_sqr())
                .collect()
        })
        .collect()
}

/// Von Neumann entropy `-Tr rho log2 rho`, the Shannon entropy of the spectrum.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.spectrum().iter().map(|&x| neg_p_log2_p(x)).sum()
}

/// Quantum relative entropy `Tr[rho (log2 rho - log2 sigma)]`.
///
/// Fails with [`Error::SupportViolation`] when `rho` puts weight above
/// [`SUPPORT_CUTOFF`] on the kernel of `sigma`.
pub fn relative_entropy<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho, sigma)?;
    let r = rho.eigen();
    let s = sigma.eigen();
    let w = overlap_weights(&r.eigenvectors, &s.eigenvectors);
    let cutoff = tol::<T>(SUPPORT_CUTOFF);
    let n = rho.dim();

    let mut cross = T::zero();
    for (j, &sj) in s.eigenvalues.iter().enumerate() {
        let weight: T = (0..n).map(|i| r.eigenvalues[i] * w[i][j]).sum();
        if sj < cutoff {
            if weight > cutoff {
                return Err(Error::SupportViolation(weight.to_f64_lossy()));
            }
            continue;
        }
        cross = cross + weight * sj.log2();
    }
    let neg_entropy = -von_neumann_entropy(rho);
    Ok((neg_entropy - cross).max(T::zero()))
}

/// Below this value of `||rho - sigma|| / (2 lambda_min(M))` the QJSD is
/// evaluated from its second-order expansion.
pub const NEAR_COINCIDENT_RATIO: f64 = 1e-4;

/// Quantum Jensen-Shannon divergence in bits,
/// `H_N((rho + sigma)/2) - (H_N(rho) + H_N(sigma))/2`, clamped into `[0, 1]`.
///
/// The entropy difference loses all digits below `~1e-16` absolute, which
/// `sqrt` turns into `~1e-8` errors in the distance. For nearly coincident
/// full-rank states the leading term of the expansion in `D = (rho - sigma)/2`
/// is used instead,
/// `sum_ij |D_ij|^2 (ln m_i - ln m_j) / (m_i - m_j) / (2 ln 2)`
/// in the eigenbasis of `M`, whose relative truncation error is below
/// `NEAR_COINCIDENT_RATIO^2`.
pub fn qjsd<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho, sigma)?;
    let mid = rho.midpoint(sigma)?;
    if let Some(d) = qjsd_second_order(rho, sigma, &mid) {
        return Ok(d.max(T::zero()).min(T::one()));
    }
    let half = T::lit(0.5);
    let d = von_neumann_entropy(&mid) - half * (von_neumann_entropy(rho) + von_neumann_entropy(sigma));
    Ok(d.max(T::zero()).min(T::one()))
}

fn qjsd_second_order<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>, mid: &DensityMatrix<T>) -> Option<T> {
    let m = mid.spectrum();
    let floor = m[0];
    if !(floor > T::zero()) {
        return None;
    }
    let half = T::lit(0.5);
    let d = rho.hermitian().combine(half, sigma.hermitian(), -half);
    if d.as_matrix().frobenius_norm() > T::lit(NEAR_COINCIDENT_RATIO) * floor {
        return None;
    }
    let v = &mid.eigen().eigenvectors;
    let rotated = &(&v.adjoint() * d.as_matrix()) * v;
    let n = m.len();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (m[i], m[j]);
            let kernel = if a == b { a.recip() } else { ((a - b) / b).ln_1p() / (a - b) };
            acc = acc + rotated[(i, j)].norm_sqr() * kernel;
        }
    }
    Some(half * acc / T::LN_2())
}

/// QJSD as the mean relative entropy to the midpoint, `[S(rho,M) + S(sigma,M)] / 2`.
pub fn qjsd_relative_entropy_form<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho, sigma)?;
    let mid = rho.midpoint(sigma)?;
    let half = T::lit(0.5);
    Ok(half * (relative_entropy(rho, &mid)? + relative_entropy(sigma, &mid)?))
}

/// QJSD from the eigensystems of `rho`, `sigma` and the unnormalized sum
/// `rho + sigma = sum_k t_k |t_k><t_k|`:
///
/// `1/2 [ sum_{k,i} |<t_k|r_i>|^2 r_i log2(2 r_i / tau_k)
///      + sum_{k,j} |<t_k|s_j>|^2 s_j log2(2 s_j / tau_k) ]`
///
/// with `tau_k = sum_i r_i |<t_k|r_i>|^2 + sum_j s_j |<t_k|s_j>|^2`.
/// Terms with vanishing weight contribute zero. Not clamped.
pub fn qjsd_spectral<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho, sigma)?;
    let n = rho.dim();
    let sum = rho.hermitian().combine(T::one(), sigma.hermitian(), T::one());
    let t: EigenDecomposition<T> = eigh(&sum)?;
    let r = rho.eigen();
    let s = sigma.eigen();
    let wr = overlap_weights(&t.eigenvectors, &r.eigenvectors);
    let ws = overlap_weights(&t.eigenvectors, &s.eigenvectors);

    let tau: Vec<T> = (0..n)
        .map(|k| {
            let a: T = (0..n).map(|i| r.eigenvalues[i] * wr[k][i]).sum();
            let b: T = (0..n).map(|j| s.eigenvalues[j] * ws[k][j]).sum();
            a + b
        })
        .collect();

    let two = T::lit(2.0);
    let branch = |values: &[T], w: &[Vec<T>]| -> T {
        let mut acc = T::zero();
        for k in 0..n {
            for i in 0..n {
                let mass = w[k][i] * values[i];
                if mass > T::zero() && tau[k] > T::zero() {
                    acc = acc + mass * (two * values[i] / tau[k]).log2();
                }
            }
        }
        acc
    };
    Ok(T::lit(0.5) * (branch(&r.eigenvalues, &wr) + branch(&s.eigenvalues, &ws)))
}

/// `sqrt(qjsd)`, the candidate metric.
pub fn qjsd_sqrt<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    qjsd(rho, sigma).map(T::sqrt)
}

/// Angle `arccos |<psi|phi>|` between pure states, in radians.
pub fn wootters_distance<T: Real>(psi: &PureState<T>, phi: &PureState<T>) -> Result<T> {
    Ok(psi.overlap(phi)?.acos())
}

/// `||A - B||_HS`.
pub fn hilbert_schmidt_distance<T: Real>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(a.dim(), b.dim()));
    }
    let d = a.as_matrix() - b.as_matrix();
    Ok(crate::linalg::hs_inner(&d, &d)?.re.max(T::zero()).sqrt())
}

/// Uhlmann fidelity `Tr sqrt(sqrt(rho) sigma sqrt(rho))`, clamped into `[0, 1]`.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho, sigma)?;
    let mut r = rho.eigen().clone();
    let root = psd_sqrt_from_eigen(&mut r)?;
    let inner = &(root.as_matrix() * sigma.matrix()) * root.as_matrix();
    let mut eig = eigh(&HermitianMatrix::symmetrize(&inner))?;
    clamp_nonnegative(&mut eig.eigenvalues)?;
    zero_roundoff(&mut eig.eigenvalues);
    let f: T = eig.eigenvalues.iter().map(|x| x.sqrt()).sum();
    Ok(f.max(T::zero()).min(T::one()))
}

/// Classical JSD between the outcome statistics `Tr(E_i rho)` and `Tr(E_i sigma)`.
pub fn measured_jsd<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>, povm: &Povm<T>) -> Result<T> {
    check_dims(rho, sigma)?;
    let p = ProbabilityVector::normalized(povm.outcome_weights(rho)?)?;
    let q = ProbabilityVector::normalized(povm.outcome_weights(sigma)?)?;
    classical_jsd(&p, &q)
}

/// Lower bound on the measured JSD supremum over all POVMs.
///
/// Maximizes [`measured_jsd`] over rank-one projective measurements in the
/// eigenbases of `rho - sigma`, `rho`, `sigma` and `(rho + sigma)/2`, plus
/// `restarts` Haar-random bases drawn from `seed`.
pub fn djs1_lower_bound<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    restarts: usize,
    seed: u64,
) -> Result<T> {
    check_dims(rho, sigma)?;
    let n = rho.dim();
    let difference = rho.hermitian().combine(T::one(), sigma.hermitian(), -T::one());
    let mut bases = vec![
        eigh(&difference)?.eigenvectors,
        rho.eigen().eigenvectors.clone(),
        sigma.eigen().eigenvectors.clone(),
        rho.midpoint(sigma)?.eigen().eigenvectors.clone(),
    ];
    let mut sampler = StateSampler::new(n, seed);
    bases.extend((0..restarts).map(|_| sampler.sample_haar_unitary::<T>()));

    let mut best = T::zero();
    for basis in &bases {
        let povm = Povm::projective(basis)?;
        best = best.max(measured_jsd(rho, sigma, &povm)?);
    }
    Ok(best)
}
