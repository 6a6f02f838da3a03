//! Quantum states: density matrices, pure states, POVMs and purifications.

mod file;
mod sampler;

pub use file::{read_state_json, state_json_value, write_state_json, StateFile};
pub use sampler::{derive_seed, StateSampler, REJECTION_BUDGET};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{clamp_nonnegative, eigh, ComplexMatrix, EigenDecomposition, HermitianMatrix};
use crate::scalar::{tol, Real};

/// Trace tolerance of a [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-10;
/// Norm tolerance of a [`PureState`].
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance for `V^dagger V = I` when a unitary is required.
pub const UNITARY_TOL: f64 = 1e-10;
/// A state counts as pure when `Tr rho^2 > 1 - PURITY_TOL`.
pub const PURITY_TOL: f64 = 1e-10;

/// Unit-trace positive semidefinite Hermitian matrix.
///
/// The eigendecomposition is computed once at construction (it is needed to
/// validate positivity anyway) and kept alongside the matrix, with round-off
/// negatives clamped to zero. Values are immutable, so sharing across threads
/// is free.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    inner: HermitianMatrix<T>,
    eigen: EigenDecomposition<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(inner: HermitianMatrix<T>) -> Result<Self> {
        let trace = inner.trace();
        if (trace - T::one()).abs() > tol::<T>(TRACE_TOL) {
            return Err(Error::InvalidTrace(trace.to_f64_lossy()));
        }
        let mut eigen = eigh(&inner)?;
        clamp_nonnegative(&mut eigen.eigenvalues)?;
        Ok(Self { inner, eigen })
    }

    pub fn from_matrix(m: ComplexMatrix<T>) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// `U diag(values) U^dagger` from a known spectrum, skipping the
    /// eigensolver. `vectors` must be unitary and `values` a probability vector.
    pub fn from_spectrum(values: &[T], vectors: &ComplexMatrix<T>) -> Result<Self> {
        if values.len() != vectors.dim() {
            return Err(Error::DimMismatch(values.len(), vectors.dim()));
        }
        let err = vectors.unitarity_error();
        if err > tol::<T>(UNITARY_TOL) {
            return Err(Error::NotUnitary(err.to_f64_lossy()));
        }
        let mut values = values.to_vec();
        clamp_nonnegative(&mut values)?;
        let trace: T = values.iter().copied().sum();
        if (trace - T::one()).abs() > tol::<T>(TRACE_TOL) {
            return Err(Error::InvalidTrace(trace.to_f64_lossy()));
        }
        let inner = HermitianMatrix::from_spectrum(&values, vectors);
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
        let eigen = EigenDecomposition {
            eigenvalues: order.iter().map(|&i| values[i]).collect(),
            eigenvectors: ComplexMatrix::from_fn(n, |i, k| vectors[(i, order[k])]),
        };
        Ok(Self { inner, eigen })
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let p = T::one() / T::from_usize(dim).unwrap();
        Self::from_spectrum(&vec![p; dim], &ComplexMatrix::identity(dim)).expect("valid maximally mixed state")
    }

    /// Diagonal state with the given populations.
    pub fn from_real_diagonal(diag: &[T]) -> Result<Self> {
        Self::from_spectrum(diag, &ComplexMatrix::identity(diag.len()))
    }

    /// Computational basis projector `|k><k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        density_from_pure(&PureState::basis(dim, k))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix<T> {
        &self.inner
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.inner.as_matrix()
    }

    pub fn eigen(&self) -> &EigenDecomposition<T> {
        &self.eigen
    }

    /// Eigenvalues in ascending order, clamped nonnegative.
    pub fn spectrum(&self) -> &[T] {
        &self.eigen.eigenvalues
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> T {
        self.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `1 - Tr rho^2`.
    pub fn linear_entropy(&self) -> T {
        T::one() - self.purity()
    }

    pub fn is_pure(&self) -> bool {
        self.purity() > T::one() - tol::<T>(PURITY_TOL)
    }

    /// `W rho W^dagger` for unitary `W`.
    pub fn conjugate_by(&self, w: &ComplexMatrix<T>) -> Result<Self> {
        if w.dim() != self.dim() {
            return Err(Error::DimMismatch(self.dim(), w.dim()));
        }
        let err = w.unitarity_error();
        if err > tol::<T>(UNITARY_TOL) {
            return Err(Error::NotUnitary(err.to_f64_lossy()));
        }
        let vectors = w * &self.eigen.eigenvectors;
        Self::from_spectrum(&self.eigen.eigenvalues, &vectors)
    }

    /// Equal-weight mixture `(self + other) / 2`.
    pub fn midpoint(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        let half = T::lit(0.5);
        Self::new(self.inner.combine(half, &other.inner, half))
    }
}

/// Unit-norm state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T: Real> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::NotNormalized(0.0));
        }
        let norm = norm(&amplitudes);
        if !norm.is_finite() || (norm - T::one()).abs() > tol::<T>(NORM_TOL) {
            return Err(Error::NotNormalized(norm.to_f64_lossy()));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::NotNormalized(n.to_f64_lossy()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|`, clamped to at most one.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm().min(T::one()))
    }
}

fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `|psi><psi|`.
pub fn density_from_pure<T: Real>(psi: &PureState<T>) -> DensityMatrix<T> {
    let m = ComplexMatrix::outer(psi.amplitudes());
    DensityMatrix::new(HermitianMatrix::symmetrize(&m)).expect("projector onto a unit vector is a state")
}

/// Positive operator-valued measure: PSD elements summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm<T: Real> {
    elements: Vec<HermitianMatrix<T>>,
}

impl<T: Real> Povm<T> {
    pub fn new(elements: Vec<HermitianMatrix<T>>) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?
            .dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for (i, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::DimMismatch(dim, e.dim()));
            }
            let mut eig = eigh(e)?;
            clamp_nonnegative(&mut eig.eigenvalues)
                .map_err(|_| Error::InvalidPovm(format!("element {i} is not positive semidefinite")))?;
            sum = &sum + e.as_matrix();
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > tol::<T>(TRACE_TOL) {
            return Err(Error::InvalidPovm(format!("elements sum to identity only within {dev}")));
        }
        Ok(Self { elements })
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            elements: vec![HermitianMatrix::identity(dim)],
        }
    }

    /// Rank-one projective measurement onto the columns of a unitary.
    pub fn projective(basis: &ComplexMatrix<T>) -> Result<Self> {
        let err = basis.unitarity_error();
        if err > tol::<T>(UNITARY_TOL) {
            return Err(Error::NotUnitary(err.to_f64_lossy()));
        }
        let elements = (0..basis.dim())
            .map(|k| HermitianMatrix::symmetrize(&ComplexMatrix::outer(&basis.column(k))))
            .collect();
        Ok(Self { elements })
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn elements(&self) -> &[HermitianMatrix<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Outcome weights `Re Tr(E_i rho)`.
    pub fn outcome_weights(&self, rho: &DensityMatrix<T>) -> Result<Vec<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimMismatch(self.dim(), rho.dim()));
        }
        self.elements
            .iter()
            .map(|e| crate::linalg::hs_inner(e.as_matrix(), rho.matrix()).map(|z| z.re))
            .collect()
    }
}

/// Canonical purification `sum_i sqrt(r_i) |r_i> (x) v|i>` of `rho` on the
/// doubled space, indexed as `a * N + b`.
pub fn purifications<T: Real>(rho: &DensityMatrix<T>, v: &ComplexMatrix<T>) -> Result<PureState<T>> {
    let n = rho.dim();
    if v.dim() != n {
        return Err(Error::DimMismatch(n, v.dim()));
    }
    let err = v.unitarity_error();
    if err > tol::<T>(UNITARY_TOL) {
        return Err(Error::NotUnitary(err.to_f64_lossy()));
    }
    let eig = rho.eigen();
    let roots: Vec<T> = eig.eigenvalues.iter().map(|x| x.sqrt()).collect();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); n * n];
    for a in 0..n {
        for b in 0..n {
            amps[a * n + b] = (0..n)
                .map(|i| eig.eigenvectors[(a, i)] * v[(b, i)] * roots[i])
                .sum();
        }
    }
    PureState::normalized(amps)
}

/// Reduced state on the first factor of a bipartite pure state.
pub fn partial_trace_second<T: Real>(psi: &PureState<T>, dim_a: usize) -> Result<DensityMatrix<T>> {
    if dim_a == 0 || !psi.dim().is_multiple_of(dim_a) {
        return Err(Error::DimMismatch(psi.dim(), dim_a));
    }
    let dim_b = psi.dim() / dim_a;
    let amps = psi.amplitudes();
    let m = ComplexMatrix::from_fn(dim_a, |a, a2| {
        (0..dim_b)
            .map(|b| amps[a * dim_b + b] * amps[a2 * dim_b + b].conj())
            .sum()
    });
    DensityMatrix::new(HermitianMatrix::symmetrize(&m))
}
