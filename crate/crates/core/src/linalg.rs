//! Dense complex linear algebra for small Hermitian problems.
//!
//! Everything here is sized for quantum states of dimension up to a few
//! dozen: matrices are stored row-major in a flat `Vec`, and the Hermitian
//! eigensolver is a cyclic complex Jacobi iteration, which keeps small
//! eigenvalues accurate to high relative precision.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

/// Maximum entrywise deviation from Hermitian symmetry accepted by
/// [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Jacobi convergence threshold on the off-diagonal Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-13;
/// Sweep budget of the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues in `[-NEGATIVE_EIGEN_TOL, 0)` are round-off and clamp to zero.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-10;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// The projector-like outer product `|v><v|`.
    pub fn outer(v: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = cols.len();
        if cols.iter().any(|c| c.len() != dim) {
            return Err(Error::NotSquare {
                rows: cols.first().map_or(0, Vec::len),
                cols: dim,
            });
        }
        Ok(Self::from_fn(dim, |i, j| cols[j][i]))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, k: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, k)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// `max |(V^dagger V - I)_ij|`.
    pub fn unitarity_error(&self) -> T {
        let gram = &self.adjoint() * self;
        gram.max_abs_diff(&Self::identity(self.dim))
    }

    /// `self * v`.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Converts entries to another scalar type.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// A [`ComplexMatrix`] equal to its conjugate transpose.
///
/// Construction checks the symmetry to [`HERMITIAN_TOL`] and then stores the
/// exactly symmetrized matrix `(A + A^dagger) / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T: Real>(ComplexMatrix<T>);

impl<T: Real> HermitianMatrix<T> {
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let adj = m.adjoint();
        let dev = m.max_abs_diff(&adj);
        if dev > tol::<T>(HERMITIAN_TOL) {
            return Err(Error::NotHermitian(dev.to_f64_lossy()));
        }
        Ok(Self::symmetrize(&m))
    }

    /// `(A + A^dagger) / 2` without any tolerance check.
    pub fn symmetrize(m: &ComplexMatrix<T>) -> Self {
        let half = T::lit(0.5);
        let n = m.dim();
        Self(ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                Complex::new(m[(i, i)].re, T::zero())
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * half
            }
        }))
    }

    /// `V diag(values) V^dagger`.
    pub fn from_spectrum(values: &[T], vectors: &ComplexMatrix<T>) -> Self {
        let n = vectors.dim();
        assert_eq!(values.len(), n, "dimension mismatch");
        let m = ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| vectors[(i, k)] * vectors[(j, k)].conj() * values[k])
                .sum()
        });
        Self::symmetrize(&m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix<T> {
        self.0
    }

    pub fn trace(&self) -> T {
        self.0.trace().re
    }

    /// Real linear combination `a * self + b * other`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self(ComplexMatrix {
            dim: self.dim(),
            data: self
                .0
                .data
                .iter()
                .zip(&other.0.data)
                .map(|(x, y)| x * a + y * b)
                .collect(),
        })
    }

    /// `W self W^dagger` for an arbitrary square `W`.
    pub fn conjugate_by(&self, w: &ComplexMatrix<T>) -> Self {
        let m = &(w * &self.0) * &w.adjoint();
        Self::symmetrize(&m)
    }

    /// `<v| self |v>`, real for Hermitian operators.
    pub fn expectation(&self, v: &[Complex<T>]) -> T {
        let mv = self.0.apply(v);
        v.iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

impl<T: Real> AsRef<ComplexMatrix<T>> for HermitianMatrix<T> {
    fn as_ref(&self) -> &ComplexMatrix<T> {
        &self.0
    }
}

/// Spectral decomposition `V diag(eigenvalues) V^dagger` with ascending
/// eigenvalues; column `k` of `eigenvectors` belongs to `eigenvalues[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn reconstruct(&self) -> HermitianMatrix<T> {
        HermitianMatrix::from_spectrum(&self.eigenvalues, &self.eigenvectors)
    }

    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(k)
    }

    /// Matrix function `V f(diag) V^dagger`.
    pub fn map(&self, f: impl Fn(T) -> T) -> HermitianMatrix<T> {
        let values: Vec<T> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        HermitianMatrix::from_spectrum(&values, &self.eigenvectors)
    }
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Iterates until the off-diagonal Frobenius norm falls below
/// [`JACOBI_TOL`] (relative to `max(1, ||m||_F)`) or the sweep budget runs out.
pub fn eigh<T: Real>(m: &HermitianMatrix<T>) -> Result<EigenDecomposition<T>> {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol::<T>(JACOBI_TOL) * a.frobenius_norm().max(T::one());
    let two = T::lit(2.0);

    let mut converged = false;
    let mut off = off_diagonal_norm(&a);
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                // Rotation G = diag(1, e^{-i phi}) R(theta) zeroes (p, q).
                let phase = apq / mag;
                let phase_c = phase.conj();
                let tau = (a[(q, q)].re - a[(p, p)].re) / (two * mag);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                // A <- A G, V <- V G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * phase_c * s;
                    a[(k, q)] = akp * s + akq * phase_c * c;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * phase_c * s;
                    v[(k, q)] = vkp * s + vkq * phase_c * c;
                }
                // A <- G^dagger A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
            }
        }
        off = off_diagonal_norm(&a);
    }
    if !converged && off >= threshold {
        return Err(Error::NonConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_norm: off.to_f64_lossy(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Clamps round-off negatives to zero; errors on anything below
/// `-NEGATIVE_EIGEN_TOL`.
pub fn clamp_nonnegative<T: Real>(values: &mut [T]) -> Result<()> {
    let floor = -tol::<T>(NEGATIVE_EIGEN_TOL);
    for x in values.iter_mut() {
        if *x < floor {
            return Err(Error::NotPositive(x.to_f64_lossy()));
        }
        if *x < T::zero() {
            *x = T::zero();
        }
    }
    Ok(())
}

/// Positive square root of a positive semidefinite matrix.
///
/// Eigenvalues at the level of eigensolver round-off (below
/// `64 * epsilon * max(1, lambda_max)`) are treated as exact zeros, so that
/// `sqrt` does not inflate `1e-17` noise into `1e-9` entries.
pub fn matrix_sqrt<T: Real>(m: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    let mut eig = eigh(m)?;
    psd_sqrt_from_eigen(&mut eig)
}

pub(crate) fn psd_sqrt_from_eigen<T: Real>(eig: &mut EigenDecomposition<T>) -> Result<HermitianMatrix<T>> {
    clamp_nonnegative(&mut eig.eigenvalues)?;
    zero_roundoff(&mut eig.eigenvalues);
    Ok(eig.map(|x| x.sqrt()))
}

/// Zeroes eigenvalues indistinguishable from round-off.
pub(crate) fn zero_roundoff<T: Real>(values: &mut [T]) {
    let top = values.iter().fold(T::one(), |acc, &x| acc.max(x.abs()));
    let floor = T::epsilon() * T::lit(64.0) * top;
    for x in values.iter_mut() {
        if x.abs() <= floor {
            *x = T::zero();
        }
    }
}

/// Hilbert-Schmidt inner product `Tr(A^dagger B)`.
pub fn hs_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<Complex<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(a.dim(), b.dim()));
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Householder QR of a square matrix: returns `(Q, R)` with `Q` unitary and
/// `R` upper triangular. The diagonal of `R` is in general complex.
pub fn qr<T: Real>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = a.dim();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    let two = T::lit(2.0);
    let mut v = vec![Complex::new(T::zero(), T::zero()); n];

    for k in 0..n {
        let len = n - k;
        let norm_x = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<T>().sqrt();
        if norm_x == T::zero() {
            continue;
        }
        let x0 = r[(k, k)];
        let x0_abs = x0.norm();
        let phase = if x0_abs == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            x0 / x0_abs
        };
        let alpha = -phase * norm_x;
        for i in 0..len {
            v[i] = r[(k + i, k)];
        }
        v[0] = v[0] - alpha;
        let norm_v = v[..len].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm_v == T::zero() {
            continue;
        }
        for z in v[..len].iter_mut() {
            *z = *z / norm_v;
        }
        // R <- H R on the trailing block
        for j in k..n {
            let s: Complex<T> = (0..len).map(|i| v[i].conj() * r[(k + i, j)]).sum();
            for i in 0..len {
                r[(k + i, j)] = r[(k + i, j)] - v[i] * s * two;
            }
        }
        // Q <- Q H
        for i in 0..n {
            let s: Complex<T> = (0..len).map(|l| q[(i, k + l)] * v[l]).sum();
            for l in 0..len {
                q[(i, k + l)] = q[(i, k + l)] - s * v[l].conj() * two;
            }
        }
        for i in (k + 1)..n {
            r[(i, k)] = Complex::new(T::zero(), T::zero());
        }
    }
    (q, r)
}
