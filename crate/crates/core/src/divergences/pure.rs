//! Pure-state form of the QJSD and the grid scan of its triangle defect.
//!
//! For pure states the QJSD depends only on the overlap modulus
//! `x = |<psi|phi>|`, through the binary entropy `Phi(x) = h((1 + x)/2)`.
//! Writing a third state as `|chi> = a|psi> + b|phi> + |chi_perp>` turns the
//! triangle inequality into `G(x, y, z) >= 0` with `y = |a + b x|` and
//! `z = |a x + b|` (taking `<psi|phi> = x` real after rephasing `|phi>`).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{neg_p_log2_p, tol, Real};

/// x-grid resolution used when none is given.
pub const DEFAULT_X_POINTS: usize = 20;

fn unit_interval<T: Real>(x: T) -> Result<T> {
    let slack = tol::<T>(1e-12);
    if !x.is_finite() || x < -slack || x > T::one() + slack {
        return Err(Error::DomainError(x.to_f64_lossy()));
    }
    Ok(x.max(T::zero()).min(T::one()))
}

/// `Phi(x) = -((1-x)/2) log2((1-x)/2) - ((1+x)/2) log2((1+x)/2)`.
pub fn phi_pure<T: Real>(x: T) -> Result<T> {
    let x = unit_interval(x)?;
    let half = T::lit(0.5);
    Ok(neg_p_log2_p((T::one() - x) * half) + neg_p_log2_p((T::one() + x) * half))
}

/// `G(x, y, z) = sqrt(Phi(y)) + sqrt(Phi(z)) - sqrt(Phi(x))`.
pub fn g_function<T: Real>(x: T, y: T, z: T) -> Result<T> {
    Ok(phi_pure(y)?.sqrt() + phi_pure(z)?.sqrt() - phi_pure(x)?.sqrt())
}

/// Minimizer found by [`pure_triangle_scan`].
#[derive(Clone, Debug, PartialEq)]
pub struct PureScanResult<T: Real> {
    pub min_g: T,
    pub x: T,
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub y: T,
    pub z: T,
    /// Number of `(x, a, b)` grid points that describe a normalizable `|chi>`.
    pub evaluated: usize,
}

/// Minimum of `G` over a grid of realizable configurations.
///
/// `x` takes `x_points` equally spaced values in `[0, 1]`; `a` and `b` range
/// over a polar grid with `grid_steps` moduli in `[0, 1]` and `grid_steps`
/// phases in `[0, 2 pi)`. Points with `|a|^2 + |b|^2 + 2 Re(conj(a) b x) > 1`
/// (no normalizable `|chi>`) are skipped.
pub fn pure_triangle_scan<T: Real>(grid_steps: usize, x_points: usize) -> Result<PureScanResult<T>> {
    if grid_steps < 2 || x_points < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid_steps and x_points must be at least 2 (got {grid_steps}, {x_points})"
        )));
    }
    let steps = T::from_usize(grid_steps - 1).unwrap();
    let two_pi = T::lit(2.0) * T::PI();
    let mut grid = Vec::with_capacity(grid_steps * grid_steps);
    for i in 0..grid_steps {
        let modulus = T::from_usize(i).unwrap() / steps;
        for j in 0..grid_steps {
            let angle = two_pi * T::from_usize(j).unwrap() / T::from_usize(grid_steps).unwrap();
            grid.push(Complex::from_polar(modulus, angle));
        }
    }
    let slack = tol::<T>(1e-12);

    let mut best: Option<PureScanResult<T>> = None;
    let mut evaluated = 0usize;
    for k in 0..x_points {
        let x = T::from_usize(k).unwrap() / T::from_usize(x_points - 1).unwrap();
        let root_phi_x = phi_pure(x)?.sqrt();
        for &a in &grid {
            for &b in &grid {
                let norm_sq = a.norm_sqr() + b.norm_sqr() + T::lit(2.0) * (a.conj() * b).re * x;
                if norm_sq > T::one() + slack {
                    continue;
                }
                evaluated += 1;
                let y = (a + b * x).norm().min(T::one());
                let z = (a * x + b).norm().min(T::one());
                let g = phi_pure(y)?.sqrt() + phi_pure(z)?.sqrt() - root_phi_x;
                if best.as_ref().is_none_or(|r| g < r.min_g) {
                    best = Some(PureScanResult {
                        min_g: g,
                        x,
                        a,
                        b,
                        y,
                        z,
                        evaluated: 0,
                    });
                }
            }
        }
    }
    let mut result = best.expect("a = 1, b = 0 is always on the grid");
    result.evaluated = evaluated;
    Ok(result)
}
