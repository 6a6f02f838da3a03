//! Quantum Jensen-Shannon divergence and related distances between quantum
//! states, with tools for auditing whether `sqrt(QJSD)` obeys the triangle
//! inequality.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`). The aliases
//! at the crate root fix the scalar to `f64`, which is what the Monte Carlo
//! auditor and the annealer use.
//!
//! ```
//! use qjsd::{divergences::qjsd, DensityMatrix};
//!
//! let mixed = DensityMatrix::maximally_mixed(2);
//! let zero = DensityMatrix::basis(2, 0);
//! let d = qjsd(&mixed, &zero).unwrap();
//! assert!((d - 0.311_278_124_459_132_8).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anneal;
pub mod audit;
pub mod divergences;
pub mod error;
pub mod linalg;
pub mod probability;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type HermitianMatrix = linalg::HermitianMatrix<f64>;
pub type EigenDecomposition = linalg::EigenDecomposition<f64>;
pub type ProbabilityVector = probability::ProbabilityVector<f64>;
pub type DensityMatrix = states::DensityMatrix<f64>;
pub type PureState = states::PureState<f64>;
pub type Povm = states::Povm<f64>;
pub type Complex = num_complex::Complex<f64>;
