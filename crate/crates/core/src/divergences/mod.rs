//! Distances and divergences between probability vectors and quantum states.

pub mod classical;
pub mod pure;
pub mod purification;
pub mod quantum;

pub use classical::{
    classical_jsd, classical_jsd_sqrt, classical_jsd_sqrt_is_metric_check, kl_divergence, schoenberg_check,
    shannon_entropy, SchoenbergSample,
};
pub use pure::{g_function, phi_pure, pure_triangle_scan, PureScanResult, DEFAULT_X_POINTS};
pub use purification::{d_h_by_optimization, d_h_by_optimization_with, d_h_closed_form, d_h_schedule};
pub use quantum::{
    djs1_lower_bound, fidelity, hilbert_schmidt_distance, measured_jsd, qjsd, qjsd_relative_entropy_form,
    qjsd_spectral, qjsd_sqrt, relative_entropy, von_neumann_entropy, wootters_distance, SUPPORT_CUTOFF,
};
