#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};
use qjsd::linalg::eigh;
use qjsd::states::StateSampler;
use qjsd::{ComplexMatrix, DensityMatrix, HermitianMatrix, Povm, PureState};

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn random_pure(s: &mut StateSampler) -> PureState {
    PureState::new(s.sample_haar_unitary::<f64>().column(0)).unwrap()
}

/// `k`-outcome POVM `S^{-1/2} G_i S^{-1/2}` from random positive `G_i`, `S = sum G_i`.
pub fn random_povm(s: &mut StateSampler, k: usize) -> Povm {
    let n = s.dim();
    let gs: Vec<HermitianMatrix> = (0..k)
        .map(|_| {
            let rho: DensityMatrix = s.sample_state().unwrap();
            rho.hermitian().clone()
        })
        .collect();
    let mut sum = HermitianMatrix::from_real_diagonal(&vec![0.0; n]);
    for g in &gs {
        sum = sum.combine(1.0, g, 1.0);
    }
    let eig = eigh(&sum).unwrap();
    let inv_root = HermitianMatrix::from_spectrum(
        &eig.eigenvalues.iter().map(|x: &f64| x.powf(-0.5)).collect::<Vec<_>>(),
        &eig.eigenvectors,
    );
    let elements = gs
        .iter()
        .map(|g| {
            let m: ComplexMatrix = &(inv_root.as_matrix() * g.as_matrix()) * inv_root.as_matrix();
            HermitianMatrix::symmetrize(&m)
        })
        .collect();
    Povm::new(elements).unwrap()
}

/// Commuting pair sharing the Haar eigenbasis `u`.
pub fn commuting_pair(s: &mut StateSampler) -> (DensityMatrix, DensityMatrix, ComplexMatrix) {
    let u = s.sample_haar_unitary::<f64>();
    let p = s.sample_simplex::<f64>();
    let q = s.sample_simplex::<f64>();
    (
        DensityMatrix::from_spectrum(p.as_slice(), &u).unwrap(),
        DensityMatrix::from_spectrum(q.as_slice(), &u).unwrap(),
        u,
    )
}
