mod common;

use num_complex::Complex;
use proptest::prelude::*;
use qjsd::anneal::{decode_state, objective_single, objective_symmetrized, run_anneal, AnnealParams, AnnealSchedule, ObjectiveKind};

use common::config;

fn quick() -> AnnealSchedule {
    AnnealSchedule {
        t_final: 1e-4,
        cooling_ratio: 0.8,
        steps_per_temperature: Some(300),
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn decode_scale_invariance(dim in 1usize..=4, block in prop::collection::vec(-3.0f64..3.0, 32)) {
        let block = &block[..2 * dim * dim];
        prop_assume!(block.iter().map(|x| x * x).sum::<f64>() > 1e-6);
        let base = decode_state(block, dim).unwrap();
        for c in [Complex::new(2.0, 0.0), Complex::new(-1.0, 0.0), Complex::new(0.0, 1.0)] {
            let scaled: Vec<f64> = block
                .chunks(2)
                .flat_map(|z| {
                    let w = Complex::new(z[0], z[1]) * c;
                    [w.re, w.im]
                })
                .collect();
            let s = decode_state(&scaled, dim).unwrap();
            prop_assert!(s.matrix().max_abs_diff(base.matrix()) < 1e-12);
        }
    }

    #[test]
    fn objectives_are_well_defined(dim in 2usize..=3, values in prop::collection::vec(-2.0f64..2.0, 54)) {
        let p = AnnealParams::new(dim, values[..6 * dim * dim].to_vec()).unwrap();
        prop_assume!(p.decode().is_ok());
        prop_assert!(objective_single(&p).unwrap() >= -1e-9);
        prop_assert!(objective_symmetrized(&p).unwrap() >= -1e-9);
    }
}

#[test]
fn run_is_deterministic_with_monotone_traces() {
    for objective in [ObjectiveKind::Single, ObjectiveKind::Symmetrized] {
        let a = run_anneal(objective, 2, &quick(), 11, 3).unwrap();
        let b = run_anneal(objective, 2, &quick(), 11, 3).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.best_objective >= -1e-9);
        assert!((a.evaluate().unwrap() - a.best_objective).abs() <= 1e-12);
        for r in &a.restarts {
            assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(r.trace.len(), quick().levels());
        }
        let best = a.restarts.iter().map(|r| r.best_objective).fold(f64::INFINITY, f64::min);
        assert!((best - a.best_objective).abs() < 1e-12);
    }
}
