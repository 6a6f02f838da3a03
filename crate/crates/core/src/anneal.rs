//! Simulated annealing, used to search adversarially for triplets with a
//! negative triangle defect and to minimize over purifications.
//!
//! The engine is a Metropolis chain with single-coordinate Gaussian moves:
//! at temperature `T` a uniformly chosen coordinate is shifted by
//! `N(0, (proposal_scale_ratio * T)^2)` and accepted with probability
//! `min(1, exp(-delta / T))`. The temperature decreases geometrically from
//! `t_initial` to `t_final`. Landscapes can evaluate single-coordinate moves
//! incrementally through [`Landscape::trial`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::audit::triangle_defect;
use crate::divergences::quantum::qjsd_sqrt;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::states::{derive_seed, state_json_value, DensityMatrix};

/// Cooling schedule. `steps_per_temperature = None` means `200 * n_p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub t_initial: f64,
    pub t_final: f64,
    pub cooling_ratio: f64,
    pub steps_per_temperature: Option<usize>,
    pub proposal_scale_ratio: f64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            t_initial: 1.0,
            t_final: 1e-6,
            cooling_ratio: 0.95,
            steps_per_temperature: None,
            proposal_scale_ratio: 1.0,
        }
    }
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.t_initial, self.t_final, self.cooling_ratio, self.proposal_scale_ratio]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidConfig("schedule has non-finite fields".into()));
        }
        if !(self.t_initial > self.t_final && self.t_final > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need t_initial > t_final > 0 (got {} and {})",
                self.t_initial, self.t_final
            )));
        }
        if !(self.cooling_ratio > 0.0 && self.cooling_ratio < 1.0) {
            return Err(Error::InvalidConfig(format!("cooling ratio {} outside (0, 1)", self.cooling_ratio)));
        }
        if self.steps_per_temperature == Some(0) {
            return Err(Error::InvalidConfig("steps_per_temperature must be positive".into()));
        }
        if !(self.proposal_scale_ratio > 0.0) {
            return Err(Error::InvalidConfig("proposal scale ratio must be positive".into()));
        }
        Ok(())
    }

    pub fn steps_for(&self, num_params: usize) -> usize {
        self.steps_per_temperature.unwrap_or(200 * num_params)
    }

    /// Number of temperature levels visited.
    pub fn levels(&self) -> usize {
        let mut t = self.t_initial;
        let mut n = 0;
        while t >= self.t_final * (1.0 - 1e-12) {
            n += 1;
            t *= self.cooling_ratio;
        }
        n
    }
}

/// Objective surface explored by [`minimize`].
pub trait Landscape {
    fn num_params(&self) -> usize;

    /// Sets the current point and returns its objective value.
    fn reset(&mut self, params: &[f64]) -> Result<f64>;

    /// Objective at `params` with coordinate `coord` replaced by `value`,
    /// without changing the current point.
    fn trial(&mut self, params: &[f64], coord: usize, value: f64) -> Result<f64>;

    /// Makes the most recent trial the current point.
    fn commit(&mut self);

    /// Maps the current point to an equivalent representative after a move
    /// of `coord` is accepted. The objective value must not change.
    fn canonicalize(&mut self, _params: &mut [f64], _coord: usize) {}
}

/// [`Landscape`] evaluating a closure from scratch at every point.
pub struct FnLandscape<F> {
    num_params: usize,
    f: F,
    scratch: Vec<f64>,
}

impl<F: FnMut(&[f64]) -> Result<f64>> FnLandscape<F> {
    pub fn new(num_params: usize, f: F) -> Self {
        Self {
            num_params,
            f,
            scratch: Vec::new(),
        }
    }
}

impl<F: FnMut(&[f64]) -> Result<f64>> Landscape for FnLandscape<F> {
    fn num_params(&self) -> usize {
        self.num_params
    }

    fn reset(&mut self, params: &[f64]) -> Result<f64> {
        (self.f)(params)
    }

    fn trial(&mut self, params: &[f64], coord: usize, value: f64) -> Result<f64> {
        self.scratch.clear();
        self.scratch.extend_from_slice(params);
        self.scratch[coord] = value;
        (self.f)(&self.scratch)
    }

    fn commit(&mut self) {}
}

/// Outcome of one annealing chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainResult {
    pub best_params: Vec<f64>,
    pub best_objective: f64,
    /// Best-ever objective after each temperature level.
    pub trace: Vec<f64>,
    pub accepted: u64,
    pub proposed: u64,
}

/// Runs one annealing chain from `init`. Proposals whose evaluation fails
/// (e.g. a degenerate parameter block) are rejected.
pub fn minimize<L: Landscape>(
    landscape: &mut L,
    init: Vec<f64>,
    schedule: &AnnealSchedule,
    rng: &mut ChaCha8Rng,
) -> Result<ChainResult> {
    schedule.validate()?;
    let n = landscape.num_params();
    if init.len() != n {
        return Err(Error::DimMismatch(n, init.len()));
    }
    let steps = schedule.steps_for(n);
    let mut current = init;
    for coord in 0..n {
        landscape.canonicalize(&mut current, coord);
    }
    let mut value = landscape.reset(&current)?;
    let mut best_params = current.clone();
    let mut best = value;
    let mut trace = Vec::with_capacity(schedule.levels());
    let (mut accepted, mut proposed) = (0u64, 0u64);

    let mut t = schedule.t_initial;
    while t >= schedule.t_final * (1.0 - 1e-12) {
        let scale = schedule.proposal_scale_ratio * t;
        for _ in 0..steps {
            let coord = rng.random_range(0..n);
            let step: f64 = rng.sample(StandardNormal);
            let candidate = current[coord] + scale * step;
            proposed += 1;
            let Ok(trial) = landscape.trial(&current, coord, candidate) else {
                continue;
            };
            if !trial.is_finite() {
                continue;
            }
            let delta = trial - value;
            let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / t).exp();
            if accept {
                landscape.commit();
                current[coord] = candidate;
                landscape.canonicalize(&mut current, coord);
                value = trial;
                accepted += 1;
                if value < best {
                    best = value;
                    best_params.copy_from_slice(&current);
                }
            }
        }
        trace.push(best);
        t *= schedule.cooling_ratio;
    }
    Ok(ChainResult {
        best_params,
        best_objective: best,
        trace,
        accepted,
        proposed,
    })
}

/// Which triangle-defect functional to minimize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    /// `d(rho, xi) + d(xi, sigma) - d(rho, sigma)`.
    Single,
    /// Mean of the defect over the three choices of pivot state.
    Symmetrized,
}

impl std::str::FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Self::Single),
            "symmetrized" => Ok(Self::Symmetrized),
            other => Err(Error::InvalidConfig(format!("unknown objective '{other}'"))),
        }
    }
}

/// Three blocks of `2 N^2` reals; block `k` holds the real and imaginary
/// parts of a complex `N x N` matrix `A_k`, row-major, and encodes the state
/// `A_k A_k^dagger / Tr(A_k A_k^dagger)`. Block order is `(rho, xi, sigma)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl AnnealParams {
    pub fn block_len(dim: usize) -> usize {
        2 * dim * dim
    }

    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 3 * Self::block_len(dim) {
            return Err(Error::DimMismatch(3 * Self::block_len(dim), values.len()));
        }
        Ok(Self { dim, values })
    }

    /// Parameters encoding the given `A` matrices.
    pub fn from_matrices(blocks: [&ComplexMatrix<f64>; 3]) -> Result<Self> {
        let dim = blocks[0].dim();
        let mut values = Vec::with_capacity(3 * Self::block_len(dim));
        for b in blocks {
            if b.dim() != dim {
                return Err(Error::DimMismatch(dim, b.dim()));
            }
            for z in b.as_slice() {
                values.push(z.re);
                values.push(z.im);
            }
        }
        Ok(Self { dim, values })
    }

    pub fn block(&self, k: usize) -> &[f64] {
        let len = Self::block_len(self.dim);
        &self.values[k * len..(k + 1) * len]
    }

    pub fn decode(&self) -> Result<[DensityMatrix<f64>; 3]> {
        Ok([
            decode_state(self.block(0), self.dim)?,
            decode_state(self.block(1), self.dim)?,
            decode_state(self.block(2), self.dim)?,
        ])
    }

    fn swap_outer_blocks(&mut self) {
        let len = Self::block_len(self.dim);
        let (first, rest) = self.values.split_at_mut(len);
        first.swap_with_slice(&mut rest[len..2 * len]);
    }
}

/// `A A^dagger / Tr(A A^dagger)` for the matrix stored in `block`.
pub fn decode_state(block: &[f64], dim: usize) -> Result<DensityMatrix<f64>> {
    if block.len() != AnnealParams::block_len(dim) {
        return Err(Error::DimMismatch(AnnealParams::block_len(dim), block.len()));
    }
    if block.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let trace: f64 = block.iter().map(|x| x * x).sum();
    if !(trace > 1e-30) {
        return Err(Error::DegenerateBlock(trace));
    }
    let scale = trace.sqrt().recip();
    let a = ComplexMatrix::from_fn(dim, |i, j| {
        let k = 2 * (i * dim + j);
        num_complex::Complex::new(block[k] * scale, block[k + 1] * scale)
    });
    DensityMatrix::new(HermitianMatrix::symmetrize(&(&a * &a.adjoint())))
}

/// Triangle defect of the decoded triplet with `xi` as pivot.
pub fn objective_single(params: &AnnealParams) -> Result<f64> {
    let [rho, xi, sigma] = params.decode()?;
    triangle_defect(&rho, &xi, &sigma)
}

/// Mean triangle defect over the three pivot choices `xi`, `rho`, `sigma`.
pub fn objective_symmetrized(params: &AnnealParams) -> Result<f64> {
    let [rho, xi, sigma] = params.decode()?;
    let defects = [
        triangle_defect(&rho, &xi, &sigma)?,
        triangle_defect(&xi, &rho, &sigma)?,
        triangle_defect(&rho, &sigma, &xi)?,
    ];
    Ok(defects.iter().sum::<f64>() / 3.0)
}

// pairwise distances indexed as [(0,1), (1,2), (0,2)]
fn combine(kind: ObjectiveKind, d: [f64; 3]) -> f64 {
    let [d01, d12, d02] = d;
    match kind {
        ObjectiveKind::Single => d01 + d12 - d02,
        ObjectiveKind::Symmetrized => {
            let defects = [d01 + d12 - d02, d01 + d02 - d12, d02 + d12 - d01];
            defects.iter().sum::<f64>() / 3.0
        }
    }
}

/// Triplet landscape that re-decodes only the block touched by a move.
struct TripletLandscape {
    dim: usize,
    kind: ObjectiveKind,
    states: Vec<DensityMatrix<f64>>,
    dists: [f64; 3],
    pending: Option<(usize, DensityMatrix<f64>, [f64; 3])>,
    scratch: Vec<f64>,
}

impl TripletLandscape {
    fn new(dim: usize, kind: ObjectiveKind) -> Self {
        Self {
            dim,
            kind,
            states: Vec::new(),
            dists: [0.0; 3],
            pending: None,
            scratch: Vec::new(),
        }
    }

    fn pair_distances(states: [&DensityMatrix<f64>; 3]) -> Result<[f64; 3]> {
        Ok([
            qjsd_sqrt(states[0], states[1])?,
            qjsd_sqrt(states[1], states[2])?,
            qjsd_sqrt(states[0], states[2])?,
        ])
    }
}

impl Landscape for TripletLandscape {
    fn num_params(&self) -> usize {
        3 * AnnealParams::block_len(self.dim)
    }

    fn reset(&mut self, params: &[f64]) -> Result<f64> {
        let p = AnnealParams::new(self.dim, params.to_vec())?;
        let states = p.decode()?;
        self.dists = Self::pair_distances([&states[0], &states[1], &states[2]])?;
        self.states = states.into();
        self.pending = None;
        Ok(combine(self.kind, self.dists))
    }

    fn trial(&mut self, params: &[f64], coord: usize, value: f64) -> Result<f64> {
        let len = AnnealParams::block_len(self.dim);
        let k = coord / len;
        self.scratch.clear();
        self.scratch.extend_from_slice(&params[k * len..(k + 1) * len]);
        self.scratch[coord % len] = value;
        let state = decode_state(&self.scratch, self.dim)?;
        let mut trio = [&self.states[0], &self.states[1], &self.states[2]];
        trio[k] = &state;
        let dists = Self::pair_distances(trio)?;
        let v = combine(self.kind, dists);
        self.pending = Some((k, state, dists));
        Ok(v)
    }

    fn commit(&mut self) {
        if let Some((k, state, dists)) = self.pending.take() {
            self.states[k] = state;
            self.dists = dists;
        }
    }

    // Each block only matters up to scale. Without this the block norms
    // diffuse outward and fixed-size proposals freeze the chain.
    fn canonicalize(&mut self, params: &mut [f64], coord: usize) {
        let len = AnnealParams::block_len(self.dim);
        let block = &mut params[coord / len * len..(coord / len + 1) * len];
        let norm = block.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            block.iter_mut().for_each(|x| *x /= norm);
        }
    }
}

/// Best point of a single restart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestartSummary {
    pub seed: u64,
    pub best_objective: f64,
    pub accepted: u64,
    pub proposed: u64,
    pub trace: Vec<f64>,
}

/// Result of [`run_anneal`].
#[derive(Clone, Debug)]
pub struct AnnealResult {
    pub objective: ObjectiveKind,
    pub dim: usize,
    pub seed: u64,
    pub schedule: AnnealSchedule,
    pub best_objective: f64,
    pub best_params: AnnealParams,
    /// `(rho, xi, sigma)` decoded from `best_params`.
    pub decoded_states: [DensityMatrix<f64>; 3],
    pub best_restart: usize,
    pub restarts: Vec<RestartSummary>,
}

impl AnnealResult {
    /// Per-temperature best values of the winning restart.
    pub fn objective_trace(&self) -> &[f64] {
        &self.restarts[self.best_restart].trace
    }

    /// Result JSON: best objective, the decoded states in the state-file
    /// format, the schedule, and one trace per restart.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct States {
            rho: Box<RawValue>,
            xi: Box<RawValue>,
            sigma: Box<RawValue>,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            objective: ObjectiveKind,
            dim: usize,
            seed: u64,
            schedule: &'a AnnealSchedule,
            steps_per_temperature: usize,
            best_objective: f64,
            best_restart: usize,
            states: States,
            best_params: &'a [f64],
            restarts: &'a [RestartSummary],
        }
        let [rho, xi, sigma] = &self.decoded_states;
        let out = Out {
            objective: self.objective,
            dim: self.dim,
            seed: self.seed,
            schedule: &self.schedule,
            steps_per_temperature: self.schedule.steps_for(3 * AnnealParams::block_len(self.dim)),
            best_objective: self.best_objective,
            best_restart: self.best_restart,
            states: States {
                rho: state_json_value(rho),
                xi: state_json_value(xi),
                sigma: state_json_value(sigma),
            },
            best_params: &self.best_params.values,
            restarts: &self.restarts,
        };
        serde_json::to_string_pretty(&out).expect("result serializes")
    }

    /// Re-evaluates the objective on `best_params`.
    pub fn evaluate(&self) -> Result<f64> {
        match self.objective {
            ObjectiveKind::Single => objective_single(&self.best_params),
            ObjectiveKind::Symmetrized => objective_symmetrized(&self.best_params),
        }
    }
}

/// Minimizes the chosen objective over triplets of `dim`-dimensional states.
///
/// Restart `r` starts from i.i.d. standard normal parameters on the stream
/// `derive_seed(seed, r)`; restarts run in parallel and the result does not
/// depend on scheduling. Ties keep the lowest restart index.
///
/// For [`ObjectiveKind::Single`] the objective is symmetric under exchanging
/// `rho` and `sigma`; the reported triplet is oriented so that the pivot is
/// nearer to `rho` than to `sigma`.
pub fn run_anneal(
    objective: ObjectiveKind,
    dim: usize,
    schedule: &AnnealSchedule,
    seed: u64,
    restarts: usize,
) -> Result<AnnealResult> {
    schedule.validate()?;
    if dim == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    if restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    let n_params = 3 * AnnealParams::block_len(dim);
    let chains: Vec<(u64, ChainResult)> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let chain_seed = derive_seed(seed, r);
            let mut rng = ChaCha8Rng::seed_from_u64(chain_seed);
            let init: Vec<f64> = (0..n_params).map(|_| rng.sample(StandardNormal)).collect();
            let mut landscape = TripletLandscape::new(dim, objective);
            minimize(&mut landscape, init, schedule, &mut rng).map(|c| (chain_seed, c))
        })
        .collect::<Result<_>>()?;

    let mut best_restart = 0;
    for (i, (_, c)) in chains.iter().enumerate() {
        if c.best_objective < chains[best_restart].1.best_objective {
            best_restart = i;
        }
    }
    let mut best_params = AnnealParams::new(dim, chains[best_restart].1.best_params.clone())?;
    let mut decoded = best_params.decode()?;
    if objective == ObjectiveKind::Single {
        let [rho, xi, sigma] = &decoded;
        if qjsd_sqrt(xi, sigma)? < qjsd_sqrt(rho, xi)? {
            best_params.swap_outer_blocks();
            decoded = best_params.decode()?;
        }
    }
    // exact value on the reported (rescaled) parameters; differs from the
    // chain's value by round-off only
    let best_objective = match objective {
        ObjectiveKind::Single => objective_single(&best_params)?,
        ObjectiveKind::Symmetrized => objective_symmetrized(&best_params)?,
    };
    if best_objective < -1e-9 {
        log::warn!("annealing found a negative triangle defect: {best_objective:e}");
    }
    let restarts = chains
        .into_iter()
        .map(|(seed, c)| RestartSummary {
            seed,
            best_objective: c.best_objective,
            accepted: c.accepted,
            proposed: c.proposed,
            trace: c.trace,
        })
        .collect();
    Ok(AnnealResult {
        objective,
        dim,
        seed,
        schedule: schedule.clone(),
        best_objective,
        best_params,
        decoded_states: decoded,
        best_restart,
        restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergences::quantum::hilbert_schmidt_distance;
    use crate::states::read_state_json;
    use num_complex::Complex;

    fn block_of(m: &ComplexMatrix<f64>) -> Vec<f64> {
        m.as_slice().iter().flat_map(|z| [z.re, z.im]).collect()
    }

    #[test]
    fn decode_examples() {
        let id = ComplexMatrix::<f64>::identity(3);
        let rho = decode_state(&block_of(&id), 3).unwrap();
        assert!(rho.matrix().max_abs_diff(DensityMatrix::<f64>::maximally_mixed(3).matrix()) < 1e-15);

        let e0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]);
        let rho = decode_state(&block_of(&e0), 3).unwrap();
        assert_eq!(rho.matrix(), DensityMatrix::<f64>::basis(3, 0).matrix());

        assert!(matches!(decode_state(&[0.0; 8], 2), Err(Error::DegenerateBlock(_))));
        assert!(matches!(decode_state(&[1.0; 7], 2), Err(Error::DimMismatch(8, 7))));
    }

    #[test]
    fn decode_is_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let block: Vec<f64> = (0..18).map(|_| rng.sample(StandardNormal)).collect();
            let base = decode_state(&block, 3).unwrap();
            let twice: Vec<f64> = block.iter().map(|x| 2.0 * x).collect();
            let negated: Vec<f64> = block.iter().map(|x| -x).collect();
            // multiplication by i maps (re, im) to (-im, re)
            let times_i: Vec<f64> = block.chunks(2).flat_map(|c| [-c[1], c[0]]).collect();
            for other in [twice, negated, times_i] {
                let s = decode_state(&other, 3).unwrap();
                assert!(s.matrix().max_abs_diff(base.matrix()) < 1e-12);
            }
        }
    }

    fn qubit_params(a: [&ComplexMatrix<f64>; 3]) -> AnnealParams {
        AnnealParams::from_matrices(a).unwrap()
    }

    #[test]
    fn objective_examples() {
        let id = ComplexMatrix::<f64>::identity(2);
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let all_mixed = qubit_params([&id, &id, &id]);
        assert_eq!(objective_single(&all_mixed).unwrap(), 0.0);
        assert_eq!(objective_symmetrized(&all_mixed).unwrap(), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = ComplexMatrix::from_fn(2, |_, _| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let rho_eq_xi = qubit_params([&g, &g, &p1]);
        assert_eq!(objective_single(&rho_eq_xi).unwrap(), 0.0);

        // (|0><0|, I/2, |1><1|): 2 sqrt(0.311278...) - 1
        let chain = qubit_params([&p0, &id, &p1]);
        let d = (0.311_278_124_459_132_8f64).sqrt();
        assert!((objective_single(&chain).unwrap() - (2.0 * d - 1.0)).abs() < 1e-14);
        // pivots xi, rho, sigma: 2d - 1, (d + 1 - d), (1 + d - d)
        let expected_sym = ((2.0 * d - 1.0) + 1.0 + 1.0) / 3.0;
        assert!((objective_symmetrized(&chain).unwrap() - expected_sym).abs() < 1e-14);
    }

    #[test]
    fn symmetrized_is_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let values: Vec<f64> = (0..24).map(|_| rng.sample(StandardNormal)).collect();
        let p = AnnealParams::new(2, values).unwrap();
        let base = objective_symmetrized(&p).unwrap();
        let blocks: Vec<Vec<f64>> = (0..3).map(|k| p.block(k).to_vec()).collect();
        for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let values = perm.iter().flat_map(|&k| blocks[k].clone()).collect();
            let q = AnnealParams::new(2, values).unwrap();
            assert!((objective_symmetrized(&q).unwrap() - base).abs() < 1e-14);
        }
    }

    #[test]
    fn incremental_landscape_matches_full_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for kind in [ObjectiveKind::Single, ObjectiveKind::Symmetrized] {
            let mut values: Vec<f64> = (0..54).map(|_| rng.sample(StandardNormal)).collect();
            let mut land = TripletLandscape::new(3, kind);
            land.reset(&values).unwrap();
            for _ in 0..30 {
                let coord = rng.random_range(0..54);
                let v: f64 = rng.sample(StandardNormal);
                let trial = land.trial(&values, coord, v).unwrap();
                land.commit();
                values[coord] = v;
                let p = AnnealParams::new(3, values.clone()).unwrap();
                let full = match kind {
                    ObjectiveKind::Single => objective_single(&p).unwrap(),
                    ObjectiveKind::Symmetrized => objective_symmetrized(&p).unwrap(),
                };
                assert_eq!(trial, full);
            }
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(AnnealSchedule::default().validate().is_ok());
        let bad = [
            AnnealSchedule { t_final: 2.0, ..Default::default() },
            AnnealSchedule { t_final: 0.0, ..Default::default() },
            AnnealSchedule { cooling_ratio: 1.0, ..Default::default() },
            AnnealSchedule { steps_per_temperature: Some(0), ..Default::default() },
            AnnealSchedule { proposal_scale_ratio: -1.0, ..Default::default() },
        ];
        for s in bad {
            assert!(matches!(s.validate(), Err(Error::InvalidConfig(_))));
        }
        assert_eq!(AnnealSchedule::default().levels(), 270);
    }

    #[test]
    fn minimize_cone() {
        // proposal widths shrink like T, matched to minima where the objective grows linearly
        let schedule = AnnealSchedule {
            steps_per_temperature: Some(200),
            cooling_ratio: 0.9,
            ..Default::default()
        };
        let mut land = FnLandscape::new(3, |x: &[f64]| Ok(x.iter().map(|v| (v - 0.5).abs()).sum()));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = minimize(&mut land, vec![3.0, -2.0, 1.0], &schedule, &mut rng).unwrap();
        assert!(r.best_objective < 1e-6, "{}", r.best_objective);
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn quick_run_is_deterministic_and_consistent() {
        let schedule = AnnealSchedule {
            t_final: 1e-3,
            cooling_ratio: 0.8,
            steps_per_temperature: Some(200),
            ..Default::default()
        };
        let a = run_anneal(ObjectiveKind::Single, 2, &schedule, 9, 2).unwrap();
        let b = run_anneal(ObjectiveKind::Single, 2, &schedule, 9, 2).unwrap();
        assert_eq!(a.best_objective, b.best_objective);
        assert_eq!(a.best_params, b.best_params);
        assert_eq!(a.evaluate().unwrap(), a.best_objective);
        assert!(a.best_objective >= -1e-9);
        assert!(a.objective_trace().windows(2).all(|w| w[1] <= w[0]));

        let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(json["best_objective"].as_f64().unwrap(), a.best_objective);
        assert_eq!(json["restarts"].as_array().unwrap().len(), 2);
        let rho_back: DensityMatrix<f64> = read_state_json(&json["states"]["rho"].to_string()).unwrap();
        assert_eq!(rho_back.matrix(), a.decoded_states[0].matrix());
        let [rho, xi, sigma] = &a.decoded_states;
        assert!(
            hilbert_schmidt_distance(rho.hermitian(), xi.hermitian()).unwrap()
                <= hilbert_schmidt_distance(xi.hermitian(), sigma.hermitian()).unwrap() + 0.5
        );
    }

    #[test]
    fn run_rejects_bad_config() {
        let s = AnnealSchedule::default();
        assert!(run_anneal(ObjectiveKind::Single, 2, &s, 0, 0).is_err());
        assert!(run_anneal(ObjectiveKind::Single, 0, &s, 0, 1).is_err());
        assert!("median".parse::<ObjectiveKind>().is_err());
        assert_eq!("single".parse::<ObjectiveKind>().unwrap(), ObjectiveKind::Single);
    }
}
