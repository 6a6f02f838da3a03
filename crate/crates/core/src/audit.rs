//! Monte Carlo audit of the triangle inequality for `sqrt(QJSD)`.
//!
//! Triplets `(rho, xi, sigma)` are drawn independently from the product of
//! Haar and simplex measures; triplet `i` uses the stream
//! `derive_seed(seed, i)`, so any sample can be regenerated on its own with
//! [`regenerate_triplet`].

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::divergences::quantum::qjsd_sqrt;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::states::{derive_seed, DensityMatrix, StateSampler};

pub const DEFAULT_BIN_WIDTH: f64 = 0.002;
pub const DEFAULT_TAIL_MAX: f64 = 0.2;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Number of smallest defects kept with their seeds.
pub const SMALLEST_KEPT: usize = 10;

/// `d(rho, xi) + d(xi, sigma) - d(rho, sigma)` with `d = sqrt(QJSD)`;
/// `xi` is the pivot.
pub fn triangle_defect<T: Real>(rho: &DensityMatrix<T>, xi: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    Ok(qjsd_sqrt(rho, xi)? + qjsd_sqrt(xi, sigma)? - qjsd_sqrt(rho, sigma)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriangleSample {
    pub index: u64,
    pub defect: f64,
    pub triplet_seed: u64,
}

/// Fixed-width histogram over `[-tail_max, tail_max)` with out-of-range counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    pub total: u64,
}

impl Histogram {
    /// Bins of width `bin_width` starting at `-tail_max`; the last bin is
    /// shortened if `2 tail_max` is not a multiple of the width.
    pub fn new(bin_width: f64, tail_max: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(Error::InvalidConfig(format!("bin width must be positive, got {bin_width}")));
        }
        if !(tail_max > 0.0 && tail_max.is_finite()) {
            return Err(Error::InvalidConfig(format!("tail max must be positive, got {tail_max}")));
        }
        let bins = (2.0 * tail_max / bin_width - 1e-9).ceil().max(1.0);
        if bins > 1e7 {
            return Err(Error::InvalidConfig(format!("{bins} bins requested")));
        }
        let bins = bins as usize;
        let mut bin_edges: Vec<f64> = (0..bins).map(|k| -tail_max + k as f64 * bin_width).collect();
        bin_edges.push(tail_max);
        Ok(Self {
            bin_edges,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
            total: 0,
        })
    }

    pub fn empty_like(&self) -> Self {
        Self {
            bin_edges: self.bin_edges.clone(),
            counts: vec![0; self.counts.len()],
            underflow: 0,
            overflow: 0,
            total: 0,
        }
    }

    pub fn add(&mut self, x: f64) {
        self.total += 1;
        let lo = self.bin_edges[0];
        let hi = *self.bin_edges.last().unwrap();
        if x < lo {
            self.underflow += 1;
        } else if x >= hi {
            self.overflow += 1;
        } else {
            let k = self.bin_edges.partition_point(|&e| e <= x) - 1;
            self.counts[k] += 1;
        }
    }

    /// Fraction of samples in the underflow bin and in bins lying entirely
    /// below `threshold` (up to round-off in the edges).
    pub fn fraction_below(&self, threshold: f64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let below: u64 = self
            .counts
            .iter()
            .zip(&self.bin_edges[1..])
            .filter(|(_, &high)| high <= threshold + 1e-12)
            .map(|(c, _)| c)
            .sum();
        (below + self.underflow) as f64 / self.total as f64
    }

    /// CSV with one row per bin and trailing `# underflow` / `# overflow` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_low,bin_high,count,probability\n");
        let total = self.total.max(1) as f64;
        for (k, &c) in self.counts.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{}",
                sig12(self.bin_edges[k]),
                sig12(self.bin_edges[k + 1]),
                c,
                sig12(c as f64 / total)
            )
            .unwrap();
        }
        writeln!(out, "# underflow,{}", self.underflow).unwrap();
        writeln!(out, "# overflow,{}", self.overflow).unwrap();
        out
    }
}

/// Shortest decimal form of `x` rounded to 12 significant digits.
fn sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap();
    format!("{}", rounded + 0.0)
}

/// Componentwise sum of two histograms with identical edges.
pub fn histogram_merge(a: &Histogram, b: &Histogram) -> Result<Histogram> {
    if a.bin_edges != b.bin_edges {
        return Err(Error::EdgeMismatch);
    }
    Ok(Histogram {
        bin_edges: a.bin_edges.clone(),
        counts: a.counts.iter().zip(&b.counts).map(|(x, y)| x + y).collect(),
        underflow: a.underflow + b.underflow,
        overflow: a.overflow + b.overflow,
        total: a.total + b.total,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditConfig {
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    pub bin_width: f64,
    pub tail_max: f64,
    pub tolerance: f64,
    pub mixedness_floor: Option<f64>,
    /// Worker threads; `0` uses the global rayon pool.
    pub workers: usize,
}

impl AuditConfig {
    pub fn new(dim: usize, samples: u64, seed: u64) -> Self {
        Self {
            dim,
            samples,
            seed,
            bin_width: DEFAULT_BIN_WIDTH,
            tail_max: DEFAULT_TAIL_MAX,
            tolerance: DEFAULT_TOLERANCE,
            mixedness_floor: None,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidConfig(format!("dimension must be at least 2, got {}", self.dim)));
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!("tolerance must be nonnegative, got {}", self.tolerance)));
        }
        Histogram::new(self.bin_width, self.tail_max)?;
        StateSampler::new(self.dim, 0).with_mixedness_floor(self.mixedness_floor)?;
        Ok(())
    }
}

/// Result of [`run_audit`]; serializes to the report JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub bin_width: f64,
    pub tail_max: f64,
    pub mixedness_floor: Option<f64>,
    /// Samples with `defect < -tolerance`.
    pub violations: u64,
    /// Samples with `-tolerance <= defect < 0`, attributed to round-off.
    pub noise: u64,
    pub min_defect: f64,
    /// The [`SMALLEST_KEPT`] smallest defects, ascending.
    pub smallest: Vec<TriangleSample>,
    pub histogram: Histogram,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The triplet with the given per-triplet seed.
pub fn regenerate_triplet(
    dim: usize,
    triplet_seed: u64,
    mixedness_floor: Option<f64>,
) -> Result<[DensityMatrix<f64>; 3]> {
    let mut s = StateSampler::new(dim, triplet_seed).with_mixedness_floor(mixedness_floor)?;
    Ok([s.sample_state()?, s.sample_state()?, s.sample_state()?])
}

/// Tallies over a range of triplet indices; shards of one run combine with
/// [`AuditShard::merge`].
#[derive(Clone, Debug, PartialEq)]
pub struct AuditShard {
    pub hist: Histogram,
    pub violations: u64,
    pub noise: u64,
    /// Smallest samples, at most a few times [`SMALLEST_KEPT`].
    pub smallest: Vec<TriangleSample>,
}

impl AuditShard {
    pub fn empty(hist: &Histogram) -> Self {
        Self {
            hist: hist.empty_like(),
            violations: 0,
            noise: 0,
            smallest: Vec::new(),
        }
    }

    fn push(&mut self, s: TriangleSample, tolerance: f64) {
        self.hist.add(s.defect);
        if s.defect < -tolerance {
            self.violations += 1;
            log::warn!("triangle violation: defect {:e} at triplet seed {}", s.defect, s.triplet_seed);
        } else if s.defect < 0.0 {
            self.noise += 1;
            log::debug!("round-off level defect {:e} at triplet seed {}", s.defect, s.triplet_seed);
        }
        self.smallest.push(s);
        if self.smallest.len() > 4 * SMALLEST_KEPT {
            self.trim();
        }
    }

    fn trim(&mut self) {
        self.smallest
            .sort_by(|a, b| a.defect.total_cmp(&b.defect).then(a.index.cmp(&b.index)));
        self.smallest.truncate(SMALLEST_KEPT);
    }

    pub fn merge(mut self, mut other: AuditShard) -> Result<AuditShard> {
        self.hist = histogram_merge(&self.hist, &other.hist)?;
        self.violations += other.violations;
        self.noise += other.noise;
        self.smallest.append(&mut other.smallest);
        self.trim();
        Ok(self)
    }
}

/// Tallies the triplets with indices in `indices`, using the streams of the
/// full run described by `config`.
pub fn run_audit_shard(config: &AuditConfig, indices: std::ops::Range<u64>) -> Result<AuditShard> {
    config.validate()?;
    let empty = Histogram::new(config.bin_width, config.tail_max)?;
    let new_shard = || AuditShard::empty(&empty);
    let work = || {
        indices
            .clone()
            .into_par_iter()
            .map(|index| {
                let triplet_seed = derive_seed(config.seed, index);
                let [rho, xi, sigma] = regenerate_triplet(config.dim, triplet_seed, config.mixedness_floor)?;
                let defect = triangle_defect(&rho, &xi, &sigma)?;
                Ok(TriangleSample {
                    index,
                    defect,
                    triplet_seed,
                })
            })
            .try_fold(new_shard, |mut acc, s: Result<TriangleSample>| {
                acc.push(s?, config.tolerance);
                Ok::<_, Error>(acc)
            })
            .try_reduce(new_shard, AuditShard::merge)
    };
    let mut shard = if config.workers == 0 {
        work()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(work)?
    };
    shard.trim();
    Ok(shard)
}

impl AuditShard {
    /// Final report for a shard covering all of `config.samples`.
    pub fn into_report(mut self, config: &AuditConfig) -> AuditReport {
        self.trim();
        AuditReport {
            dim: config.dim,
            samples: config.samples,
            seed: config.seed,
            tolerance: config.tolerance,
            bin_width: config.bin_width,
            tail_max: config.tail_max,
            mixedness_floor: config.mixedness_floor,
            violations: self.violations,
            noise: self.noise,
            min_defect: self.smallest.first().map_or(f64::INFINITY, |s| s.defect),
            smallest: self.smallest,
            histogram: self.hist,
        }
    }
}

/// Samples `samples` triplets and tallies their triangle defects.
///
/// The report is a deterministic function of the configuration and does not
/// depend on `workers`.
pub fn run_audit(config: &AuditConfig) -> Result<AuditReport> {
    Ok(run_audit_shard(config, 0..config.samples)?.into_report(config))
}
