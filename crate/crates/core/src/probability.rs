use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

/// Sum-to-one tolerance of a [`ProbabilityVector`].
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// Discrete probability distribution: nonnegative entries summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector<T: Real> {
    probs: Vec<T>,
}

impl<T: Real> ProbabilityVector<T> {
    /// Validates `probs`. Entries within the sum tolerance below zero are
    /// clamped to zero; anything more negative is rejected.
    pub fn new(mut probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbability("empty distribution".into()));
        }
        let eps = tol::<T>(PROBABILITY_SUM_TOL);
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidProbability(format!("entry {i} is not finite")));
            }
            if *p < -eps {
                return Err(Error::InvalidProbability(format!("entry {i} is negative ({p})")));
            }
            if *p < T::zero() {
                *p = T::zero();
            }
        }
        let sum: T = probs.iter().copied().sum();
        if (sum - T::one()).abs() > eps {
            return Err(Error::InvalidProbability(format!("entries sum to {sum}")));
        }
        Ok(Self { probs })
    }

    /// Normalizes nonnegative weights by their sum.
    pub fn normalized(weights: Vec<T>) -> Result<Self> {
        let clamped: Vec<T> = weights.iter().map(|&w| if w < T::zero() && w > -tol::<T>(1e-10) { T::zero() } else { w }).collect();
        let sum: T = clamped.iter().copied().sum();
        if !(sum > T::zero()) || !sum.is_finite() {
            return Err(Error::InvalidProbability(format!("weights sum to {sum}")));
        }
        Self::new(clamped.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(len: usize) -> Self {
        let p = T::one() / T::from_usize(len).unwrap();
        Self { probs: vec![p; len] }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<T> {
        self.probs
    }

    /// Equal-weight mixture `(self + other) / 2`.
    pub fn midpoint(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimMismatch(self.len(), other.len()));
        }
        let half = T::lit(0.5);
        Ok(Self {
            probs: self.probs.iter().zip(&other.probs).map(|(&a, &b)| (a + b) * half).collect(),
        })
    }
}

impl<T: Real> Index<usize> for ProbabilityVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.probs[i]
    }
}
