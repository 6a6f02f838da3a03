//! Classical entropies and the Jensen-Shannon divergence on probability vectors.

use crate::error::{Error, Result};
use crate::probability::ProbabilityVector;
use crate::scalar::{neg_p_log2_p, tol, Real};

fn check_len<T: Real>(p: &ProbabilityVector<T>, q: &ProbabilityVector<T>) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimMismatch(p.len(), q.len()));
    }
    Ok(())
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn shannon_entropy<T: Real>(p: &ProbabilityVector<T>) -> T {
    p.as_slice().iter().map(|&x| neg_p_log2_p(x)).sum()
}

/// Kullback-Leibler divergence `sum p_i log2(p_i / q_i)`.
///
/// Fails with [`Error::Undefined`] when `p` has mass where `q` vanishes.
pub fn kl_divergence<T: Real>(p: &ProbabilityVector<T>, q: &ProbabilityVector<T>) -> Result<T> {
    check_len(p, q)?;
    let mut total = T::zero();
    for (i, (&pi, &qi)) in p.as_slice().iter().zip(q.as_slice()).enumerate() {
        if pi == T::zero() {
            continue;
        }
        if qi == T::zero() {
            return Err(Error::Undefined(i));
        }
        total = total + pi * (pi / qi).log2();
    }
    Ok(total.max(T::zero()))
}

/// Jensen-Shannon divergence `H((P+Q)/2) - H(P)/2 - H(Q)/2`, in bits.
///
/// Always defined; the result is clamped into `[0, 1]` to absorb round-off.
pub fn classical_jsd<T: Real>(p: &ProbabilityVector<T>, q: &ProbabilityVector<T>) -> Result<T> {
    let m = p.midpoint(q)?;
    let half = T::lit(0.5);
    let d = shannon_entropy(&m) - half * shannon_entropy(p) - half * shannon_entropy(q);
    Ok(d.max(T::zero()).min(T::one()))
}

/// `sqrt(classical_jsd)`.
pub fn classical_jsd_sqrt<T: Real>(p: &ProbabilityVector<T>, q: &ProbabilityVector<T>) -> Result<T> {
    classical_jsd(p, q).map(T::sqrt)
}

/// Smallest triangle defect `d(p,r) + d(r,q) - d(p,q)` of `sqrt(JSD)` over
/// `(p, r, q)` triplets, `r` being the pivot. `+inf` for an empty input.
pub fn classical_jsd_sqrt_is_metric_check<T: Real>(
    triplets: &[(ProbabilityVector<T>, ProbabilityVector<T>, ProbabilityVector<T>)],
) -> Result<T> {
    let mut worst = T::infinity();
    for (p, r, q) in triplets {
        let defect = classical_jsd_sqrt(p, r)? + classical_jsd_sqrt(r, q)? - classical_jsd_sqrt(p, q)?;
        worst = worst.min(defect);
    }
    Ok(worst)
}

/// Coefficients summing to zero paired with distributions, for probing the
/// negative-definiteness of the JSD kernel.
#[derive(Clone, Debug)]
pub struct SchoenbergSample<T: Real> {
    coefficients: Vec<T>,
    distributions: Vec<ProbabilityVector<T>>,
}

impl<T: Real> SchoenbergSample<T> {
    pub fn new(coefficients: Vec<T>, distributions: Vec<ProbabilityVector<T>>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidConfig("need at least two coefficients".into()));
        }
        if coefficients.len() != distributions.len() {
            return Err(Error::DimMismatch(coefficients.len(), distributions.len()));
        }
        let sum: T = coefficients.iter().copied().sum();
        if sum.abs() > tol::<T>(1e-12) {
            return Err(Error::InvalidConfig(format!("coefficients sum to {sum}, not zero")));
        }
        let len = distributions[0].len();
        if let Some(d) = distributions.iter().find(|d| d.len() != len) {
            return Err(Error::DimMismatch(len, d.len()));
        }
        Ok(Self {
            coefficients,
            distributions,
        })
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn distributions(&self) -> &[ProbabilityVector<T>] {
        &self.distributions
    }
}

/// `sum_ij c_i c_j D_JS(P_i, P_j)`; nonpositive for a negative definite kernel.
pub fn schoenberg_check<T: Real>(s: &SchoenbergSample<T>) -> T {
    let k = s.coefficients.len();
    let mut total = T::zero();
    for i in 0..k {
        for j in (i + 1)..k {
            let d = classical_jsd(&s.distributions[i], &s.distributions[j]).expect("lengths validated");
            total = total + T::lit(2.0) * s.coefficients[i] * s.coefficients[j] * d;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::StateSampler;

    fn pv(v: &[f64]) -> ProbabilityVector<f64> {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&pv(&[1.0, 0.0])), 0.0);
        assert!((shannon_entropy(&pv(&[0.5, 0.5])) - 1.0).abs() < 1e-15);
        // -(1/4) log2(1/4) - (3/4) log2(3/4) = 1/2 + (3/4)(2 - log2 3)
        let expected = 0.5 + 0.75 * (2.0 - 3f64.log2());
        assert!((shannon_entropy(&pv(&[0.25, 0.75])) - expected).abs() < 1e-15);
        assert!((expected - 0.811_278_124_459_132_8).abs() < 1e-15);
    }

    #[test]
    fn kl_examples() {
        let p = pv(&[0.3, 0.7]);
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        assert!((kl_divergence(&pv(&[1.0, 0.0]), &pv(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            kl_divergence(&pv(&[1.0, 0.0]), &pv(&[0.0, 1.0])),
            Err(Error::Undefined(0))
        );
        assert_eq!(
            kl_divergence(&pv(&[1.0, 0.0]), &pv(&[1.0, 0.0, 0.0])),
            Err(Error::DimMismatch(2, 3))
        );
    }

    #[test]
    fn jsd_examples() {
        let p = pv(&[0.2, 0.3, 0.5]);
        assert_eq!(classical_jsd(&p, &p).unwrap(), 0.0);
        assert!((classical_jsd(&pv(&[1.0, 0.0]), &pv(&[0.0, 1.0])).unwrap() - 1.0).abs() < 1e-15);
        let expected = 0.811_278_124_459_132_8 - 0.5;
        assert!((classical_jsd(&pv(&[1.0, 0.0]), &pv(&[0.5, 0.5])).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn jsd_matches_kl_form() {
        let mut s = StateSampler::new(4, 31);
        for _ in 0..200 {
            let p = s.sample_simplex::<f64>();
            let q = s.sample_simplex::<f64>();
            let m = p.midpoint(&q).unwrap();
            let via_kl = 0.5 * (kl_divergence(&p, &m).unwrap() + kl_divergence(&q, &m).unwrap());
            let d = classical_jsd(&p, &q).unwrap();
            assert!((d - via_kl).abs() < 1e-13);
            assert!((d - classical_jsd(&q, &p).unwrap()).abs() < 1e-15);
            assert!((0.0..=1.0).contains(&d));
        }
    }

    #[test]
    fn metric_check_degenerate_cases() {
        let p = pv(&[0.1, 0.9]);
        let q = pv(&[0.6, 0.4]);
        assert_eq!(
            classical_jsd_sqrt_is_metric_check(&[(p.clone(), p.clone(), p.clone())]).unwrap(),
            0.0
        );
        assert_eq!(
            classical_jsd_sqrt_is_metric_check(&[(p.clone(), p.clone(), q.clone())]).unwrap(),
            0.0
        );
    }

    #[test]
    fn metric_check_random_triplets() {
        let mut s = StateSampler::new(4, 7);
        let triplets: Vec<_> = (0..10_000)
            .map(|_| (s.sample_simplex::<f64>(), s.sample_simplex(), s.sample_simplex()))
            .collect();
        assert!(classical_jsd_sqrt_is_metric_check(&triplets).unwrap() >= -1e-12);
    }

    #[test]
    fn schoenberg_examples() {
        let p = pv(&[0.3, 0.3, 0.4]);
        let same = SchoenbergSample::new(vec![1.0, -2.0, 1.0], vec![p.clone(), p.clone(), p.clone()]).unwrap();
        assert_eq!(schoenberg_check(&same), 0.0);

        let q = pv(&[0.9, 0.05, 0.05]);
        let pair = SchoenbergSample::new(vec![1.0, -1.0], vec![p.clone(), q.clone()]).unwrap();
        let expected = -2.0 * classical_jsd(&p, &q).unwrap();
        assert!((schoenberg_check(&pair) - expected).abs() < 1e-15);
        assert!(schoenberg_check(&pair) <= 0.0);
    }

    #[test]
    fn schoenberg_sample_validation() {
        let p = pv(&[0.5, 0.5]);
        assert!(SchoenbergSample::new(vec![1.0], vec![p.clone()]).is_err());
        assert!(SchoenbergSample::new(vec![1.0, -0.5], vec![p.clone(), p.clone()]).is_err());
        assert!(SchoenbergSample::new(vec![1.0, -1.0], vec![p.clone(), pv(&[1.0, 0.0, 0.0])]).is_err());
    }

    #[test]
    fn schoenberg_random_samples() {
        let mut s = StateSampler::new(3, 11);
        for _ in 0..1000 {
            let k = 5;
            let mut c: Vec<f64> = (0..k).map(|_| rand::Rng::random_range(s.rng_mut(), -1.0..1.0)).collect();
            let mean = c.iter().sum::<f64>() / k as f64;
            c.iter_mut().for_each(|x| *x -= mean);
            let dists = (0..k).map(|_| s.sample_simplex::<f64>()).collect();
            let sample = SchoenbergSample::new(c, dists).unwrap();
            assert!(schoenberg_check(&sample) <= 1e-10);
        }
    }
}
