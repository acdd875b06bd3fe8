//! Binomial proportion summaries.

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `events` successes out of `trials`.
pub fn wilson_interval(events: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = events as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // clamp so the point estimate always lies inside despite rounding
    ((centre - half).max(0.0).min(phat), (centre + half).min(1.0).max(phat))
}

/// Binomial standard error `sqrt(p(1-p)/n)`.
pub fn standard_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Frequency of an event over independent trials, with its 95% Wilson interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventFrequency {
    pub trials: u64,
    pub events: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl EventFrequency {
    pub fn new(events: u64, trials: u64, seed: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(events, trials, Z95);
        let estimate = if trials == 0 { 0.0 } else { events as f64 / trials as f64 };
        Self { trials, events, estimate, ci_low, ci_high, seed }
    }

    pub fn standard_error(&self) -> f64 {
        standard_error(self.estimate, self.trials)
    }
}

/// Sample mean and unbiased variance.
pub fn mean_variance(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.is_empty() {
        return (0.0, 0.0);
    }
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_known_values() {
        // 0/10: upper bound z²/(n+z²)
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - Z95 * Z95 / (10.0 + Z95 * Z95)).abs() < 1e-12);
        // 50/100 is symmetric around 0.5
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((0.5 - lo - (hi - 0.5)).abs() < 1e-12);
        assert!((hi - 0.596_17).abs() < 1e-4);
        let (lo, hi) = wilson_interval(10, 10, Z95);
        assert_eq!(hi, 1.0);
        assert!(lo < 1.0);
    }

    #[test]
    fn interval_contains_estimate() {
        for trials in [1u64, 7, 100, 10_000] {
            for events in [0, trials / 3, trials] {
                let f = EventFrequency::new(events, trials, 0);
                assert!(f.ci_low <= f.estimate && f.estimate <= f.ci_high);
                assert!((0.0..=1.0).contains(&f.estimate));
            }
        }
    }
}
