//! Normal-approximation interval for a Bernoulli mean.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Result};

/// `t` with `2 Phi0(t) = gamma`, where `Phi0` integrates the standard
/// normal density from 0 to `t`.
pub fn normal_quantile(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid(format!("confidence level {gamma} outside (0, 1)")));
    }
    let std = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(std.inverse_cdf(0.5 + gamma / 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// The estimate sits on 0 or 1, so the interval has zero width.
    pub degenerate: bool,
}

/// `p_hat +- t sqrt(p_hat (1 - p_hat) / N)`, clamped to `[0, 1]`.
pub fn confidence_interval(p_hat: f64, samples: u64, gamma: f64) -> Result<Interval> {
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    if !(0.0..=1.0).contains(&p_hat) {
        return Err(invalid(format!("estimate {p_hat} outside [0, 1]")));
    }
    let t = normal_quantile(gamma)?;
    let half = t * (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
    Ok(Interval {
        lo: (p_hat - half).max(0.0),
        hi: (p_hat + half).min(1.0),
        degenerate: p_hat == 0.0 || p_hat == 1.0,
    })
}
