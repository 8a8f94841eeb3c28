use serde::Serialize;

use crate::channel::{ibp_from_stats, ChannelSpec, CodeSpec, SchemeSpec};
use crate::error::{Error, Result};
use crate::models::{packet_error, ModelKind};

use super::residual_correlation;

pub const DEFAULT_DECORRELATION_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepthCandidate {
    pub scheme: SchemeSpec,
    pub p: f64,
    pub residual_corr: f64,
    /// Residual correlation below the threshold.
    pub decorrelated: bool,
}

/// Packet error probabilities compare equal when they agree to this many
/// significant digits; ties go to the shallower interleaver.
const TIE_DIGITS: i32 = 10;

fn tie_key(p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    let scale = 10f64.powi(TIE_DIGITS - 1 - p.log10().floor() as i32);
    (p * scale).round() / scale
}

/// Ranks every `(I, M)` with `I * M * n = budget` by ascending packet error
/// probability under `model`.
pub fn optimize_depth(
    budget: usize,
    code: &CodeSpec,
    channel: &ChannelSpec,
    model: ModelKind,
    threshold: f64,
) -> Result<Vec<DepthCandidate>> {
    code.validate()?;
    let schemes = SchemeSpec::constant_budget(budget, code.n)?;
    if schemes.is_empty() {
        return Err(Error::Infeasible(format!("no (I, M) pair fits {budget} bits")));
    }
    let fsmc = ibp_from_stats(channel)?;
    let mut ranked = schemes
        .into_iter()
        .map(|scheme| {
            let p = packet_error(model, &fsmc, code, &scheme)?.p;
            let residual_corr = residual_correlation(channel.c, scheme.depth);
            Ok(DepthCandidate {
                scheme,
                p,
                residual_corr,
                decorrelated: residual_corr < threshold,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| {
        tie_key(a.p)
            .total_cmp(&tie_key(b.p))
            .then(a.scheme.depth.cmp(&b.scheme.depth))
    });
    Ok(ranked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memoryless_ties_prefer_shallow() {
        let code = CodeSpec::new(63, 45, 3).unwrap();
        let ch = ChannelSpec::new(0.01, 0.0).unwrap();
        for model in ModelKind::ALL {
            let r = optimize_depth(1008, &code, &ch, model, 0.01).unwrap();
            let depths: Vec<_> = r.iter().map(|c| c.scheme.depth).collect();
            assert_eq!(depths, vec![1, 2, 4, 8, 16], "{model}");
        }
    }

    #[test]
    fn strong_correlation_prefers_deepest() {
        let code = CodeSpec::new(63, 45, 3).unwrap();
        let ch = ChannelSpec::new(0.01, 0.9).unwrap();
        let r = optimize_depth(1008, &code, &ch, ModelKind::Model3, 0.01).unwrap();
        assert_eq!(r[0].scheme.depth, 16);
        assert!(r.windows(2).all(|w| w[0].p <= w[1].p));
        assert!(!r[0].decorrelated);
    }

    #[test]
    fn infeasible_budget() {
        let code = CodeSpec::new(63, 45, 3).unwrap();
        let ch = ChannelSpec::new(0.01, 0.9).unwrap();
        assert!(optimize_depth(1000, &code, &ch, ModelKind::Model3, 0.01).is_err());
    }
}
