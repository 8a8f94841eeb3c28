//! Experiment layer: parameter sweeps, model-versus-simulation comparison,
//! interleaving-depth ranking, throughput, and result files.

mod config;
mod optimize;
mod output;
mod sweep;

pub use config::{ChannelGrid, ExperimentConfig, OutputPaths, Reference, Selector, SimulationSettings};
pub use optimize::{optimize_depth, DepthCandidate, DEFAULT_DECORRELATION_THRESHOLD};
pub use output::{csv_string, echo_string, emit_results, format_sig, write_csv, EchoDocument, CSV_HEADER};
pub use sweep::{derive_seed, run_sweep, ResultRow, RowStatus, SweepSpec};

use crate::channel::{CodeSpec, SchemeSpec};

/// Lag-1 correlation left between adjacent bits of one codeword after
/// interleaving to depth `I`: `c^I`.
pub fn residual_correlation(c: f64, depth: usize) -> f64 {
    c.powi(depth as i32)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Throughput {
    /// Expected delivered data bits per packet, `I M k (1 - p)`.
    pub delivered_bits: f64,
    /// Delivered data bits per transmitted bit, `(k / n)(1 - p)`.
    pub goodput: f64,
}

/// All-or-nothing packet delivery: a lost packet delivers nothing.
pub fn throughput(code: &CodeSpec, scheme: &SchemeSpec, p: f64) -> Throughput {
    let ok = 1.0 - p.clamp(0.0, 1.0);
    Throughput {
        delivered_bits: (scheme.codewords() * code.k) as f64 * ok,
        goodput: code.rate() * ok,
    }
}
