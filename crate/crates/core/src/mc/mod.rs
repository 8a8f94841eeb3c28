//! Monte Carlo packet-loss estimation.
//!
//! Each packet is a fresh stationary DAR(1) stream of `M * I * n` bits.
//! Bits are mapped back to codewords by the deinterleaver; a codeword fails
//! with more than `l` errors, and a packet is lost if any codeword fails.
//!
//! Packets are grouped in fixed batches of [`BATCH_PACKETS`]; batch `b` draws
//! from `ChaCha8Rng::seed_from_u64(seed)` on stream `b`. Losses are integer
//! counts summed in batch order, so the estimate does not depend on how
//! batches are spread over threads.

mod dar1;
mod interleave;
mod interval;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelSpec, CodeSpec, SchemeSpec};
use crate::error::{invalid, Result};
use crate::par::{map_indexed, Execution};

pub use dar1::{dar1_stream, lag1_standard_error, mean_standard_error, stream_stats, Dar1, RunSampler, StreamStats};
pub use interleave::{deinterleave_index, interleave_index};
pub use interval::{confidence_interval, normal_quantile, Interval};

pub const BATCH_PACKETS: u64 = 1000;

/// Generator identity, echoed into result files.
pub const GENERATOR: &str = "ChaCha8Rng: seed_from_u64(seed), set_stream(batch), 1000 packets/batch";

pub const DEFAULT_PACKETS: u64 = 100_000;
pub const DEFAULT_GAMMA: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub channel: ChannelSpec,
    pub code: CodeSpec,
    pub scheme: SchemeSpec,
    pub packets: u64,
    pub seed: u64,
    pub gamma: f64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.code.validate()?;
        self.scheme.validate()?;
        if self.packets == 0 {
            return Err(invalid("need at least one packet"));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(invalid(format!("confidence level {} outside (0, 1)", self.gamma)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiEstimate {
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
    pub packets: u64,
    pub gamma: f64,
    pub losses: u64,
    pub degenerate: bool,
}

pub fn simulate_packets(cfg: &SimConfig) -> Result<CiEstimate> {
    simulate_packets_with(cfg, Execution::default())
}

pub fn simulate_packets_with(cfg: &SimConfig, exec: Execution) -> Result<CiEstimate> {
    cfg.validate()?;
    let sampler = RunSampler::new(&cfg.channel)?;
    let batches = cfg.packets.div_ceil(BATCH_PACKETS);
    let per_batch = map_indexed(exec, batches as usize, |b| {
        let start = b as u64 * BATCH_PACKETS;
        let count = BATCH_PACKETS.min(cfg.packets - start);
        simulate_batch(cfg, &sampler, b as u64, count)
    });
    let losses: u64 = per_batch.into_iter().sum();
    let p_hat = losses as f64 / cfg.packets as f64;
    let ci = confidence_interval(p_hat, cfg.packets, cfg.gamma)?;
    Ok(CiEstimate {
        p_hat,
        lo: ci.lo,
        hi: ci.hi,
        packets: cfg.packets,
        gamma: cfg.gamma,
        losses,
        degenerate: ci.degenerate,
    })
}

fn simulate_batch(cfg: &SimConfig, sampler: &RunSampler, batch: u64, count: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(batch);
    let (n, depth, l) = (cfg.code.n, cfg.scheme.depth, cfg.code.l);
    let block_bits = n * depth;
    let packet_bits = block_bits * cfg.scheme.blocks;
    let mut counts = vec![0usize; cfg.scheme.codewords()];
    let mut losses = 0;
    for _ in 0..count {
        counts.iter_mut().for_each(|x| *x = 0);
        let mut lost = false;
        sampler.for_each_error_run(&mut rng, packet_bits, |start, end| {
            for slot in start..end {
                let block = slot / block_bits;
                let codeword = (slot % block_bits) % depth;
                let k = block * depth + codeword;
                counts[k] += 1;
                if counts[k] > l {
                    lost = true;
                    return false;
                }
            }
            true
        });
        losses += u64::from(lost);
    }
    losses
}
