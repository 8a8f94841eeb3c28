//! DAR(1) bit-error generation.
//!
//! The DAR(1) recursion repeats the previous bit with probability `c` and
//! otherwise draws a fresh Bernoulli(`p_E`) bit. Its runs are geometric:
//! a run of correct bits ends with probability `(1 - c) p_E` per slot and a
//! run of errors with probability `(1 - c)(1 - p_E)`, the same law as the
//! two-state interrupted Bernoulli process. [`RunSampler`] draws whole runs
//! at once, which is what the packet simulator uses; [`dar1_stream`] runs
//! the bit-by-bit recursion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::ChannelSpec;
use crate::error::Result;

/// Bit-by-bit DAR(1) source.
#[derive(Debug, Clone)]
pub struct Dar1<R> {
    p_e: f64,
    c: f64,
    current: Option<bool>,
    rng: R,
}

impl<R: Rng> Dar1<R> {
    pub fn new(channel: &ChannelSpec, rng: R) -> Result<Self> {
        channel.validate()?;
        Ok(Self {
            p_e: channel.p_e,
            c: channel.c,
            current: None,
            rng,
        })
    }

    pub fn next_bit(&mut self) -> bool {
        let bit = match self.current {
            Some(prev) if self.rng.random::<f64>() < self.c => prev,
            _ => self.rng.random::<f64>() < self.p_e,
        };
        self.current = Some(bit);
        bit
    }
}

/// `length` bits of a stationary DAR(1) stream; deterministic in `seed`.
pub fn dar1_stream(channel: &ChannelSpec, length: usize, seed: u64) -> Result<Vec<bool>> {
    let mut src = Dar1::new(channel, ChaCha8Rng::seed_from_u64(seed))?;
    Ok((0..length).map(|_| src.next_bit()).collect())
}

/// Run-length form of the same process.
#[derive(Debug, Clone, Copy)]
pub struct RunSampler {
    p_e: f64,
    leave_good: f64,
    leave_bad: f64,
}

impl RunSampler {
    pub fn new(channel: &ChannelSpec) -> Result<Self> {
        channel.validate()?;
        Ok(Self {
            p_e: channel.p_e,
            leave_good: (1.0 - channel.c) * channel.p_e,
            leave_bad: (1.0 - channel.c) * (1.0 - channel.p_e),
        })
    }

    /// Geometric run length on `{1, 2, ..}` with per-slot exit probability
    /// `leave`.
    fn run_length<R: Rng>(rng: &mut R, leave: f64) -> u64 {
        if leave >= 1.0 {
            return 1;
        }
        if leave <= 0.0 {
            return u64::MAX;
        }
        let u = 1.0 - rng.random::<f64>();
        let extra = u.ln() / (-leave).ln_1p();
        if extra >= u64::MAX as f64 {
            u64::MAX
        } else {
            extra as u64 + 1
        }
    }

    /// Draws a fresh stationary stream of `len` slots and calls
    /// `visit(start, end)` for every maximal run of errors `[start, end)`.
    /// Stops early when `visit` returns `false`.
    pub fn for_each_error_run<R: Rng>(&self, rng: &mut R, len: usize, mut visit: impl FnMut(usize, usize) -> bool) {
        let mut error = rng.random::<f64>() < self.p_e;
        let mut pos = 0usize;
        while pos < len {
            let leave = if error { self.leave_bad } else { self.leave_good };
            let run = Self::run_length(rng, leave);
            let end = (pos as u64).saturating_add(run).min(len as u64) as usize;
            if error && !visit(pos, end) {
                return;
            }
            pos = end;
            error = !error;
        }
    }

    /// The full bit sequence, for testing.
    pub fn stream<R: Rng>(&self, rng: &mut R, len: usize) -> Vec<bool> {
        let mut bits = vec![false; len];
        self.for_each_error_run(rng, len, |a, b| {
            bits[a..b].iter_mut().for_each(|x| *x = true);
            true
        });
        bits
    }
}

/// Sample mean and lag-1 autocorrelation of a binary stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamStats {
    pub mean: f64,
    pub lag1: f64,
}

pub fn stream_stats(bits: &[bool]) -> StreamStats {
    let n = bits.len() as f64;
    let ones = bits.iter().filter(|&&b| b).count() as f64;
    let mean = ones / n;
    let pairs = bits.windows(2).filter(|w| w[0] && w[1]).count() as f64;
    let joint = pairs / (n - 1.0);
    let var = mean - mean * mean;
    let lag1 = if var > 0.0 { (joint - mean * mean) / var } else { 0.0 };
    StreamStats { mean, lag1 }
}

/// Standard error of the sample mean of `len` bits of the stationary
/// process: variance `p (1 - p) (1 + c) / ((1 - c) len)`.
pub fn mean_standard_error(p_e: f64, c: f64, len: usize) -> f64 {
    (p_e * (1.0 - p_e) * (1.0 + c) / ((1.0 - c) * len as f64)).sqrt()
}

/// Asymptotic standard error of the lag-1 autocorrelation estimate, from
/// the binomial variances of the two estimated exit probabilities
/// (`c = 1 - alpha - beta`).
pub fn lag1_standard_error(p_e: f64, c: f64, len: usize) -> f64 {
    let alpha = (1.0 - c) * p_e;
    let beta = (1.0 - c) * (1.0 - p_e);
    let n = len as f64;
    (alpha * (1.0 - alpha) / ((1.0 - p_e) * n) + beta * (1.0 - beta) / (p_e * n)).sqrt()
}
