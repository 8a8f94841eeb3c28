//! Memoryless reference: every bit fails independently with probability `p_E`.

use crate::channel::CodeSpec;
use crate::models::block_to_packet;

/// Probability that a length-`n` word holds more than `l` independent
/// errors, summed over the upper tail so small values stay accurate.
pub fn binomial_tail_above(n: usize, l: usize, p: f64) -> f64 {
    if l >= n || p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (ln_p, ln_q) = (p.ln(), (-p).ln_1p());
    // ln C(n, i) built incrementally from ln C(n, 0) = 0
    let mut ln_coeff = 0.0;
    let mut tail = 0.0;
    for i in 1..=n {
        ln_coeff += ((n + 1 - i) as f64).ln() - (i as f64).ln();
        if i > l {
            tail += (ln_coeff + i as f64 * ln_p + (n - i) as f64 * ln_q).exp();
        }
    }
    tail.min(1.0)
}

/// Packet error probability over a memoryless channel:
/// `1 - (P[count <= l])^(total_codewords)`.
pub fn binomial_baseline(p_e: f64, code: &CodeSpec, total_codewords: usize) -> f64 {
    let fail = binomial_tail_above(code.n, code.l, p_e);
    block_to_packet(fail, total_codewords)
}
