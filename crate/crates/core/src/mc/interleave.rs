//! Column-wise interleaving of `I` codewords of length `n`.
//!
//! Slot `u` of the transmitted block carries bit `u / I` of codeword
//! `u mod I`.

use crate::error::{invalid, Result};

pub fn deinterleave_index(slot: usize, depth: usize, n: usize) -> Result<(usize, usize)> {
    if depth == 0 || n == 0 {
        return Err(invalid("depth and codeword length must be >= 1"));
    }
    if slot >= n * depth {
        return Err(invalid(format!("slot {slot} outside a block of {} bits", n * depth)));
    }
    Ok((slot % depth, slot / depth))
}

/// Transmission slot of bit `bit` of codeword `codeword`.
pub fn interleave_index(codeword: usize, bit: usize, depth: usize, n: usize) -> Result<usize> {
    if codeword >= depth || bit >= n {
        return Err(invalid(format!(
            "(codeword {codeword}, bit {bit}) outside a {depth} x {n} block"
        )));
    }
    Ok(bit * depth + codeword)
}
