//! Absorbing-chain model of successive codewords in one interleaved block.
//!
//! Transient states `0..=l` are the error counts of a decodable codeword;
//! the absorbing state collects every undecodable one. The chain's rows come
//! from the joint law of two adjacent codewords, normalised per row so that
//! `Q 1 + v = 1` holds. The first codeword is drawn from `h` (its marginal
//! law), each later codeword is one transition, so a block of `I` codewords
//! fails with probability `h_abs + P[absorbed within I - 1 steps]`.

use crate::dist::JointErrorDistribution;
use crate::error::{invalid, Result};
use crate::linalg::Matrix;

#[derive(Debug, Clone)]
pub struct AbsorbingChain {
    q: Matrix,
    v: Vec<f64>,
    h: Vec<f64>,
    h_abs: f64,
    unreachable_rows: Vec<usize>,
}

impl AbsorbingChain {
    /// Builds the chain from a joint law whose cap is at least `l + 1`.
    pub fn from_joint(joint: &JointErrorDistribution, l: usize) -> Result<Self> {
        if joint.cap() < l + 1 {
            return Err(invalid(format!(
                "joint distribution saturates at {} but l + 1 = {}",
                joint.cap(),
                l + 1
            )));
        }
        let joint = if joint.cap() == l + 1 {
            joint.clone()
        } else {
            joint.rebucket(l + 1)?
        };
        let side = l + 1;
        let mut q = Matrix::zeros(side);
        let mut v = vec![0.0; side];
        let mut h = vec![0.0; side];
        let mut unreachable_rows = Vec::new();
        for i in 0..side {
            let row: Vec<f64> = (0..=side).map(|j| joint.get(i, j)).collect();
            let mass: f64 = row.iter().sum();
            h[i] = mass;
            if mass <= 0.0 {
                unreachable_rows.push(i);
                v[i] = 1.0;
                continue;
            }
            for j in 0..side {
                q[(i, j)] = row[j] / mass;
            }
            v[i] = row[side] / mass;
        }
        let h_abs = (0..=side).map(|j| joint.get(side, j)).sum();
        Ok(Self {
            q,
            v,
            h,
            h_abs,
            unreachable_rows,
        })
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn h_abs(&self) -> f64 {
        self.h_abs
    }

    /// Transient states whose row had zero mass and were sent straight to
    /// absorption.
    pub fn unreachable_rows(&self) -> &[usize] {
        &self.unreachable_rows
    }

    /// `P` in canonical form, absorbing state last.
    pub fn canonical(&self) -> Matrix {
        let side = self.q.dim();
        let mut p = Matrix::zeros(side + 1);
        for i in 0..side {
            for j in 0..side {
                p[(i, j)] = self.q[(i, j)];
            }
            p[(i, side)] = self.v[i];
        }
        p[(side, side)] = 1.0;
        p
    }

    /// Probability of absorption within `steps` transitions, including mass
    /// that starts absorbed. Read off the absorbing column of `P^steps`, which
    /// only ever adds nonnegative terms.
    pub fn absorbed_within(&self, steps: u64) -> f64 {
        let side = self.q.dim();
        let pk = self.canonical().pow(steps);
        let transient: f64 = (0..side).map(|i| self.h[i] * pk[(i, side)]).sum();
        (self.h_abs + transient).clamp(0.0, 1.0)
    }

    /// `F_T(k) = 1 - h Q^k 1` for the transient part of `h`.
    pub fn passage_cdf(&self, k: u64) -> f64 {
        let start: f64 = self.h.iter().sum();
        if start <= 0.0 {
            return 1.0;
        }
        let norm: Vec<f64> = self.h.iter().map(|x| x / start).collect();
        let pk = self.canonical().pow(k);
        let side = self.q.dim();
        (0..side).map(|i| norm[i] * pk[(i, side)]).sum::<f64>().clamp(0.0, 1.0)
    }
}

/// Block error probability of `depth` interleaved codewords under the
/// absorbing-chain model.
pub fn model3_block_error(joint: &JointErrorDistribution, l: usize, depth: usize) -> Result<f64> {
    if depth == 0 {
        return Err(invalid("interleaving depth must be >= 1"));
    }
    let chain = AbsorbingChain::from_joint(joint, l)?;
    Ok(chain.absorbed_within(depth as u64 - 1))
}
