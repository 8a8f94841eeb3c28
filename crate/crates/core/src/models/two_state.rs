//! Two-state codeword process: each codeword is simply "decoded" or
//! "failed", with the failure indicator modelled as a two-state Markov chain
//! parameterised by its mean `p_C` and lag-1 autocorrelation `c_C`.

use crate::channel::{split_transition_matrix, stationary_vector};
use crate::dist::JointErrorDistribution;
use crate::error::{invalid, Result};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodewordProcess {
    pub p_c: f64,
    pub c_c: f64,
    pub alpha_c: f64,
    pub beta_c: f64,
    /// `nu[a][b]`: probability that codeword 1 has outcome `a` and
    /// codeword 2 outcome `b` (1 = failed).
    pub nu: [[f64; 2]; 2],
    /// `p_C` is 0 or 1, or the chain is frozen; block errors then use the
    /// memoryless form.
    pub degenerate: bool,
}

impl CodewordProcess {
    /// Process with the given failure probability and lag-1 correlation.
    pub fn from_stats(p_c: f64, c_c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_c) {
            return Err(invalid(format!("codeword error probability {p_c} outside [0, 1]")));
        }
        if !(c_c > -1.0 && c_c < 1.0) {
            return Err(invalid(format!("codeword correlation {c_c} outside (-1, 1)")));
        }
        let alpha_c = ((1.0 - c_c) * p_c).clamp(0.0, 1.0);
        let beta_c = ((1.0 - c_c) * (1.0 - p_c)).clamp(0.0, 1.0);
        let cov = c_c * p_c * (1.0 - p_c);
        let nu = [
            [(1.0 - p_c) * (1.0 - p_c) + cov, p_c * (1.0 - p_c) - cov],
            [p_c * (1.0 - p_c) - cov, p_c * p_c + cov],
        ];
        let degenerate = p_c <= 0.0 || p_c >= 1.0 || alpha_c + beta_c <= 0.0;
        Ok(Self {
            p_c,
            c_c,
            alpha_c,
            beta_c,
            nu,
            degenerate,
        })
    }

    /// Transition matrix `D_C` (state 0 = decoded, state 1 = failed).
    pub fn transition(&self) -> Matrix {
        let rows = [
            vec![1.0 - self.alpha_c, self.alpha_c],
            vec![self.beta_c, 1.0 - self.beta_c],
        ];
        Matrix::from_rows(&rows).expect("2x2")
    }
}

/// Parameterises the codeword process from the joint law of two adjacent
/// codewords' error counts (cap at least `l + 1`).
pub fn codeword_process_from_joint(joint: &JointErrorDistribution, l: usize) -> Result<CodewordProcess> {
    if joint.cap() < l + 1 {
        return Err(invalid(format!(
            "joint distribution saturates at {} but l + 1 = {}",
            joint.cap(),
            l + 1
        )));
    }
    let side = joint.side();
    let mut nu = [[0.0; 2]; 2];
    for i in 0..side {
        for j in 0..side {
            nu[usize::from(i > l)][usize::from(j > l)] += joint.get(i, j);
        }
    }
    // Failure mass summed directly rather than as 1 - success.
    let p_c = (nu[1][0] + nu[1][1]).clamp(0.0, 1.0);
    let var = p_c - p_c * p_c;
    if var <= 0.0 {
        return Ok(CodewordProcess {
            p_c,
            c_c: 0.0,
            alpha_c: p_c,
            beta_c: 1.0 - p_c,
            nu,
            degenerate: true,
        });
    }
    let mut cov = 0.0;
    for (a, row) in nu.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            cov += (a as f64 - p_c) * (b as f64 - p_c) * v;
        }
    }
    let c_c = (cov / var).clamp(-1.0 + f64::EPSILON, 1.0);
    let alpha_c = ((1.0 - c_c) * p_c).clamp(0.0, 1.0);
    let beta_c = ((1.0 - c_c) * (1.0 - p_c)).clamp(0.0, 1.0);
    Ok(CodewordProcess {
        p_c,
        c_c,
        alpha_c,
        beta_c,
        nu,
        degenerate: alpha_c + beta_c <= 0.0,
    })
}

/// Probability that at least one of `depth` consecutive codewords fails.
///
/// Evaluated as absorption into a "failure seen" state of the augmented
/// chain `[[D_C(0), D_C(1) 1], [0, 1]]`, which equals
/// `1 - pi_C D_C(0)^depth 1` without the cancellation.
pub fn two_state_block_error(proc: &CodewordProcess, depth: usize) -> Result<f64> {
    if depth == 0 {
        return Err(invalid("interleaving depth must be >= 1"));
    }
    if proc.degenerate {
        return Ok(proc.p_c);
    }
    let d = proc.transition();
    let (d0, d1) = split_transition_matrix(&d, &[0.0, 1.0])?;
    let pi = stationary_vector(&d).unwrap_or_else(|_| {
        let total = proc.alpha_c + proc.beta_c;
        vec![proc.beta_c / total, proc.alpha_c / total]
    });
    let mut aug = Matrix::zeros(3);
    for i in 0..2 {
        for j in 0..2 {
            aug[(i, j)] = d0[(i, j)];
        }
        aug[(i, 2)] = d1[(i, 0)] + d1[(i, 1)];
    }
    aug[(2, 2)] = 1.0;
    let pk = aug.pow(depth as u64);
    Ok((pi[0] * pk[(0, 2)] + pi[1] * pk[(1, 2)]).clamp(0.0, 1.0))
}
