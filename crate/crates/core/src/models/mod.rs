//! Codeword, block, and packet error probabilities.
//!
//! Three analytical models plus the memoryless baseline:
//!
//! * [`ModelKind::Model1`]: joint law of two adjacent codewords, collapsed
//!   into a two-state codeword chain.
//! * [`ModelKind::Model2`]: single-codeword law, with the codeword chain
//!   borrowing the bit process's lag-1 correlation.
//! * [`ModelKind::Model3`]: joint law driving an absorbing chain over error
//!   counts.
//! * [`ModelKind::Baseline`]: independent bit errors.
//!
//! Block probabilities are lifted to packets with `p = 1 - (1 - p_I)^M`.

pub mod absorbing;
pub mod baseline;
pub mod two_state;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{CodeSpec, FsmcModel, SchemeSpec};
use crate::dist::{adjacent_joint_distribution, marginal_error_distribution, JointErrorDistribution};
use crate::error::{invalid, Result};

pub use absorbing::{model3_block_error, AbsorbingChain};
pub use baseline::{binomial_baseline, binomial_tail_above};
pub use two_state::{codeword_process_from_joint, two_state_block_error, CodewordProcess};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Model1,
    Model2,
    Model3,
    Baseline,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [Self::Model1, Self::Model2, Self::Model3, Self::Baseline];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Model1 => "model1",
            Self::Model2 => "model2",
            Self::Model3 => "model3",
            Self::Baseline => "baseline",
        }
    }

    fn needs_joint(&self) -> bool {
        matches!(self, Self::Model1 | Self::Model3)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown model '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketErrorResult {
    pub model: ModelKind,
    /// Interleaved-codeblock error probability.
    pub p_block: f64,
    /// Packet error probability.
    pub p: f64,
    pub code: CodeSpec,
    pub scheme: SchemeSpec,
}

/// `1 - (1 - p_I)^M`, evaluated as `-expm1(M ln(1 - p_I))`.
pub fn block_to_packet(p_block: f64, blocks: usize) -> f64 {
    let p_block = p_block.clamp(0.0, 1.0);
    if p_block == 1.0 {
        return 1.0;
    }
    (-(blocks as f64 * (-p_block).ln_1p()).exp_m1()).clamp(0.0, 1.0)
}

fn check_inputs(code: &CodeSpec, scheme: &SchemeSpec) -> Result<()> {
    code.validate()?;
    scheme.validate()
}

fn packet(model: ModelKind, p_block: f64, code: &CodeSpec, scheme: &SchemeSpec) -> PacketErrorResult {
    PacketErrorResult {
        model,
        p_block,
        p: block_to_packet(p_block, scheme.blocks),
        code: *code,
        scheme: *scheme,
    }
}

fn joint_for(model: &FsmcModel, code: &CodeSpec, scheme: &SchemeSpec) -> Result<JointErrorDistribution> {
    adjacent_joint_distribution(model, code.n, scheme.depth, code.l + 1)
}

fn model1_from_joint(
    joint: &JointErrorDistribution,
    code: &CodeSpec,
    scheme: &SchemeSpec,
) -> Result<PacketErrorResult> {
    let proc = codeword_process_from_joint(joint, code.l)?;
    let p_block = two_state_block_error(&proc, scheme.depth)?;
    Ok(packet(ModelKind::Model1, p_block, code, scheme))
}

fn model3_from_joint(
    joint: &JointErrorDistribution,
    code: &CodeSpec,
    scheme: &SchemeSpec,
) -> Result<PacketErrorResult> {
    let p_block = model3_block_error(joint, code.l, scheme.depth)?;
    Ok(packet(ModelKind::Model3, p_block, code, scheme))
}

pub fn model1_packet_error(model: &FsmcModel, code: &CodeSpec, scheme: &SchemeSpec) -> Result<PacketErrorResult> {
    check_inputs(code, scheme)?;
    model1_from_joint(&joint_for(model, code, scheme)?, code, scheme)
}

pub fn model2_packet_error(model: &FsmcModel, code: &CodeSpec, scheme: &SchemeSpec) -> Result<PacketErrorResult> {
    check_inputs(code, scheme)?;
    let marginal = marginal_error_distribution(model, code.n, scheme.depth, code.l + 1)?;
    let p_c = marginal.tail_above(code.l).clamp(0.0, 1.0);
    let c_c = model.lag1_correlation().clamp(-1.0 + f64::EPSILON, 1.0 - f64::EPSILON);
    let proc = CodewordProcess::from_stats(p_c, c_c)?;
    let p_block = two_state_block_error(&proc, scheme.depth)?;
    Ok(packet(ModelKind::Model2, p_block, code, scheme))
}

pub fn model3_packet_error(model: &FsmcModel, code: &CodeSpec, scheme: &SchemeSpec) -> Result<PacketErrorResult> {
    check_inputs(code, scheme)?;
    model3_from_joint(&joint_for(model, code, scheme)?, code, scheme)
}

pub fn baseline_packet_error(model: &FsmcModel, code: &CodeSpec, scheme: &SchemeSpec) -> Result<PacketErrorResult> {
    check_inputs(code, scheme)?;
    let p_e = model.error_probability();
    let p_block = block_to_packet(binomial_tail_above(code.n, code.l, p_e), scheme.depth);
    Ok(packet(ModelKind::Baseline, p_block, code, scheme))
}

pub fn packet_error(
    kind: ModelKind,
    model: &FsmcModel,
    code: &CodeSpec,
    scheme: &SchemeSpec,
) -> Result<PacketErrorResult> {
    match kind {
        ModelKind::Model1 => model1_packet_error(model, code, scheme),
        ModelKind::Model2 => model2_packet_error(model, code, scheme),
        ModelKind::Model3 => model3_packet_error(model, code, scheme),
        ModelKind::Baseline => baseline_packet_error(model, code, scheme),
    }
}

/// Evaluates several models at one operating point. Models 1 and 3 share a
/// single joint distribution.
pub fn evaluate_models(
    kinds: &[ModelKind],
    model: &FsmcModel,
    code: &CodeSpec,
    scheme: &SchemeSpec,
) -> Result<Vec<PacketErrorResult>> {
    check_inputs(code, scheme)?;
    let joint = if kinds.iter().any(ModelKind::needs_joint) {
        Some(joint_for(model, code, scheme)?)
    } else {
        None
    };
    kinds
        .iter()
        .map(|kind| match (kind, &joint) {
            (ModelKind::Model1, Some(j)) => model1_from_joint(j, code, scheme),
            (ModelKind::Model3, Some(j)) => model3_from_joint(j, code, scheme),
            _ => packet_error(*kind, model, code, scheme),
        })
        .collect()
}
