//! Exhaustive enumeration over every bit-error pattern of a small block.
//!
//! Each pattern's probability is the explicit Markov path product
//! `pi D(e_1) D(e_2) .. D(e_m) 1`, with no bucketing, no gap-matrix powers and
//! no shared recursion with [`crate::dist`]. Used as ground truth for small
//! instances (`n * I` up to [`MAX_SLOTS`]).

use crate::channel::{CodeSpec, FsmcModel, SchemeSpec};
use crate::error::{invalid, Result};
use crate::linalg::Matrix;

pub const MAX_SLOTS: usize = 24;

/// Which codeword a slot belongs to.
#[derive(Debug, Clone, Copy)]
enum Layout {
    /// Column-wise interleaving: slot `u` carries a bit of codeword `u mod I`.
    Interleaved { depth: usize },
    /// Codewords of length `n` one after another.
    Sequential { n: usize },
}

impl Layout {
    fn codeword(&self, slot: usize) -> usize {
        match *self {
            Layout::Interleaved { depth } => slot % depth,
            Layout::Sequential { n } => slot / n,
        }
    }
}

/// Visits every error pattern over `slots` consecutive channel slots, calling
/// `leaf(counts, path)` with per-codeword error counts and the path matrix
/// `D(e_1) .. D(e_slots)`.
fn enumerate(
    model: &FsmcModel,
    slots: usize,
    codewords: usize,
    layout: Layout,
    leaf: &mut dyn FnMut(&[usize], &Matrix),
) -> Result<()> {
    if slots > MAX_SLOTS {
        return Err(invalid(format!(
            "{slots} slots exceed the enumeration limit of {MAX_SLOTS}"
        )));
    }
    fn walk(
        model: &FsmcModel,
        slot: usize,
        slots: usize,
        layout: Layout,
        counts: &mut Vec<usize>,
        path: &Matrix,
        leaf: &mut dyn FnMut(&[usize], &Matrix),
    ) {
        if slot == slots {
            leaf(counts, path);
            return;
        }
        for e in [false, true] {
            let next = path.mul(model.kernel(e));
            let cw = layout.codeword(slot);
            if e {
                counts[cw] += 1;
            }
            walk(model, slot + 1, slots, layout, counts, &next, leaf);
            if e {
                counts[cw] -= 1;
            }
        }
    }
    let mut counts = vec![0; codewords];
    walk(
        model,
        0,
        slots,
        layout,
        &mut counts,
        &Matrix::identity(model.states()),
        leaf,
    );
    Ok(())
}

fn path_probability(model: &FsmcModel, path: &Matrix) -> f64 {
    path.weighted_total(model.stationary())
}

/// Exact law of the error count of the first codeword in an interleaved
/// block (index `0..=n`).
pub fn marginal_law(model: &FsmcModel, n: usize, depth: usize) -> Result<Vec<f64>> {
    let mut law = vec![0.0; n + 1];
    enumerate(
        model,
        n * depth,
        depth,
        Layout::Interleaved { depth },
        &mut |c, path| {
            law[c[0]] += path_probability(model, path);
        },
    )?;
    Ok(law)
}

/// Exact joint law (row-major `(n + 1) x (n + 1)`) of the error counts in
/// the first two codewords: interleaved for `depth >= 2`, back-to-back for
/// `depth == 1`.
pub fn joint_law(model: &FsmcModel, n: usize, depth: usize) -> Result<Vec<f64>> {
    let side = n + 1;
    let mut law = vec![0.0; side * side];
    let mut add = |c: &[usize], path: &Matrix| {
        law[c[0] * side + c[1]] += path_probability(model, path);
    };
    if depth == 1 {
        enumerate(model, 2 * n, 2, Layout::Sequential { n }, &mut add)?;
    } else {
        enumerate(model, n * depth, depth, Layout::Interleaved { depth }, &mut add)?;
    }
    Ok(law)
}

/// Sum of path matrices over block patterns in which every codeword decodes,
/// and over those in which at least one fails.
pub fn block_matrices(model: &FsmcModel, code: &CodeSpec, depth: usize) -> Result<(Matrix, Matrix)> {
    let s = model.states();
    let mut ok = Matrix::zeros(s);
    let mut fail = Matrix::zeros(s);
    enumerate(
        model,
        code.n * depth,
        depth,
        Layout::Interleaved { depth },
        &mut |c, path| {
            if c.iter().all(|&x| x <= code.l) {
                ok.add_assign(path);
            } else {
                fail.add_assign(path);
            }
        },
    )?;
    Ok((ok, fail))
}

/// Exact interleaved-codeblock error probability.
pub fn block_error(model: &FsmcModel, code: &CodeSpec, depth: usize) -> Result<f64> {
    let (_, fail) = block_matrices(model, code, depth)?;
    Ok(fail.weighted_total(model.stationary()))
}

/// Exact packet error probability with the channel running continuously
/// across the `M` blocks of a packet.
pub fn packet_error(model: &FsmcModel, code: &CodeSpec, scheme: &SchemeSpec) -> Result<f64> {
    let (ok, _) = block_matrices(model, code, scheme.depth)?;
    let survive = ok.pow(scheme.blocks as u64).weighted_total(model.stationary());
    Ok((1.0 - survive).clamp(0.0, 1.0))
}
