//! Error-count distributions under interleaved transmission.
//!
//! With depth `I`, adjacent bits of one codeword sit `I` slots apart on the
//! air. The marginal recursion walks one codeword with the per-bit kernel
//! `D(e) D^(I-1)`; the joint recursion walks the first two codewords of a
//! block, whose bits go out back-to-back in each column, with the pair
//! kernel `D(a) D(b) D^(I-2)`. The final bit (or pair) carries no trailing
//! gap. Counters saturate at `cap`, so bucket `cap` holds every outcome with
//! at least `cap` errors.

use crate::channel::FsmcModel;
use crate::error::{invalid, Error, Result};
use crate::linalg::Matrix;

/// Bucketed transition matrices `G[i]` (marginal) or `G[i, j]` (joint,
/// flattened row-major over `(cap + 1)^2` buckets).
#[derive(Debug, Clone)]
pub struct CountMatrixFamily {
    cap: usize,
    buckets: Vec<Matrix>,
}

impl CountMatrixFamily {
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn buckets(&self) -> &[Matrix] {
        &self.buckets
    }

    /// Sum of every bucket matrix.
    pub fn total(&self) -> Matrix {
        let mut acc = Matrix::zeros(self.buckets[0].dim());
        for g in &self.buckets {
            acc.add_assign(g);
        }
        acc
    }

    /// `pi G 1` for every bucket.
    pub fn probabilities(&self, pi: &[f64]) -> Vec<f64> {
        self.buckets.iter().map(|g| g.weighted_total(pi)).collect()
    }
}

/// Distribution of the (bucketed) error count in one codeword.
#[derive(Debug, Clone)]
pub struct MarginalDistribution {
    pub family: CountMatrixFamily,
    pub probs: Vec<f64>,
}

impl MarginalDistribution {
    /// Probability of more than `l` errors. Summed directly from the upper
    /// buckets so tiny failure probabilities keep full relative precision.
    pub fn tail_above(&self, l: usize) -> f64 {
        self.probs.iter().skip(l + 1).sum()
    }
}

/// Joint law of bucketed error counts in two adjacent codewords.
#[derive(Debug, Clone, PartialEq)]
pub struct JointErrorDistribution {
    cap: usize,
    q: Vec<f64>,
}

impl JointErrorDistribution {
    pub fn from_table(cap: usize, q: Vec<f64>) -> Result<Self> {
        let side = cap + 1;
        if q.len() != side * side {
            return Err(Error::DimensionMismatch {
                expected: side * side,
                found: q.len(),
            });
        }
        Ok(Self { cap, q })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn side(&self) -> usize {
        self.cap + 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.side() + j]
    }

    pub fn table(&self) -> &[f64] {
        &self.q
    }

    /// Law of the first codeword's count: `m_i = sum_j q[i, j]`.
    pub fn first_marginal(&self) -> Vec<f64> {
        self.q.chunks(self.side()).map(|r| r.iter().sum()).collect()
    }

    /// Law of the second codeword's count.
    pub fn second_marginal(&self) -> Vec<f64> {
        let side = self.side();
        (0..side).map(|j| (0..side).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn total(&self) -> f64 {
        self.q.iter().sum()
    }

    /// Largest `|q[i, j] - q[j, i]|`. Diagnostic only: symmetry holds for
    /// reversible chains started at stationarity, not in general.
    pub fn asymmetry(&self) -> f64 {
        let side = self.side();
        let mut worst = 0.0f64;
        for i in 0..side {
            for j in i + 1..side {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Re-saturates both counters at a lower `cap`.
    pub fn rebucket(&self, cap: usize) -> Result<Self> {
        if cap > self.cap {
            return Err(invalid(format!("cannot rebucket cap {} up to {cap}", self.cap)));
        }
        let side = cap + 1;
        let mut q = vec![0.0; side * side];
        for i in 0..self.side() {
            for j in 0..self.side() {
                q[i.min(cap) * side + j.min(cap)] += self.get(i, j);
            }
        }
        Ok(Self { cap, q })
    }
}

/// Folds a count law into buckets `0..=cap`.
pub fn rebucket(probs: &[f64], cap: usize) -> Vec<f64> {
    let mut out = vec![0.0; cap + 1];
    for (i, p) in probs.iter().enumerate() {
        out[i.min(cap)] += p;
    }
    out
}

fn check_common(n: usize, depth: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("codeword length must be >= 1"));
    }
    if depth == 0 {
        return Err(invalid("interleaving depth must be >= 1"));
    }
    Ok(())
}

/// Bucket matrices `G[j]` for the error count of one interleaved codeword.
pub fn marginal_family(model: &FsmcModel, n: usize, depth: usize, cap: usize) -> Result<CountMatrixFamily> {
    check_common(n, depth)?;
    let gap = model.transition().pow(depth as u64 - 1);
    let step = [model.d0().mul(&gap), model.d1().mul(&gap)];
    let last = [model.d0(), model.d1()];

    let s = model.states();
    let mut g = vec![Matrix::zeros(s); cap + 1];
    g[0] = Matrix::identity(s);
    for bit in 0..n {
        let is_last = bit + 1 == n;
        let mut next = vec![Matrix::zeros(s); cap + 1];
        for (count, src) in g.iter().enumerate() {
            for e in 0..2 {
                let k = if is_last { last[e] } else { &step[e] };
                next[(count + e).min(cap)].add_product(src, k);
            }
        }
        g = next;
    }
    Ok(CountMatrixFamily { cap, buckets: g })
}

pub fn marginal_error_distribution(
    model: &FsmcModel,
    n: usize,
    depth: usize,
    cap: usize,
) -> Result<MarginalDistribution> {
    let family = marginal_family(model, n, depth, cap)?;
    let probs = family.probabilities(model.stationary());
    Ok(MarginalDistribution { family, probs })
}

/// One recursion step of a two-counter family: every bucket is pushed
/// through each kernel, bumping the counters by the kernel's increments.
fn advance_joint(g: &[Matrix], cap: usize, kernels: &[(usize, usize, &Matrix)]) -> Vec<Matrix> {
    let side = cap + 1;
    let s = g[0].dim();
    let mut next = vec![Matrix::zeros(s); side * side];
    for i in 0..side {
        for j in 0..side {
            let src = &g[i * side + j];
            if src.as_slice().iter().all(|&x| x == 0.0) {
                continue;
            }
            for &(di, dj, k) in kernels {
                let ti = (i + di).min(cap);
                let tj = (j + dj).min(cap);
                next[ti * side + tj].add_product(src, k);
            }
        }
    }
    next
}

fn joint_start(s: usize, cap: usize) -> Vec<Matrix> {
    let side = cap + 1;
    let mut g = vec![Matrix::zeros(s); side * side];
    g[0] = Matrix::identity(s);
    g
}

/// Bucket matrices `G[i, j]` for the first two codewords of an interleaved
/// block (`depth >= 2`).
pub fn joint_family(model: &FsmcModel, n: usize, depth: usize, cap: usize) -> Result<CountMatrixFamily> {
    check_common(n, depth)?;
    if depth < 2 {
        return Err(invalid(
            "joint interleaved distribution needs depth >= 2; use the sequential form for depth 1",
        ));
    }
    let gap = model.transition().pow(depth as u64 - 2);
    let mut pair = Vec::with_capacity(4);
    let mut step = Vec::with_capacity(4);
    for a in 0..2 {
        for b in 0..2 {
            let ab = model.kernel(a == 1).mul(model.kernel(b == 1));
            step.push((a, b, ab.mul(&gap)));
            pair.push((a, b, ab));
        }
    }
    let step_refs: Vec<_> = step.iter().map(|(a, b, m)| (*a, *b, m)).collect();
    let pair_refs: Vec<_> = pair.iter().map(|(a, b, m)| (*a, *b, m)).collect();

    let mut g = joint_start(model.states(), cap);
    for bit in 0..n {
        let kernels = if bit + 1 == n { &pair_refs } else { &step_refs };
        g = advance_joint(&g, cap, kernels);
    }
    Ok(CountMatrixFamily { cap, buckets: g })
}

pub fn joint_error_distribution(
    model: &FsmcModel,
    n: usize,
    depth: usize,
    cap: usize,
) -> Result<JointErrorDistribution> {
    let family = joint_family(model, n, depth, cap)?;
    let q = family.probabilities(model.stationary());
    JointErrorDistribution::from_table(cap, q)
}

/// Bucket matrices for two codewords sent back-to-back without
/// interleaving (`2n` consecutive slots).
pub fn sequential_joint_family(model: &FsmcModel, n: usize, cap: usize) -> Result<CountMatrixFamily> {
    check_common(n, 1)?;
    let first = [(0, 0, model.d0()), (1, 0, model.d1())];
    let second = [(0, 0, model.d0()), (0, 1, model.d1())];
    let mut g = joint_start(model.states(), cap);
    for _ in 0..n {
        g = advance_joint(&g, cap, &first);
    }
    for _ in 0..n {
        g = advance_joint(&g, cap, &second);
    }
    Ok(CountMatrixFamily { cap, buckets: g })
}

pub fn sequential_joint_distribution(model: &FsmcModel, n: usize, cap: usize) -> Result<JointErrorDistribution> {
    let family = sequential_joint_family(model, n, cap)?;
    let q = family.probabilities(model.stationary());
    JointErrorDistribution::from_table(cap, q)
}

/// Joint law of two adjacent codewords at any depth: interleaved pairing
/// for `depth >= 2`, back-to-back codewords for `depth == 1`.
pub fn adjacent_joint_distribution(
    model: &FsmcModel,
    n: usize,
    depth: usize,
    cap: usize,
) -> Result<JointErrorDistribution> {
    if depth == 1 {
        sequential_joint_distribution(model, n, cap)
    } else {
        joint_error_distribution(model, n, depth, cap)
    }
}

/// `max_i |sum_j q[i, j] - p_i|`.
pub fn marginal_consistency_check(joint: &JointErrorDistribution, marginal: &[f64]) -> Result<f64> {
    if marginal.len() != joint.side() {
        return Err(Error::DimensionMismatch {
            expected: joint.side(),
            found: marginal.len(),
        });
    }
    Ok(joint
        .first_marginal()
        .iter()
        .zip(marginal)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ibp_from_stats, ChannelSpec};

    fn ibp(p: f64, c: f64) -> FsmcModel {
        ibp_from_stats(&ChannelSpec::new(p, c).unwrap()).unwrap()
    }

    fn binom_pmf(n: usize, p: f64) -> Vec<f64> {
        let mut out = vec![0.0; n + 1];
        let mut coeff = 1.0;
        for (i, o) in out.iter_mut().enumerate() {
            if i > 0 {
                coeff *= (n + 1 - i) as f64 / i as f64;
            }
            *o = coeff * p.powi(i as i32) * (1.0 - p).powi((n - i) as i32);
        }
        out
    }

    #[test]
    fn memoryless_marginal_is_binomial() {
        for depth in [1, 2, 5] {
            let d = marginal_error_distribution(&ibp(0.1, 0.0), 10, depth, 3).unwrap();
            let expect = rebucket(&binom_pmf(10, 0.1), 3);
            for (a, b) in d.probs.iter().zip(&expect) {
                assert!((a - b).abs() < 1e-14, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn single_bit_marginal() {
        let d = marginal_error_distribution(&ibp(0.01, 0.6), 1, 1, 1).unwrap();
        assert!((d.probs[1] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn fair_independent_pair() {
        let j = joint_error_distribution(&ibp(0.5, 0.0), 1, 2, 1).unwrap();
        for &x in j.table() {
            assert!((x - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn memoryless_joint_factorizes() {
        let j = joint_error_distribution(&ibp(0.2, 0.0), 6, 3, 3).unwrap();
        let m = rebucket(&binom_pmf(6, 0.2), 3);
        for i in 0..4 {
            for jj in 0..4 {
                assert!((j.get(i, jj) - m[i] * m[jj]).abs() < 1e-15);
            }
        }
        let s = sequential_joint_distribution(&ibp(0.2, 0.0), 6, 3).unwrap();
        for i in 0..4 {
            for jj in 0..4 {
                assert!((s.get(i, jj) - m[i] * m[jj]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sequential_single_bit_pair() {
        let m = ibp(0.3, 0.4);
        let s = sequential_joint_distribution(&m, 1, 1).unwrap();
        let pi = m.stationary();
        for a in 0..2 {
            for b in 0..2 {
                let expect = m.kernel(a == 1).mul(m.kernel(b == 1)).weighted_total(pi);
                assert!((s.get(a, b) - expect).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn depth_one_joint_rejected() {
        assert!(joint_error_distribution(&ibp(0.1, 0.5), 4, 1, 2).is_err());
        assert!(marginal_error_distribution(&ibp(0.1, 0.5), 0, 1, 2).is_err());
    }

    #[test]
    fn bucket_sums_reproduce_horizon() {
        let m = ibp(0.05, 0.7);
        let (n, depth) = (7, 4);
        let g = joint_family(&m, n, depth, 3).unwrap();
        let horizon = 2 * n + (n - 1) * (depth - 2);
        let expect = m.transition().pow(horizon as u64);
        assert!(g.total().max_abs_diff(&expect) < 1e-12);
        for sum in g.total().row_sums() {
            assert!((sum - 1.0).abs() < 1e-12);
        }
        let g = marginal_family(&m, n, depth, 3).unwrap();
        let horizon = n + (n - 1) * (depth - 1);
        assert!(g.total().max_abs_diff(&m.transition().pow(horizon as u64)) < 1e-12);
        let g = sequential_joint_family(&m, n, 3).unwrap();
        assert!(g.total().max_abs_diff(&m.transition().pow(2 * n as u64)) < 1e-12);
    }

    #[test]
    fn saturation_matches_full_resolution() {
        let m = ibp(0.2, 0.8);
        let full = joint_error_distribution(&m, 9, 3, 9).unwrap();
        let direct = joint_error_distribution(&m, 9, 3, 3).unwrap();
        let folded = full.rebucket(3).unwrap();
        for (a, b) in folded.table().iter().zip(direct.table()) {
            assert!((a - b).abs() < 1e-14);
        }
        let full = marginal_error_distribution(&m, 9, 3, 9).unwrap();
        let direct = marginal_error_distribution(&m, 9, 3, 3).unwrap();
        for (a, b) in rebucket(&full.probs, 3).iter().zip(&direct.probs) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn consistency_between_recursions() {
        let m = ibp(0.01, 0.9);
        let j = joint_error_distribution(&m, 63, 16, 6).unwrap();
        let p = marginal_error_distribution(&m, 63, 16, 6).unwrap();
        assert!(marginal_consistency_check(&j, &p.probs).unwrap() < 1e-12);
        assert!((j.total() - 1.0).abs() < 1e-12);
        assert!(marginal_consistency_check(&j, &p.probs[..3]).is_err());

        let m = ibp(0.05, 0.0);
        let j = joint_error_distribution(&m, 20, 4, 4).unwrap();
        let p = marginal_error_distribution(&m, 20, 4, 4).unwrap();
        assert!(marginal_consistency_check(&j, &p.probs).unwrap() < 1e-15);
    }

    #[test]
    fn ibp_joint_is_symmetric() {
        let j = joint_error_distribution(&ibp(0.05, 0.8), 10, 3, 4).unwrap();
        assert!(j.asymmetry() < 1e-14);
    }

    #[test]
    fn long_codeword_runs_fast() {
        let start = std::time::Instant::now();
        let j = joint_error_distribution(&ibp(0.01, 0.9), 1023, 16, 16).unwrap();
        assert!((j.total() - 1.0).abs() < 1e-12);
        assert!(start.elapsed().as_secs_f64() < 1.0, "{:?}", start.elapsed());
    }
}
