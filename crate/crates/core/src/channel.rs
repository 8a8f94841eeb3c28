//! Markov-modulated bit-error channels.
//!
//! A channel is a finite-state Markov chain `D` plus a per-state bit-error
//! probability. Each transition carries the error indicator of its
//! *destination* state, so `D = D(0) + D(1)` with
//! `D(1)[s, s'] = D[s, s'] * f(s')`. Every recursion in the crate uses this
//! convention: the probability of an error pattern `e_1 .. e_m` on `m`
//! consecutive slots from a stationary start is `pi D(e_1) .. D(e_m) 1`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, Matrix};

/// Tolerance for all stochasticity checks.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// User-facing description of a correlated binary error channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    /// Bit error rate.
    #[serde(rename = "p_E")]
    pub p_e: f64,
    /// Lag-1 normalized autocorrelation of the error indicator.
    pub c: f64,
    /// Seconds per transmitted bit. Carried as metadata only.
    #[serde(default = "default_slot")]
    pub slot: f64,
}

fn default_slot() -> f64 {
    1.0
}

impl ChannelSpec {
    pub fn new(p_e: f64, c: f64) -> Result<Self> {
        let spec = Self {
            p_e,
            c,
            slot: default_slot(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_e) {
            return Err(invalid(format!("p_E = {} outside [0, 1]", self.p_e)));
        }
        if !(0.0..1.0).contains(&self.c) {
            return Err(invalid(format!("c = {} outside [0, 1)", self.c)));
        }
        if !(self.slot.is_finite() && self.slot > 0.0) {
            return Err(invalid(format!("slot = {} must be positive", self.slot)));
        }
        Ok(())
    }
}

/// `(n, k, l)` hard-decision block code: a codeword decodes iff it holds at
/// most `l` bit errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

impl CodeSpec {
    pub fn new(n: usize, k: usize, l: usize) -> Result<Self> {
        let code = Self { n, k, l };
        code.validate()?;
        Ok(code)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0 < self.k && self.k < self.n) {
            return Err(invalid(format!(
                "code ({}, {}, {}): need 0 < k < n",
                self.n, self.k, self.l
            )));
        }
        if self.l >= self.n {
            return Err(invalid(format!(
                "code ({}, {}, {}): need l < n",
                self.n, self.k, self.l
            )));
        }
        Ok(())
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// Interleaving depth `I` and number of interleaved codeblocks per packet `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeSpec {
    #[serde(rename = "I")]
    pub depth: usize,
    #[serde(rename = "M")]
    pub blocks: usize,
}

impl SchemeSpec {
    pub fn new(depth: usize, blocks: usize) -> Result<Self> {
        let s = Self { depth, blocks };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 || self.blocks == 0 {
            return Err(invalid(format!(
                "scheme (I={}, M={}): both must be >= 1",
                self.depth, self.blocks
            )));
        }
        Ok(())
    }

    pub fn codewords(&self) -> usize {
        self.depth * self.blocks
    }

    pub fn packet_bits(&self, code: &CodeSpec) -> usize {
        self.codewords() * code.n
    }

    /// Every `(I, M)` with `I * M * n == budget`, ordered by increasing `I`.
    pub fn constant_budget(budget: usize, n: usize) -> Result<Vec<SchemeSpec>> {
        if n == 0 || budget == 0 || !budget.is_multiple_of(n) {
            return Err(Error::Infeasible(format!(
                "budget {budget} bits is not a positive multiple of n = {n}"
            )));
        }
        let total = budget / n;
        Ok((1..=total)
            .filter(|i| total.is_multiple_of(*i))
            .map(|i| SchemeSpec {
                depth: i,
                blocks: total / i,
            })
            .collect())
    }
}

/// Finite-state Markov channel with its correct/error transition split.
#[derive(Debug, Clone)]
pub struct FsmcModel {
    d: Matrix,
    error_profile: Vec<f64>,
    d0: Matrix,
    d1: Matrix,
    pi: Vec<f64>,
}

impl FsmcModel {
    /// Builds a model from a row-stochastic transition matrix and per-state
    /// error probabilities.
    pub fn new(d: Matrix, error_profile: Vec<f64>) -> Result<Self> {
        if d.dim() < 2 {
            return Err(invalid("a channel needs at least two states"));
        }
        check_stochastic(&d)?;
        let (d0, d1) = split_transition_matrix(&d, &error_profile)?;
        let pi = stationary_vector(&d)?;
        Ok(Self {
            d,
            error_profile,
            d0,
            d1,
            pi,
        })
    }

    /// Two-state chain with error profile `(0, 1)`: `alpha` is the
    /// good-to-bad and `beta` the bad-to-good transition probability.
    pub fn two_state(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(invalid(format!(
                "transition probabilities ({alpha}, {beta}) outside [0, 1]"
            )));
        }
        let d = Matrix::from_rows(&[vec![1.0 - alpha, alpha], vec![beta, 1.0 - beta]])?;
        Self::new(d, vec![0.0, 1.0])
    }

    pub fn states(&self) -> usize {
        self.d.dim()
    }

    pub fn transition(&self) -> &Matrix {
        &self.d
    }

    pub fn error_profile(&self) -> &[f64] {
        &self.error_profile
    }

    pub fn d0(&self) -> &Matrix {
        &self.d0
    }

    pub fn d1(&self) -> &Matrix {
        &self.d1
    }

    /// `D(e)` for an error indicator `e`.
    pub fn kernel(&self, error: bool) -> &Matrix {
        if error {
            &self.d1
        } else {
            &self.d0
        }
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    /// Long-run bit error probability `pi D(1) 1`.
    pub fn error_probability(&self) -> f64 {
        self.d1.weighted_total(&self.pi)
    }

    /// Lag-1 normalized autocorrelation of the error indicator. Zero for a
    /// channel that never (or always) errs.
    pub fn lag1_correlation(&self) -> f64 {
        let p = self.error_probability();
        let var = p - p * p;
        if var <= 0.0 {
            return 0.0;
        }
        let both = self.d1.mul(&self.d1).weighted_total(&self.pi);
        (both - p * p) / var
    }

    /// `(alpha, beta)` when this is a two-state chain.
    pub fn two_state_params(&self) -> Option<(f64, f64)> {
        (self.states() == 2).then(|| (self.d[(0, 1)], self.d[(1, 0)]))
    }
}

/// Interrupted Bernoulli process matching the given BER and lag-1
/// autocorrelation: `alpha = (1 - c) p_E`, `beta = (1 - c)(1 - p_E)`,
/// error-free good state, always-erroneous bad state.
pub fn ibp_from_stats(spec: &ChannelSpec) -> Result<FsmcModel> {
    spec.validate()?;
    let alpha = (1.0 - spec.c) * spec.p_e;
    let beta = (1.0 - spec.c) * (1.0 - spec.p_e);
    FsmcModel::two_state(alpha, beta)
}

/// Splits `D` into `D(0) + D(1)` with the error attached to the destination
/// state.
pub fn split_transition_matrix(d: &Matrix, error_profile: &[f64]) -> Result<(Matrix, Matrix)> {
    let s = d.dim();
    if error_profile.len() != s {
        return Err(Error::DimensionMismatch {
            expected: s,
            found: error_profile.len(),
        });
    }
    if let Some(f) = error_profile.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(invalid(format!("state error probability {f} outside [0, 1]")));
    }
    let mut d1 = Matrix::zeros(s);
    for i in 0..s {
        for (j, f) in error_profile.iter().enumerate() {
            d1[(i, j)] = d[(i, j)] * f;
        }
    }
    let d0 = d.sub(&d1);
    Ok((d0, d1))
}

fn check_stochastic(d: &Matrix) -> Result<()> {
    if d.as_slice().iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(invalid("transition matrix has negative or non-finite entries"));
    }
    for (i, sum) in d.row_sums().into_iter().enumerate() {
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(invalid(format!("row {i} of transition matrix sums to {sum}")));
        }
    }
    Ok(())
}

/// Stationary row vector of `D`.
///
/// Requires exactly one closed communicating class, and that class must be
/// aperiodic; anything else is reported rather than approximated. Two-state
/// chains use the closed form `(beta, alpha) / (alpha + beta)`.
pub fn stationary_vector(d: &Matrix) -> Result<Vec<f64>> {
    check_stochastic(d)?;
    let s = d.dim();
    let reach = reachability(d);

    let closed: Vec<usize> = (0..s)
        .filter(|&i| (0..s).all(|j| !reach[i][j] || reach[j][i]))
        .collect();
    let root = closed[0];
    if closed.iter().any(|&i| !reach[root][i]) {
        return Err(Error::NoUniqueStationary("chain has more than one closed class".into()));
    }
    let period = class_period(d, root, &reach);
    if period != 1 {
        return Err(Error::NoUniqueStationary(format!(
            "recurrent class is periodic with period {period}"
        )));
    }

    if s == 2 {
        let (alpha, beta) = (d[(0, 1)], d[(1, 0)]);
        let total = alpha + beta;
        return Ok(vec![beta / total, alpha / total]);
    }

    // pi (D - I) = 0 with the last balance equation replaced by sum(pi) = 1.
    let mut a = vec![vec![0.0; s]; s];
    for (r, row) in a.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = d[(c, r)] - if r == c { 1.0 } else { 0.0 };
        }
    }
    a[s - 1] = vec![1.0; s];
    let mut b = vec![0.0; s];
    b[s - 1] = 1.0;
    let mut pi = linalg::solve(a, b).ok_or_else(|| Error::NoUniqueStationary("singular balance equations".into()))?;
    for x in pi.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|x| *x /= total);
    Ok(pi)
}

fn reachability(d: &Matrix) -> Vec<Vec<bool>> {
    let s = d.dim();
    let mut reach = vec![vec![false; s]; s];
    for (start, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![start];
        row[start] = true;
        while let Some(u) = stack.pop() {
            for v in 0..s {
                if d[(u, v)] > 0.0 && !row[v] {
                    row[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    reach
}

fn class_period(d: &Matrix, root: usize, reach: &[Vec<bool>]) -> usize {
    let s = d.dim();
    let in_class = |v: usize| reach[root][v] && reach[v][root];
    let mut level = vec![usize::MAX; s];
    level[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut g = 0usize;
    while let Some(u) = queue.pop_front() {
        for v in (0..s).filter(|&v| d[(u, v)] > 0.0 && in_class(v)) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                g = gcd(g, (level[u] + 1).abs_diff(level[v]));
            }
        }
    }
    g
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_model_invariants(m: &FsmcModel) {
        for sum in m.transition().row_sums() {
            assert!((sum - 1.0).abs() < STOCHASTIC_TOL);
        }
        let mut sum = m.d0().clone();
        sum.add_assign(m.d1());
        assert!(sum.max_abs_diff(m.transition()) < STOCHASTIC_TOL);
        let next = m.transition().left_mul(m.stationary());
        let resid = next
            .iter()
            .zip(m.stationary())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(resid < STOCHASTIC_TOL);
        assert!(m.stationary().iter().all(|&x| x >= 0.0));
        assert!((m.stationary().iter().sum::<f64>() - 1.0).abs() < STOCHASTIC_TOL);
    }

    #[test]
    fn ibp_parameters() {
        let m = ibp_from_stats(&ChannelSpec::new(0.01, 0.6).unwrap()).unwrap();
        let (a, b) = m.two_state_params().unwrap();
        assert!((a - 0.004).abs() < 1e-15);
        assert!((b - 0.396).abs() < 1e-15);
        assert!((m.error_probability() - 0.01).abs() < 1e-15);
        assert!((1.0 - a - b - 0.6).abs() < 1e-15);
        assert!((m.stationary()[0] - 0.99).abs() < 1e-15);
        assert!((m.stationary()[1] - 0.01).abs() < 1e-15);
        assert_eq!(m.error_profile(), &[0.0, 1.0]);
        assert_model_invariants(&m);
    }

    #[test]
    fn memoryless_fair_coin() {
        let m = ibp_from_stats(&ChannelSpec::new(0.5, 0.0).unwrap()).unwrap();
        assert_eq!(m.two_state_params(), Some((0.5, 0.5)));
        assert!(m.lag1_correlation().abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ChannelSpec::new(0.1, 1.0).is_err());
        assert!(ChannelSpec::new(-0.1, 0.5).is_err());
        assert!(ChannelSpec::new(1.1, 0.5).is_err());
        let raw = ChannelSpec {
            p_e: 0.1,
            c: 1.0,
            slot: 1.0,
        };
        assert!(ibp_from_stats(&raw).is_err());
    }

    #[test]
    fn degenerate_ber_still_has_unique_stationary_law() {
        let m = ibp_from_stats(&ChannelSpec::new(0.0, 0.5).unwrap()).unwrap();
        assert_eq!(m.stationary(), &[1.0, 0.0]);
        assert_eq!(m.error_probability(), 0.0);
        let m = ibp_from_stats(&ChannelSpec::new(1.0, 0.5).unwrap()).unwrap();
        assert_eq!(m.stationary(), &[0.0, 1.0]);
    }

    #[test]
    fn split_ibp_errors_only_in_bad_column() {
        let m = ibp_from_stats(&ChannelSpec::new(0.2, 0.3).unwrap()).unwrap();
        assert_eq!(m.d1()[(0, 0)], 0.0);
        assert_eq!(m.d1()[(1, 0)], 0.0);
        assert!(m.d1()[(0, 1)] > 0.0 && m.d1()[(1, 1)] > 0.0);
    }

    #[test]
    fn split_error_free_profile() {
        let d = Matrix::from_rows(&[vec![0.7, 0.3], vec![0.4, 0.6]]).unwrap();
        let (d0, d1) = split_transition_matrix(&d, &[0.0, 0.0]).unwrap();
        assert_eq!(d0, d);
        assert_eq!(d1, Matrix::zeros(2));
    }

    #[test]
    fn split_three_state() {
        let d = Matrix::from_rows(&[vec![0.8, 0.15, 0.05], vec![0.1, 0.7, 0.2], vec![0.25, 0.25, 0.5]]).unwrap();
        let (d0, mut d1) = split_transition_matrix(&d, &[0.0, 0.5, 1.0]).unwrap();
        d1.add_assign(&d0);
        assert!(d1.max_abs_diff(&d) < 1e-15);
    }

    #[test]
    fn split_dimension_mismatch() {
        let d = Matrix::identity(3);
        assert!(matches!(
            split_transition_matrix(&d, &[0.0, 1.0]),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn periodic_and_reducible_chains_rejected() {
        let flip = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(stationary_vector(&flip), Err(Error::NoUniqueStationary(_))));
        assert!(matches!(
            stationary_vector(&Matrix::identity(3)),
            Err(Error::NoUniqueStationary(_))
        ));
        let cycle = Matrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert!(stationary_vector(&cycle).is_err());
    }

    #[test]
    fn three_state_fsmc_lag1() {
        let d = Matrix::from_rows(&[vec![0.95, 0.04, 0.01], vec![0.2, 0.7, 0.1], vec![0.05, 0.15, 0.8]]).unwrap();
        let m = FsmcModel::new(d, vec![0.001, 0.1, 0.6]).unwrap();
        assert_model_invariants(&m);
        // brute force P(e_u = 1, e_u+1 = 1) over state pairs
        let (t, f, pi) = (m.transition(), m.error_profile(), m.stationary());
        let mut p = 0.0;
        let mut both = 0.0;
        for s in 0..3 {
            p += pi[s] * f[s];
            for s2 in 0..3 {
                both += pi[s] * f[s] * t[(s, s2)] * f[s2];
            }
        }
        let expected = (both - p * p) / (p - p * p);
        assert!((m.lag1_correlation() - expected).abs() < 1e-13);
    }

    #[test]
    fn budget_pairs() {
        let pairs = SchemeSpec::constant_budget(1008, 63).unwrap();
        let got: Vec<_> = pairs.iter().map(|s| (s.depth, s.blocks)).collect();
        assert_eq!(got, vec![(1, 16), (2, 8), (4, 4), (8, 2), (16, 1)]);
        assert!(SchemeSpec::constant_budget(1000, 63).is_err());
    }

    #[test]
    fn code_invariants() {
        assert!(CodeSpec::new(63, 45, 3).is_ok());
        assert!(CodeSpec::new(63, 63, 3).is_err());
        assert!(CodeSpec::new(63, 0, 3).is_err());
        assert!(CodeSpec::new(5, 2, 5).is_err());
    }

    fn random_stochastic(raw: &[f64], s: usize) -> Matrix {
        let rows: Vec<Vec<f64>> = raw
            .chunks(s)
            .map(|r| {
                let t: f64 = r.iter().sum();
                r.iter().map(|x| x / t).collect()
            })
            .collect();
        Matrix::from_rows(&rows).unwrap()
    }

    proptest! {
        #[test]
        fn ibp_round_trip(p in 0.0f64..=1.0, c in 0.0f64..0.999) {
            let m = ibp_from_stats(&ChannelSpec::new(p, c).unwrap()).unwrap();
            let (a, b) = m.two_state_params().unwrap();
            prop_assert!((m.error_probability() - p).abs() < 1e-15);
            prop_assert!((1.0 - a - b - c).abs() < 1e-15);
            assert_model_invariants(&m);
        }

        #[test]
        fn random_three_state_stationary(raw in proptest::collection::vec(0.05f64..1.0, 9),
                                         f in proptest::collection::vec(0.0f64..=1.0, 3)) {
            let d = random_stochastic(&raw, 3);
            let m = FsmcModel::new(d, f).unwrap();
            assert_model_invariants(&m);
        }
    }
}
