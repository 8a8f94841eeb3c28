use serde::Serialize;

use crate::channel::{ibp_from_stats, ChannelSpec, CodeSpec, SchemeSpec};
use crate::error::{invalid, Result};
use crate::mc::{simulate_packets_with, CiEstimate, SimConfig};
use crate::models::{evaluate_models, ModelKind};
use crate::par::{map_indexed, Execution};

use super::config::{ExperimentConfig, Reference, Selector, SimulationSettings};
use super::{residual_correlation, throughput};

/// Fully resolved sweep: the Cartesian product of codes, BERs,
/// correlations and schemes, evaluated by every selected estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub p_e: Vec<f64>,
    pub c: Vec<f64>,
    pub slot: f64,
    pub codes: Vec<CodeSpec>,
    pub budget: Option<usize>,
    /// Explicit pairs; `None` means every pair fitting the budget.
    pub schemes: Option<Vec<SchemeSpec>>,
    pub models: Vec<Selector>,
    pub reference: Reference,
    pub simulation: SimulationSettings,
}

impl SweepSpec {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        let spec = Self {
            p_e: cfg.channel.p_e.clone(),
            c: cfg.channel.c.clone(),
            slot: cfg.channel.slot,
            codes: cfg.codes.clone(),
            budget: cfg.budget,
            schemes: cfg.schemes.clone(),
            models: cfg.models.clone(),
            reference: cfg.reference,
            simulation: cfg.simulation,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_e.is_empty() || self.c.is_empty() || self.codes.is_empty() || self.models.is_empty() {
            return Err(invalid("sweep grids must be non-empty"));
        }
        if self.schemes.is_none() && self.budget.is_none() {
            return Err(invalid("give either explicit schemes or a packet budget"));
        }
        if matches!(&self.schemes, Some(s) if s.is_empty()) {
            return Err(invalid("scheme list is empty"));
        }
        for &p in &self.p_e {
            for &c in &self.c {
                ChannelSpec {
                    p_e: p,
                    c,
                    slot: self.slot,
                }
                .validate()?;
            }
        }
        for code in &self.codes {
            code.validate()?;
        }
        Ok(())
    }

    fn schemes_for(&self, code: &CodeSpec) -> Result<Vec<SchemeSpec>> {
        match (&self.schemes, self.budget) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(b)) => SchemeSpec::constant_budget(b, code.n),
            (None, None) => Err(invalid("no schemes")),
        }
    }

    fn effective_reference(&self) -> Reference {
        match self.reference {
            Reference::Auto => {
                let mc = self.models.contains(&Selector::Simulation);
                let analytic = self.models.iter().any(|m| m.analytic().is_some());
                if mc && analytic {
                    Reference::Simulation
                } else {
                    Reference::None
                }
            }
            r => r,
        }
    }

    fn points(&self) -> Result<Vec<Point>> {
        let mut points = Vec::new();
        for code in &self.codes {
            let schemes = self.schemes_for(code)?;
            for &p_e in &self.p_e {
                for &c in &self.c {
                    for scheme in &schemes {
                        points.push(Point {
                            index: points.len(),
                            channel: ChannelSpec {
                                p_e,
                                c,
                                slot: self.slot,
                            },
                            code: *code,
                            scheme: *scheme,
                        });
                    }
                }
            }
        }
        Ok(points)
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    index: usize,
    channel: ChannelSpec,
    code: CodeSpec,
    scheme: SchemeSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// The scheme does not fit the packet budget; reported, not fatal.
    Infeasible,
    /// The estimator failed at this point.
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub model: Selector,
    pub channel: ChannelSpec,
    pub code: CodeSpec,
    pub scheme: SchemeSpec,
    pub p: Option<f64>,
    pub p_block: Option<f64>,
    pub simulation: Option<CiEstimate>,
    pub rel_err: Option<f64>,
    pub throughput: Option<f64>,
    pub goodput: Option<f64>,
    pub residual_corr: f64,
    pub seed: Option<u64>,
    pub status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ResultRow {
    fn blank(model: Selector, pt: &Point) -> Self {
        Self {
            model,
            channel: pt.channel,
            code: pt.code,
            scheme: pt.scheme,
            p: None,
            p_block: None,
            simulation: None,
            rel_err: None,
            throughput: None,
            goodput: None,
            residual_corr: residual_correlation(pt.channel.c, pt.scheme.depth),
            seed: None,
            status: RowStatus::Ok,
            note: None,
        }
    }

    fn set_p(&mut self, p: f64) {
        let t = throughput(&self.code, &self.scheme, p);
        self.p = Some(p);
        self.throughput = Some(t.delivered_bits);
        self.goodput = Some(t.goodput);
    }
}

/// SplitMix64 finaliser over `root + index`: per-point simulation seeds.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root.wrapping_add(index).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn evaluate_point(spec: &SweepSpec, pt: &Point, exec: Execution) -> Vec<ResultRow> {
    let mut rows: Vec<ResultRow> = spec.models.iter().map(|m| ResultRow::blank(*m, pt)).collect();

    if let Some(budget) = spec.budget {
        let bits = pt.scheme.packet_bits(&pt.code);
        if bits != budget {
            for r in &mut rows {
                r.status = RowStatus::Infeasible;
                r.note = Some(format!("I*M*n = {bits} does not match the {budget}-bit budget"));
            }
            return rows;
        }
    }

    let fail = |rows: &mut Vec<ResultRow>, pick: &dyn Fn(&Selector) -> bool, msg: String| {
        for r in rows.iter_mut().filter(|r| pick(&r.model)) {
            r.status = RowStatus::Failed;
            r.note = Some(msg.clone());
        }
    };

    let kinds: Vec<ModelKind> = spec.models.iter().filter_map(Selector::analytic).collect();
    if !kinds.is_empty() {
        let results = ibp_from_stats(&pt.channel).and_then(|m| evaluate_models(&kinds, &m, &pt.code, &pt.scheme));
        match results {
            Ok(results) => {
                for res in results {
                    for r in rows.iter_mut().filter(|r| r.model == Selector::Analytic(res.model)) {
                        r.set_p(res.p);
                        r.p_block = Some(res.p_block);
                    }
                }
            }
            Err(e) => fail(&mut rows, &|m| m.analytic().is_some(), e.to_string()),
        }
    }

    if spec.models.contains(&Selector::Simulation) {
        let seed = derive_seed(spec.simulation.seed, pt.index as u64);
        let cfg = SimConfig {
            channel: pt.channel,
            code: pt.code,
            scheme: pt.scheme,
            packets: spec.simulation.packets,
            seed,
            gamma: spec.simulation.gamma,
        };
        match simulate_packets_with(&cfg, exec) {
            Ok(est) => {
                for r in rows.iter_mut() {
                    r.simulation = Some(est);
                    r.seed = Some(seed);
                    if r.model == Selector::Simulation {
                        r.set_p(est.p_hat);
                    }
                }
            }
            Err(e) => fail(&mut rows, &|m| *m == Selector::Simulation, e.to_string()),
        }
    }
    rows
}

fn relative(value: Option<f64>, reference: Option<f64>) -> Option<f64> {
    match (value, reference) {
        (Some(a), Some(b)) if b > 0.0 => Some((a - b) / b),
        _ => None,
    }
}

/// Evaluates every grid point (concurrently when `exec` allows) and returns
/// rows in grid order: code, p_E, c, scheme, then estimator.
pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let points = spec.points()?;
    let per_point = map_indexed(exec, points.len(), |i| evaluate_point(spec, &points[i], exec));
    let mut rows: Vec<ResultRow> = per_point.into_iter().flatten().collect();

    match spec.effective_reference() {
        Reference::Simulation => {
            for r in rows.iter_mut().filter(|r| r.model != Selector::Simulation) {
                r.rel_err = relative(r.p, r.simulation.map(|s| s.p_hat));
            }
        }
        Reference::MaxDepth => {
            let snapshot = rows.clone();
            for r in rows.iter_mut() {
                let deepest = snapshot
                    .iter()
                    .filter(|o| {
                        o.model == r.model && o.code == r.code && o.channel == r.channel && o.status == RowStatus::Ok
                    })
                    .max_by_key(|o| o.scheme.depth);
                r.rel_err = relative(r.p, deepest.and_then(|o| o.p));
            }
        }
        Reference::None | Reference::Auto => {}
    }
    Ok(rows)
}
