use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use interleave_core::analysis::{ExperimentConfig, Reference, Selector};
use interleave_core::{CodeSpec, ModelKind, SchemeSpec};

#[derive(Debug, Parser)]
#[command(
    name = "interleave",
    version,
    about = "Packet error analysis for interleaved block codes on burst-error channels"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the analytical models over a grid.
    Analyze(SweepArgs),
    /// Estimate packet loss by simulation over a grid.
    Simulate(SweepArgs),
    /// Analytical models and simulation side by side, with relative errors.
    Compare(SweepArgs),
    /// Rank the (I, M) pairs of a packet budget by packet error probability.
    Optimize(OptimizeArgs),
    /// Exact packet error probability by enumeration (small instances only).
    Oracle(OracleArgs),
}

/// Grid and output flags. Each flag overrides the matching config key.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// JSON experiment file; defaults to the built-in n = 63 grid.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Bit error probabilities, comma separated.
    #[arg(long = "p-e", value_delimiter = ',')]
    pub p_e: Option<Vec<f64>>,

    /// Lag-1 bit error correlations, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<f64>>,

    /// Code as n,k,l. Repeat for several codes.
    #[arg(long = "code", value_parser = parse_code)]
    pub codes: Vec<CodeSpec>,

    /// Packet size in bits.
    #[arg(long)]
    pub budget: Option<usize>,

    /// Explicit interleaving pairs as IxM, comma separated (e.g. 2x8,16x1).
    #[arg(long, value_delimiter = ',', value_parser = parse_scheme)]
    pub schemes: Option<Vec<SchemeSpec>>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub grid: GridArgs,

    /// Estimators: model1, model2, model3, baseline, mc.
    #[arg(long, value_delimiter = ',')]
    pub models: Option<Vec<Selector>>,

    /// Simulated packets per grid point.
    #[arg(long)]
    pub packets: Option<u64>,

    /// Root seed; each grid point derives its own.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Confidence level of the simulation intervals.
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Relative-error reference: auto, none, simulation, max_depth.
    #[arg(long, value_parser = parse_reference)]
    pub reference: Option<Reference>,

    /// CSV output path (stdout when absent).
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Config echo output path.
    #[arg(long)]
    pub echo: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub grid: GridArgs,

    /// Analytical model used for ranking.
    #[arg(long, default_value = "model3")]
    pub model: ModelKind,

    /// Residual correlation below which a depth counts as decorrelated.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Code as n,k,l.
    #[arg(long, value_parser = parse_code)]
    pub code: CodeSpec,

    /// Interleaving depth I.
    #[arg(long)]
    pub depth: usize,

    /// Interleaved blocks per packet M.
    #[arg(long, default_value_t = 1)]
    pub blocks: usize,

    #[arg(long = "p-e")]
    pub p_e: f64,

    #[arg(long)]
    pub c: f64,
}

fn parse_code(s: &str) -> Result<CodeSpec> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("code `{s}` is not n,k,l"))?;
    let [n, k, l] = parts[..] else {
        bail!("code `{s}` is not n,k,l");
    };
    Ok(CodeSpec::new(n, k, l)?)
}

fn parse_scheme(s: &str) -> Result<SchemeSpec> {
    let (i, m) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("scheme `{s}` is not IxM"))?;
    Ok(SchemeSpec::new(i.trim().parse()?, m.trim().parse()?)?)
}

fn parse_reference(s: &str) -> Result<Reference> {
    Ok(match s {
        "auto" => Reference::Auto,
        "none" => Reference::None,
        "simulation" | "mc" => Reference::Simulation,
        "max_depth" | "max-depth" => Reference::MaxDepth,
        _ => bail!("unknown reference `{s}`"),
    })
}

impl GridArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(p) = &self.p_e {
            cfg.channel.p_e = p.clone();
        }
        if let Some(c) = &self.c {
            cfg.channel.c = c.clone();
        }
        if !self.codes.is_empty() {
            cfg.codes = self.codes.clone();
        }
        if let Some(b) = self.budget {
            cfg.budget = Some(b);
            if self.schemes.is_none() {
                cfg.schemes = None;
            }
        }
        if let Some(s) = &self.schemes {
            cfg.schemes = Some(s.clone());
            if self.budget.is_none() {
                cfg.budget = None;
            }
        }
        Ok(cfg)
    }
}

impl SweepArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = self.grid.resolve()?;
        if let Some(m) = &self.models {
            cfg.models = m.clone();
        }
        if let Some(n) = self.packets {
            cfg.simulation.packets = n;
        }
        if let Some(s) = self.seed {
            cfg.simulation.seed = s;
        }
        if let Some(g) = self.gamma {
            cfg.simulation.gamma = g;
        }
        if let Some(r) = self.reference {
            cfg.reference = r;
        }
        if self.csv.is_some() {
            cfg.output.csv = self.csv.clone();
        }
        if self.echo.is_some() {
            cfg.output.echo = self.echo.clone();
        }
        Ok(cfg)
    }
}
