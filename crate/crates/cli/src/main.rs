mod args;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::Parser;
use interleave_core::analysis::{
    csv_string, emit_results, format_sig, optimize_depth, run_sweep, ExperimentConfig, RowStatus, Selector, SweepSpec,
};
use interleave_core::{ibp_from_stats, models, oracle, ChannelSpec, Execution, ModelKind, SchemeSpec};

use args::{Cli, Command, OptimizeArgs, OracleArgs, SweepArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Analyze(a) => sweep(&a, Verb::Analyze),
        Command::Simulate(a) => sweep(&a, Verb::Simulate),
        Command::Compare(a) => sweep(&a, Verb::Compare),
        Command::Optimize(a) => optimize(&a),
        Command::Oracle(a) => run_oracle(&a),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Verb {
    Analyze,
    Simulate,
    Compare,
}

fn select_models(cfg: &mut ExperimentConfig, verb: Verb) -> Result<()> {
    let analytic: Vec<Selector> = cfg.models.iter().copied().filter(|m| m.analytic().is_some()).collect();
    cfg.models = match verb {
        Verb::Analyze => {
            if analytic.is_empty() {
                bail!("analyze needs at least one analytical model");
            }
            analytic
        }
        Verb::Simulate => vec![Selector::Simulation],
        Verb::Compare => {
            if analytic.is_empty() {
                bail!("compare needs at least one analytical model");
            }
            analytic.into_iter().chain([Selector::Simulation]).collect()
        }
    };
    Ok(())
}

fn sweep(args: &SweepArgs, verb: Verb) -> Result<ExitCode> {
    let mut cfg = args.resolve()?;
    select_models(&mut cfg, verb)?;
    let spec = SweepSpec::from_config(&cfg)?;
    let rows = run_sweep(&spec, Execution::default())?;

    emit_results(&cfg, &rows)?;
    if cfg.output.csv.is_none() {
        std::io::stdout().lock().write_all(csv_string(&rows).as_bytes())?;
    }

    let failed: Vec<_> = rows.iter().filter(|r| r.status == RowStatus::Failed).collect();
    for r in &failed {
        eprintln!(
            "failed: {} p_E={} c={} code=({},{},{}) I={} M={}: {}",
            r.model,
            r.channel.p_e,
            r.channel.c,
            r.code.n,
            r.code.k,
            r.code.l,
            r.scheme.depth,
            r.scheme.blocks,
            r.note.as_deref().unwrap_or("")
        );
    }
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn optimize(args: &OptimizeArgs) -> Result<ExitCode> {
    let cfg = args.grid.resolve()?;
    let threshold = args.threshold.unwrap_or(cfg.decorrelation_threshold);
    let mut out = String::from("p_E,c,n,k,l,rank,I,M,p,residual_corr,decorrelated\n");
    for code in &cfg.codes {
        let budget = match (cfg.budget, &cfg.schemes) {
            (Some(b), _) => b,
            (None, Some(s)) if !s.is_empty() => s[0].packet_bits(code),
            _ => bail!("optimize needs a packet budget"),
        };
        for &p_e in &cfg.channel.p_e {
            for &c in &cfg.channel.c {
                let channel = ChannelSpec {
                    p_e,
                    c,
                    slot: cfg.channel.slot,
                };
                let ranked = optimize_depth(budget, code, &channel, args.model, threshold)?;
                for (rank, cand) in ranked.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{},{}\n",
                        format_sig(p_e),
                        format_sig(c),
                        code.n,
                        code.k,
                        code.l,
                        rank + 1,
                        cand.scheme.depth,
                        cand.scheme.blocks,
                        format_sig(cand.p),
                        format_sig(cand.residual_corr),
                        cand.decorrelated
                    ));
                }
            }
        }
    }
    std::io::stdout().lock().write_all(out.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(args: &OracleArgs) -> Result<ExitCode> {
    let channel = ChannelSpec::new(args.p_e, args.c)?;
    let scheme = SchemeSpec::new(args.depth, args.blocks)?;
    let fsmc = ibp_from_stats(&channel)?;
    let exact_block = oracle::block_error(&fsmc, &args.code, args.depth)?;
    let exact = oracle::packet_error(&fsmc, &args.code, &scheme)?;

    let mut out = String::from("model,p_block,p,rel_err\n");
    out.push_str(&format!("oracle,{},{},\n", format_sig(exact_block), format_sig(exact)));
    for r in models::evaluate_models(&ModelKind::ALL, &fsmc, &args.code, &scheme)? {
        let rel = if exact > 0.0 {
            format_sig((r.p - exact) / exact)
        } else {
            String::new()
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.model,
            format_sig(r.p_block),
            format_sig(r.p),
            rel
        ));
    }
    std::io::stdout().lock().write_all(out.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}
