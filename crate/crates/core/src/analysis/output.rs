use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mc::GENERATOR;

use super::config::ExperimentConfig;
use super::sweep::ResultRow;

pub const CSV_HEADER: &str = "model,p_E,c,n,k,l,I,M,p,p_hat,ci_lo,ci_hi,rel_err,throughput,residual_corr,seed";

const SIG_DIGITS: i32 = 12;

/// Decimal rendering with 12 significant digits, trailing zeros dropped;
/// scientific notation outside `1e-5 <= |x| < 1e12`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..SIG_DIGITS).contains(&exp) {
        let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

fn csv_line(r: &ResultRow) -> String {
    let sim = r.simulation;
    [
        r.model.to_string(),
        format_sig(r.channel.p_e),
        format_sig(r.channel.c),
        r.code.n.to_string(),
        r.code.k.to_string(),
        r.code.l.to_string(),
        r.scheme.depth.to_string(),
        r.scheme.blocks.to_string(),
        opt(r.p),
        opt(sim.map(|s| s.p_hat)),
        opt(sim.map(|s| s.lo)),
        opt(sim.map(|s| s.hi)),
        opt(r.rel_err),
        opt(r.throughput),
        format_sig(r.residual_corr),
        r.seed.map(|s| s.to_string()).unwrap_or_default(),
    ]
    .join(",")
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", csv_line(r))?;
    }
    Ok(())
}

pub fn csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Structured result file: the full configuration, the generator identity
/// and every row.
#[derive(Debug, Serialize)]
pub struct EchoDocument<'a> {
    pub config: &'a ExperimentConfig,
    pub generator: &'a str,
    pub rows: &'a [ResultRow],
}

pub fn echo_string(config: &ExperimentConfig, rows: &[ResultRow]) -> String {
    let doc = EchoDocument {
        config,
        generator: GENERATOR,
        rows,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("rows serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the CSV and/or echo file named in `config.output`.
pub fn emit_results(config: &ExperimentConfig, rows: &[ResultRow]) -> Result<()> {
    if let Some(path) = &config.output.csv {
        write_file(path, &csv_string(rows))?;
    }
    if let Some(path) = &config.output.echo {
        write_file(path, &echo_string(config, rows))?;
    }
    Ok(())
}
