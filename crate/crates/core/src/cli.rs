//! Command-line front end: argument parsing, the three commands, and CSV/JSON
//! output. The binary is a thin wrapper around [`main_with_args`].
//!
//! Exit codes: 0 when every check passes, 1 on an inequality violation (or a
//! decoding failure with no heavy noise and no truncation), 2 on usage or
//! input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bitspace::{make_code, Code, CodeKind};
use crate::boolfn::RenyiOrder;
use crate::corpus::standard_corpus;
use crate::entropy_analysis::{entropy_report, EntropyReport, Mode};
use crate::error::{check_probability, invalid, Result};
use crate::inequalities::{Battery, BatterySummary, Checker, SlackRow};
use crate::listdecode::{rs22_lower_bound, simulate, theoretical_list_size, DecoderConfig};

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_EPS_GRID: [f64; 9] = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45];
pub const DEFAULT_ETA_GRID: [f64; 4] = [0.1, 0.25, 0.5, 0.75];
pub const DEFAULT_Q_GRID: [u32; 3] = [2, 3, 4];
pub const DEFAULT_DELTA: f64 = 0.1;

#[derive(Debug, Parser)]
#[command(
    name = "noisy-codes",
    version,
    about = "Entropy of binary codes over BSC/BEC, inequality checks, and list-decoding simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact (or Monte Carlo) conditional and marginal entropies.
    Entropy(RunConfig),
    /// Inequality battery; exits 1 if any check fails.
    Verify(RunConfig),
    /// List-decoding simulation over BSC(eps).
    DecodeSim(RunConfig),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Options shared by every command. Grids are comma-separated.
#[derive(Clone, Debug, Default, Args)]
pub struct RunConfig {
    /// Code: a family such as `repetition(5)` or `reed_muller(1,3)`,
    /// `generator:PATH`, `codewords:PATH`, or `corpus`. Repeatable.
    #[arg(long = "code")]
    pub codes: Vec<String>,
    /// BSC crossover probabilities.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// BEC erasure probabilities.
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,
    /// Rényi orders (`1`, `2`, ..., `inf`).
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<String>,
    /// Slack exponents for the list size (decode-sim).
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    /// Subset densities for E_S H_q(X_S).
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    /// List caps for decode-sim; defaults to the theoretical list size.
    #[arg(long = "list-cap", value_delimiter = ',')]
    pub list_cap: Vec<usize>,
    /// Monte Carlo trials (default 10000).
    #[arg(long)]
    pub trials: Option<u64>,
    /// Seed for every sampled quantity.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write rows here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        for &e in &self.eps {
            check_probability("eps", e)?;
        }
        for &e in &self.eta {
            check_probability("eta", e)?;
        }
        for &l in &self.lambda {
            check_probability("lambda", l)?;
        }
        if let Some(d) = self.delta.iter().find(|d| !(**d > 0.0)) {
            return Err(invalid(format!("delta = {d} must be positive")));
        }
        if self.trials == Some(0) {
            return Err(invalid("trials must be at least 1"));
        }
        if self.list_cap.contains(&0) {
            return Err(invalid("list cap must be at least 1"));
        }
        Ok(())
    }

    fn trials(&self) -> u64 {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }

    /// Codes named by `--code`, or the standard corpus when none is given.
    pub fn load_codes(&self) -> Result<Vec<Code>> {
        if self.codes.is_empty() {
            return standard_corpus();
        }
        let mut out = Vec::new();
        for spec in &self.codes {
            out.extend(load_code_spec(spec)?);
        }
        Ok(out)
    }
}

/// Resolves one `--code` value.
pub fn load_code_spec(spec: &str) -> Result<Vec<Code>> {
    let spec = spec.trim();
    if spec == "corpus" {
        standard_corpus()
    } else if let Some(path) = spec.strip_prefix("generator:") {
        Ok(vec![Code::read_generator_file(Path::new(path))?])
    } else if let Some(path) = spec.strip_prefix("codewords:") {
        Ok(vec![Code::read_codeword_file(Path::new(path))?])
    } else {
        Ok(vec![make_code(spec.parse::<CodeKind>()?)?])
    }
}

fn optional_grid(values: &[f64]) -> Vec<Option<f64>> {
    if values.is_empty() {
        vec![None]
    } else {
        values.iter().copied().map(Some).collect()
    }
}

/// Rounds to 12 significant digits, the precision of every emitted number.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn sig12_opt(x: Option<f64>) -> Option<f64> {
    x.map(sig12)
}

/// Rows rounded for output.
pub trait OutputRow: Serialize {
    fn rounded(&self) -> Self;
}

impl OutputRow for EntropyReport {
    fn rounded(&self) -> Self {
        Self {
            log_size: sig12(self.log_size),
            rate: sig12(self.rate),
            eps: sig12_opt(self.eps),
            eta: sig12_opt(self.eta),
            lambda: sig12_opt(self.lambda),
            h_x: sig12(self.h_x),
            h_x_given_ybsc: sig12_opt(self.h_x_given_ybsc),
            h_x_given_ybec: sig12_opt(self.h_x_given_ybec),
            bec_gap_per_n: sig12_opt(self.bec_gap_per_n),
            e_s_hq_xs: sig12_opt(self.e_s_hq_xs),
            std_err: sig12_opt(self.std_err),
            ..self.clone()
        }
    }
}

impl OutputRow for SlackRow {
    fn rounded(&self) -> Self {
        Self {
            eps: sig12_opt(self.eps),
            eta: sig12_opt(self.eta),
            lambda: sig12_opt(self.lambda),
            lhs: sig12_opt(self.lhs),
            rhs: sig12_opt(self.rhs),
            slack: sig12_opt(self.slack),
            ..self.clone()
        }
    }
}

/// One decode-sim output row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeRow {
    pub code: String,
    pub n: usize,
    pub rate: f64,
    pub eps: f64,
    pub delta: f64,
    pub list_cap: u64,
    pub radius: f64,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub failures: u64,
    pub truncations: u64,
    pub heavy_noise: u64,
    pub unexplained_failures: u64,
    pub error_rate: f64,
    pub std_err: f64,
    pub list_size_min: u64,
    pub list_size_mean: f64,
    pub list_size_max: u64,
    pub theoretical_list_size: u64,
    pub rs22_exponent: f64,
    pub rs22_in_hypothesis: bool,
}

impl OutputRow for DecodeRow {
    fn rounded(&self) -> Self {
        Self {
            rate: sig12(self.rate),
            eps: sig12(self.eps),
            delta: sig12(self.delta),
            radius: sig12(self.radius),
            error_rate: sig12(self.error_rate),
            std_err: sig12(self.std_err),
            list_size_mean: sig12(self.list_size_mean),
            rs22_exponent: sig12(self.rs22_exponent),
            ..self.clone()
        }
    }
}

/// One row per (code, ε, η, q, λ).
pub fn cmd_entropy(cfg: &RunConfig) -> Result<Vec<EntropyReport>> {
    cfg.validate()?;
    let codes = cfg.load_codes()?;
    let orders: Vec<RenyiOrder> = if cfg.q.is_empty() {
        vec![RenyiOrder::SHANNON]
    } else {
        cfg.q.iter().map(|q| q.parse()).collect::<Result<_>>()?
    };
    let fallback = cfg.seed.map(|seed| Mode::MonteCarlo {
        trials: cfg.trials(),
        seed,
    });
    let mut rows = Vec::new();
    for code in &codes {
        for eps in optional_grid(&cfg.eps) {
            for eta in optional_grid(&cfg.eta) {
                for &q in &orders {
                    for lambda in optional_grid(&cfg.lambda) {
                        rows.push(entropy_report(code, eps, eta, q, lambda, fallback)?);
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<(Vec<SlackRow>, BatterySummary)> {
    cmd_verify_with(cfg, Checker::default())
}

/// [`cmd_verify`] with a caller-chosen noise operator.
pub fn cmd_verify_with(
    cfg: &RunConfig,
    checker: Checker,
) -> Result<(Vec<SlackRow>, BatterySummary)> {
    cfg.validate()?;
    let codes = cfg.load_codes()?;
    let q = if cfg.q.is_empty() {
        DEFAULT_Q_GRID.to_vec()
    } else {
        cfg.q
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| invalid(format!("verify needs integer orders q ≥ 2, got {s:?}")))
            })
            .collect::<Result<_>>()?
    };
    let battery = Battery {
        eps: if cfg.eps.is_empty() {
            DEFAULT_EPS_GRID.to_vec()
        } else {
            cfg.eps.clone()
        },
        eta: if cfg.eta.is_empty() {
            DEFAULT_ETA_GRID.to_vec()
        } else {
            cfg.eta.clone()
        },
        q,
        checker,
    };
    battery.run(&codes)
}

/// One row per (code, ε, δ, list cap). Requires a seed.
pub fn cmd_decode_sim(cfg: &RunConfig) -> Result<Vec<DecodeRow>> {
    cfg.validate()?;
    let seed = cfg
        .seed
        .ok_or_else(|| invalid("decode-sim requires --seed"))?;
    if cfg.eps.is_empty() {
        return Err(invalid("decode-sim requires --eps"));
    }
    let codes = cfg.load_codes()?;
    let deltas = if cfg.delta.is_empty() {
        vec![DEFAULT_DELTA]
    } else {
        cfg.delta.clone()
    };
    let trials = cfg.trials();
    let mut rows = Vec::new();
    for code in &codes {
        for &eps in &cfg.eps {
            for &delta in &deltas {
                let theoretical = theoretical_list_size(code.rate(), eps, delta, code.n())?;
                let caps: Vec<usize> = if cfg.list_cap.is_empty() {
                    vec![theoretical.min(code.size() as u64).max(1) as usize]
                } else {
                    cfg.list_cap.clone()
                };
                let bound = rs22_lower_bound(code.rate(), eps, code.n())?;
                for cap in caps {
                    let dc = DecoderConfig::new(code.n(), eps, delta, cap)?;
                    let s = simulate(code, &dc, trials, seed)?;
                    rows.push(DecodeRow {
                        code: code.id().to_string(),
                        n: code.n(),
                        rate: code.rate(),
                        eps,
                        delta,
                        list_cap: cap as u64,
                        radius: dc.radius(),
                        trials: s.trials,
                        seed,
                        successes: s.successes,
                        failures: s.failures,
                        truncations: s.truncations,
                        heavy_noise: s.heavy_noise,
                        unexplained_failures: s.unexplained_failures,
                        error_rate: s.error_rate,
                        std_err: s.std_err,
                        list_size_min: s.list_size_min,
                        list_size_mean: s.list_size_mean,
                        list_size_max: s.list_size_max,
                        theoretical_list_size: theoretical,
                        rs22_exponent: bound.exponent,
                        rs22_in_hypothesis: bound.in_hypothesis,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Writes rows as CSV with a header, or as a JSON array of flat records.
pub fn write_rows<T: OutputRow, W: Write>(rows: &[T], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r.rounded())?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rounded: Vec<T> = rows.iter().map(OutputRow::rounded).collect();
            serde_json::to_writer_pretty(&mut out, &rounded)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn emit<T: OutputRow>(rows: &[T], cfg: &RunConfig) -> Result<()> {
    let mut buf = Vec::new();
    write_rows(rows, cfg.format, &mut buf)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

pub fn summary_line(s: &BatterySummary) -> String {
    format!(
        "summary: rows={} failures={} skipped={} min_slack={} argmin={}",
        s.rows,
        s.failures,
        s.skipped,
        s.min_slack
            .map_or("none".to_string(), |m| format!("{}", sig12(m))),
        s.argmin.as_deref().unwrap_or("none"),
    )
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Entropy(cfg) => {
            emit(&cmd_entropy(cfg)?, cfg)?;
            Ok(0)
        }
        Command::Verify(cfg) => {
            let (rows, summary) = cmd_verify(cfg)?;
            emit(&rows, cfg)?;
            let line = summary_line(&summary);
            if cfg.out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
            Ok(if summary.all_pass() { 0 } else { 1 })
        }
        Command::DecodeSim(cfg) => {
            let rows = cmd_decode_sim(cfg)?;
            emit(&rows, cfg)?;
            Ok(if rows.iter().any(|r| r.unexplained_failures > 0) {
                1
            } else {
                0
            })
        }
    }
}

/// Parses arguments, runs, and maps every outcome onto the exit-code contract.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let mut full = vec!["noisy-codes", "entropy"];
        full.extend_from_slice(args);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Entropy(c) => c,
            _ => unreachable!(),
        }
    }

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(0.1 + 0.2), 0.3);
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig12(-123456.7890123456), -123456.789012);
        assert_eq!(sig12(0.0), 0.0);
    }

    #[test]
    fn grids_parse_as_comma_lists() {
        let c = cfg(&[
            "--code",
            "reed_muller(1,3)",
            "--code",
            "hamming74",
            "--eps",
            "0.1,0.2",
            "--q",
            "1,inf",
        ]);
        assert_eq!(c.codes, vec!["reed_muller(1,3)", "hamming74"]);
        assert_eq!(c.eps, vec![0.1, 0.2]);
        assert_eq!(c.q, vec!["1", "inf"]);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn entropy_rows() {
        let rows = cmd_entropy(&cfg(&["--code", "repetition(3)", "--eps", "0.1"])).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].h_x_given_ybsc.unwrap() > 0.0);
        assert_eq!(rows[0].h_x_given_ybec, None);

        let rows = cmd_entropy(&cfg(&["--code", "repetition(3)", "--eta", "0.25,0.5"])).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows
            .iter()
            .all(|r| r.h_x_given_ybsc.is_none() && r.h_x_given_ybec.is_some()));
        assert!((rows[1].h_x_given_ybec.unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn invalid_grids_are_rejected() {
        assert!(cmd_entropy(&cfg(&["--code", "hamming74", "--eps", "1.5"])).is_err());
        assert!(cmd_entropy(&cfg(&["--code", "golay24"])).is_err());
        assert!(cmd_decode_sim(&cfg(&["--code", "hamming74", "--eps", "0.1"])).is_err());
        assert!(cmd_decode_sim(&cfg(&[
            "--code",
            "hamming74",
            "--eps",
            "0.5",
            "--seed",
            "1"
        ]))
        .is_err());
        assert!(cmd_verify(&cfg(&["--code", "hamming74", "--q", "2.5"])).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["noisy-codes", "bogus"]), 2);
        assert_eq!(main_with_args(["noisy-codes", "entropy", "--eps", "x"]), 2);
        assert_eq!(
            main_with_args(["noisy-codes", "entropy", "--code", "nope(1)"]),
            2
        );
    }
}
