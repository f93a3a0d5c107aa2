use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tlcanon::harness::{self, cache, Experiment, ExperimentConfig, Format, HarnessError, MultBasis};
use tlcanon::hecke_kl::DEFAULT_BUDGET;

/// Canonical bases of generalized Temperley-Lieb algebras.
///
/// Exit status: 0 when the verdict matches the expected outcome, 1 when it
/// does not, 2 on usage or resource errors.
#[derive(Parser, Debug)]
#[command(name = "tlcanon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Graph: A3, D4, E6, F4, H3, I2:5, affA3, or an inline JSON graph
    #[arg(long, short)]
    graph: String,

    /// Length cap on enumerated elements (required for infinite types)
    #[arg(long)]
    cap: Option<usize>,

    /// Output format: json, csv or latex
    #[arg(long, short, default_value = "json", value_parser = parse_format)]
    format: Format,

    /// Directory for cached IC tables
    #[arg(long, env = cache::CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,

    /// Largest group order allowed for Hecke algebra work
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,

    /// Write the report here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List group elements with lengths and full commutativity
    Group(Common),
    /// Multiply two elements in the t, monomial or IC basis
    Mult {
        #[command(flatten)]
        common: Common,
        /// First factor as comma-separated node labels ("e" for the identity)
        #[arg(value_parser = parse_word)]
        x: Word,
        /// Second factor
        #[arg(value_parser = parse_word)]
        y: Word,
        /// Basis: t, monomial or ic
        #[arg(long, default_value = "t", value_parser = parse_basis)]
        basis: MultBasis,
    },
    /// Solve and verify the IC basis
    Ic(Common),
    /// Compare the monomial basis with the IC basis
    MonomialCheck(Common),
    /// Look for monomial basis elements that are not IC elements
    Counterexample(Common),
    /// Check that IC structure constants have nonnegative coefficients
    Positivity(Common),
    /// Kazhdan-Lusztig elements in the kernel of the Hecke algebra projection
    KlKernel(Common),
    /// Transition matrices between the m' and IC bases
    Transitions(Common),
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

fn parse_basis(s: &str) -> Result<MultBasis, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

/// A word of node labels.
#[derive(Debug, Clone)]
struct Word(Vec<u32>);

fn parse_word(s: &str) -> Result<Word, String> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Ok(Word(Vec::new()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .trim_start_matches('s')
                .parse::<u32>()
                .map_err(|e| format!("{t:?}: {e}"))
        })
        .collect::<Result<_, _>>()
        .map(Word)
}

fn config(experiment: Experiment, common: &Common) -> ExperimentConfig {
    ExperimentConfig {
        cap: common.cap,
        format: common.format,
        cache_dir: common.cache_dir.clone(),
        budget: common.budget,
        ..ExperimentConfig::new(common.graph.clone(), experiment)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, output) = match &cli.command {
        Command::Group(c) => (config(Experiment::Group, c), &c.output),
        Command::Mult { common, x, y, basis } => {
            let mut cfg = config(Experiment::Mult, common);
            cfg.operands = vec![x.0.clone(), y.0.clone()];
            cfg.basis = *basis;
            (cfg, &common.output)
        }
        Command::Ic(c) => (config(Experiment::Ic, c), &c.output),
        Command::MonomialCheck(c) => (config(Experiment::MonomialCheck, c), &c.output),
        Command::Counterexample(c) => (config(Experiment::Counterexample, c), &c.output),
        Command::Positivity(c) => (config(Experiment::Positivity, c), &c.output),
        Command::KlKernel(c) => (config(Experiment::KlKernel, c), &c.output),
        Command::Transitions(c) => (config(Experiment::Transitions, c), &c.output),
    };
    match execute(&cfg, output.as_deref()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cfg: &ExperimentConfig, output: Option<&std::path::Path>) -> Result<bool, HarnessError> {
    let report = harness::run(cfg)?;
    let text = harness::export(&report, cfg.format)?;
    match output {
        Some(path) => cache::write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    let v = &report.verdict;
    eprintln!(
        "{} {}: {} (expected {:?}, holds {}) in {:.3}s, cache {:?}",
        if v.matches() { "MATCH" } else { "MISMATCH" },
        report.experiment,
        v.claim,
        v.expected,
        v.holds,
        report.elapsed.as_secs_f64(),
        report.cache,
    );
    Ok(v.matches())
}
