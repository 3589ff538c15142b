//! Command-line surface of the simulation laboratory.
//!
//! Subcommands: `track`, `proj-tail`, `drift`, `behrstock`, `triangle`,
//! `gromov`, `dehn`, `decompose`, `fit`. Exit codes: 0 success, 2 config
//! error, 3 hypothesis violation, 4 resource guard.

mod config;
mod output;
mod run;

use clap::{Args, Parser, Subcommand};
use config::{Experiment, ExperimentConfig, OutputFormat};
use rhlab_core::Error;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rhlab",
    about = "Random-walk experiments on free products of elementary groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default, Clone)]
struct CommonArgs {
    /// Group spec, factors joined by `*`: Z^d, Z/m, F_r (e.g. Z^2*Z^2)
    #[arg(long)]
    group: Option<String>,
    /// Comma-separated walk lengths, ascending (e.g. 128,256,512)
    #[arg(long)]
    n: Option<String>,
    /// Trials per n
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; per-trial seeds derive deterministically from it
    #[arg(long)]
    seed: Option<u64>,
    /// Transient depth parameter
    #[arg(long = "R")]
    depth: Option<u64>,
    /// Linear-progress constant for subwalk checks
    #[arg(long = "C3")]
    c3: Option<f64>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// Worker threads; output bytes are worker-count independent
    #[arg(long)]
    workers: Option<usize>,
    /// key=value config file providing defaults for any flag
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Hausdorff tracking of walks against endpoint geodesics
    Track(CommonArgs),
    /// Tail of the maximal peripheral projection of walk endpoints
    #[command(name = "proj-tail")]
    ProjTail(CommonArgs),
    /// Escape rate, optionally with subwalk progress violations
    Drift(CommonArgs),
    /// Cross-projection minima of random points and coset pairs
    Behrstock(CommonArgs),
    /// Thinness of triangles over independent walk triples
    Triangle(CommonArgs),
    /// Distance from the basepoint to geodesics joining walk pairs
    Gromov(CommonArgs),
    /// Average filling area of walk loops closed along the combing
    Dehn(CommonArgs),
    /// Print syllables and the transient/deep decomposition of one word
    Decompose {
        #[command(flatten)]
        common: CommonArgs,
        /// The word to decompose, letters separated by spaces
        #[arg(long)]
        word: Option<String>,
    },
    /// Fit asymptotic shapes to a statistic of a recorded CSV
    Fit {
        #[command(flatten)]
        common: CommonArgs,
        /// CSV file produced by an earlier run
        #[arg(long)]
        input: Option<PathBuf>,
        /// Statistic column to fit
        #[arg(long)]
        statistic: Option<String>,
        /// Comma-separated shapes (log, log2, sqrt_nlog, power, linear)
        #[arg(long)]
        shapes: Option<String>,
    },
}

fn build_config(
    experiment: Experiment,
    common: &CommonArgs,
    word: Option<String>,
    input: Option<PathBuf>,
    statistic: Option<String>,
    shapes: Option<String>,
) -> Result<ExperimentConfig, Error> {
    // defaults < config file < command line
    let mut group: Option<String> = None;
    let mut n_values: Vec<usize> = vec![];
    let mut trials = 1usize;
    let mut master_seed = 0u64;
    let mut depth = 1u64;
    let mut c3: Option<f64> = None;
    let mut format = OutputFormat::Csv;
    let mut workers = 1usize;
    let mut cfg_word = None;
    let mut cfg_statistic = None;
    let mut cfg_shapes: Vec<String> = vec![];
    let mut cfg_input = None;

    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        for (key, value) in config::parse_config_file(&text)? {
            match key.as_str() {
                "group" => group = Some(value),
                "n" => n_values = config::parse_n_list(&value)?,
                "trials" => {
                    trials = value
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad trials `{value}`")))?
                }
                "seed" => {
                    master_seed = value
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad seed `{value}`")))?
                }
                "R" => {
                    depth = value
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad R `{value}`")))?
                }
                "C3" => {
                    c3 = Some(
                        value
                            .parse()
                            .map_err(|_| Error::invalid(format!("bad C3 `{value}`")))?,
                    )
                }
                "format" => format = OutputFormat::parse(&value)?,
                "workers" => {
                    workers = value
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad workers `{value}`")))?
                }
                "word" => cfg_word = Some(value),
                "statistic" => cfg_statistic = Some(value),
                "shapes" => cfg_shapes = value.split(',').map(|s| s.trim().to_string()).collect(),
                "input" => cfg_input = Some(PathBuf::from(value)),
                other => {
                    return Err(Error::invalid(format!("unknown config key `{other}`")));
                }
            }
        }
    }
    if let Some(g) = &common.group {
        group = Some(g.clone());
    }
    if let Some(n) = &common.n {
        n_values = config::parse_n_list(n)?;
    }
    if let Some(t) = common.trials {
        trials = t;
    }
    if let Some(s) = common.seed {
        master_seed = s;
    }
    if let Some(r) = common.depth {
        depth = r;
    }
    if let Some(c) = common.c3 {
        c3 = Some(c);
    }
    if let Some(f) = &common.format {
        format = OutputFormat::parse(f)?;
    }
    if let Some(w) = common.workers {
        workers = w;
    }
    let group = match group {
        Some(g) => g,
        None if experiment == Experiment::Fit => "F_1".to_string(),
        None => return Err(Error::invalid("--group is required")),
    };
    Ok(ExperimentConfig {
        experiment,
        group,
        n_values,
        trials,
        master_seed,
        depth,
        c3,
        out: common.out.clone(),
        format,
        workers,
        word: word.or(cfg_word),
        input: input.or(cfg_input),
        statistic: statistic.or(cfg_statistic),
        shapes: match shapes {
            Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
            None => cfg_shapes,
        },
    })
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::HypothesisViolation(_) => 3,
        Error::ResourceGuard(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let built = match &cli.command {
        Command::Track(c) => build_config(Experiment::Track, c, None, None, None, None),
        Command::ProjTail(c) => build_config(Experiment::ProjTail, c, None, None, None, None),
        Command::Drift(c) => build_config(Experiment::Drift, c, None, None, None, None),
        Command::Behrstock(c) => build_config(Experiment::Behrstock, c, None, None, None, None),
        Command::Triangle(c) => build_config(Experiment::Triangle, c, None, None, None, None),
        Command::Gromov(c) => build_config(Experiment::Gromov, c, None, None, None, None),
        Command::Dehn(c) => build_config(Experiment::Dehn, c, None, None, None, None),
        Command::Decompose { common, word } => build_config(
            Experiment::Decompose,
            common,
            word.clone(),
            None,
            None,
            None,
        ),
        Command::Fit {
            common,
            input,
            statistic,
            shapes,
        } => build_config(
            Experiment::Fit,
            common,
            None,
            input.clone(),
            statistic.clone(),
            shapes.clone(),
        ),
    };
    let config = match built {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    match run::run(&config) {
        Ok(doc) => {
            let mut buf: Vec<u8> = Vec::new();
            let write_result = match config.format {
                OutputFormat::Csv => output::write_csv(&mut buf, &config, &doc),
                OutputFormat::Json => output::write_json(&mut buf, &config, &doc),
            };
            if let Err(e) = write_result {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            match &config.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &buf) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => {
                    if std::io::stdout().write_all(&buf).is_err() {
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
