//! Experiment configuration: defaults, key=value config files and
//! command-line overrides, validated before any sampling happens.

use rhlab_core::{Error, FreeProduct, GroupSpec, Result};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Track,
    ProjTail,
    Drift,
    Behrstock,
    Triangle,
    Gromov,
    Dehn,
    Decompose,
    Fit,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Track => "track",
            Experiment::ProjTail => "proj-tail",
            Experiment::Drift => "drift",
            Experiment::Behrstock => "behrstock",
            Experiment::Triangle => "triangle",
            Experiment::Gromov => "gromov",
            Experiment::Dehn => "dehn",
            Experiment::Decompose => "decompose",
            Experiment::Fit => "fit",
        }
    }

    /// Experiments that require the non-trivial relative-hyperbolicity
    /// hypotheses before any sampling.
    pub fn needs_nontrivial_rh(self) -> bool {
        matches!(
            self,
            Experiment::Track
                | Experiment::ProjTail
                | Experiment::Triangle
                | Experiment::Gromov
                | Experiment::Dehn
        )
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }

    pub fn parse(s: &str) -> Result<OutputFormat> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::invalid(format!("unknown format `{s}`"))),
        }
    }
}

/// Effective configuration of one run, echoed into the output header.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub group: String,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub depth: u64,
    pub c3: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub workers: usize,
    /// `decompose` only: the word to decompose.
    pub word: Option<String>,
    /// `fit` only: input CSV, statistic and shapes.
    pub input: Option<PathBuf>,
    pub statistic: Option<String>,
    pub shapes: Vec<String>,
}

impl ExperimentConfig {
    /// Validate everything that must hold before sampling starts.
    pub fn validate(&self) -> Result<FreeProduct> {
        let spec = GroupSpec::parse(&self.group)?;
        let group = FreeProduct::new(spec);
        match self.experiment {
            Experiment::Decompose => {
                if self.word.is_none() {
                    return Err(Error::invalid("decompose needs --word"));
                }
            }
            Experiment::Fit => {
                if self.input.is_none() || self.statistic.is_none() {
                    return Err(Error::invalid("fit needs --input and --statistic"));
                }
            }
            _ => {
                if self.n_values.is_empty() {
                    return Err(Error::invalid("at least one n value is required"));
                }
                if !self.n_values.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::invalid("n values must be strictly ascending"));
                }
                if self.trials < 1 {
                    return Err(Error::invalid("trials must be at least 1"));
                }
            }
        }
        if self.workers < 1 {
            return Err(Error::invalid("workers must be at least 1"));
        }
        if self.experiment == Experiment::Behrstock && group.spec().factors().len() < 2 {
            return Err(Error::invalid(
                "behrstock needs at least 2 factors (a single-factor group has one peripheral coset)",
            ));
        }
        if self.experiment.needs_nontrivial_rh() {
            group.spec().nontrivial_rh()?;
        }
        if self.experiment == Experiment::Dehn {
            rhlab_core::dehn::supports_filling(&group)?;
        }
        Ok(group)
    }

    /// One-line echo for output headers; key order is fixed. The worker
    /// count is deliberately left out: it affects scheduling only, and
    /// outputs are guaranteed identical across worker counts.
    pub fn echo(&self) -> String {
        let c3 = self
            .c3
            .map(|v| format!("{v:.6}"))
            .unwrap_or_else(|| "-".into());
        let mut line = format!(
            "experiment={} group={} n={} trials={} seed={} R={} C3={} format={}",
            self.experiment,
            self.group,
            self.n_values
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(","),
            self.trials,
            self.master_seed,
            self.depth,
            c3,
            self.format.name(),
        );
        if let Some(w) = &self.word {
            line.push_str(&format!(" word={w:?}"));
        }
        if let Some(s) = &self.statistic {
            line.push_str(&format!(" statistic={s}"));
        }
        line
    }
}

/// Parse a plain-text `key=value` config file (one pair per line, `#`
/// comments allowed). Returns the pairs in file order.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::parse(
                lineno + 1,
                format!("expected key=value, got `{line}`"),
            ));
        };
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad n value `{t}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(experiment: Experiment) -> ExperimentConfig {
        ExperimentConfig {
            experiment,
            group: "Z^2*Z^2".into(),
            n_values: vec![128, 256],
            trials: 2,
            master_seed: 7,
            depth: 1,
            c3: None,
            out: None,
            format: OutputFormat::Csv,
            workers: 1,
            word: None,
            input: None,
            statistic: None,
            shapes: vec![],
        }
    }

    #[test]
    fn valid_track_config() {
        assert!(base(Experiment::Track).validate().is_ok());
    }

    #[test]
    fn track_rejects_virtually_cyclic_groups() {
        let mut c = base(Experiment::Track);
        c.group = "Z/2*Z/2".into();
        match c.validate() {
            Err(Error::HypothesisViolation(_)) => {}
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
        c.group = "Z^2*Z/3".into();
        assert!(matches!(c.validate(), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn drift_allows_single_factor_groups() {
        let mut c = base(Experiment::Drift);
        c.group = "F_2".into();
        assert!(c.validate().is_ok());
    }

    #[test]
    fn n_values_must_ascend() {
        let mut c = base(Experiment::Track);
        c.n_values = vec![256, 128];
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_file_parsing() {
        let text = "# comment\n group = Z^2*Z^2 \ntrials=5\n\nseed=9\n";
        let kv = parse_config_file(text).unwrap();
        assert_eq!(
            kv,
            vec![
                ("group".into(), "Z^2*Z^2".into()),
                ("trials".into(), "5".into()),
                ("seed".into(), "9".into())
            ]
        );
        assert!(parse_config_file("nonsense line").is_err());
    }
}
