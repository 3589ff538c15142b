//! Aggregation, bootstrap intervals, asymptotic-shape fits and tail fits.
//!
//! Shape fits are constrained one-parameter least squares `y = C·f(n)`
//! (no intercept), matching the pure `O(f(n))` form of the claims they
//! check; `r²` is computed against the zero-intercept baseline `1 - SS_res
//! / Σy²` for every shape so the numbers are comparable across models.

use crate::error::{Error, Result};
use crate::walk::rng_from_seed;
use rand_chacha::rand_core::RngCore;
use std::fmt;

/// Mean with a 95% percentile-bootstrap interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

const BOOTSTRAP_RESAMPLES: usize = 1000;
const DEFAULT_BOOTSTRAP_SEED: u64 = 0x5eed_b007;

/// Bootstrap summary with the default deterministic seed.
pub fn summarize(values: &[f64]) -> Result<Summary> {
    summarize_seeded(values, DEFAULT_BOOTSTRAP_SEED)
}

/// Bootstrap summary; deterministic given the seed.
pub fn summarize_seeded(values: &[f64], seed: u64) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::InsufficientData("summary of an empty sample".into()));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut rng = rng_from_seed(seed);
    let mut means = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let mut acc = 0.0;
        for _ in 0..n {
            let idx = (rng.next_u64() % n as u64) as usize;
            acc += values[idx];
        }
        means.push(acc / n as f64);
    }
    means.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pick = |q: f64| means[(q * (BOOTSTRAP_RESAMPLES - 1) as f64).round() as usize];
    Ok(Summary {
        mean,
        ci_low: pick(0.025),
        ci_high: pick(0.975),
    })
}

/// The asymptotic shapes the experiments discriminate between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitShape {
    /// `y = C·ln n`
    Log,
    /// `y = C·(ln n)²`
    LogSquared,
    /// `y = C·sqrt(n·ln n)`
    SqrtNLog,
    /// `y = C·n^alpha` with `alpha` fitted on log–log scale
    Power,
    /// `y = C·n`
    Linear,
}

impl FitShape {
    pub fn parameter_count(self) -> usize {
        match self {
            FitShape::Power => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FitShape::Log => "log",
            FitShape::LogSquared => "log2",
            FitShape::SqrtNLog => "sqrt_nlog",
            FitShape::Power => "power",
            FitShape::Linear => "linear",
        }
    }

    pub fn parse(s: &str) -> Result<FitShape> {
        match s {
            "log" => Ok(FitShape::Log),
            "log2" => Ok(FitShape::LogSquared),
            "sqrt_nlog" => Ok(FitShape::SqrtNLog),
            "power" => Ok(FitShape::Power),
            "linear" => Ok(FitShape::Linear),
            _ => Err(Error::invalid(format!("unknown fit shape `{s}`"))),
        }
    }
}

impl fmt::Display for FitShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A constrained least-squares fit of one shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub shape: FitShape,
    pub coefficient: f64,
    /// Present for the power shape only.
    pub exponent: Option<f64>,
    pub r_squared: f64,
}

fn validate_points(points: &[(f64, f64)]) -> Result<()> {
    let mut ns: Vec<u64> = points.iter().map(|p| p.0.to_bits()).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::InsufficientData(
            "shape fits need at least 3 distinct n values".into(),
        ));
    }
    if points.iter().any(|p| p.0 < 2.0) {
        return Err(Error::invalid("shape fits need n >= 2"));
    }
    Ok(())
}

fn r_squared_zero_intercept(points: &[(f64, f64)], predict: impl Fn(f64) -> f64) -> f64 {
    let ss_res: f64 = points.iter().map(|&(n, y)| (y - predict(n)).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|&(_, y)| y * y).sum();
    if ss_tot == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    }
}

/// Least-squares coefficient for `y = C·f(n)` and the zero-intercept `r²`.
pub fn fit_shape(points: &[(f64, f64)], shape: FitShape) -> Result<FitResult> {
    validate_points(points)?;
    match shape {
        FitShape::Power => {
            if points.iter().any(|&(_, y)| y <= 0.0) {
                return Err(Error::invalid("power fits need strictly positive values"));
            }
            // ordinary least squares on the log-log scale
            let logs: Vec<(f64, f64)> = points.iter().map(|&(n, y)| (n.ln(), y.ln())).collect();
            let k = logs.len() as f64;
            let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
            let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
            let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let alpha = sxy / sxx;
            let c = (my - alpha * mx).exp();
            Ok(FitResult {
                shape,
                coefficient: c,
                exponent: Some(alpha),
                r_squared: r_squared_zero_intercept(points, |n| c * n.powf(alpha)),
            })
        }
        _ => {
            let f = shape_fn(shape);
            let sfy: f64 = points.iter().map(|&(n, y)| f(n) * y).sum();
            let sff: f64 = points.iter().map(|&(n, _)| f(n) * f(n)).sum();
            let c = if sff == 0.0 { 0.0 } else { sfy / sff };
            Ok(FitResult {
                shape,
                coefficient: c,
                exponent: None,
                r_squared: r_squared_zero_intercept(points, |n| c * f(n)),
            })
        }
    }
}

fn shape_fn(shape: FitShape) -> fn(f64) -> f64 {
    match shape {
        FitShape::Log => |n| n.ln(),
        FitShape::LogSquared => |n| n.ln() * n.ln(),
        FitShape::SqrtNLog => |n| (n * n.ln()).sqrt(),
        FitShape::Linear => |n| n,
        FitShape::Power => unreachable!("power handled separately"),
    }
}

/// Diagnostic two-parameter fit `y = a + C·f(n)` with an intercept.
///
/// The headline fits are constrained through the origin (the claims they
/// check are pure `O(f(n))` statements); this variant exists to inspect
/// additive offsets. Its `r²` is the ordinary coefficient of determination
/// around the mean, not the zero-intercept convention.
pub fn fit_shape_with_intercept(points: &[(f64, f64)], shape: FitShape) -> Result<FitResult> {
    validate_points(points)?;
    if shape == FitShape::Power {
        return fit_shape(points, shape);
    }
    let f = shape_fn(shape);
    let xy: Vec<(f64, f64)> = points.iter().map(|&(n, y)| (f(n), y)).collect();
    let (slope, _intercept, r2) = regress_with_intercept(&xy);
    Ok(FitResult {
        shape,
        coefficient: slope,
        exponent: None,
        r_squared: r2,
    })
}

/// All requested fits ranked by `r²`, ties toward fewer parameters.
pub fn model_compare(points: &[(f64, f64)], shapes: &[FitShape]) -> Result<Vec<FitResult>> {
    let mut fits = shapes
        .iter()
        .map(|&s| fit_shape(points, s))
        .collect::<Result<Vec<_>>>()?;
    fits.sort_by(|a, b| {
        b.r_squared
            .partial_cmp(&a.r_squared)
            .unwrap()
            .then(a.shape.parameter_count().cmp(&b.shape.parameter_count()))
    });
    Ok(fits)
}

/// Tail law kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailKind {
    Exponential,
    Polynomial,
}

/// A fitted tail: `rate` for survival `~ e^(-rate·l)`, `exponent` for
/// survival `~ n^(-exponent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub kind: TailKind,
    pub rate_or_exponent: f64,
    pub r_squared: f64,
}

fn regress_with_intercept(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let ss_tot: f64 = points.iter().map(|&(_, y)| (y - my).powi(2)).sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    (slope, intercept, r2)
}

/// Exponential tail fit: regression of `ln S(l)` against the threshold `l`
/// over the strictly decreasing tail (`S(l) <= 1/2`) of the empirical
/// survival function. The bulk below the median is not part of a tail law
/// and would only bias the rate.
pub fn tail_fit_exponential(samples: &[u64]) -> Result<TailFit> {
    if samples.len() < 100 {
        return Err(Error::InsufficientData(
            "exponential tail fits need at least 100 samples".into(),
        ));
    }
    let n = samples.len() as f64;
    let max = *samples.iter().max().unwrap();
    let mut points = Vec::new();
    let mut last = f64::INFINITY;
    for l in 0..=max {
        let count = samples.iter().filter(|&&x| x >= l).count();
        // survival estimates from fewer than 10 observations are noise
        if count < 10 {
            break;
        }
        let s = count as f64 / n;
        if s < last && s <= 0.5 {
            points.push((l as f64, s.ln()));
            last = s;
        }
    }
    if points.len() < 3 {
        return Err(Error::InsufficientData(
            "survival curve is degenerate (fewer than 3 strictly decreasing values)".into(),
        ));
    }
    let (slope, _, r2) = regress_with_intercept(&points);
    Ok(TailFit {
        kind: TailKind::Exponential,
        rate_or_exponent: -slope,
        r_squared: r2,
    })
}

/// Polynomial tail fit: regression of `ln S` against `ln n` over strictly
/// decreasing positive survival probabilities.
pub fn tail_fit_polynomial(points: &[(f64, f64)]) -> Result<TailFit> {
    let mut usable: Vec<(f64, f64)> = Vec::new();
    let mut last = f64::INFINITY;
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for &(n, s) in &sorted {
        if s > 0.0 && s < last {
            usable.push((n.ln(), s.ln()));
            last = s;
        }
    }
    if usable.len() < 3 {
        return Err(Error::InsufficientData(
            "polynomial tail fits need survival at 3+ thresholds".into(),
        ));
    }
    let (slope, _, r2) = regress_with_intercept(&usable);
    Ok(TailFit {
        kind: TailKind::Polynomial,
        rate_or_exponent: -slope,
        r_squared: r2,
    })
}
