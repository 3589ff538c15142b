//! Experiment orchestration: deterministic parallel trials, row emission
//! and summary fitting.
//!
//! Every trial's seed derives from `(master_seed, stream_index)` where the
//! stream index depends only on the position in the `(n, trial)` grid, so
//! results are independent of worker count and scheduling; rows are
//! aggregated in grid order.

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{FitLine, OutputDoc, ResultRow, SummaryLine, TailLine, Value};
use rayon::prelude::*;
use rhlab_core::stats::{
    fit_shape, model_compare, summarize_seeded, tail_fit_exponential, FitShape,
};
use rhlab_core::walk::{derive_seed, rng_from_seed, sample_increments, RngCore, StepMeasure};
use rhlab_core::{
    dehn, transient_decomposition, triangle_thinness, Error, FreeProduct, GroupElement,
    PeripheralCoset, Result, TransientParams,
};

pub fn run(config: &ExperimentConfig) -> Result<OutputDoc> {
    let group = config.validate()?;
    match config.experiment {
        Experiment::Track => run_track(config, &group),
        Experiment::ProjTail => run_proj_tail(config, &group),
        Experiment::Drift => run_drift(config, &group),
        Experiment::Behrstock => run_behrstock(config, &group),
        Experiment::Triangle => run_triangle(config, &group),
        Experiment::Gromov => run_gromov(config, &group),
        Experiment::Dehn => run_dehn(config, &group),
        Experiment::Decompose => run_decompose(config, &group),
        Experiment::Fit => run_fit(config),
    }
}

/// Run `per_trial` over the whole `(n, trial)` grid on a worker pool and
/// return results in grid order.
fn grid<T: Send>(
    config: &ExperimentConfig,
    per_trial: impl Fn(usize, usize, u64) -> T + Sync,
) -> Result<Vec<(usize, usize, u64, T)>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::invalid(format!("worker pool: {e}")))?;
    let trials = config.trials;
    let jobs: Vec<(usize, usize, u64)> = config
        .n_values
        .iter()
        .enumerate()
        .flat_map(|(n_idx, &n)| {
            (0..trials).map(move |trial| {
                let stream = (n_idx * trials + trial) as u64;
                (n, trial, derive_seed(config.master_seed, stream))
            })
        })
        .collect();
    Ok(pool.install(|| {
        jobs.par_iter()
            .map(|&(n, trial, seed)| (n, trial, seed, per_trial(n, trial, seed)))
            .collect()
    }))
}

fn row(
    config: &ExperimentConfig,
    n: usize,
    trial: usize,
    seed: u64,
    statistic: &str,
    lower: Value,
    upper: Value,
    exact: bool,
) -> ResultRow {
    ResultRow {
        experiment: config.experiment.name().into(),
        group: config.group.clone(),
        n,
        trial,
        statistic: statistic.into(),
        lower,
        upper,
        exact,
        seed,
    }
}

fn summary_seed(config: &ExperimentConfig, n_idx: usize) -> u64 {
    derive_seed(config.master_seed, u64::MAX - n_idx as u64)
}

/// Per-`n` means of a per-trial statistic, as summary lines plus fit points.
fn summarize_per_n(
    config: &ExperimentConfig,
    statistic: &str,
    values: &[(usize, f64)],
) -> Result<(Vec<SummaryLine>, Vec<(f64, f64)>)> {
    let mut lines = Vec::new();
    let mut points = Vec::new();
    for (n_idx, &n) in config.n_values.iter().enumerate() {
        let vals: Vec<f64> = values
            .iter()
            .filter(|(vn, _)| *vn == n)
            .map(|(_, v)| *v)
            .collect();
        if vals.is_empty() {
            continue;
        }
        let s = summarize_seeded(&vals, summary_seed(config, n_idx))?;
        lines.push(SummaryLine {
            statistic: statistic.into(),
            n,
            mean: s.mean,
            ci_low: s.ci_low,
            ci_high: s.ci_high,
        });
        points.push((n as f64, s.mean));
    }
    Ok((lines, points))
}

fn fit_lines(statistic: &str, points: &[(f64, f64)], shapes: &[FitShape]) -> Vec<FitLine> {
    // drop shapes that cannot fit this data (e.g. power on zero means)
    // instead of failing the whole comparison
    let usable: Vec<FitShape> = shapes
        .iter()
        .copied()
        .filter(|&s| fit_shape(points, s).is_ok())
        .collect();
    let Ok(ranked) = model_compare(points, &usable) else {
        return Vec::new();
    };
    ranked
        .iter()
        .enumerate()
        .map(|(rank, f)| FitLine {
            statistic: statistic.into(),
            shape: f.shape.name().into(),
            coefficient: f.coefficient,
            exponent: f.exponent,
            r_squared: f.r_squared,
            rank: rank + 1,
        })
        .collect()
}

fn run_track(config: &ExperimentConfig, group: &FreeProduct) -> Result<OutputDoc> {
    let measure = StepMeasure::simple(group);
    let params = TransientParams {
        depth: config.depth,
    };
    struct Slim {
        transient: rhlab_core::BoundPair,
        geodesic: rhlab_core::BoundPair,
        endpoint_length: u64,
        max_detour_transient: u64,
        detour_ratio: f64,
    }
    let results = grid(config, |n, _trial, seed| {
        let incs = sample_increments(&measure, n, seed);
        let r = rhlab_core::track_walk(group, &incs, params);
        Slim {
            transient: r.transient,
            geodesic: r.geodesic,
            endpoint_length: r.endpoint_length,
            max_detour_transient: r.max_detour_transient,
            detour_ratio: r.detour_ratio,
        }
    })?;
    let mut doc = OutputDoc::default();
    let mut trans_upper = Vec::new();
    let mut geo_upper = Vec::new();
    let mut ratios: Vec<(usize, f64)> = Vec::new();
    for (n, trial, seed, report) in &results {
        let (n, trial, seed) = (*n, *trial, *seed);
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            "hausdorff_transient",
            Value::Int(report.transient.lower),
            Value::Int(report.transient.upper),
            report.transient.exact,
        ));
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            "hausdorff_geodesic",
            Value::Int(report.geodesic.lower),
            Value::Int(report.geodesic.upper),
            report.geodesic.exact,
        ));
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            "endpoint_length",
            Value::Int(report.endpoint_length),
            Value::Int(report.endpoint_length),
            true,
        ));
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            "detour_max",
            Value::Int(report.max_detour_transient),
            Value::Int(report.max_detour_transient),
            true,
        ));
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            "detour_ratio",
            Value::Real(report.detour_ratio),
            Value::Real(report.detour_ratio),
            true,
        ));
        trans_upper.push((n, report.transient.upper as f64));
        geo_upper.push((n, report.geodesic.upper as f64));
        ratios.push((n, report.detour_ratio));
    }
    let (lines, points) = summarize_per_n(config, "hausdorff_transient_upper", &trans_upper)?;
    doc.summaries.extend(lines);
    if points.len() >= 3 {
        doc.fits.extend(fit_lines(
            "hausdorff_transient_upper",
            &points,
            &[FitShape::Log, FitShape::Linear, FitShape::Power],
        ));
    }
    let (lines, points) = summarize_per_n(config, "hausdorff_geodesic_upper", &geo_upper)?;
    doc.summaries.extend(lines);
    if points.len() >= 3 {
        doc.fits.extend(fit_lines(
            "hausdorff_geodesic_upper",
            &points,
            &[FitShape::Log, FitShape::Linear, FitShape::Power],
        ));
    }
    // the detour ratio is reported through its per-n maximum
    for &n in &config.n_values {
        let max = ratios
            .iter()
            .filter(|(vn, _)| *vn == n)
            .map(|(_, v)| *v)
            .fold(0.0f64, f64::max);
        doc.summaries.push(SummaryLine {
            statistic: "detour_ratio_max".into(),
            n,
            mean: max,
            ci_low: max,
            ci_high: max,
        });
    }
    Ok(doc)
}

fn run_proj_tail(config: &ExperimentConfig, group: &FreeProduct) -> Result<OutputDoc> {
    let measure = StepMeasure::simple(group);
    let results = grid(config, |n, _trial, seed| {
        let incs = sample_increments(&measure, n, seed);
        rhlab_core::walk::projection_tail_sample(group, &incs)
    })?;
    let mut doc = OutputDoc::default();
    let mut values = Vec::new();
    for &(n, trial, seed, v) in &results {
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            "max_projection",
            Value::Int(v),
            Value::Int(v),
            true,
        ));
        values.push((n, v as f64));
    }
    let (lines, points) = summarize_per_n(config, "max_projection", &values)?;
    doc.summaries.extend(lines);
    if points.len() >= 3 {
        doc.fits.extend(fit_lines(
            "max_projection",
            &points,
            &[FitShape::Log, FitShape::Linear, FitShape::Power],
        ));
    }
    for &n in &config.n_values {
        let samples: Vec<u64> = results
            .iter()
            .filter(|(vn, _, _, _)| *vn == n)
            .map(|&(_, _, _, v)| v)
            .collect();
        if let Ok(tail) = tail_fit_exponential(&samples) {
            doc.tails.push(TailLine {
                statistic: "max_projection".into(),
                n,
                kind: "exponential".into(),
                rate_or_exponent: tail.rate_or_exponent,
                r_squared: tail.r_squared,
            });
        }
    }
    Ok(doc)
}

fn run_drift(config: &ExperimentConfig, group: &FreeProduct) -> Result<OutputDoc> {
    let measure = StepMeasure::simple(group);
    let c3 = config.c3;
    if c3.is_some() {
        // subwalk checks materialize trajectories; guard before sampling
        if let Some(&n) = config
            .n_values
            .iter()
            .find(|&&n| n > rhlab_core::walk::TRAJECTORY_GUARD)
        {
            return Err(Error::ResourceGuard(format!(
                "subwalk checks need materialized trajectories; n = {n} exceeds the {} guard",
                rhlab_core::walk::TRAJECTORY_GUARD
            )));
        }
    }
    let results = grid(config, |n, _trial, seed| {
        let incs = sample_increments(&measure, n, seed);
        let len = group.word_length(&rhlab_core::walk::endpoint_of(group, &incs));
        let violation = c3.map(|c| {
            let t = rhlab_core::sample_trajectory(group, &measure, n, seed)
                .expect("guard checked before sampling");
            rhlab_core::walk::subwalk_has_violation(group, &t, c)
        });
        (len, violation)
    })?;
    let mut doc = OutputDoc::default();
    let mut drifts = Vec::new();
    let mut violations = Vec::new();
    for &(n, trial, seed, (len, violation)) in &results {
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            "endpoint_length",
            Value::Int(len),
            Value::Int(len),
            true,
        ));
        drifts.push((n, len as f64 / n.max(1) as f64));
        if let Some(v) = violation {
            doc.rows.push(row(
                config,
                n,
                trial,
                seed,
                "subwalk_violation",
                Value::Int(v as u64),
                Value::Int(v as u64),
                true,
            ));
            violations.push((n, v as u64 as f64));
        }
    }
    let (lines, _) = summarize_per_n(config, "drift", &drifts)?;
    doc.summaries.extend(lines);
    if !violations.is_empty() {
        let (lines, _) = summarize_per_n(config, "violation_fraction", &violations)?;
        doc.summaries.extend(lines);
    }
    Ok(doc)
}

fn run_behrstock(config: &ExperimentConfig, group: &FreeProduct) -> Result<OutputDoc> {
    let results = grid(config, |n, _trial, seed| {
        let mut rng = rng_from_seed(seed);
        let x = random_element(group, &mut rng, n);
        let (p, q) = random_distinct_cosets(group, &mut rng, n / 2 + 1);
        group
            .behrstock_min(&x, &p, &q)
            .expect("cosets are distinct")
    })?;
    let mut doc = OutputDoc::default();
    let mut values = Vec::new();
    for &(n, trial, seed, v) in &results {
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            "behrstock_min",
            Value::Int(v),
            Value::Int(v),
            true,
        ));
        values.push((n, v as f64));
    }
    let (lines, _) = summarize_per_n(config, "behrstock_min", &values)?;
    doc.summaries.extend(lines);
    let max = results.iter().map(|&(_, _, _, v)| v).max().unwrap_or(0);
    doc.notes
        .push(format!("behrstock_min maximum over all trials: {max}"));
    Ok(doc)
}

fn run_triangle(config: &ExperimentConfig, group: &FreeProduct) -> Result<OutputDoc> {
    let measure = StepMeasure::simple(group);
    let results = grid(config, |n, _trial, seed| {
        let ends: Vec<GroupElement> = (0..3)
            .map(|k| {
                let incs = sample_increments(&measure, n, derive_seed(seed, k));
                rhlab_core::walk::endpoint_of(group, &incs)
            })
            .collect();
        triangle_thinness(group, &ends[0], &ends[1], &ends[2])
    })?;
    bound_pair_doc(
        config,
        results,
        "thinness",
        &[FitShape::Log, FitShape::Linear, FitShape::Power],
    )
}

fn run_gromov(config: &ExperimentConfig, group: &FreeProduct) -> Result<OutputDoc> {
    let measure = StepMeasure::simple(group);
    let results = grid(config, |n, _trial, seed| {
        let x = rhlab_core::walk::endpoint_of(
            group,
            &sample_increments(&measure, n, derive_seed(seed, 0)),
        );
        let y = rhlab_core::walk::endpoint_of(
            group,
            &sample_increments(&measure, n, derive_seed(seed, 1)),
        );
        group.gromov_offset(&x, &y)
    })?;
    bound_pair_doc(
        config,
        results,
        "gromov_offset",
        &[FitShape::Log, FitShape::Linear, FitShape::Power],
    )
}

fn bound_pair_doc(
    config: &ExperimentConfig,
    results: Vec<(usize, usize, u64, rhlab_core::BoundPair)>,
    statistic: &str,
    shapes: &[FitShape],
) -> Result<OutputDoc> {
    let mut doc = OutputDoc::default();
    let mut uppers = Vec::new();
    for &(n, trial, seed, b) in &results {
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            statistic,
            Value::Int(b.lower),
            Value::Int(b.upper),
            b.exact,
        ));
        uppers.push((n, b.upper as f64));
    }
    let upper_name = format!("{statistic}_upper");
    let (lines, points) = summarize_per_n(config, &upper_name, &uppers)?;
    doc.summaries.extend(lines);
    if points.len() >= 3 {
        doc.fits.extend(fit_lines(&upper_name, &points, shapes));
    }
    Ok(doc)
}

fn run_dehn(config: &ExperimentConfig, group: &FreeProduct) -> Result<OutputDoc> {
    let measure = StepMeasure::simple(group);
    let results = grid(config, |n, _trial, seed| {
        let incs = sample_increments(&measure, n, seed);
        let lw = dehn::loop_of_trajectory(group, &incs);
        dehn::fill_loop(group, &lw).expect("factors validated before sampling")
    })?;
    let mut doc = OutputDoc::default();
    let mut upper_per_n = Vec::new();
    for &(n, trial, seed, r) in &results {
        doc.rows.push(row(
            config,
            n,
            trial,
            seed,
            "filling_area",
            Value::Int(r.lower),
            Value::Int(r.upper),
            r.exact,
        ));
        upper_per_n.push((n, r.upper as f64 / n.max(1) as f64));
    }
    let (lines, points) = summarize_per_n(config, "filling_upper_per_n", &upper_per_n)?;
    doc.summaries.extend(lines);
    if points.len() >= 3 {
        doc.fits.extend(fit_lines(
            "filling_upper_per_n",
            &points,
            &[FitShape::LogSquared, FitShape::Log, FitShape::Linear],
        ));
    }
    Ok(doc)
}

fn run_decompose(config: &ExperimentConfig, group: &FreeProduct) -> Result<OutputDoc> {
    let word = config.word.as_deref().unwrap_or_default();
    let element = group.normalize_str(word)?;
    let mut doc = OutputDoc::default();
    doc.notes.push(format!("element: {element}"));
    doc.notes
        .push(format!("word_length: {}", group.word_length(&element)));
    let path = group.canonical_geodesic(&GroupElement::identity(), &element);
    let dec = transient_decomposition(
        group,
        &path,
        TransientParams {
            depth: config.depth,
        },
    );
    for line in dec.render(group).lines() {
        doc.notes.push(line.to_string());
    }
    let (value, coset) = group.max_projection(&element);
    match coset {
        Some(c) => doc
            .notes
            .push(format!("max_projection: {value} at {}", c.render(group))),
        None => doc.notes.push("max_projection: 0".into()),
    }
    Ok(doc)
}

fn run_fit(config: &ExperimentConfig) -> Result<OutputDoc> {
    let input = config
        .input
        .as_ref()
        .ok_or_else(|| Error::invalid("fit needs --input"))?;
    let statistic = config
        .statistic
        .clone()
        .ok_or_else(|| Error::invalid("fit needs --statistic"))?;
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", input.display())))?;
    let rows = crate::output::read_csv_rows(&text);
    let mut by_n: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for r in rows.iter().filter(|r| r.statistic == statistic) {
        by_n.entry(r.n).or_default().push(r.upper.as_f64());
    }
    if by_n.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "statistic `{statistic}` has {} distinct n values in {}, need 3",
            by_n.len(),
            input.display()
        )));
    }
    let points: Vec<(f64, f64)> = by_n
        .iter()
        .map(|(&n, vals)| (n as f64, vals.iter().sum::<f64>() / vals.len() as f64))
        .collect();
    let shapes: Vec<FitShape> = if config.shapes.is_empty() {
        vec![
            FitShape::Log,
            FitShape::LogSquared,
            FitShape::SqrtNLog,
            FitShape::Power,
            FitShape::Linear,
        ]
    } else {
        config
            .shapes
            .iter()
            .map(|s| FitShape::parse(s))
            .collect::<Result<_>>()?
    };
    let mut doc = OutputDoc::default();
    // single-shape requests keep the plain fit; multi-shape requests rank
    if shapes.len() == 1 {
        let f = fit_shape(&points, shapes[0])?;
        doc.fits.push(FitLine {
            statistic: statistic.clone(),
            shape: f.shape.name().into(),
            coefficient: f.coefficient,
            exponent: f.exponent,
            r_squared: f.r_squared,
            rank: 1,
        });
    } else {
        doc.fits.extend(fit_lines(&statistic, &points, &shapes));
    }
    Ok(doc)
}

fn random_element(group: &FreeProduct, rng: &mut impl RngCore, length: usize) -> GroupElement {
    let letters = group.letters();
    let word: Vec<_> = (0..length)
        .map(|_| letters[(rng.next_u64() % letters.len() as u64) as usize])
        .collect();
    group.normalize(&word)
}

fn random_distinct_cosets(
    group: &FreeProduct,
    rng: &mut impl RngCore,
    prefix_length: usize,
) -> (PeripheralCoset, PeripheralCoset) {
    let factors = group.spec().factors().len();
    loop {
        let lp = (rng.next_u64() % (prefix_length as u64 + 1)) as usize;
        let lq = (rng.next_u64() % (prefix_length as u64 + 1)) as usize;
        let gp = random_element(group, rng, lp);
        let gq = random_element(group, rng, lq);
        let p = PeripheralCoset::new(&gp, (rng.next_u64() % factors as u64) as usize);
        let q = PeripheralCoset::new(&gq, (rng.next_u64() % factors as u64) as usize);
        if p != q {
            return (p, q);
        }
    }
}
