//! Filling areas: loop decomposition along the tree structure and exact
//! per-factor van Kampen area oracles.
//!
//! Presentations are fixed per factor: `⟨a1,a2 | [a1,a2]⟩` for `Z^2`,
//! `⟨t | t^m⟩` for `Z/m`, and the free presentation (no relators) for free
//! factors. Areas are certified `(lower, upper)` with `lower` the winding
//! L1 norm and `upper` an explicit peeling construction; the two agree on
//! every loop the experiments generate, and disagreement is reported, never
//! averaged away.

use crate::error::{Error, Result};
use crate::group::{FactorKind, FreeProduct, GroupElement, Letter};
use std::collections::HashMap;

/// A null-homotopic word in the generators, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopWord {
    letters: Vec<Letter>,
}

impl LoopWord {
    pub fn new(group: &FreeProduct, letters: Vec<Letter>) -> Result<LoopWord> {
        if !group.normalize(&letters).is_identity() {
            return Err(Error::invalid("loop word is not null-homotopic"));
        }
        Ok(LoopWord { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// A loop inside one factor, evaluating to the factor identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorLoop {
    pub factor: usize,
    pub letters: Vec<Letter>,
}

/// Certified filling-area bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FillingReport {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
}

impl FillingReport {
    fn exact(v: u64) -> FillingReport {
        FillingReport {
            lower: v,
            upper: v,
            exact: true,
        }
    }

    pub fn combine(self, other: FillingReport) -> FillingReport {
        FillingReport {
            lower: self.lower + other.lower,
            upper: self.upper + other.upper,
            exact: self.exact && other.exact,
        }
    }

    pub fn zero() -> FillingReport {
        FillingReport::exact(0)
    }
}

/// The letters of the geodesic combing path from `1` to `x`.
pub fn combing_word(group: &FreeProduct, x: &GroupElement) -> Vec<Letter> {
    group.canonical_letters(x)
}

/// The loop traced by a walk and closed up along the combing path:
/// increments followed by the reversed inverse of the combing word.
pub fn loop_of_trajectory(group: &FreeProduct, increments: &[Letter]) -> LoopWord {
    let endpoint = crate::walk::endpoint_of(group, increments);
    let mut letters = increments.to_vec();
    letters.extend(
        combing_word(group, &endpoint)
            .iter()
            .rev()
            .map(|l| l.inverted()),
    );
    LoopWord { letters }
}

/// Canonical piece decomposition of a null-homotopic word: scan letters
/// merging adjacent same-factor runs; whenever a run's value closes up to
/// the factor identity, pop it as a [`FactorLoop`] and let its neighbours
/// merge. The multiset of emitted loops conserves every input letter.
pub fn decompose_factor_loops(group: &FreeProduct, word: &LoopWord) -> Vec<FactorLoop> {
    struct Entry {
        factor: usize,
        value: crate::group::FactorElement,
        letters: Vec<Letter>,
    }
    let mut stack: Vec<Entry> = Vec::new();
    let mut out = Vec::new();
    for &letter in &word.letters {
        let kind = group.spec().factor(letter.factor);
        match stack.last_mut() {
            Some(top) if top.factor == letter.factor => {
                top.value = top
                    .value
                    .apply_letter(kind, letter.generator, letter.inverse);
                top.letters.push(letter);
                if top.value.is_identity() {
                    let done = stack.pop().unwrap();
                    out.push(FactorLoop {
                        factor: done.factor,
                        letters: done.letters,
                    });
                }
            }
            _ => {
                stack.push(Entry {
                    factor: letter.factor,
                    value: crate::group::FactorElement::from_letter(
                        kind,
                        letter.generator,
                        letter.inverse,
                    ),
                    letters: vec![letter],
                });
            }
        }
    }
    debug_assert!(
        stack.is_empty(),
        "null-homotopic word left residue on the stack"
    );
    out
}

/// Exact filling area of one factor loop under the fixed presentation.
pub fn factor_area(group: &FreeProduct, fl: &FactorLoop) -> Result<FillingReport> {
    match group.spec().factor(fl.factor) {
        FactorKind::Free { .. } => Ok(FillingReport::exact(0)),
        FactorKind::FiniteCyclic { modulus } => {
            let exponent: i64 = fl
                .letters
                .iter()
                .map(|l| if l.inverse { -1i64 } else { 1 })
                .sum();
            debug_assert_eq!(exponent.rem_euclid(*modulus as i64), 0);
            Ok(FillingReport::exact(exponent.unsigned_abs() / modulus))
        }
        FactorKind::FreeAbelian { rank: 1 } => Ok(FillingReport::exact(0)),
        FactorKind::FreeAbelian { rank: 2 } => Ok(plane_area(fl)),
        kind => Err(Error::UnsupportedFactor(format!(
            "no filling oracle for {kind}"
        ))),
    }
}

/// Decompose a loop and sum the factor areas.
pub fn fill_loop(group: &FreeProduct, word: &LoopWord) -> Result<FillingReport> {
    let mut report = FillingReport::zero();
    for fl in decompose_factor_loops(group, word) {
        report = report.combine(factor_area(group, &fl)?);
    }
    Ok(report)
}

/// Check that the spec's factors all have filling oracles.
pub fn supports_filling(group: &FreeProduct) -> Result<()> {
    for (i, kind) in group.spec().factors().iter().enumerate() {
        if let FactorKind::FreeAbelian { rank } = kind {
            if *rank > 2 {
                return Err(Error::UnsupportedFactor(format!(
                    "factor #{} ({kind}) has no filling oracle (rank above 2)",
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

// --- the Z^2 oracle -------------------------------------------------------

/// Signed steps of a rank-2 loop: +-x is generator 0, +-y is generator 1.
fn plane_steps(fl: &FactorLoop) -> Vec<(i8, i8)> {
    fl.letters
        .iter()
        .map(|l| {
            let sign = if l.inverse { -1i8 } else { 1 };
            if l.generator == 0 {
                (sign, 0)
            } else {
                (0, sign)
            }
        })
        .collect()
}

/// Winding numbers of the unit cells enclosed by the loop, as a sparse map
/// from cell (lower-left corner) to winding.
fn winding_map(steps: &[(i8, i8)]) -> HashMap<(i64, i64), i64> {
    // a vertical edge at (x, y)->(x, y+dir) adds dir to the winding of every
    // cell (i, y') in its row with i < x (ray cast to +x)
    let mut rows: HashMap<i64, Vec<(i64, i64)>> = HashMap::new();
    let (mut x, mut y) = (0i64, 0i64);
    let (mut xmin, mut xmax) = (0i64, 0i64);
    for &(dx, dy) in steps {
        if dy != 0 {
            let row = if dy > 0 { y } else { y - 1 };
            rows.entry(row).or_default().push((x, dy as i64));
        }
        x += dx as i64;
        y += dy as i64;
        xmin = xmin.min(x);
        xmax = xmax.max(x);
    }
    debug_assert_eq!((x, y), (0, 0));
    let mut cells = HashMap::new();
    for (row, mut edges) in rows {
        edges.sort_unstable();
        // suffix sums: winding of cell (i, row) is the sum of dirs at x > i
        let mut suffix = 0i64;
        let mut k = edges.len();
        for i in (xmin..xmax).rev() {
            while k > 0 && edges[k - 1].0 > i {
                suffix += edges[k - 1].1;
                k -= 1;
            }
            if suffix != 0 {
                cells.insert((i, row), suffix);
            }
        }
    }
    cells
}

fn freely_reduce(steps: &mut Vec<(i8, i8)>) {
    let mut out: Vec<(i8, i8)> = Vec::with_capacity(steps.len());
    for &s in steps.iter() {
        if out.last().is_some_and(|&t| t.0 == -s.0 && t.1 == -s.1) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    *steps = out;
}

/// Transposition bound: sort the letters into an x-block and a y-block by
/// adjacent unlike swaps, each realized by one relator cell; the sorted
/// word reduces freely. Valid for either block order, take the better one.
fn inversion_bound(steps: &[(i8, i8)]) -> u64 {
    let mut y_seen = 0u64;
    let mut x_seen = 0u64;
    let mut y_before_x = 0u64;
    let mut x_before_y = 0u64;
    for &(dx, _) in steps {
        if dx != 0 {
            y_before_x += y_seen;
            x_seen += 1;
        } else {
            x_before_y += x_seen;
            y_seen += 1;
        }
    }
    y_before_x.min(x_before_y)
}

const PEEL_NODE_BUDGET: u32 = 50_000;

/// Certified filling area of a rank-2 free-abelian loop.
///
/// Lower: the winding L1 norm (every relator cell changes one winding by
/// one). Upper: replace traversals of the top edge of a topmost nonzero
/// cell by the detour around its other sides, one relator cell at a time,
/// searching over the traversal occurrences; when the search empties the
/// loop the filling uses exactly the winding norm. Otherwise the
/// transposition (sorting) bound stands.
fn plane_area(fl: &FactorLoop) -> FillingReport {
    let mut steps = plane_steps(fl);
    freely_reduce(&mut steps);
    let winding = winding_map(&steps);
    let lower: u64 = winding.values().map(|w| w.unsigned_abs()).sum();
    let sort_bound = inversion_bound(&steps);
    let mut budget = PEEL_NODE_BUDGET;
    if peel_search(&steps, &mut budget) {
        FillingReport {
            lower,
            upper: lower.min(sort_bound),
            exact: lower == lower.min(sort_bound),
        }
    } else {
        let upper = sort_bound.max(lower);
        FillingReport {
            lower,
            upper,
            exact: lower == upper,
        }
    }
}

/// Depth-first peel: can the loop be emptied with exactly one relator cell
/// per unit of winding? Branches over the traversal occurrences of the top
/// edge of the topmost-rightmost nonzero cell.
fn peel_search(steps: &[(i8, i8)], budget: &mut u32) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let w = winding_map(steps);
    let Some((&(ci, cj), &wind)) = w.iter().max_by_key(|((i, j), _)| (*j, *i)) else {
        return steps.is_empty();
    };
    // positive winding: the loop runs leftward along the top edge
    // (from (ci+1, cj+1) to (ci, cj+1)); negative: rightward
    let want_dx: i8 = if wind > 0 { -1 } else { 1 };
    let (mut x, mut y) = (0i64, 0i64);
    for (idx, &(dx, dy)) in steps.iter().enumerate() {
        if dy == 0
            && dx == want_dx
            && y == cj + 1
            && ((want_dx == -1 && x == ci + 1) || (want_dx == 1 && x == ci))
        {
            // route along the bottom: down, across, up
            let mut next = steps.to_vec();
            let detour = [(0i8, -1i8), (want_dx, 0), (0, 1)];
            next.splice(idx..=idx, detour);
            freely_reduce(&mut next);
            if peel_search(&next, budget) {
                return true;
            }
        }
        x += dx as i64;
        y += dy as i64;
    }
    false
}

/// Monte Carlo average filling of walk loops.
#[derive(Debug, Clone)]
pub struct DehnEstimate {
    pub mean_lower: f64,
    pub mean_upper: f64,
    pub upper_ci_low: f64,
    pub upper_ci_high: f64,
    pub all_exact: bool,
    pub per_trial: Vec<FillingReport>,
}

/// Mean filling area of `Fill({X_0..X_n} ∪ combing(X_n))` over trials.
pub fn average_dehn_estimate(
    group: &FreeProduct,
    measure: &crate::walk::StepMeasure,
    n: usize,
    trials: usize,
    master_seed: u64,
) -> Result<DehnEstimate> {
    supports_filling(group)?;
    let mut per_trial = Vec::with_capacity(trials);
    for t in 0..trials {
        let seed = crate::walk::derive_seed(master_seed, t as u64);
        let incs = crate::walk::sample_increments(measure, n, seed);
        let lw = loop_of_trajectory(group, &incs);
        per_trial.push(fill_loop(group, &lw)?);
    }
    let uppers: Vec<f64> = per_trial.iter().map(|r| r.upper as f64).collect();
    let lowers: Vec<f64> = per_trial.iter().map(|r| r.lower as f64).collect();
    let upper_summary =
        crate::stats::summarize_seeded(&uppers, crate::walk::derive_seed(master_seed, u64::MAX))?;
    Ok(DehnEstimate {
        mean_lower: lowers.iter().sum::<f64>() / trials.max(1) as f64,
        mean_upper: upper_summary.mean,
        upper_ci_low: upper_summary.ci_low,
        upper_ci_high: upper_summary.ci_high,
        all_exact: per_trial.iter().all(|r| r.exact),
        per_trial,
    })
}

/// Reduce a word in the free group on the generators (used by tests and the
/// free-triviality check): returns the freely reduced letter sequence.
pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last().is_some_and(|&t| {
            t.factor == l.factor && t.generator == l.generator && t.inverse != l.inverse
        }) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}
