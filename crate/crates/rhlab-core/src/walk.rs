//! Seeded sampling of symmetric finitely supported random walks and the
//! walk-level statistics built on top of them.
//!
//! Determinism contract: a trajectory depends only on `(measure, n, seed)`.
//! Per-trajectory seeds derive from `(master_seed, stream_index)` through
//! [`derive_seed`]; letters are drawn from a ChaCha8 stream keyed by four
//! splitmix64 outputs of the derived seed, via rejection sampling on raw
//! `next_u64` values. Changing any of these constants is a breaking format
//! change for recorded experiments.

use crate::error::{Error, Result};
use crate::group::{FactorElement, FreeProduct, GroupElement, Letter, NfStack, StackOp, Syllable};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub use rand_chacha::rand_core::RngCore;

/// Hard cap on materialized trajectories; longer walks must use the
/// increment-streaming helpers.
pub const TRAJECTORY_GUARD: usize = 1 << 18;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The fixed 64-bit mixing function deriving per-stream seeds:
/// `splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15)` with wrapping
/// arithmetic. Streams are order-independent, so parallel runs aggregate
/// deterministically.
pub fn derive_seed(master_seed: u64, stream_index: u64) -> u64 {
    let mut state =
        master_seed.wrapping_add(stream_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    splitmix64(&mut state)
}

/// ChaCha8 keyed by four successive splitmix64 outputs of `seed`,
/// little-endian.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw from `[0, k)` by rejection on raw `next_u64` values.
fn sample_below(rng: &mut ChaCha8Rng, k: u64) -> u64 {
    debug_assert!(k > 0);
    let r = ((u64::MAX % k) + 1) % k; // 2^64 mod k
    loop {
        let x = rng.next_u64();
        if r == 0 || x <= u64::MAX - r {
            return x % k;
        }
    }
}

/// A symmetric finitely supported step distribution with exact rational
/// weights kept as integer numerators over a common denominator.
#[derive(Debug, Clone)]
pub struct StepMeasure {
    letters: Vec<Letter>,
    numerators: Vec<u64>,
    denominator: u64,
}

impl StepMeasure {
    /// The uniform measure on `S ∪ S⁻¹`.
    pub fn simple(group: &FreeProduct) -> StepMeasure {
        let letters = group.letters().to_vec();
        let k = letters.len() as u64;
        StepMeasure {
            letters,
            numerators: vec![1; k as usize],
            denominator: k,
        }
    }

    /// Build from explicit `(letter, weight)` pairs with weights given as
    /// positive fractions. Validates that weights sum to one, that the
    /// measure is symmetric and that the support contains every generator.
    pub fn from_weights(
        group: &FreeProduct,
        weights: &[(Letter, (u64, u64))],
    ) -> Result<StepMeasure> {
        if weights.is_empty() {
            return Err(Error::invalid("empty measure support"));
        }
        // canonicalize involutions so symmetry bookkeeping is structural
        let canonical = |l: Letter| -> Letter {
            if l.inverse
                && matches!(
                    group.spec().factor(l.factor),
                    crate::group::FactorKind::FiniteCyclic { modulus: 2 }
                )
            {
                Letter {
                    inverse: false,
                    ..l
                }
            } else {
                l
            }
        };
        let mut denominator: u64 = 1;
        for &(_, (num, den)) in weights {
            if num == 0 || den == 0 {
                return Err(Error::invalid("weights must be positive fractions"));
            }
            let g = gcd(denominator, den);
            denominator = denominator
                .checked_mul(den / g)
                .ok_or_else(|| Error::invalid("weight denominators overflow"))?;
        }
        let mut by_letter: HashMap<Letter, u64> = HashMap::new();
        for &(l, (num, den)) in weights {
            let scaled = num
                .checked_mul(denominator / den)
                .ok_or_else(|| Error::invalid("weight numerators overflow"))?;
            *by_letter.entry(canonical(l)).or_insert(0) += scaled;
        }
        let total: u64 = by_letter.values().sum();
        if total != denominator {
            return Err(Error::invalid(format!(
                "weights sum to {total}/{denominator}, expected 1"
            )));
        }
        for (&l, &w) in &by_letter {
            let inv = canonical(l.inverted());
            if by_letter.get(&inv).copied().unwrap_or(0) != w {
                return Err(Error::invalid(format!(
                    "measure is not symmetric at {}",
                    group.spec().letter_name(l)
                )));
            }
        }
        for &l in group.letters() {
            if !by_letter.contains_key(&canonical(l)) {
                return Err(Error::invalid(format!(
                    "support must generate the group: {} missing",
                    group.spec().letter_name(l)
                )));
            }
        }
        let mut letters: Vec<Letter> = by_letter.keys().copied().collect();
        letters.sort();
        let numerators = letters.iter().map(|l| by_letter[l]).collect();
        Ok(StepMeasure {
            letters,
            numerators,
            denominator,
        })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn weight(&self, letter: Letter) -> (u64, u64) {
        match self.letters.iter().position(|&l| l == letter) {
            Some(i) => (self.numerators[i], self.denominator),
            None => (0, self.denominator),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Letter {
        let mut x = sample_below(rng, self.denominator);
        for (i, &n) in self.numerators.iter().enumerate() {
            if x < n {
                return self.letters[i];
            }
            x -= n;
        }
        unreachable!("numerators sum to the denominator")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Draw the increment letters of a walk without materializing states.
pub fn sample_increments(measure: &StepMeasure, n: usize, seed: u64) -> Vec<Letter> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| measure.draw(&mut rng)).collect()
}

/// Fold increments into the endpoint normal form.
pub fn endpoint_of(group: &FreeProduct, increments: &[Letter]) -> GroupElement {
    let mut st = NfStack::new();
    for &l in increments {
        st.push_letter(group.spec(), l);
    }
    st.to_element()
}

/// Prefix-sharing arena of normal forms along a trajectory: each node is a
/// syllable with a parent pointer, and children are content-addressed so
/// equal normal forms map to equal nodes.
#[derive(Debug, Clone)]
struct StateArena {
    parent: Vec<u32>,
    depth: Vec<u32>,
    cum_len: Vec<u64>,
    syllable: Vec<Option<Syllable>>,
    children: HashMap<(u32, Syllable), u32>,
}

impl StateArena {
    fn new() -> StateArena {
        StateArena {
            parent: vec![0],
            depth: vec![0],
            cum_len: vec![0],
            syllable: vec![None],
            children: HashMap::new(),
        }
    }

    fn child(&mut self, node: u32, syllable: Syllable, len: u64) -> u32 {
        if let Some(&c) = self.children.get(&(node, syllable.clone())) {
            return c;
        }
        let id = self.parent.len() as u32;
        self.parent.push(node);
        self.depth.push(self.depth[node as usize] + 1);
        self.cum_len.push(self.cum_len[node as usize] + len);
        self.syllable.push(Some(syllable.clone()));
        self.children.insert((node, syllable), id);
        id
    }
}

/// A sample path `X_0 = 1, …, X_n` with all states retained through the
/// shared-prefix arena.
#[derive(Debug, Clone)]
pub struct Trajectory {
    increments: Vec<Letter>,
    nodes: Vec<u32>,
    lengths: Vec<u64>,
    arena: StateArena,
    seed: u64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn increments(&self) -> &[Letter] {
        &self.increments
    }

    /// `d(1, X_i)` for every `i`.
    pub fn state_lengths(&self) -> &[u64] {
        &self.lengths
    }

    /// Materialize `X_i`.
    pub fn state(&self, i: usize) -> GroupElement {
        let mut sylls = Vec::new();
        let mut node = self.nodes[i];
        while node != 0 {
            sylls.push(self.arena.syllable[node as usize].clone().unwrap());
            node = self.arena.parent[node as usize];
        }
        sylls.reverse();
        GroupElement::from_syllables(sylls)
    }

    /// Exact `d(X_i, X_j)` through the arena (no materialization).
    pub fn state_distance(&self, group: &FreeProduct, i: usize, j: usize) -> u64 {
        let lca = LcaTable::build(&self.arena);
        self.state_distance_with(group, &lca, i, j)
    }

    fn state_distance_with(&self, group: &FreeProduct, lca: &LcaTable, i: usize, j: usize) -> u64 {
        let (u, v) = (self.nodes[i], self.nodes[j]);
        if u == v {
            return 0;
        }
        let meet = lca.lca(u, v);
        let base = self.arena.cum_len[meet as usize];
        let mut d = (self.lengths[i] - base) + (self.lengths[j] - base);
        let bu = lca.ancestor_below(u, meet);
        let bv = lca.ancestor_below(v, meet);
        if let (Some(su), Some(sv)) = (bu, bv) {
            let su = self.arena.syllable[su as usize].as_ref().unwrap();
            let sv = self.arena.syllable[sv as usize].as_ref().unwrap();
            if su.factor == sv.factor {
                let kind = group.spec().factor(su.factor);
                let merged = su.elem.inverse(kind).mul(&sv.elem, kind);
                d = d - su.elem.length(kind) - sv.elem.length(kind) + merged.length(kind);
            }
        }
        d
    }
}

struct LcaTable {
    up: Vec<Vec<u32>>,
    depth: Vec<u32>,
}

impl LcaTable {
    fn build(arena: &StateArena) -> LcaTable {
        let n = arena.parent.len();
        let levels = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut up = vec![arena.parent.clone()];
        for k in 1..levels {
            let prev = &up[k - 1];
            let next: Vec<u32> = (0..n).map(|v| prev[prev[v] as usize]).collect();
            up.push(next);
        }
        LcaTable {
            up,
            depth: arena.depth.clone(),
        }
    }

    fn lift(&self, mut v: u32, mut steps: u32) -> u32 {
        let mut k = 0;
        while steps > 0 {
            if steps & 1 == 1 {
                v = self.up[k][v as usize];
            }
            steps >>= 1;
            k += 1;
        }
        v
    }

    fn lca(&self, mut u: u32, mut v: u32) -> u32 {
        let (du, dv) = (self.depth[u as usize], self.depth[v as usize]);
        if du > dv {
            u = self.lift(u, du - dv);
        } else {
            v = self.lift(v, dv - du);
        }
        if u == v {
            return u;
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][u as usize] != self.up[k][v as usize] {
                u = self.up[k][u as usize];
                v = self.up[k][v as usize];
            }
        }
        self.up[0][u as usize]
    }

    /// The ancestor of `v` one level below `anc`, if `v != anc`.
    fn ancestor_below(&self, v: u32, anc: u32) -> Option<u32> {
        let dv = self.depth[v as usize];
        let da = self.depth[anc as usize];
        if dv <= da {
            return None;
        }
        Some(self.lift(v, dv - da - 1))
    }
}

/// Sample a trajectory of `n` steps, all states retained.
pub fn sample_trajectory(
    group: &FreeProduct,
    measure: &StepMeasure,
    n: usize,
    seed: u64,
) -> Result<Trajectory> {
    if n > TRAJECTORY_GUARD {
        return Err(Error::ResourceGuard(format!(
            "trajectory of {n} steps exceeds the {TRAJECTORY_GUARD}-state guard; use the streaming helpers"
        )));
    }
    let increments = sample_increments(measure, n, seed);
    let mut arena = StateArena::new();
    let mut stack_nodes: Vec<u32> = Vec::new();
    let mut st = NfStack::new();
    let mut nodes = Vec::with_capacity(n + 1);
    let mut lengths = Vec::with_capacity(n + 1);
    nodes.push(0);
    lengths.push(0);
    for &l in &increments {
        let op = st.push_letter(group.spec(), l);
        match op {
            StackOp::Popped => {
                stack_nodes.pop();
            }
            StackOp::Pushed | StackOp::ReplacedTop => {
                if matches!(op, StackOp::ReplacedTop) {
                    stack_nodes.pop();
                }
                let parent = stack_nodes.last().copied().unwrap_or(0);
                let syl = st.syllable(st.depth() - 1).clone();
                let len = syl.elem.length(group.spec().factor(syl.factor));
                stack_nodes.push(arena.child(parent, syl, len));
            }
        }
        nodes.push(stack_nodes.last().copied().unwrap_or(0));
        lengths.push(st.total_length());
    }
    Ok(Trajectory {
        increments,
        nodes,
        lengths,
        arena,
        seed,
    })
}

/// Monte Carlo escape-rate estimate with a percentile-bootstrap interval.
#[derive(Debug, Clone)]
pub struct DriftEstimate {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub per_trial: Vec<f64>,
}

/// Mean of `d(1, X_n) / n` over independent trajectories, with a 95%
/// bootstrap interval (seeded deterministically from `master_seed`).
pub fn drift_estimate(
    group: &FreeProduct,
    measure: &StepMeasure,
    n: usize,
    trials: usize,
    master_seed: u64,
) -> Result<DriftEstimate> {
    if n == 0 || trials < 2 {
        return Err(Error::invalid("drift needs n >= 1 and trials >= 2"));
    }
    let per_trial: Vec<f64> = (0..trials)
        .map(|t| {
            let incs = sample_increments(measure, n, derive_seed(master_seed, t as u64));
            group.word_length(&endpoint_of(group, &incs)) as f64 / n as f64
        })
        .collect();
    let summary = crate::stats::summarize_seeded(&per_trial, derive_seed(master_seed, u64::MAX))?;
    Ok(DriftEstimate {
        mean: summary.mean,
        ci_low: summary.ci_low,
        ci_high: summary.ci_high,
        per_trial,
    })
}

/// All progress violations of a trajectory at constant `c3`: pairs `i < j`
/// with `j - i >= c3 ln(n)` whose distance falls strictly below the linear
/// lower bound, `d(X_i, X_j) < (j - i) / c3`. (A walk moving at exactly the
/// bound, like one repeating a single letter at `c3 = 1`, is clean.)
pub fn subwalk_progress_violations(
    group: &FreeProduct,
    trajectory: &Trajectory,
    c3: f64,
) -> Vec<(usize, usize)> {
    scan_violations(group, trajectory, c3, false)
}

/// Whether the trajectory has any progress violation at constant `c3`.
pub fn subwalk_has_violation(group: &FreeProduct, trajectory: &Trajectory, c3: f64) -> bool {
    !scan_violations(group, trajectory, c3, true).is_empty()
}

fn scan_violations(
    group: &FreeProduct,
    trajectory: &Trajectory,
    c3: f64,
    stop_early: bool,
) -> Vec<(usize, usize)> {
    let n = trajectory.len();
    let mut out = Vec::new();
    if n == 0 || c3 <= 0.0 {
        return out;
    }
    let min_gap = (c3 * (n as f64).ln()).ceil().max(1.0) as usize;
    let lens = &trajectory.lengths;
    let lca = LcaTable::build(&trajectory.arena);
    for i in 0..n {
        for j in (i + min_gap).max(i + 1)..=n {
            let gap = j - i;
            let bound = gap as f64 / c3;
            // d(X_i, X_j) >= |len_i - len_j|, so most pairs are clean
            if lens[i].abs_diff(lens[j]) as f64 >= bound {
                continue;
            }
            let d = trajectory.state_distance_with(group, &lca, i, j);
            if (d as f64) < bound {
                out.push((i, j));
                if stop_early {
                    return out;
                }
            }
        }
    }
    out
}

/// The smallest `c3` (up to `step`) with an empty violation set, capped.
pub fn subwalk_min_clean_c3(
    group: &FreeProduct,
    trajectory: &Trajectory,
    cap: f64,
    step: f64,
) -> f64 {
    let mut c3 = 1.0;
    while c3 < cap {
        if !subwalk_has_violation(group, trajectory, c3) {
            return c3;
        }
        c3 += step;
    }
    cap
}

/// One draw of the peripheral-projection statistic: the largest projection
/// distance `d_H(1, X_n)` over all peripheral cosets `H`.
pub fn projection_tail_sample(group: &FreeProduct, increments: &[Letter]) -> u64 {
    group.max_projection(&endpoint_of(group, increments)).0
}

/// Maximum factor length among the syllables of an element; exposed for the
/// streaming experiments that only need the endpoint statistic.
pub fn max_syllable_of(group: &FreeProduct, x: &GroupElement) -> u64 {
    x.syllables()
        .iter()
        .map(|s| s.elem.length(group.spec().factor(s.factor)))
        .max()
        .unwrap_or(0)
}

impl FreeProduct {
    /// Letter for a `FactorElement` single step, used in tests.
    pub fn single_syllable(&self, factor: usize, elem: FactorElement) -> GroupElement {
        GroupElement::from_syllables(vec![Syllable { factor, elem }])
    }
}
