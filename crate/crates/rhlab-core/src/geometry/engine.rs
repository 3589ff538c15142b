//! The tracking engine: certified Hausdorff brackets between a point set
//! and one geodesic (or its transient subset), in one pass over the points.
//!
//! Direction point->geodesic is resolved per point through its branch view.
//! Direction geodesic->set is resolved by seeding exact distances at the
//! points' gates and running a two-pass slope-1 relaxation along the arc;
//! the adversarial (sup over geodesics) side additionally takes per-block
//! maxima over hull cells via a weighted L1 distance transform whose sources
//! are the gates collected during the pass.

use super::factor_metric::{
    circle_dist, fe_dist, fe_dist_to_canonical_path, fe_dist_to_canonical_window,
    fe_maxmin_over_paths, fe_maxmin_window, fe_path_point,
};
use super::{BoundPair, GeodesicFrame, PointView, TrackingTarget, TransientParams};
use crate::error::Result;
use crate::group::{FactorElement, FactorKind, FreeProduct, GroupElement};
use std::collections::HashMap;

/// Volume cap for the per-point adversarial DP; above it the engine keeps a
/// sound level-set upper bound instead.
const ENGINE_DP_CAP: u64 = 4096;

/// Total cell budget for the per-block distance transforms.
const CHAMFER_BUDGET: u64 = 1_000_000;

pub(crate) struct TrackingEngine<'g> {
    group: &'g FreeProduct,
    frame: GeodesicFrame,
    depth: u64,
    /// Exact `d(v_z, S)` per arc position after relaxation.
    dist2: Vec<u64>,
    /// Interior gates per block: factor element -> distance of the nearest
    /// set point gating through it.
    sources: Vec<HashMap<FactorElement, u64>>,
    dir1_geo_lower: u64,
    dir1_geo_upper: u64,
    dir1_trans_lower: u64,
    dir1_trans_upper: u64,
}

pub(crate) struct EngineOutcome {
    pub geodesic: BoundPair,
    pub transient: BoundPair,
    /// Canonical-target detour maxima (geodesic->set direction only).
    pub max_detour_transient: u64,
    #[allow(dead_code)]
    pub max_detour_geodesic: u64,
}

impl<'g> TrackingEngine<'g> {
    pub fn new(group: &'g FreeProduct, frame: GeodesicFrame, params: TransientParams) -> Self {
        let len = frame.total() as usize;
        let blocks = frame.syllable_count();
        TrackingEngine {
            group,
            frame,
            depth: params.depth,
            dist2: vec![u64::MAX; len + 1],
            sources: vec![HashMap::new(); blocks],
            dir1_geo_lower: 0,
            dir1_geo_upper: 0,
            dir1_trans_lower: 0,
            dir1_trans_upper: 0,
        }
    }

    pub fn frame(&self) -> &GeodesicFrame {
        &self.frame
    }

    pub fn add_view(&mut self, view: &PointView) {
        let l = view.lcp;
        let arc_l = self.frame.arc(l);
        let d_left = view.d_left;
        seed(&mut self.dist2, arc_l, d_left);
        match &view.split {
            None => {
                self.dir1_geo_lower = self.dir1_geo_lower.max(d_left);
                self.dir1_geo_upper = self.dir1_geo_upper.max(d_left);
                self.dir1_trans_lower = self.dir1_trans_lower.max(d_left);
                self.dir1_trans_upper = self.dir1_trans_upper.max(d_left);
            }
            Some(sp) => {
                let syl = self.frame.syllable(l);
                let kind = self.group.spec().factor(syl.factor);
                let len = self.frame.block_len(l);
                let d_right = sp.rest + fe_dist(kind, &syl.elem, &sp.tau);
                seed(&mut self.dist2, self.frame.arc(l + 1), d_right);
                // exact overlay inside the split block
                for k in 1..len {
                    let p = fe_path_point(kind, &syl.elem, k);
                    seed(
                        &mut self.dist2,
                        arc_l + k,
                        sp.rest + fe_dist(kind, &p, &sp.tau),
                    );
                }
                let c_geo = sp.rest + fe_dist_to_canonical_path(kind, &syl.elem, &sp.tau);
                let c_trans =
                    sp.rest + fe_dist_to_canonical_window(kind, &syl.elem, &sp.tau, self.depth);
                let mm_geo = fe_maxmin_over_paths(kind, &syl.elem, &sp.tau, ENGINE_DP_CAP);
                let mm_trans =
                    fe_maxmin_window(kind, &syl.elem, &sp.tau, self.depth, ENGINE_DP_CAP);
                self.dir1_geo_lower = self.dir1_geo_lower.max(c_geo);
                self.dir1_geo_upper = self.dir1_geo_upper.max(sp.rest + mm_geo.upper);
                self.dir1_trans_lower = self.dir1_trans_lower.max(c_trans);
                self.dir1_trans_upper = self.dir1_trans_upper.max(sp.rest + mm_trans.upper);
                self.sources[l]
                    .entry(sp.tau.clone())
                    .and_modify(|w| *w = (*w).min(sp.rest))
                    .or_insert(sp.rest);
            }
        }
    }

    pub fn add_element(&mut self, x: &GroupElement, s: &GroupElement) {
        let tau = self.group.left_difference(x, s);
        let view = self.frame.view_of_element(self.group, &tau);
        self.add_view(&view);
    }

    pub fn finalize(mut self) -> EngineOutcome {
        // slope-1 relaxation makes dist2 the exact d(v_z, S)
        for z in 1..self.dist2.len() {
            let relaxed = self.dist2[z - 1].saturating_add(1);
            if relaxed < self.dist2[z] {
                self.dist2[z] = relaxed;
            }
        }
        for z in (0..self.dist2.len() - 1).rev() {
            let relaxed = self.dist2[z + 1].saturating_add(1);
            if relaxed < self.dist2[z] {
                self.dist2[z] = relaxed;
            }
        }
        let mask = self.frame.transient_mask(self.depth);
        let mut dir2_geo_lower = 0u64;
        let mut dir2_trans_lower = 0u64;
        for (z, &v) in self.dist2.iter().enumerate() {
            dir2_geo_lower = dir2_geo_lower.max(v);
            if mask[z] {
                dir2_trans_lower = dir2_trans_lower.max(v);
            }
        }

        // adversarial geodesic->set direction: per-block hull maxima
        let mut dir2_geo_upper = dir2_geo_lower;
        let mut dir2_trans_upper = dir2_trans_lower;
        let mut budget = CHAMFER_BUDGET;
        for t in 0..self.frame.syllable_count() {
            let syl = self.frame.syllable(t).clone();
            let kind = self.group.spec().factor(syl.factor).clone();
            let len = self.frame.block_len(t);
            let a = self.dist2[self.frame.arc(t) as usize];
            let b = self.dist2[self.frame.arc(t + 1) as usize];
            let degenerate = match &syl.elem {
                FactorElement::Vector(v) => v.iter().filter(|&&c| c != 0).count() <= 1,
                FactorElement::Residue(r) => {
                    let m = match kind {
                        FactorKind::FiniteCyclic { modulus } => modulus,
                        _ => unreachable!(),
                    };
                    !(m % 2 == 0 && *r == m / 2)
                }
                FactorElement::Word(_) => true,
            };
            if degenerate {
                continue; // hull equals the canonical path, already covered
            }
            let volume = crate::group::factor_geodesic_hull(&kind, &syl.elem).point_count();
            if volume <= budget {
                budget -= volume;
                let (geo_max, trans_max) =
                    block_hull_max(&kind, &syl.elem, a, b, &self.sources[t], self.depth);
                dir2_geo_upper = dir2_geo_upper.max(geo_max);
                dir2_trans_upper = dir2_trans_upper.max(trans_max);
            } else {
                // sound ridge bound through the two corner gates
                dir2_geo_upper = dir2_geo_upper.max(ridge_max(a, b, len, 0..=len));
                let window_levels =
                    (0..=self.depth.min(len)).chain(len.saturating_sub(self.depth)..=len);
                let mut trans_ridge = 0;
                for c in window_levels {
                    trans_ridge = trans_ridge.max((a + c).min(b + (len - c)));
                }
                dir2_trans_upper = dir2_trans_upper.max(trans_ridge);
            }
        }

        let geodesic = BoundPair {
            lower: self.dir1_geo_lower.max(dir2_geo_lower),
            upper: self.dir1_geo_upper.max(dir2_geo_upper),
            exact: false,
        };
        let transient = BoundPair {
            lower: self.dir1_trans_lower.max(dir2_trans_lower),
            upper: self.dir1_trans_upper.max(dir2_trans_upper),
            exact: false,
        };
        EngineOutcome {
            geodesic: BoundPair {
                exact: geodesic.lower == geodesic.upper,
                ..geodesic
            },
            transient: BoundPair {
                exact: transient.lower == transient.upper,
                ..transient
            },
            max_detour_transient: dir2_trans_lower,
            max_detour_geodesic: dir2_geo_lower,
        }
    }
}

fn seed(dist2: &mut [u64], z: u64, v: u64) {
    let cell = &mut dist2[z as usize];
    if v < *cell {
        *cell = v;
    }
}

fn ridge_max(a: u64, b: u64, len: u64, range: std::ops::RangeInclusive<u64>) -> u64 {
    // max over positions c of min(a + c, b + len - c); the min is unimodal,
    // so checking the crossing point and the range ends suffices
    let eval = |c: u64| (a + c).min(b + (len - c));
    let cross = (b + len).saturating_sub(a) / 2;
    let mut best = eval(*range.start()).max(eval(*range.end()));
    for c in [cross.saturating_sub(1), cross, cross + 1] {
        if range.contains(&c) {
            best = best.max(eval(c));
        }
    }
    best
}

/// Exact `max over hull cells of d(cell, S)` for one non-degenerate block,
/// via a weighted L1 distance transform over the hull with sources at the
/// block's two corner gates plus the interior gates of the set.
fn block_hull_max(
    kind: &FactorKind,
    elem: &FactorElement,
    corner_a: u64,
    corner_b: u64,
    interior: &HashMap<FactorElement, u64>,
    depth: u64,
) -> (u64, u64) {
    match (elem, kind) {
        (FactorElement::Vector(ev), _) => {
            let d = ev.len();
            let b: Vec<u64> = ev.iter().map(|c| c.unsigned_abs()).collect();
            let sign = |c: usize, x: i64| if ev[c] < 0 { -x } else { x };
            let total: u64 = b.iter().sum();
            let mut stride = vec![1usize; d];
            for c in 1..d {
                stride[c] = stride[c - 1] * (b[c - 1] as usize + 1);
            }
            let vol: usize = b.iter().map(|&c| c as usize + 1).product();
            let mut val = vec![u64::MAX; vol];
            // corner sources
            val[0] = corner_a;
            val[vol - 1] = val[vol - 1].min(corner_b);
            // interior gates, clamped into the box coordinate-wise
            for (g, &w) in interior {
                let gv = match g {
                    FactorElement::Vector(v) => v,
                    _ => unreachable!(),
                };
                let mut idx = 0usize;
                let mut extra = 0u64;
                for c in 0..d {
                    let x = sign(c, gv[c]);
                    let clamped = x.clamp(0, b[c] as i64);
                    extra += x.abs_diff(clamped);
                    idx += clamped as usize * stride[c];
                }
                let v = w + extra;
                if v < val[idx] {
                    val[idx] = v;
                }
            }
            // forward and backward chamfer passes compute the weighted L1
            // transform exactly
            for idx in 0..vol {
                let mut p = idx;
                for c in 0..d {
                    let coord = p % (b[c] as usize + 1);
                    p /= b[c] as usize + 1;
                    if coord > 0 {
                        let relaxed = val[idx - stride[c]].saturating_add(1);
                        if relaxed < val[idx] {
                            val[idx] = relaxed;
                        }
                    }
                }
            }
            for idx in (0..vol).rev() {
                let mut p = idx;
                for c in 0..d {
                    let coord = p % (b[c] as usize + 1);
                    p /= b[c] as usize + 1;
                    if coord < b[c] as usize {
                        let relaxed = val[idx + stride[c]].saturating_add(1);
                        if relaxed < val[idx] {
                            val[idx] = relaxed;
                        }
                    }
                }
            }
            let mut geo_max = 0u64;
            let mut trans_max = 0u64;
            for (idx, &v) in val.iter().enumerate() {
                let mut p = idx;
                let mut level = 0u64;
                for c in 0..d {
                    level += (p % (b[c] as usize + 1)) as u64;
                    p /= b[c] as usize + 1;
                }
                geo_max = geo_max.max(v);
                if level <= depth || level + depth >= total {
                    trans_max = trans_max.max(v);
                }
            }
            (geo_max, trans_max)
        }
        (FactorElement::Residue(r), FactorKind::FiniteCyclic { modulus }) => {
            let m = *modulus;
            debug_assert!(m % 2 == 0 && *r == m / 2);
            let len = m / 2;
            let mut geo_max = 0u64;
            let mut trans_max = 0u64;
            for p in 0..m {
                let mut v = (corner_a + circle_dist(m, p, 0)).min(corner_b + circle_dist(m, p, *r));
                for (g, &w) in interior {
                    let gr = match g {
                        FactorElement::Residue(x) => *x,
                        _ => unreachable!(),
                    };
                    v = v.min(w + circle_dist(m, p, gr));
                }
                let level = circle_dist(m, p, 0);
                geo_max = geo_max.max(v);
                if level <= depth || level + depth >= len {
                    trans_max = trans_max.max(v);
                }
            }
            (geo_max, trans_max)
        }
        _ => unreachable!("degenerate hulls are filtered before this point"),
    }
}

/// Certified Hausdorff bracket between a finite point set and a geodesic
/// from `x` to `y` (or its transient subset): the lower value is attained on
/// the canonical geodesic, the upper bounds the supremum over all geodesics.
pub fn hausdorff_tracking(
    group: &FreeProduct,
    set: &[GroupElement],
    x: &GroupElement,
    y: &GroupElement,
    params: TransientParams,
    target: TrackingTarget,
) -> Result<BoundPair> {
    super::require_nonempty(set)?;
    let frame = GeodesicFrame::new(group, &group.left_difference(x, y));
    let mut engine = TrackingEngine::new(group, frame, params);
    for s in set {
        engine.add_element(x, s);
    }
    let outcome = engine.finalize();
    Ok(match target {
        TrackingTarget::Geodesic => outcome.geodesic,
        TrackingTarget::Transient => outcome.transient,
    })
}
