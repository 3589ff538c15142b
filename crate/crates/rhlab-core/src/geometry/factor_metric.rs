//! Distance primitives inside a single factor.
//!
//! Everything a geodesic can do between two cut vertices happens inside one
//! factor, so the sup/inf-over-geodesics statistics reduce to factor-level
//! questions: distance from a point to the canonical path, to the hull of
//! all geodesics, and the adversarial `max over paths of min over vertices`
//! value, computed by dynamic programming over the hull.

use crate::group::{FactorElement, FactorKind};

pub(crate) fn circle_dist(m: u64, a: u64, b: u64) -> u64 {
    let d = a.abs_diff(b);
    d.min(m - d)
}

pub(crate) fn word_lcp(a: &[i32], b: &[i32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Distance between two elements of the same factor.
pub(crate) fn fe_dist(kind: &FactorKind, a: &FactorElement, b: &FactorElement) -> u64 {
    a.dist(b, kind)
}

fn interval_dist(x: i64, e: i64) -> u64 {
    let (lo, hi) = if e >= 0 { (0, e) } else { (e, 0) };
    if x < lo {
        (lo - x) as u64
    } else if x > hi {
        (x - hi) as u64
    } else {
        0
    }
}

/// Distance from `s` to the canonical path `0 -> e` (coordinate order for
/// vectors, shorter arc for residues, the unique reduced path for words).
pub(crate) fn fe_dist_to_canonical_path(
    kind: &FactorKind,
    e: &FactorElement,
    s: &FactorElement,
) -> u64 {
    match (e, s) {
        (FactorElement::Vector(ev), FactorElement::Vector(sv)) => {
            // segment c fixes coordinates < c at their targets and > c at 0
            let d = ev.len();
            let mut best = u64::MAX;
            let mut head: u64 = 0; // sum_{r<c} |s_r - e_r|
            let mut tail: u64 = sv.iter().map(|&x| x.unsigned_abs()).sum();
            for c in 0..d {
                tail -= sv[c].unsigned_abs();
                let here = head + interval_dist(sv[c], ev[c]) + tail;
                best = best.min(here);
                head += sv[c].abs_diff(ev[c]);
            }
            best
        }
        (FactorElement::Residue(r), FactorElement::Residue(s)) => {
            let m = match kind {
                FactorKind::FiniteCyclic { modulus } => *modulus,
                _ => unreachable!(),
            };
            let forward = *r <= m - r;
            let on_arc = if forward {
                *s <= *r
            } else {
                *s == 0 || *s >= *r
            };
            if on_arc {
                0
            } else {
                circle_dist(m, *s, 0).min(circle_dist(m, *s, *r))
            }
        }
        (FactorElement::Word(w), FactorElement::Word(sw)) => (sw.len() - word_lcp(sw, w)) as u64,
        _ => unreachable!(),
    }
}

/// Distance from `s` to the union of all geodesics `0 -> e`.
pub(crate) fn fe_dist_to_hull(kind: &FactorKind, e: &FactorElement, s: &FactorElement) -> u64 {
    match (e, s) {
        (FactorElement::Vector(ev), FactorElement::Vector(sv)) => {
            ev.iter().zip(sv).map(|(&t, &x)| interval_dist(x, t)).sum()
        }
        (FactorElement::Residue(r), FactorElement::Residue(_)) => {
            let m = match kind {
                FactorKind::FiniteCyclic { modulus } => *modulus,
                _ => unreachable!(),
            };
            if m % 2 == 0 && *r == m / 2 {
                0 // both arcs: the hull is the whole cycle
            } else {
                fe_dist_to_canonical_path(kind, e, s)
            }
        }
        (FactorElement::Word(_), FactorElement::Word(_)) => fe_dist_to_canonical_path(kind, e, s),
        _ => unreachable!(),
    }
}

/// The vertex of the canonical path `0 -> e` at arc position `k`,
/// re-exported here for window scans.
pub(crate) use crate::group::factor_path_point as fe_path_point;

/// Minimum distance from `s` to the transient window of the canonical path:
/// vertices at arc position `<= depth` or `>= len - depth`.
pub(crate) fn fe_dist_to_canonical_window(
    kind: &FactorKind,
    e: &FactorElement,
    s: &FactorElement,
    depth: u64,
) -> u64 {
    let len = e.length(kind);
    if len <= 2 * depth + 1 {
        return fe_dist_to_canonical_path(kind, e, s);
    }
    let mut best = u64::MAX;
    for k in 0..=depth {
        best = best.min(fe_dist(kind, &fe_path_point(kind, e, k), s));
        best = best.min(fe_dist(kind, &fe_path_point(kind, e, len - k), s));
    }
    best
}

/// Result of an adversarial-path computation: exact when the hull fits the
/// volume cap, otherwise a certified bracket from extremal staircases
/// (lower) and level sets (upper).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Maxmin {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
}

impl Maxmin {
    fn exact(v: u64) -> Maxmin {
        Maxmin {
            lower: v,
            upper: v,
            exact: true,
        }
    }
}

/// Default hull-volume cap for exact adversarial dynamic programs.
pub(crate) const MAXMIN_VOL_CAP: u64 = 1_000_000;

fn sign_normalize(ev: &[i64], sv: &[i64]) -> (Vec<u64>, Vec<i64>) {
    let b: Vec<u64> = ev.iter().map(|c| c.unsigned_abs()).collect();
    let s: Vec<i64> = ev
        .iter()
        .zip(sv)
        .map(|(&e, &x)| if e < 0 { -x } else { x })
        .collect();
    (b, s)
}

/// Exact `max over monotone lattice paths 0 -> b of min over path vertices
/// of L1 distance to s`, optionally with the min restricted to the transient
/// window (`level <= depth` or `level >= total - depth`).
fn vector_maxmin_dp(b: &[u64], s: &[i64], window: Option<u64>) -> u64 {
    let d = b.len();
    let total: u64 = b.iter().sum();
    let vol: usize = b.iter().map(|&c| c as usize + 1).product();
    let mut stride = vec![1usize; d];
    for c in 1..d {
        stride[c] = stride[c - 1] * (b[c - 1] as usize + 1);
    }
    let in_window = |level: u64| match window {
        None => true,
        Some(depth) => level <= depth || level + depth >= total,
    };
    let mut val = vec![u64::MAX; vol];
    let mut p = vec![0u64; d];
    for idx in 0..vol {
        let level: u64 = p.iter().sum();
        // the adversary picks the best predecessor path
        let mut base = u64::MAX;
        let mut seen = false;
        for c in 0..d {
            if p[c] > 0 {
                let v = val[idx - stride[c]];
                base = if seen { base.max(v) } else { v };
                seen = true;
            }
        }
        let dist: u64 = p
            .iter()
            .zip(s)
            .map(|(&pc, &sc)| (pc as i64).abs_diff(sc))
            .sum();
        val[idx] = if !seen {
            dist // the origin; level 0 is always in the window
        } else if in_window(level) {
            base.min(dist)
        } else {
            base
        };
        // mixed-radix increment
        for c in 0..d {
            if p[c] < b[c] {
                p[c] += 1;
                break;
            }
            p[c] = 0;
        }
    }
    val[vol - 1]
}

/// Max of `|p - s|_1` over the level set `{p in box(b) : sum p = c}`,
/// exact for rank <= 2, a sound upper bound above that.
fn vector_level_max(b: &[u64], s: &[i64], c: u64) -> u64 {
    match b.len() {
        1 => (c as i64).abs_diff(s[0]),
        2 => {
            let lo = c.saturating_sub(b[1]);
            let hi = c.min(b[0]);
            let eval = |x: u64| (x as i64).abs_diff(s[0]) + ((c - x) as i64).abs_diff(s[1]);
            eval(lo).max(eval(hi))
        }
        _ => {
            // crude but sound: go through whichever corner is closer
            let to_zero: u64 = s.iter().map(|&x| x.unsigned_abs()).sum();
            let to_corner: u64 = b.iter().zip(s).map(|(&t, &x)| (t as i64).abs_diff(x)).sum();
            let total: u64 = b.iter().sum();
            (to_zero + c).min(to_corner + (total - c))
        }
    }
}

/// Distance from `s` to the staircase spelling the coordinates of `b` in
/// the given visit order.
fn vector_staircase_dist(
    ev: &[i64],
    sv: &[i64],
    order: impl Iterator<Item = usize> + Clone,
) -> u64 {
    let mut best = u64::MAX;
    for (step, c) in order.clone().enumerate() {
        let mut here = interval_dist(sv[c], ev[c]);
        for (r_step, r) in order.clone().enumerate() {
            if r == c {
                continue;
            }
            here += if r_step < step {
                sv[r].abs_diff(ev[r])
            } else {
                sv[r].unsigned_abs()
            };
        }
        best = best.min(here);
    }
    best
}

/// `max over geodesics 0 -> e of (min over path vertices of d(., s))`.
pub(crate) fn fe_maxmin_over_paths(
    kind: &FactorKind,
    e: &FactorElement,
    s: &FactorElement,
    vol_cap: u64,
) -> Maxmin {
    fe_maxmin_impl(kind, e, s, None, vol_cap)
}

/// Same with the inner min restricted to the transient window of the path.
pub(crate) fn fe_maxmin_window(
    kind: &FactorKind,
    e: &FactorElement,
    s: &FactorElement,
    depth: u64,
    vol_cap: u64,
) -> Maxmin {
    fe_maxmin_impl(kind, e, s, Some(depth), vol_cap)
}

fn fe_maxmin_impl(
    kind: &FactorKind,
    e: &FactorElement,
    s: &FactorElement,
    window: Option<u64>,
    vol_cap: u64,
) -> Maxmin {
    let len = e.length(kind);
    let window = window.filter(|&d| len > 2 * d + 1); // full window = plain min
    match (e, s) {
        (FactorElement::Vector(ev), FactorElement::Vector(sv)) => {
            let (b, sn) = sign_normalize(ev, sv);
            let vol: u64 = b.iter().map(|&c| c + 1).product();
            if vol <= vol_cap {
                return Maxmin::exact(vector_maxmin_dp(&b, &sn, window));
            }
            // certified bracket: any concrete staircase bounds from below,
            // level sets bound from above (every path crosses each level)
            let d = ev.len();
            let lower = match window {
                None => vector_staircase_dist(ev, sv, 0..d).max(vector_staircase_dist(
                    ev,
                    sv,
                    (0..d).rev(),
                )),
                Some(depth) => {
                    // evaluate the window vertices of the two staircases
                    let mut lo = 0u64;
                    for order in [false, true] {
                        let perm: Vec<usize> = if order {
                            (0..d).rev().collect()
                        } else {
                            (0..d).collect()
                        };
                        let mut best = u64::MAX;
                        for k in (0..=depth.min(len)).chain(len.saturating_sub(depth)..=len) {
                            let p = staircase_point(ev, &perm, k);
                            best = best.min(fe_dist(kind, &FactorElement::Vector(p), s));
                        }
                        lo = lo.max(best);
                    }
                    lo
                }
            };
            let levels: Box<dyn Iterator<Item = u64>> = match window {
                None => Box::new(0..=len),
                Some(depth) => Box::new((0..=depth).chain(len - depth..=len)),
            };
            let upper = levels
                .map(|c| vector_level_max(&b, &sn, c))
                .min()
                .unwrap_or(0);
            Maxmin {
                lower: lower.min(upper),
                upper,
                exact: false,
            }
        }
        (FactorElement::Residue(r), FactorElement::Residue(sr)) => {
            let m = match kind {
                FactorKind::FiniteCyclic { modulus } => *modulus,
                _ => unreachable!(),
            };
            let fwd_ok = *r <= m - r;
            let bwd_ok = m - r <= *r;
            let arc_min = |forward: bool| -> u64 {
                let mut best = u64::MAX;
                for k in 0..=len {
                    let in_window = window.is_none_or(|d| k <= d || k + d >= len);
                    if !in_window {
                        continue;
                    }
                    let v = if forward { k % m } else { (m - k % m) % m };
                    best = best.min(circle_dist(m, v, *sr));
                }
                best
            };
            let mut best = 0u64;
            if fwd_ok {
                best = best.max(arc_min(true));
            }
            if bwd_ok {
                best = best.max(arc_min(false));
            }
            Maxmin::exact(best)
        }
        (FactorElement::Word(_), FactorElement::Word(_)) => {
            let v = match window {
                None => fe_dist_to_canonical_path(kind, e, s),
                Some(depth) => fe_dist_to_canonical_window(kind, e, s, depth),
            };
            Maxmin::exact(v)
        }
        _ => unreachable!(),
    }
}

fn staircase_point(ev: &[i64], perm: &[usize], k: u64) -> Vec<i64> {
    let mut p = vec![0i64; ev.len()];
    let mut left = k;
    for &c in perm {
        let take = left.min(ev[c].unsigned_abs());
        p[c] = if ev[c] < 0 {
            -(take as i64)
        } else {
            take as i64
        };
        left -= take;
        if left == 0 {
            break;
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec2(x: i64, y: i64) -> FactorElement {
        FactorElement::Vector(vec![x, y])
    }

    const Z2: FactorKind = FactorKind::FreeAbelian { rank: 2 };

    #[test]
    fn canonical_path_distance() {
        // path 0 -> (3,0) is an axis segment
        assert_eq!(fe_dist_to_canonical_path(&Z2, &vec2(3, 0), &vec2(0, 1)), 1);
        assert_eq!(fe_dist_to_canonical_path(&Z2, &vec2(3, 0), &vec2(2, 0)), 0);
        // path 0 -> (2,2) goes along x first
        assert_eq!(fe_dist_to_canonical_path(&Z2, &vec2(2, 2), &vec2(0, 2)), 2);
        assert_eq!(fe_dist_to_canonical_path(&Z2, &vec2(2, 2), &vec2(1, 1)), 1);
    }

    #[test]
    fn maxmin_matches_brute_force_on_small_boxes() {
        // brute force: enumerate all monotone paths recursively
        fn brute(b: (u64, u64), s: (i64, i64)) -> u64 {
            fn go(p: (u64, u64), b: (u64, u64), s: (i64, i64), run_min: u64) -> u64 {
                let d = (p.0 as i64).abs_diff(s.0) + (p.1 as i64).abs_diff(s.1);
                let m = run_min.min(d);
                if p == b {
                    return m;
                }
                let mut best = 0;
                if p.0 < b.0 {
                    best = best.max(go((p.0 + 1, p.1), b, s, m));
                }
                if p.1 < b.1 {
                    best = best.max(go((p.0, p.1 + 1), b, s, m));
                }
                best
            }
            go((0, 0), b, s, u64::MAX)
        }
        for (bx, by) in [(2u64, 2u64), (3, 1), (4, 4), (1, 5)] {
            for sx in -2..=(bx as i64 + 2) {
                for sy in -2..=(by as i64 + 2) {
                    let got = fe_maxmin_over_paths(
                        &Z2,
                        &vec2(bx as i64, by as i64),
                        &vec2(sx, sy),
                        MAXMIN_VOL_CAP,
                    );
                    assert!(got.exact);
                    assert_eq!(
                        got.lower,
                        brute((bx, by), (sx, sy)),
                        "box ({bx},{by}) s ({sx},{sy})"
                    );
                }
            }
        }
    }

    #[test]
    fn maxmin_examples() {
        // box 2x2 around (1,1): adversary routes via a corner
        let r = fe_maxmin_over_paths(&Z2, &vec2(2, 2), &vec2(1, 1), MAXMIN_VOL_CAP);
        assert_eq!((r.lower, r.exact), (1, true));
        // point (-1,0) vs box to (-1,1)
        let r = fe_maxmin_over_paths(&Z2, &vec2(-1, 1), &vec2(-1, 0), MAXMIN_VOL_CAP);
        assert_eq!((r.lower, r.exact), (1, true));
    }

    #[test]
    fn fallback_brackets_exact_value() {
        for (b, s) in [
            (vec2(9, 7), vec2(4, 2)),
            (vec2(12, 5), vec2(-3, 9)),
            (vec2(6, 6), vec2(3, 3)),
        ] {
            let exact = fe_maxmin_over_paths(&Z2, &b, &s, MAXMIN_VOL_CAP);
            let bracket = fe_maxmin_over_paths(&Z2, &b, &s, 4);
            assert!(exact.exact);
            assert!(!bracket.exact);
            assert!(bracket.lower <= exact.lower, "{bracket:?} vs {exact:?}");
            assert!(bracket.upper >= exact.upper, "{bracket:?} vs {exact:?}");
        }
    }

    #[test]
    fn cyclic_maxmin_uses_both_arcs_at_antipode() {
        let kind = FactorKind::FiniteCyclic { modulus: 4 };
        // target t^2: arcs 0,1,2 and 0,3,2; the point 1 is on one arc only
        let r = fe_maxmin_over_paths(
            &kind,
            &FactorElement::Residue(2),
            &FactorElement::Residue(1),
            100,
        );
        assert_eq!((r.lower, r.exact), (1, true));
        // m=5 has a unique arc
        let kind5 = FactorKind::FiniteCyclic { modulus: 5 };
        let r = fe_maxmin_over_paths(
            &kind5,
            &FactorElement::Residue(2),
            &FactorElement::Residue(4),
            100,
        );
        assert_eq!((r.lower, r.exact), (1, true));
    }

    #[test]
    fn window_restricts_the_min() {
        // long segment (6,0), window depth 1: only positions {0,1,5,6} count
        let r = fe_maxmin_window(&Z2, &vec2(6, 0), &vec2(3, 0), 1, MAXMIN_VOL_CAP);
        assert_eq!((r.lower, r.exact), (2, true));
        // whole path transient when short
        let r = fe_maxmin_window(&Z2, &vec2(2, 0), &vec2(1, 0), 1, MAXMIN_VOL_CAP);
        assert_eq!((r.lower, r.exact), (0, true));
    }

    #[test]
    fn word_distances() {
        let kind = FactorKind::Free { rank: 2 };
        let e = FactorElement::Word(vec![1, 2, 1]);
        let s = FactorElement::Word(vec![1, 2, -1]);
        assert_eq!(fe_dist(&kind, &e, &s), 2);
        assert_eq!(fe_dist_to_canonical_path(&kind, &e, &s), 1);
        assert_eq!(fe_dist_to_hull(&kind, &e, &s), 1);
    }
}
