//! Brute-force equivalence tests: every fast path in the crate against an
//! independent enumeration oracle at desk scale.

mod common;

use common::{enumerate_geodesics, naive_hausdorff, transient_positions, WordSampler};
use rhlab_core::walk::{sample_increments, StepMeasure};
use rhlab_core::{
    hausdorff_tracking, transient_decomposition, triangle_thinness, FreeProduct, GroupElement,
    PeripheralCoset, TrackingTarget, TransientParams,
};
use std::collections::{HashMap, HashSet};

fn ctx(s: &str) -> FreeProduct {
    FreeProduct::parse(s).unwrap()
}

fn id() -> GroupElement {
    GroupElement::identity()
}

/// Every coset handle meeting a ball, via the syllable cosets of its
/// elements plus the plain factor cosets of each element.
fn cosets_meeting_ball(group: &FreeProduct, ball: &rhlab_core::Ball) -> Vec<PeripheralCoset> {
    let mut set = HashSet::new();
    for e in ball.elements() {
        for f in 0..group.spec().factors().len() {
            set.insert(PeripheralCoset::new(e, f));
        }
    }
    let mut out: Vec<_> = set.into_iter().collect();
    out.sort();
    out
}

#[test]
fn projection_distance_matches_ball_minimum() {
    for spec in ["Z^2*Z^2", "Z^2*Z/3", "F_2"] {
        let g = ctx(spec);
        let ball = g.enumerate_ball(4).unwrap();
        // membership lists per coset
        let mut members: HashMap<PeripheralCoset, Vec<&GroupElement>> = HashMap::new();
        for e in ball.elements() {
            for f in 0..g.spec().factors().len() {
                members
                    .entry(PeripheralCoset::new(e, f))
                    .or_default()
                    .push(e);
            }
        }
        let mut sampler = WordSampler::new(11);
        let cosets: Vec<_> = members.keys().cloned().collect();
        for e in ball.elements().iter().step_by(7) {
            for _ in 0..6 {
                let coset = &cosets[sampler.below(cosets.len())];
                let proj = g.project_point(coset, e);
                let brute = members[coset]
                    .iter()
                    .map(|q| g.distance(e, q))
                    .min()
                    .unwrap();
                assert_eq!(
                    proj.distance,
                    brute,
                    "{spec}: {e} onto {}",
                    coset.render(&g)
                );
                // the projection point itself realizes the distance and
                // lies in the coset
                assert_eq!(g.distance(e, &proj.point), proj.distance);
                assert_eq!(g.project_point(coset, &proj.point).distance, 0);
            }
        }
    }
}

#[test]
fn behrstock_zero_exhaustive_small_ball() {
    let g = ctx("Z^2*Z^2");
    let ball = g.enumerate_ball(2).unwrap();
    let cosets = cosets_meeting_ball(&g, &ball);
    let mut max = 0;
    for x in ball.elements() {
        for (pi, p) in cosets.iter().enumerate() {
            for q in cosets.iter().skip(pi + 1) {
                max = max.max(g.behrstock_min(x, p, q).unwrap());
            }
        }
    }
    assert_eq!(max, 0);
}

#[test]
fn max_projection_matches_ball_brute_force() {
    let g = ctx("Z^2*Z/3");
    let ball = g.enumerate_ball(5).unwrap();
    let cosets = cosets_meeting_ball(&g, &ball);
    let mut sampler = WordSampler::new(23);
    for _ in 0..40 {
        let x = ball.elements()[sampler.below(ball.len())].clone();
        let (value, attained) = g.max_projection(&x);
        let brute = cosets
            .iter()
            .map(|h| g.coset_distance(h, &id(), &x))
            .max()
            .unwrap();
        assert_eq!(value, brute, "{x}");
        if let Some(c) = attained {
            assert_eq!(g.coset_distance(&c, &id(), &x), value);
        }
    }
}

#[test]
fn max_projection_of_long_elements_attained_on_syllable_cosets() {
    let g = ctx("Z^2*Z^2");
    let mut sampler = WordSampler::new(5);
    for _ in 0..50 {
        let x = sampler.element(&g, 20);
        let (value, _) = g.max_projection(&x);
        let syllable_max = g
            .syllable_cosets(&x)
            .iter()
            .map(|(c, _)| g.coset_distance(c, &id(), &x))
            .max()
            .unwrap_or(0);
        assert_eq!(value, syllable_max);
        // sampled foreign cosets never beat it
        for _ in 0..25 {
            let other = PeripheralCoset::new(&sampler.element(&g, 6), sampler.below(2));
            assert!(g.coset_distance(&other, &id(), &x) <= value);
        }
    }
}

#[test]
fn dist_point_to_geodesic_matches_naive_at_radius_eight() {
    let g = ctx("Z^2*Z^2");
    let mut sampler = WordSampler::new(808);
    for _ in 0..120 {
        let s = sampler.element(&g, 8);
        let x = sampler.element(&g, 8);
        let y = sampler.element(&g, 8);
        let path = g.canonical_geodesic(&x, &y);
        let naive = path
            .vertices
            .iter()
            .map(|v| g.distance(&s, v))
            .min()
            .unwrap();
        assert_eq!(
            g.dist_point_to_geodesic(&s, &path),
            naive,
            "s={s} x={x} y={y}"
        );
        assert_eq!(g.dist_point_to_canonical(&s, &x, &y), naive);
    }
}

#[test]
fn sup_dist_point_matches_enumerated_geodesics() {
    let g = ctx("Z^2*Z/4");
    let mut sampler = WordSampler::new(77);
    let mut checked = 0;
    while checked < 60 {
        let y = sampler.element(&g, 8);
        let s = sampler.element(&g, 6);
        let Some(geodesics) = enumerate_geodesics(&g, &id(), &y, 3000) else {
            continue;
        };
        let brute = geodesics
            .iter()
            .map(|gamma| gamma.iter().map(|v| g.distance(&s, v)).min().unwrap())
            .max()
            .unwrap();
        assert_eq!(
            g.sup_dist_point_over_geodesics(&s, &id(), &y).unwrap(),
            brute,
            "s={s} y={y}"
        );
        // the canonical distance is a lower bound attained by one geodesic
        let canonical = g.dist_point_to_canonical(&s, &id(), &y);
        assert!(canonical <= brute);
        checked += 1;
    }
}

#[test]
fn hull_to_set_matches_enumerated_geodesics() {
    let g = ctx("Z^2*Z^2");
    let mut sampler = WordSampler::new(99);
    let mut checked = 0;
    while checked < 40 {
        let y = sampler.element(&g, 7);
        let set: Vec<GroupElement> = (0..3).map(|_| sampler.element(&g, 5)).collect();
        let Some(geodesics) = enumerate_geodesics(&g, &id(), &y, 3000) else {
            continue;
        };
        let brute = geodesics
            .iter()
            .flat_map(|gamma| gamma.iter())
            .map(|v| set.iter().map(|s| g.distance(v, s)).min().unwrap())
            .max()
            .unwrap();
        assert_eq!(
            rhlab_core::geometry::sup_dist_hull_to_set(&g, &id(), &y, &set).unwrap(),
            brute
        );
        checked += 1;
    }
}

#[test]
fn hausdorff_bounds_bracket_enumerated_sup() {
    let g = ctx("Z^2*Z^2");
    let m = StepMeasure::simple(&g);
    let params = TransientParams { depth: 1 };
    for seed in 0..10u64 {
        let incs = sample_increments(&m, 20, seed);
        let mut states = vec![id()];
        let mut cur = id();
        for &l in &incs {
            cur = g.mul_letter(&cur, l);
            states.push(cur.clone());
        }
        let Some(geodesics) = enumerate_geodesics(&g, &id(), &cur, 800) else {
            continue;
        };
        let mask = transient_positions(&g, &id(), &cur, params.depth);
        for target in [TrackingTarget::Geodesic, TrackingTarget::Transient] {
            let bound = hausdorff_tracking(&g, &states, &id(), &cur, params, target).unwrap();
            let mut true_sup = 0;
            for gamma in &geodesics {
                let vertices: Vec<GroupElement> = match target {
                    TrackingTarget::Geodesic => gamma.clone(),
                    TrackingTarget::Transient => gamma
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask[*i])
                        .map(|(_, v)| v.clone())
                        .collect(),
                };
                true_sup = true_sup.max(naive_hausdorff(&g, &states, &vertices));
            }
            assert!(
                bound.lower <= true_sup && true_sup <= bound.upper,
                "seed {seed} {target:?}: {bound:?} vs sup {true_sup}"
            );
            if bound.exact {
                assert_eq!(bound.lower, true_sup);
            }
            // the lower value is the canonical geodesic's Hausdorff distance
            let canonical = &geodesics[canonical_index(&g, &geodesics, &cur)];
            let canonical_vertices: Vec<GroupElement> = match target {
                TrackingTarget::Geodesic => canonical.clone(),
                TrackingTarget::Transient => canonical
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask[*i])
                    .map(|(_, v)| v.clone())
                    .collect(),
            };
            assert_eq!(
                bound.lower,
                naive_hausdorff(&g, &states, &canonical_vertices),
                "seed {seed} {target:?} lower is not canonical"
            );
        }
    }
}

#[test]
fn hausdorff_brackets_across_factor_kinds() {
    // same bracket test on hulls with arcs and tree pieces
    for (spec, seeds) in [("Z/4*F_1", 0..14u64), ("Z^2*Z/3*F_1", 14..28u64)] {
        let g = ctx(spec);
        let m = StepMeasure::simple(&g);
        let params = TransientParams { depth: 1 };
        for seed in seeds {
            let incs = sample_increments(&m, 22, seed);
            let mut states = vec![id()];
            let mut cur = id();
            for &l in &incs {
                cur = g.mul_letter(&cur, l);
                states.push(cur.clone());
            }
            let Some(geodesics) = enumerate_geodesics(&g, &id(), &cur, 800) else {
                continue;
            };
            let mask = transient_positions(&g, &id(), &cur, params.depth);
            for target in [TrackingTarget::Geodesic, TrackingTarget::Transient] {
                let bound = hausdorff_tracking(&g, &states, &id(), &cur, params, target).unwrap();
                let mut true_sup = 0;
                for gamma in &geodesics {
                    let vertices: Vec<GroupElement> = gamma
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| matches!(target, TrackingTarget::Geodesic) || mask[*i])
                        .map(|(_, v)| v.clone())
                        .collect();
                    true_sup = true_sup.max(naive_hausdorff(&g, &states, &vertices));
                }
                assert!(
                    bound.lower <= true_sup && true_sup <= bound.upper,
                    "{spec} seed {seed} {target:?}: {bound:?} vs {true_sup}"
                );
                if bound.exact {
                    assert_eq!(bound.lower, true_sup, "{spec} seed {seed} {target:?}");
                }
            }
        }
    }
}

#[test]
fn tracker_stress_equivalence() {
    // the streaming tracker must agree with the generic engine on long
    // wandering walks across every factor kind
    let mut sampler = WordSampler::new(2024);
    for spec in ["Z^2*Z^2", "Z^2*Z/4", "Z/4*F_2", "Z^1*Z^2*Z/5"] {
        let g = ctx(spec);
        let letters = g.letters().to_vec();
        for round in 0..60 {
            let n = 20 + sampler.below(180);
            let incs: Vec<_> = (0..n)
                .map(|_| letters[sampler.below(letters.len())])
                .collect();
            let report = rhlab_core::track_walk(&g, &incs, TransientParams { depth: 1 });
            let mut states = vec![id()];
            let mut cur = id();
            for &l in &incs {
                cur = g.mul_letter(&cur, l);
                states.push(cur.clone());
            }
            let t = hausdorff_tracking(
                &g,
                &states,
                &id(),
                &cur,
                TransientParams { depth: 1 },
                TrackingTarget::Transient,
            )
            .unwrap();
            let ge = hausdorff_tracking(
                &g,
                &states,
                &id(),
                &cur,
                TransientParams { depth: 1 },
                TrackingTarget::Geodesic,
            )
            .unwrap();
            assert_eq!(t, report.transient, "{spec} round {round}");
            assert_eq!(ge, report.geodesic, "{spec} round {round}");
        }
    }
}

fn canonical_index(g: &FreeProduct, geodesics: &[Vec<GroupElement>], y: &GroupElement) -> usize {
    let canonical = g.canonical_geodesic(&id(), y);
    geodesics
        .iter()
        .position(|gamma| gamma == &canonical.vertices)
        .expect("canonical geodesic enumerated")
}

#[test]
fn gromov_offset_matches_enumerated_geodesics() {
    let g = ctx("Z^2*Z^2");
    let mut sampler = WordSampler::new(3);
    let mut checked = 0;
    while checked < 40 {
        let x = sampler.element(&g, 5);
        let y = sampler.element(&g, 5);
        let Some(geodesics) = enumerate_geodesics(&g, &x, &y, 3000) else {
            continue;
        };
        let dists: Vec<u64> = geodesics
            .iter()
            .map(|gamma| gamma.iter().map(|v| g.word_length(v)).min().unwrap())
            .collect();
        let b = g.gromov_offset(&x, &y);
        assert_eq!(b.lower, *dists.iter().min().unwrap(), "x={x} y={y}");
        assert_eq!(b.upper, *dists.iter().max().unwrap(), "x={x} y={y}");
        checked += 1;
    }
}

#[test]
fn triangle_thinness_brackets_enumerated_triangles() {
    let g = ctx("Z^2*Z^2");
    let mut sampler = WordSampler::new(31);
    let mut checked = 0;
    while checked < 8 {
        let corners: Vec<GroupElement> = (0..3).map(|_| sampler.element(&g, 4)).collect();
        let sides: Vec<Option<Vec<Vec<GroupElement>>>> = (0..3)
            .map(|i| enumerate_geodesics(&g, &corners[i], &corners[(i + 1) % 3], 30))
            .collect();
        if sides.iter().any(|s| s.is_none()) {
            continue;
        }
        let sides: Vec<Vec<Vec<GroupElement>>> = sides.into_iter().map(|s| s.unwrap()).collect();
        let mut brute = 0u64;
        for c0 in &sides[0] {
            for c1 in &sides[1] {
                for c2 in &sides[2] {
                    let all = [c0, c1, c2];
                    for i in 0..3 {
                        let others: Vec<&GroupElement> = all[(i + 1) % 3]
                            .iter()
                            .chain(all[(i + 2) % 3].iter())
                            .collect();
                        for p in all[i] {
                            let d = others.iter().map(|q| g.distance(p, q)).min().unwrap();
                            brute = brute.max(d);
                        }
                    }
                }
            }
        }
        let b = triangle_thinness(&g, &corners[0], &corners[1], &corners[2]);
        assert!(
            b.lower <= brute && brute <= b.upper,
            "{corners:?}: {b:?} vs {brute}"
        );
        if b.exact {
            assert_eq!(b.lower, brute);
        }
        checked += 1;
    }
}

#[test]
fn transient_endpoints_near_projections() {
    // deep-component endpoints sit within depth+1 of the projections of the
    // geodesic endpoints; a projection gap longer than 2R forces a deep
    // component of the predicted size
    for spec in ["Z^2*Z^2", "Z^2*Z/3*F_1"] {
        let g = ctx(spec);
        let ball = g.enumerate_ball(3).unwrap();
        let mut sampler = WordSampler::new(47);
        for depth in [0u64, 1, 2] {
            let params = TransientParams { depth };
            for _ in 0..60 {
                let x = ball.elements()[sampler.below(ball.len())].clone();
                let y = sampler.element(&g, 9);
                let path = g.canonical_geodesic(&x, &y);
                let dec = transient_decomposition(&g, &path, params);
                for c in &dec.deep_components {
                    let first = &path.vertices[c.first_vertex];
                    let last = &path.vertices[c.last_vertex];
                    let px = g.project_point(&c.coset, &x).point;
                    let py = g.project_point(&c.coset, &y).point;
                    assert!(g.distance(first, &px) <= depth + 1, "{spec} {x} {y}");
                    assert!(g.distance(last, &py) <= depth + 1, "{spec} {x} {y}");
                }
                // item (4): long projection gaps force deep components
                for (coset, _) in g.syllable_cosets(&g.left_difference(&x, &y)) {
                    let coset =
                        PeripheralCoset::new(&g.multiply(&x, coset.prefix()), coset.factor());
                    let gap = g.coset_distance(&coset, &x, &y);
                    if gap > 2 * depth + 1 {
                        let found = dec
                            .deep_components
                            .iter()
                            .find(|c| c.coset == coset)
                            .unwrap_or_else(|| {
                                panic!("{spec}: no deep component along {}", coset.render(&g))
                            });
                        assert_eq!(found.vertex_count() as u64, gap - 2 * depth - 1);
                    }
                }
            }
        }
    }
}

#[test]
fn transient_rips_constant_is_radius_independent() {
    let g = ctx("Z^2*Z^2");
    let params = TransientParams { depth: 1 };
    let mut max_d_by_radius = Vec::new();
    for radius in [6usize, 10, 14] {
        let mut sampler = WordSampler::new(radius as u64);
        let mut max_d = 0u64;
        for _ in 0..400 {
            let x = sampler.element(&g, radius);
            let y = sampler.element(&g, radius);
            let z = sampler.element(&g, radius);
            let path = g.canonical_geodesic(&x, &y);
            let dec = transient_decomposition(&g, &path, params);
            for &i in &dec.transient_vertices {
                let v = &path.vertices[i];
                let d = g
                    .dist_point_to_transient(v, &x, &z, params)
                    .min(g.dist_point_to_transient(v, &z, &y, params));
                max_d = max_d.max(d);
            }
        }
        max_d_by_radius.push(max_d);
    }
    assert!(
        max_d_by_radius.windows(2).all(|w| w[0] == w[1]),
        "relative Rips constant grew with radius: {max_d_by_radius:?}"
    );
}

#[test]
fn dist_point_to_transient_matches_decomposition_scan() {
    let g = ctx("Z^2*Z/4");
    let mut sampler = WordSampler::new(13);
    let params = TransientParams { depth: 1 };
    for _ in 0..80 {
        let x = sampler.element(&g, 4);
        let y = sampler.element(&g, 8);
        let s = sampler.element(&g, 6);
        let path = g.canonical_geodesic(&x, &y);
        let dec = transient_decomposition(&g, &path, params);
        let brute = dec
            .transient_vertices
            .iter()
            .map(|&i| g.distance(&s, &path.vertices[i]))
            .min()
            .unwrap();
        assert_eq!(g.dist_point_to_transient(&s, &x, &y, params), brute);
    }
}

#[test]
fn factor_hull_points_lie_on_witness_geodesics() {
    let g = ctx("Z^2*Z/4");
    let mut sampler = WordSampler::new(8);
    for _ in 0..30 {
        let y = sampler.element(&g, 6);
        let total = g.distance(&id(), &y);
        for p in rhlab_core::geometry::hull_points(&g, &id(), &y, 10_000).unwrap() {
            // on some geodesic: distances through p add up
            assert_eq!(g.word_length(&p) + g.distance(&p, &y), total);
        }
        // and conversely every enumerated geodesic vertex is a hull point
        if let Some(geodesics) = enumerate_geodesics(&g, &id(), &y, 500) {
            let hull: HashSet<GroupElement> =
                rhlab_core::geometry::hull_points(&g, &id(), &y, 10_000)
                    .unwrap()
                    .collect();
            for gamma in geodesics {
                for v in gamma {
                    assert!(hull.contains(&v), "{v} missing from hull");
                }
            }
        }
    }
}
