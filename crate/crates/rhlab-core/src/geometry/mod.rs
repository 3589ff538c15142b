//! Transient/deep decompositions and geodesic-comparison statistics.
//!
//! Quantities whose definition takes a supremum over all geodesics are
//! reported as a [`BoundPair`]: a certified `(lower, upper)` bracket which
//! collapses to the exact value whenever the per-syllable dynamic programs
//! are affordable (which on desk-scale inputs is essentially always).

mod engine;
mod factor_metric;
mod frame;
mod point;
mod tracker;
mod triangle;

pub use engine::hausdorff_tracking;
pub use point::{hull_points, sup_dist_hull_to_set, HullPointIter};
pub use tracker::{track_walk, transient_log_closeness, TrackingReport};
pub use triangle::triangle_thinness;

pub(crate) use frame::{GeodesicFrame, PointView, PrefixCursor};

use crate::error::{Error, Result};
use crate::group::{FreeProduct, GeodesicPath, GroupElement};
use crate::projections::PeripheralCoset;

/// Depth parameters of the transient/deep decomposition. The neighbourhood
/// width is fixed to zero because peripheral cosets are convex here; `depth`
/// is the trimming radius at the ends of each deep run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransientParams {
    pub depth: u64,
}

impl Default for TransientParams {
    fn default() -> Self {
        TransientParams { depth: 1 }
    }
}

/// A certified bracket for a statistic defined via sup over geodesics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundPair {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
}

impl BoundPair {
    pub fn new(lower: u64, upper: u64) -> BoundPair {
        assert!(lower <= upper, "bound pair out of order: {lower} > {upper}");
        BoundPair {
            lower,
            upper,
            exact: lower == upper,
        }
    }

    pub fn exact(value: u64) -> BoundPair {
        BoundPair {
            lower: value,
            upper: value,
            exact: true,
        }
    }

    pub fn merge_max(self, other: BoundPair) -> BoundPair {
        BoundPair::new(self.lower.max(other.lower), self.upper.max(other.upper))
    }
}

/// One maximal deep run of a geodesic inside a peripheral coset.
#[derive(Debug, Clone)]
pub struct DeepComponent {
    pub coset: PeripheralCoset,
    /// Inclusive range of deep vertex indices along the path.
    pub first_vertex: usize,
    pub last_vertex: usize,
}

impl DeepComponent {
    pub fn vertex_count(&self) -> usize {
        self.last_vertex - self.first_vertex + 1
    }
}

/// Partition of a geodesic's vertices into transient points and deep
/// components tagged by their coset.
#[derive(Debug, Clone)]
pub struct TransientDecomposition {
    pub deep_components: Vec<DeepComponent>,
    pub transient_vertices: Vec<usize>,
    pub vertex_count: usize,
}

impl TransientDecomposition {
    /// Debug text: one line per deep component, then the transient indices.
    pub fn render(&self, group: &FreeProduct) -> String {
        let mut out = String::new();
        for c in &self.deep_components {
            out.push_str(&format!(
                "deep [{}..{}] along {}\n",
                c.first_vertex,
                c.last_vertex,
                c.coset.render(group)
            ));
        }
        out.push_str(&format!("transient {:?}\n", self.transient_vertices));
        out
    }
}

/// Split the vertices of a geodesic into deep components (further than
/// `depth` from both endpoints of their syllable segment) and transient
/// points. A syllable of factor length `L` contributes a deep component
/// exactly when `L > 2·depth`, with `L - 2·depth - 1` vertices.
pub fn transient_decomposition(
    group: &FreeProduct,
    path: &GeodesicPath,
    params: TransientParams,
) -> TransientDecomposition {
    let w = group.left_difference(&path.start, path.end());
    let depth = params.depth;
    let mut deep_components = Vec::new();
    let mut deep_flags = vec![false; path.vertices.len()];
    let mut prefix = path.start.clone();
    let mut pos = 0u64;
    for s in w.syllables() {
        let len = s.elem.length(group.spec().factor(s.factor));
        // interior vertices further than `depth` from both segment ends
        // exist only when len >= 2 depth + 2
        if len > 2 * depth + 1 {
            let first = (pos + depth + 1) as usize;
            let last = (pos + len - depth - 1) as usize;
            for f in deep_flags.iter_mut().take(last + 1).skip(first) {
                *f = true;
            }
            deep_components.push(DeepComponent {
                coset: PeripheralCoset::new(&prefix, s.factor),
                first_vertex: first,
                last_vertex: last,
            });
        }
        pos += len;
        prefix = group.multiply(&prefix, &GroupElement::from_syllables(vec![s.clone()]));
    }
    let transient_vertices = (0..path.vertices.len())
        .filter(|&i| !deep_flags[i])
        .collect();
    TransientDecomposition {
        deep_components,
        transient_vertices,
        vertex_count: path.vertices.len(),
    }
}

/// Which target set a Hausdorff statistic compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackingTarget {
    /// The transient subset of the geodesic.
    Transient,
    /// The whole geodesic.
    Geodesic,
}

pub(crate) fn require_nonempty(set: &[GroupElement]) -> Result<()> {
    if set.is_empty() {
        Err(Error::invalid("point set must be nonempty"))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;

    fn ctx(s: &str) -> FreeProduct {
        FreeProduct::parse(s).unwrap()
    }

    #[test]
    fn decomposition_example_from_three_syllables() {
        let g = ctx("Z^2*Z^2");
        // w = [A:(5,0), B:(0,1), A:(3,3)]
        let y = g
            .normalize_str("a1 a1 a1 a1 a1 b2 a1 a1 a1 a2 a2 a2")
            .unwrap();
        let path = g.canonical_geodesic(&GroupElement::identity(), &y);
        let dec = transient_decomposition(&g, &path, TransientParams { depth: 1 });
        assert_eq!(dec.vertex_count, 13);
        assert_eq!(dec.deep_components.len(), 2);
        let c0 = &dec.deep_components[0];
        assert_eq!((c0.first_vertex, c0.last_vertex), (2, 3));
        assert_eq!(c0.coset.render(&g), "1·A");
        let c1 = &dec.deep_components[1];
        assert_eq!((c1.first_vertex, c1.last_vertex), (8, 10));
        assert_eq!(c1.coset.render(&g), "a1 a1 a1 a1 a1 b2·A");
        assert_eq!(dec.transient_vertices.len(), 8);
    }

    #[test]
    fn short_syllables_are_all_transient() {
        let g = ctx("Z^2*Z^2");
        let y = g.normalize_str("a1 a1 b1 b1 a2").unwrap();
        let path = g.canonical_geodesic(&GroupElement::identity(), &y);
        let dec = transient_decomposition(&g, &path, TransientParams { depth: 1 });
        assert!(dec.deep_components.is_empty());
        assert_eq!(dec.transient_vertices.len(), dec.vertex_count);
    }

    #[test]
    fn depth_zero_single_syllable() {
        let g = ctx("Z^2*Z^2");
        let y = g.normalize_str("a1 a1 a1").unwrap();
        let path = g.canonical_geodesic(&GroupElement::identity(), &y);
        let dec = transient_decomposition(&g, &path, TransientParams { depth: 0 });
        assert_eq!(dec.deep_components.len(), 1);
        let c = &dec.deep_components[0];
        assert_eq!((c.first_vertex, c.last_vertex), (1, 2));
        assert_eq!(dec.transient_vertices, vec![0, 3]);
    }

    #[test]
    fn deep_components_lie_in_their_coset() {
        let g = ctx("Z^2*Z/3*F_2");
        let y = g
            .normalize_str("a1 a1 a1 a1 c1 c2 c2 c1^-1 b1 a2 a2 a2 a2 a2")
            .unwrap();
        let x = g.normalize_str("b1 a1").unwrap();
        let path = g.canonical_geodesic(&x, &y);
        let dec = transient_decomposition(&g, &path, TransientParams { depth: 1 });
        for c in &dec.deep_components {
            for i in c.first_vertex..=c.last_vertex {
                let v = &path.vertices[i];
                let proj = g.project_point(&c.coset, v);
                assert_eq!(proj.distance, 0, "vertex {i} outside coset");
            }
        }
    }
}
