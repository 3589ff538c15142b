//! Exact-arithmetic laboratory for random walks on free products of
//! elementary groups.
//!
//! The crate builds computable models of relatively hyperbolic groups as
//! free products `A_1 * … * A_k` of free abelian, finite cyclic and free
//! factors, samples symmetric random walks on them, and measures tracking
//! distances, peripheral projections, triangle thinness, Gromov offsets and
//! van Kampen filling areas with certified integer bounds.
//!
//! Modules:
//! - [`group`]: normal forms, word metric, canonical geodesics, BFS oracle.
//! - [`projections`]: peripheral cosets and exact closest-point projections.
//! - [`geometry`]: transient/deep decompositions and geodesic-comparison
//!   statistics with `(lower, upper)` bounds for sup-over-geodesics values.
//! - [`walk`]: seeded trajectory sampling and walk-level statistics.
//! - [`dehn`]: loop decomposition and filling-area oracles.
//! - [`stats`]: bootstrap summaries, shape fits and tail fits.

pub mod dehn;
pub mod error;
pub mod geometry;
pub mod group;
pub mod projections;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use geometry::{
    hausdorff_tracking, track_walk, transient_decomposition, transient_log_closeness,
    triangle_thinness, BoundPair, TrackingTarget, TransientDecomposition, TransientParams,
};
pub use group::{
    Ball, FactorElement, FactorKind, FreeProduct, GeodesicPath, GroupElement, GroupSpec, Letter,
    Syllable,
};
pub use projections::{PeripheralCoset, ProjectionResult};
pub use walk::{derive_seed, sample_trajectory, StepMeasure, Trajectory};
