//! Exact computational coarse geometry on finite metric spaces.
//!
//! The crate covers finite metric spaces with exact rational distances,
//! isometric actions of finite groups and their quotient spaces, covers and
//! `r`-disjoint decompositions with re-checkable certificates, the cover
//! transformations relating a space to its quotient (pushforward and
//! equivariant lift), weighted disjoint unions of spaces, and finite-scale
//! cover-dimension estimates.
//!
//! Everything is `no_std` + `alloc`; file formats and the command line live
//! in the `asdim` crate.

#![no_std]

extern crate alloc;

pub mod action;
pub mod cover;
pub mod estimate;
pub mod group;
pub mod lift;
pub mod metric;
pub mod scalar;
pub mod sspace;

pub use action::{orbits, quotient, validate_action, IsometricAction, QuotientSpace};
pub use estimate::{
    asdim_profile, equivariant_cover_pipeline, family_profile, greedy_cover, min_dimension_cover_exact,
    DimensionProfile, EstimateOptions, SearchLimits,
};
pub use group::{direct_sum, find_isomorphism, DirectSum, Element, FiniteGroup};
pub use metric::{build_graph_metric, validate_metric, BallMode, FiniteMetricSpace, Point, PointSet};
pub use scalar::{Extended, Scalar};
