//! Dominance regions, bisectors and Voronoi diagrams of arbitrary sites in
//! `lp` spaces, together with executable checks of the boundary / interior /
//! closure identities that hold for positively separated sites in uniformly
//! convex norms.
//!
//! Distances are evaluated on plain `&[f64]` coordinate slices. Every site is
//! a finite union of primitives (point sets, segment sets, and the two
//! closed-form sequence sites living in `l2`), so each distance query is exact
//! or certified to a caller-chosen tolerance.
//!
//! With the default `parallel` feature the per-pixel, per-ray and per-trial
//! loops run on rayon; without it they run sequentially and produce identical
//! results.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bisector;
pub mod dominance;
mod error;
pub mod figures;
pub mod golden;
pub mod norms;
mod par;
pub mod raster;
pub mod sampling;
pub mod scene_file;
pub mod sites;
pub mod verify;

pub use error::{Error, Result};
pub use norms::NormSpec;
pub use sites::{Domain, Scene, Site, SitePrimitive};

/// Absolute tolerance for comparisons against zero when an operation does
/// not expose its own tolerance.
pub const ZERO_TOL: f64 = 1e-12;
