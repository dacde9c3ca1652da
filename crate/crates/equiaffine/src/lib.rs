//! Special-affine differential geometry of curves in R^n.
//!
//! The crate computes the invariants of regular curves under maps
//! x -> B x + tau with det B = 1: the special affine arc length and the
//! n-1 curvature functions chi_1..chi_{n-1}. On top of those it decides
//! whether two curves are equivalent under the group, recovers the
//! witnessing map, and reconstructs a curve from prescribed curvatures by
//! integrating the frame ODE.
//!
//! # Layout
//!
//! - [`linalg`]: dense kernel for the small matrices frames produce.
//! - [`stencil`], [`interp`], [`chain`]: finite differences on arbitrary
//!   nodes, monotone piecewise-cubic interpolation, and the chain-rule
//!   combinatorics for jets under reparametrization.
//! - [`curve`]: derivative jets and the curve providers (polynomial,
//!   catalog closed forms, uniformly sampled data).
//! - [`invariants`]: regularity, the unimodular frame, its pullback
//!   matrix, curvature extraction, profiles.
//! - [`natural`]: arc length and natural reparametrization.
//! - [`group`]: the special affine group and its action on curves.
//! - [`equivalence`]: profile comparison, map recovery, verification.
//! - [`reconstruct`]: frame-ODE integration from curvature specs.
//! - [`formats`]: JSON/CSV wire formats shared with the CLI.
//!
//! # Example
//!
//! ```
//! use equiaffine::curve::CatalogCurve;
//! use equiaffine::natural::reparametrize;
//! use equiaffine::invariants::invariant_profile;
//!
//! let circle = CatalogCurve::circle(1.0).unwrap();
//! let natural = reparametrize(circle, 129).unwrap();
//! let profile = invariant_profile(&natural, 33).unwrap();
//! // the unit circle has constant curvature -1
//! assert!(profile.channel(0).iter().all(|chi| (chi + 1.0).abs() < 1e-8));
//! ```

// index-heavy numeric kernels; `!(x > 0)` deliberately traps NaN
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod curve;
pub mod equivalence;
pub mod error;
pub mod formats;
pub mod group;
pub mod interp;
pub mod invariants;
pub mod linalg;
pub mod natural;
pub mod reconstruct;
pub mod stencil;

pub use curve::{CurveProvider, DerivativeJet};
pub use equivalence::{check_equivalence, EquivalenceReport};
pub use error::{Error, Result};
pub use group::SpecialAffineMap;
pub use invariants::{invariant_profile, InvariantProfile, PullbackMatrix};
pub use linalg::{Mat, Vector};
pub use natural::{arc_length, reparametrize, ArcLengthTable, NaturalCurve};
pub use reconstruct::{integrate_frame, CurvatureSpec, ReconstructedCurve};
