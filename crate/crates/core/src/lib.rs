//! Numerical toolkit for space curves under the modified orthogonal frame
//! `{T, N, B}` with `T = φ'`, `N = T'`, `B = T × N`.
//!
//! The frame stays well defined through isolated curvature zeros, which lets
//! the crate build frames and invariants for curves with inflections, construct
//! Mannheim partner and conjugate curves, synthesize curves from prescribed
//! curvature and torsion, and measure every characterization identity of a
//! Mannheim pair as a numerical residual.
//!
//! Modules:
//! - [`curves`]: catalog and sampled curves, derivative jets, arc length.
//! - [`frames`]: modified and classical frames, torsion, frame-equation residuals.
//! - [`synthesis`]: curvature profiles, frame integration, partner torsion, rigid alignment.
//! - [`mannheim`]: partner/conjugate construction, verification reports, FM classification.
//! - [`export`] and [`plot`]: CSV/JSON artifacts and SVG rendering.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod error;
pub mod export;
pub mod frames;
pub mod mannheim;
pub mod numeric;
pub mod plot;
pub mod synthesis;

pub use curves::{CurveJet, CurveKind, Interval, ParamCurve, Vec3};
pub use error::{Error, Result};

/// Crate version, recorded in artifact manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
