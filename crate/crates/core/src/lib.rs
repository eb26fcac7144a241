//! Numerical and exact toolkit for standard symplectic disc bundles.
//!
//! The crate is split along the computations it performs:
//!
//! * [`bundle`]: coordinate model of the disc bundle of degree `k`, its
//!   symplectic form, Liouville forms and fields, the ellipsoid chart and
//!   Liouville-convexity tests.
//! * [`flow`]: integration of Liouville flows (including the desingularized
//!   flow through the zero-section), the conjugation map between Liouville
//!   forms, the inflation embedding and finite-difference pullback checks.
//! * [`reeb`]: exact catalog of the Reeb orbits of an ellipsoid boundary.
//! * [`sft`]: virtual dimensions, area accounting and the enumerator of
//!   holomorphic buildings.
//! * [`blowup`]: the one-point blow-up map, homology classes of the blown-up
//!   plane, adjunction and bubbling decompositions.
//! * [`config`], [`report`], [`cli`]: run configuration, report emission and
//!   the `llab` command line.
//!
//! Every area and action is measured in units of `π`.

// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blowup;
pub mod bundle;
pub mod cli;
pub mod config;
pub mod error;
pub mod flow;
pub mod linalg;
pub mod rational;
pub mod reeb;
pub mod report;
pub mod sft;

pub use error::{Error, Result};
pub use rational::Q;
