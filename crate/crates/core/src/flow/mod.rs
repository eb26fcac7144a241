//! Liouville flows on the disc bundle.
//!
//! * [`liouville`]: the closed-form flow of `X₀`, reach times and adaptive
//!   integration of `X_ϑ` away from the zero-section.
//! * [`desingular`]: the flow of `rX` through the zero-section, the time
//!   rescaling that recovers the flow of `X`, and the conjugation map
//!   between two Liouville forms.
//! * [`inflation`]: the embedding obtained by conjugating a germ near the
//!   zero-section with two Liouville flows.
//! * [`pullback`]: finite-difference pullback residuals.
//! * [`rk`]: the Dormand–Prince integrator underneath.

pub mod desingular;
pub mod inflation;
pub mod liouville;
pub mod pullback;
pub mod rk;

pub use desingular::{rescaled_time, ConjugationMap, DesingularizedField, RescaleProblem};
pub use inflation::{Germ, InflationSetup};
pub use liouville::{
    flow_closed_form, flow_scaling_residual, integrate_flow, integrate_trajectory, reach_time,
    FlowRequest, DEFAULT_GUARD, DEFAULT_TOL,
};
pub use pullback::{pullback_residual, FdOptions, Stencil};
