//! Symplectic field theory bookkeeping for curves in the projective plane
//! degenerating along the boundary of an ellipsoid.

pub mod building;
pub mod classify;
pub mod dims;
pub mod enumerate;
pub mod filters;

pub use building::{component_area, BuildingCandidate, BuildingComponent, Layer, Orbit, Pairing, Puncture, Sign};
pub use classify::{classify_conic_degeneration, classify_line_degeneration, ClassificationReport};
pub use dims::{symplectization_index, virtdim_inside, virtdim_outside};
pub use enumerate::{enumerate_buildings, EnumerationRequest, EnumerationResult, Survivor, TraceEntry};
pub use filters::{evaluate, EvalConfig, Evaluation, Filter, FilterConfig, Verdict};
