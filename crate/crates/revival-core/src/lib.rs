//! Wave-packet collapse and revival on a circle and in an infinite square well.
//!
//! Coherent states are stored spectrally and evolved exactly; every closed
//! form reduces to Gaussian packets on the line and the Jacobi theta
//! function. On top of that sit Husimi transforms and semiclassical
//! schedules, classical transport, and the random-box limit density.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod box_well;
pub mod circle;
pub mod classical;
pub mod error;
pub mod husimi;
mod numeric;
pub mod oracles;
pub mod packet;
pub mod params;
pub mod quad;
pub mod random_box;
pub mod revival;
pub mod sampled;
pub mod scales;
pub mod schedule;
pub mod state;
pub mod theta;
pub mod testfns;
pub mod tolerances;

pub use box_well::{
    box_norm_sq, box_overlap, covering_map, make_box_state, make_box_state_with, theta_inverse, theta_map,
    CoveringImage, ExclusionZone,
};
pub use circle::{circle_norm_sq, circle_overlap, make_circle_state, transition_density};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use packet::{dispersion, gaussian_overlap, gaussian_packet};
pub use oracles::{brute_evolve, quad_inner, resolution_residual};
pub use params::{Domain, EvolutionFactor, PhasePoint, PhysicalParams};
pub use random_box::{LengthDensity, PositionDensity, PositionGrid, RandomBoxModel, StateFamily, TimeWindow};
pub use sampled::SampledFunction;
pub use scales::{time_scales, TimeScales};
pub use state::{eval_state, evolve, EvalMethod, WaveState};
pub use theta::theta;
