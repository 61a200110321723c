//! Numerical constants shared by the kernels, the verification suite and the CLI.
//!
//! Kernel constants control truncation; the `accept` submodule pins the
//! tolerances the acceptance checks are judged against.

/// Relative tail threshold for every Gaussian-weighted series.
pub const SERIES_REL_TAIL: f64 = 1e-16;

/// Hard cap on terms visited by a single series before reporting capacity.
pub const MAX_SERIES_TERMS: u64 = 10_000_000;

/// Modes with `alpha^2 (kappa_k - p/hbar)^2` above this are dropped.
pub const WINDOW_EXPONENT: f64 = 40.0;

/// Extra modes kept on each side of the Gaussian window.
pub const WINDOW_MARGIN: i64 = 4;

/// Largest spectral window a state may hold.
pub const MAX_MODES: u64 = 10_000_000;

/// Wall exclusion radius around `(+-l, 0)`, in units of alpha (position).
pub const EXCLUSION_POSITION_ALPHAS: f64 = 3.0;

/// Wall exclusion radius around `(+-l, 0)`, in units of hbar/alpha (momentum).
pub const EXCLUSION_MOMENTUM_UNITS: f64 = 3.0;

/// Half-width of the phase-space momentum window, in units of hbar/alpha.
pub const MOMENTUM_WINDOW_UNITS: f64 = 8.0;

/// Largest phase increment allowed between adjacent l-quadrature nodes.
pub const L_PHASE_STEP: f64 = std::f64::consts::PI / 8.0;

/// Default Gauss-Legendre order of the l-quadrature.
pub const L_BASE_ORDER: usize = 129;

/// Upper bound on the number of l-nodes before an accuracy warning is raised.
pub const L_MAX_NODES: usize = 1 << 22;

pub mod accept {
    pub const MODULAR_REL: f64 = 1e-12;
    pub const DUAL_ENGINE_ABS: f64 = 1e-10;
    pub const OVERLAP_ABS: f64 = 1e-10;
    pub const REVIVAL_ABS: f64 = 1e-11;
    pub const FLATTEN_FINAL_REL: f64 = 0.05;
    pub const SIGN_SPLIT_ABS: f64 = 0.02;
    pub const RESOLUTION_REL: f64 = 1e-6;
    pub const HUSIMI_MASS_ABS: f64 = 1e-6;
    pub const NORM_SERIES_ABS: f64 = 1e-12;
    pub const DECREASE_FACTOR: f64 = 0.5;
    pub const KOZLOV_REL: f64 = 0.02;
    pub const RANDOM_BOX_IDENTITY_ABS: f64 = 1e-12;
    pub const TIME_AVERAGE_REL: f64 = 0.01;
    pub const STATIONARY_ABS: f64 = 1e-12;
}
