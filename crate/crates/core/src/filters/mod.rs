//! Discrete-time filters: FIR algebra, stable two-sided inversion and prefiltering.

mod fir;
mod inverse;
mod prefilter;
mod roots;

pub use fir::{autocorrelate, convolve, flip, FirFilter};
pub use inverse::{
    invert_fir, invert_fir_default, InverseTaps, DEFAULT_EPS, DEFAULT_MAX_TAPS, UNIT_CIRCLE_TOL,
};
pub(crate) use prefilter::filter_range;
pub use prefilter::{prefilter, BoundaryMode};
