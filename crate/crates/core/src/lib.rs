//! Compact-support spline kernels designed to approximate a target filter in
//! the least-squares sense, and a prefilter-plus-convolution resampling
//! pipeline for 1-D signals and grayscale images.

// `!(x > 0.0)` deliberately rejects NaN; index loops mirror the math.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bench;
pub mod design;
pub mod error;
pub mod filters;
pub mod kernel;
pub mod registry;
pub mod resample;
pub mod signal;
pub mod synth;

pub use design::{design_optimized_spline, DesignSpec, OptimizedKernel, TargetFilter};
pub use error::{Error, Result};
pub use filters::{BoundaryMode, FirFilter, InverseTaps};
pub use kernel::{Kernel, PiecewisePolyKernel, TabulatedKernel};
pub use registry::{KernelOptions, KernelRegistry, KernelStrategy};
pub use resample::{GrayImage, ResampleConfig, Resampler};
pub use signal::SampleTrain;
