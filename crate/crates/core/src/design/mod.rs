//! Least-squares design of compact-support basis kernels.
//!
//! A kernel `rho` supported on `(0, m+1)` with fixed integer samples `rho_d`
//! generates the interpolator `rho_hat = rho_d^{-1} * rho`. Minimizing
//! `||h - rho_hat||^2` leads to `(v * rho)(t) = w(t)` on `(0, m+1)`, where `v`
//! is the autocorrelation of the inverse prefilter and `w` the inverse-filtered
//! target. Cutting `t` into unit segments turns that into one small symmetric
//! Toeplitz system per grid column.

mod normal;
mod objective;
mod spec;
mod target;
mod toeplitz;
mod verify;

pub use normal::{analysis_filter, build_v, build_w, solve_segments, NormalSystem};
pub use objective::{error_functional, error_report, snr_db, target_error, ErrorReport};
pub use spec::{resolve_target, DesignConfig, DesignSpec, TargetConfig, DEFAULT_RHO3, DEFAULT_WINDOW};
pub use target::{sinc, TargetFilter};
pub use toeplitz::{Cholesky, SymmetricToeplitz};
pub use verify::{
    dense_oracle, normal_residual, verify_optimality, verify_optimality_with, OptimalityReport, VerifyOptions,
};

use crate::error::{Error, Result};
use crate::kernel::{Kernel, TabulatedKernel};

/// Integer-point mismatch beyond which assembly fails.
pub const CONSTRAINT_TOL: f64 = 1e-3;

/// A designed kernel together with the spec that produced it.
#[derive(Clone, Debug)]
pub struct OptimizedKernel {
    pub kernel: TabulatedKernel,
    pub spec: DesignSpec,
    /// Largest correction applied when pinning integer samples to `rho_d`.
    pub snap_delta: f64,
    /// Normal-equation residual `max |(v * rho) - w|` off the integer points.
    pub residual: Option<f64>,
    /// Squared L2 error of the generated interpolator.
    pub error: Option<f64>,
}

impl Kernel for OptimizedKernel {
    fn support(&self) -> (i64, i64) {
        self.kernel.support()
    }

    fn eval(&self, t: f64) -> f64 {
        self.kernel.eval(t)
    }

    fn order(&self) -> usize {
        self.kernel.order()
    }
}

/// Concatenates segments into a kernel on `[0, m+1]` and pins the integer samples.
pub fn assemble_kernel(segments: &[Vec<f64>], spec: &DesignSpec) -> Result<OptimizedKernel> {
    let m = spec.order;
    if segments.len() != m + 1 {
        return Err(Error::DimensionMismatch(format!("expected {} segments, got {}", m + 1, segments.len())));
    }
    let g = segments[0].len();
    if g == 0 || segments.iter().any(|s| s.len() != g) {
        return Err(Error::DimensionMismatch("segments differ in length".into()));
    }

    let mut snap_delta: f64 = 0.0;
    for (n, seg) in segments.iter().enumerate() {
        let expected = spec.rho_d.at(n as i64);
        let got = seg[0];
        let delta = (got - expected).abs();
        if !(delta <= CONSTRAINT_TOL) {
            return Err(Error::ConstraintViolation { index: n, expected, got });
        }
        snap_delta = snap_delta.max(delta);
    }

    let mut samples = Vec::with_capacity((m + 1) * g + 1);
    for (n, seg) in segments.iter().enumerate() {
        samples.push(spec.rho_d.at(n as i64));
        samples.extend_from_slice(&seg[1..]);
    }
    samples.push(0.0);
    let kernel = TabulatedKernel::new(g, 0, samples, m)?;
    Ok(OptimizedKernel { kernel, spec: spec.clone(), snap_delta, residual: None, error: None })
}

/// Full design: normal system, per-column Toeplitz solves, assembly, and the
/// achieved residual and error.
pub fn design_optimized_spline(spec: &DesignSpec) -> Result<OptimizedKernel> {
    spec.validate()?;
    let sys = NormalSystem::build(spec)?;
    let segments = solve_segments(&sys)?;
    let mut out = assemble_kernel(&segments, spec)?;
    out.residual = Some(normal_residual(&out.kernel, &sys));
    out.error = Some(error_functional(&out.kernel, spec)?);
    Ok(out)
}
