use serde::{Deserialize, Serialize};

use super::spec::DesignSpec;
use super::target::TargetFilter;
use crate::error::Result;
use crate::filters::{convolve, invert_fir, FirFilter, DEFAULT_EPS, DEFAULT_MAX_TAPS};
use crate::kernel::{sample_at_integers, TabulatedKernel};

/// Squared L2 approximation error and target energy on the design grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: f64,
    pub energy: f64,
}

impl ErrorReport {
    /// `10 log10(energy / error)`; infinite for an exact match.
    pub fn snr_db(&self) -> f64 {
        if self.error == 0.0 {
            f64::INFINITY
        } else {
            10.0 * (self.energy / self.error).log10()
        }
    }
}

/// Target samples on a fixed grid range, reused across many error evaluations.
///
/// The target is truncated to `[-window, window]`; the integral runs over the
/// union of that window and `[lo, hi]`.
pub(crate) struct Objective {
    grid: usize,
    lo: i64,
    target: Vec<f64>,
    energy: f64,
}

impl Objective {
    pub(crate) fn new(target: &TargetFilter, window: usize, grid: usize, lo: i64, hi: i64) -> Self {
        let w = window as i64;
        let lo = lo.min(-w);
        let hi = hi.max(w);
        let n = (hi - lo) as usize * grid + 1;
        let target: Vec<f64> =
            (0..n).map(|j| target.eval_windowed(lo as f64 + j as f64 / grid as f64, window as f64)).collect();
        let energy = trapezoid(target.iter().map(|h| h * h), grid);
        Self { grid, lo, target, energy }
    }

    pub(crate) fn energy(&self) -> f64 {
        self.energy
    }

    /// `integral (h - approx)^2`; `approx` must share the grid and lie inside the range.
    pub(crate) fn error(&self, approx: &TabulatedKernel) -> f64 {
        assert_eq!(approx.grid(), self.grid);
        let off = (approx.start() - self.lo) as usize * self.grid;
        let samples = approx.samples();
        assert!(off + samples.len() <= self.target.len());
        trapezoid(
            self.target.iter().enumerate().map(|(j, h)| {
                let a = if j >= off && j < off + samples.len() { samples[j - off] } else { 0.0 };
                (h - a) * (h - a)
            }),
            self.grid,
        )
    }
}

fn trapezoid(values: impl ExactSizeIterator<Item = f64>, grid: usize) -> f64 {
    let n = values.len();
    let mut acc = 0.0;
    for (j, v) in values.enumerate() {
        acc += if j == 0 || j + 1 == n { 0.5 * v } else { v };
    }
    acc / grid as f64
}

/// Filter turning basis kernel `y` into its reconstruction of the target:
/// the inverse of `y`'s integer samples, convolved with the target's own
/// integer samples when the target does not interpolate.
pub(crate) fn reconstruction_filter(y: &TabulatedKernel, spec: &DesignSpec) -> Result<FirFilter> {
    filter_for(y, &spec.target, spec.window, spec.eps, spec.max_taps)
}

fn filter_for(
    y: &TabulatedKernel,
    target: &TargetFilter,
    window: usize,
    eps: f64,
    max_taps: usize,
) -> Result<FirFilter> {
    let inv = invert_fir(&sample_at_integers(y)?, eps, max_taps)?;
    Ok(match target.integer_samples(window) {
        Some(xd) if !xd.is_delta(1e-12) => convolve(inv.filter(), &xd),
        _ => inv.filter().clone(),
    })
}

fn report_with(y: &TabulatedKernel, target: &TargetFilter, window: usize, c: &FirFilter) -> ErrorReport {
    let approx = y.convolve_discrete(c);
    let obj = Objective::new(target, window, y.grid(), approx.start(), approx.end());
    ErrorReport { error: obj.error(&approx), energy: obj.energy() }
}

/// Error and energy of `y`'s cardinal reconstruction against the spec's target.
pub fn error_report(y: &TabulatedKernel, spec: &DesignSpec) -> Result<ErrorReport> {
    let c = reconstruction_filter(y, spec)?;
    Ok(report_with(y, &spec.target, spec.window, &c))
}

/// As [`error_report`] for any kernel and target, with default inversion
/// settings; `y` may be a basis kernel or already interpolating.
pub fn target_error(y: &TabulatedKernel, target: &TargetFilter, window: usize) -> Result<ErrorReport> {
    target.validate()?;
    if window == 0 {
        return Err(crate::error::Error::InvalidArgument("window must be positive".into()));
    }
    let c = filter_for(y, target, window, DEFAULT_EPS, DEFAULT_MAX_TAPS)?;
    Ok(report_with(y, target, window, &c))
}

/// `||h - y_hat||^2` where `y_hat` is the cardinal kernel generated by `y`.
pub fn error_functional(y: &TabulatedKernel, spec: &DesignSpec) -> Result<f64> {
    Ok(error_report(y, spec)?.error)
}

pub fn snr_db(y: &TabulatedKernel, spec: &DesignSpec) -> Result<f64> {
    Ok(error_report(y, spec)?.snr_db())
}
