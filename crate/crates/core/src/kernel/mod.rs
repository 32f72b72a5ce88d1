//! Continuous compact-support kernels: exact B-splines, tabulated kernels and
//! cardinal (interpolating) kernels built from them.

mod piecewise;
mod tabulated;

pub use piecewise::{keys_cubic, make_bspline, PiecewisePolyKernel, MAX_BSPLINE_ORDER};
pub use tabulated::TabulatedKernel;

use crate::error::Result;
use crate::filters::{invert_fir, FirFilter, DEFAULT_EPS};

pub const DEFAULT_GRID: usize = 1024;
pub const DEFAULT_CARDINAL_TAPS: usize = 64;

/// A continuous kernel that vanishes outside an open integer interval.
pub trait Kernel: Send + Sync {
    /// `(lo, hi)` such that the kernel is zero for `t <= lo` and `t >= hi`.
    fn support(&self) -> (i64, i64);

    fn eval(&self, t: f64) -> f64;

    fn order(&self) -> usize;
}

/// Interior integer samples `k(lo+1), ..., k(hi-1)` as a filter.
pub fn sample_at_integers(k: &dyn Kernel) -> Result<FirFilter> {
    let (lo, hi) = k.support();
    let taps: Vec<f64> = (lo + 1..hi).map(|n| k.eval(n as f64)).collect();
    FirFilter::new(taps, lo + 1)
}

/// Samples `k` at `t = j / grid` over its support.
pub fn tabulate(k: &PiecewisePolyKernel, grid: usize) -> TabulatedKernel {
    tabulate_kernel(k, grid)
}

pub fn tabulate_kernel(k: &dyn Kernel, grid: usize) -> TabulatedKernel {
    assert!(grid >= 1, "grid must be positive");
    let (lo, hi) = k.support();
    let n = (hi - lo) as usize * grid + 1;
    let samples = (0..n)
        .map(|j| {
            let whole = lo + (j / grid) as i64;
            let frac = (j % grid) as f64 / grid as f64;
            k.eval(whole as f64 + frac)
        })
        .collect();
    TabulatedKernel::new(grid, lo, samples, k.order()).expect("tabulation covers whole periods")
}

/// Cardinal kernel `c(t) = sum_n inv[n] k(t - n)`, where `inv` inverts the
/// kernel's integer samples, tabulated on a symmetric window `[-W, W]`.
///
/// `n_taps` bounds the inverse filter to `2 n_taps + 1` taps.
pub fn cardinal_from_basis(k: &dyn Kernel, grid: usize, n_taps: usize) -> Result<TabulatedKernel> {
    let samples = sample_at_integers(k)?;
    let inv = invert_fir(&samples, DEFAULT_EPS, 2 * n_taps + 1)?;
    let card = tabulate_kernel(k, grid).convolve_discrete(inv.filter());
    let half = (-card.start()).max(card.end());
    Ok(card.widened(-half, half))
}
