//! Prefilter-then-convolve resampling with any compact-support kernel.
//!
//! For a basis kernel `k` with integer-sample filter `k_d`, the continuous
//! interpolant of `x` is `s(t) = sum_n (k_d^{-1} * x)[n] k(t - n)`, which
//! passes through every sample. Upsampling by `R` evaluates `s` at `j / R`
//! with one weight table per phase.

mod image;

pub use image::{downsample, psnr, DownsampleMode, GrayImage};

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filters::{filter_range, invert_fir, BoundaryMode, FirFilter, DEFAULT_EPS};
use crate::kernel::{sample_at_integers, Kernel};
use crate::signal::SampleTrain;

/// Inverse-filter length used for resampling; long enough that slowly
/// decaying inverses stay exact to double precision.
pub const RESAMPLE_MAX_TAPS: usize = 257;

#[derive(Clone)]
pub struct ResampleConfig {
    pub kernel: Arc<dyn Kernel>,
    pub factor: usize,
    pub boundary: BoundaryMode,
}

impl ResampleConfig {
    pub fn new(kernel: Arc<dyn Kernel>, factor: usize) -> Self {
        Self { kernel, factor, boundary: BoundaryMode::default() }
    }

    pub fn with_boundary(mut self, boundary: BoundaryMode) -> Self {
        self.boundary = boundary;
        self
    }
}

/// A configured upsampler: inverse prefilter plus per-phase kernel weights.
#[derive(Clone, Debug)]
pub struct Resampler {
    factor: usize,
    boundary: BoundaryMode,
    inverse: FirFilter,
    lo: i64,
    hi: i64,
    /// `weights[p][i - lo] = k(i + p / R)` for `i` in `lo..hi`.
    weights: Vec<Vec<f64>>,
}

impl Resampler {
    pub fn new(cfg: &ResampleConfig) -> Result<Self> {
        if cfg.factor == 0 {
            return Err(Error::InvalidArgument("upsampling factor must be positive".into()));
        }
        let k = cfg.kernel.as_ref();
        let inverse = invert_fir(&sample_at_integers(k)?, DEFAULT_EPS, RESAMPLE_MAX_TAPS)?.filter().clone();
        let (lo, hi) = k.support();
        let r = cfg.factor;
        let weights =
            (0..r).map(|p| (lo..hi).map(|i| k.eval(i as f64 + p as f64 / r as f64)).collect()).collect();
        Ok(Self { factor: r, boundary: cfg.boundary, inverse, lo, hi, weights })
    }

    pub fn factor(&self) -> usize {
        self.factor
    }

    /// Interpolant at `t = j / R` for `j` in `0..out_len`; positions past the
    /// last sample use the boundary extension.
    pub fn upsample_line(&self, line: &[f64], out_len: usize) -> Vec<f64> {
        assert!(!line.is_empty());
        let r = self.factor as i64;
        let q_max = (out_len as i64 - 1).div_euclid(r);
        // coefficients needed for n in q - (hi - 1) ..= q - lo
        let n_lo = -(self.hi - 1);
        let n_hi = q_max - self.lo;
        let coef = filter_range(line, &self.inverse, self.boundary, n_lo, n_hi);
        (0..out_len as i64)
            .map(|j| {
                let q = j.div_euclid(r);
                let w = &self.weights[j.rem_euclid(r) as usize];
                w.iter()
                    .enumerate()
                    .map(|(idx, wi)| {
                        let n = q - (self.lo + idx as i64);
                        wi * coef[(n - n_lo) as usize]
                    })
                    .sum()
            })
            .collect()
    }

    /// `(N - 1) R + 1` samples; output index `n` sits at `t = n / R`.
    pub fn interpolate_1d(&self, x: &SampleTrain) -> Result<SampleTrain> {
        if x.len() < 2 {
            return Err(Error::InvalidArgument("need at least two samples".into()));
        }
        let out = self.upsample_line(x.values(), (x.len() - 1) * self.factor + 1);
        SampleTrain::new(out, x.origin() * self.factor as i64)
    }

    /// Separable enlargement to `R w x R h`: all rows, then all columns. The
    /// trailing `R - 1` rows and columns lie past the last sample and come
    /// from the boundary extension.
    pub fn enlarge_image(&self, img: &GrayImage) -> Result<GrayImage> {
        let rows = self.pass(img)?;
        Ok(self.pass(&rows.transpose())?.transpose())
    }

    fn pass(&self, img: &GrayImage) -> Result<GrayImage> {
        let w = img.width() * self.factor;
        let mut out = vec![0.0; w * img.height()];
        out.par_chunks_mut(w).enumerate().for_each(|(y, dst)| {
            dst.copy_from_slice(&self.upsample_line(img.row(y), w));
        });
        GrayImage::new(w, img.height(), out)
    }
}

pub fn interpolate_1d(x: &SampleTrain, cfg: &ResampleConfig) -> Result<SampleTrain> {
    Resampler::new(cfg)?.interpolate_1d(x)
}

pub fn enlarge_image(img: &GrayImage, cfg: &ResampleConfig) -> Result<GrayImage> {
    Resampler::new(cfg)?.enlarge_image(img)
}
