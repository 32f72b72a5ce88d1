use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::filters::FirFilter;
use crate::kernel::TabulatedKernel;

/// The continuous filter a designed kernel should reproduce.
#[derive(Clone, Debug, PartialEq)]
pub enum TargetFilter {
    /// `h(t) = 2 fc sinc(2 fc t)` with `fc` in cycles per sample; `fc = 1/2`
    /// is the ideal interpolator.
    IdealLowpass { cutoff: f64 },
    /// Arbitrary target given on a grid.
    Tabulated(TabulatedKernel),
}

/// `sin(pi x) / (pi x)` with exact zeros at nonzero integers.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let k = x.round();
    let r = x - k;
    if r == 0.0 {
        return 0.0;
    }
    let sign = if (k as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * (PI * r).sin() / (PI * x)
}

impl TargetFilter {
    pub fn sinc() -> Self {
        TargetFilter::IdealLowpass { cutoff: 0.5 }
    }

    pub fn validate(&self) -> Result<()> {
        if let TargetFilter::IdealLowpass { cutoff } = self {
            if !(*cutoff > 0.0 && *cutoff <= 0.5) {
                return Err(Error::InvalidArgument(format!(
                    "lowpass cutoff must lie in (0, 0.5], got {cutoff}"
                )));
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TargetFilter::IdealLowpass { cutoff } => 2.0 * cutoff * sinc(2.0 * cutoff * t),
            TargetFilter::Tabulated(k) => k.eval(t),
        }
    }

    /// The target truncated to `[-window, window]`.
    #[inline]
    pub fn eval_windowed(&self, t: f64, window: f64) -> f64 {
        if t.abs() > window {
            0.0
        } else {
            self.eval(t)
        }
    }

    /// Integer samples `h(n)` for `|n| <= window` with zero ends trimmed;
    /// `None` when every sample vanishes.
    pub fn integer_samples(&self, window: usize) -> Option<FirFilter> {
        let w = window as i64;
        let taps = (-w..=w).map(|n| self.eval(n as f64)).collect();
        FirFilter::new(taps, -w).ok().map(|f| f.trimmed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        for n in 1..200 {
            assert_eq!(sinc(n as f64), 0.0);
            assert_eq!(sinc(-(n as f64)), 0.0);
        }
        for &x in &[0.5, 1.5, -2.25, 37.1, 63.9] {
            let direct = (PI * x).sin() / (PI * x);
            assert!((sinc(x) - direct).abs() < 1e-13, "{x}");
        }
    }

    #[test]
    fn ideal_target_interpolates() {
        let h = TargetFilter::sinc();
        assert!(h.integer_samples(64).unwrap().is_delta(0.0));
        let zero = TabulatedKernel::new(2, -1, vec![0.0; 5], 0).unwrap();
        assert!(TargetFilter::Tabulated(zero).integer_samples(8).is_none());
        assert_eq!(h.eval_windowed(64.5, 64.0), 0.0);
        assert!(h.eval_windowed(63.5, 64.0) != 0.0);
        assert!(TargetFilter::IdealLowpass { cutoff: 0.7 }.validate().is_err());
    }
}
