use num_complex::Complex64;

use super::fir::FirFilter;
use super::roots::{eval, poly_roots};
use crate::error::{Error, Result};

pub const DEFAULT_EPS: f64 = 1e-12;
pub const DEFAULT_MAX_TAPS: usize = 129;
/// Roots closer than this to the unit circle make a filter inappropriate.
pub const UNIT_CIRCLE_TOL: f64 = 1e-9;

/// Truncated two-sided stable inverse of a [`FirFilter`].
#[derive(Clone, Debug)]
pub struct InverseTaps {
    filter: FirFilter,
    source: FirFilter,
    trunc_error: f64,
}

impl InverseTaps {
    pub fn filter(&self) -> &FirFilter {
        &self.filter
    }

    pub fn source(&self) -> &FirFilter {
        &self.source
    }

    /// L1 mass of the discarded tail.
    pub fn trunc_error(&self) -> f64 {
        self.trunc_error
    }

    /// Index of the largest-magnitude tap.
    pub fn center(&self) -> i64 {
        let mut best = (self.filter.origin(), 0.0);
        for (n, t) in self.filter.iter() {
            if t.abs() > best.1 {
                best = (n, t.abs());
            }
        }
        best.0
    }
}

impl AsRef<FirFilter> for InverseTaps {
    fn as_ref(&self) -> &FirFilter {
        &self.filter
    }
}

/// Coefficients of `prod_j (1 - x * c_j)` as real numbers.
fn expand_unit_constant(factors: &[Complex64]) -> Vec<f64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &c in factors {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (i, &p) in poly.iter().enumerate() {
            next[i] += p;
            next[i + 1] -= p * c;
        }
        poly = next;
    }
    poly.into_iter().map(|c| c.re).collect()
}

/// First `len` terms of the power series of `1 / q(x)` where `q[0] = 1`.
fn reciprocal_series(q: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    out[0] = 1.0;
    for k in 1..len {
        let mut s = 0.0;
        for i in 1..q.len().min(k + 1) {
            s += q[i] * out[k - i];
        }
        out[k] = -s;
    }
    out
}

fn root_on_unit_circle(coeffs: &[f64], root: Complex64) -> bool {
    let gap = (root.norm() - 1.0).abs();
    if gap <= UNIT_CIRCLE_TOL {
        return true;
    }
    // Multiple roots on the circle are only located to ~sqrt(machine eps);
    // fall back to the polynomial value at the projected point.
    if gap <= 1e-5 {
        let l1: f64 = coeffs.iter().map(|c| c.abs()).sum();
        let on_circle = root / root.norm();
        return eval(coeffs, on_circle).norm() <= UNIT_CIRCLE_TOL * l1;
    }
    false
}

/// Stable two-sided inverse of `f`, truncated where taps fall below `eps`
/// or at `max_taps` taps centred on the peak.
pub fn invert_fir(f: &FirFilter, eps: f64, max_taps: usize) -> Result<InverseTaps> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if max_taps == 0 {
        return Err(Error::InvalidArgument("max_taps must be at least 1".into()));
    }
    let trimmed = f.trimmed();
    let coeffs = trimmed.taps();
    let shift = trimmed.origin();
    let degree = coeffs.len() - 1;

    if degree == 0 {
        return Ok(InverseTaps {
            filter: FirFilter::from_raw(vec![1.0 / coeffs[0]], -shift),
            source: f.clone(),
            trunc_error: 0.0,
        });
    }

    // f(z) = z^{-shift} P(w) with w = z^{-1}; time index n <-> w^n.
    let roots = poly_roots(coeffs);
    if let Some(bad) = roots.iter().find(|r| root_on_unit_circle(coeffs, **r)) {
        return Err(Error::NotAppropriate { modulus: bad.norm() });
    }
    let (outside, inside): (Vec<Complex64>, Vec<Complex64>) = roots.iter().partition(|r| r.norm() > 1.0);

    // P(w) = lead * prod_out(-r) * prod_out(1 - w/r) * w^p * prod_in(1 - r/w)
    let lead = coeffs[degree];
    let out_const: Complex64 = outside.iter().map(|r| -r).product();
    let scale = 1.0 / (lead * out_const.re);
    let causal_poly = expand_unit_constant(&outside.iter().map(|r| r.inv()).collect::<Vec<_>>());
    let anti_poly = expand_unit_constant(&inside);

    let decay =
        outside.iter().map(|r| 1.0 / r.norm()).chain(inside.iter().map(|r| r.norm())).fold(0.0_f64, f64::max);
    let cap = 4 * max_taps + 8 * degree + 64;
    let needed =
        if decay == 0.0 { 1 } else { ((1e-20f64).ln() / decay.ln()).ceil() as usize + 8 * degree + 8 };
    let series_len = needed.min(cap).max(max_taps / 2 + 2);

    let causal = if outside.is_empty() { vec![1.0] } else { reciprocal_series(&causal_poly, series_len) };
    let anti = if inside.is_empty() { vec![1.0] } else { reciprocal_series(&anti_poly, series_len) };

    // g[n] for n = k - l - p - shift
    let p = inside.len() as i64;
    let first = -(anti.len() as i64 - 1) - p - shift;
    let mut full = vec![0.0; causal.len() + anti.len() - 1];
    for (k, &a) in causal.iter().enumerate() {
        for (l, &b) in anti.iter().enumerate() {
            full[k + anti.len() - 1 - l] += a * b;
        }
    }
    for g in full.iter_mut() {
        *g *= scale;
    }

    let peak = full
        .iter()
        .enumerate()
        .fold((0usize, 0.0f64), |best, (i, g)| if g.abs() > best.1 { (i, g.abs()) } else { best })
        .0;
    let half = (max_taps - 1) / 2;
    let mut lo = peak.saturating_sub(half);
    let mut hi = (peak + (max_taps - 1 - half)).min(full.len() - 1);
    while lo < peak && full[lo].abs() < eps {
        lo += 1;
    }
    while hi > peak && full[hi].abs() < eps {
        hi -= 1;
    }

    let mut trunc: f64 = full[..lo].iter().chain(&full[hi + 1..]).map(|g| g.abs()).sum();
    if decay > 0.0 && decay < 1.0 {
        // geometric bound on what lies beyond the computed series
        let edge = full[0].abs() + full[full.len() - 1].abs();
        trunc += edge * decay / (1.0 - decay);
    } else if decay >= 1.0 {
        trunc = f64::INFINITY;
    }

    Ok(InverseTaps {
        filter: FirFilter::from_raw(full[lo..=hi].to_vec(), first + lo as i64),
        source: f.clone(),
        trunc_error: trunc,
    })
}

/// [`invert_fir`] with the default tolerance and tap budget.
pub fn invert_fir_default(f: &FirFilter) -> Result<InverseTaps> {
    invert_fir(f, DEFAULT_EPS, DEFAULT_MAX_TAPS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::fir::convolve;

    fn bspline3_taps() -> FirFilter {
        FirFilter::new(vec![1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0], 1).unwrap()
    }

    #[test]
    fn delta_inverts_to_delta() {
        let inv = invert_fir_default(&FirFilter::delta()).unwrap();
        assert_eq!(inv.filter(), &FirFilter::delta());
        assert_eq!(inv.trunc_error(), 0.0);
    }

    #[test]
    fn pure_shift_inverts_to_opposite_shift() {
        let inv = invert_fir_default(&FirFilter::shifted_delta(1)).unwrap();
        assert_eq!(inv.filter().taps(), &[1.0]);
        assert_eq!(inv.filter().origin(), -1);
        assert_eq!(inv.center(), -1);
    }

    #[test]
    fn cubic_closed_form() {
        let inv = invert_fir_default(&bspline3_taps()).unwrap();
        let s3 = 3f64.sqrt();
        let alpha = s3 - 2.0;
        assert_eq!(inv.center(), -2);
        for (n, t) in inv.filter().iter() {
            let k = (n + 2).unsigned_abs() as i32;
            assert!((t - s3 * alpha.powi(k)).abs() < 1e-12, "tap {n}: {t}");
        }
        assert!((inv.filter().at(-2) - 1.732051).abs() < 1e-6);
        assert!((inv.filter().at(-1) + 0.464102).abs() < 1e-6);
        assert!(inv.trunc_error() < 1e-11);
    }

    #[test]
    fn double_zero_on_unit_circle_is_rejected() {
        let f = FirFilter::new(vec![1.0, -2.0, 1.0], 0).unwrap();
        assert!(matches!(invert_fir_default(&f), Err(Error::NotAppropriate { .. })));
        let g = FirFilter::new(vec![0.24, 0.48, 0.24], 1).unwrap();
        assert!(matches!(invert_fir_default(&g), Err(Error::NotAppropriate { .. })));
        // even-order B-spline samples: zero at z = -1
        let h = FirFilter::new(vec![0.5, 0.5], 1).unwrap();
        assert!(matches!(invert_fir_default(&h), Err(Error::NotAppropriate { .. })));
    }

    #[test]
    fn round_trip_within_truncation_bound() {
        for taps in [
            vec![1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0],
            vec![0.233, 0.480, 0.233],
            vec![1.0 / 120.0, 26.0 / 120.0, 66.0 / 120.0, 26.0 / 120.0, 1.0 / 120.0],
            vec![1.0, 0.3, -0.2],
            vec![0.1, -0.4, 1.0, 0.25],
        ] {
            let f = FirFilter::new(taps, 1).unwrap();
            let inv = invert_fir_default(&f).unwrap();
            let rt = convolve(&f, &inv);
            for n in inv.filter().first_index()..=inv.filter().last_index() {
                let want = if n == 0 { 1.0 } else { 0.0 };
                assert!(
                    (rt.at(n) - want).abs() <= 10.0 * inv.trunc_error() + 1e-14,
                    "lag {n}: {} (trunc {})",
                    rt.at(n),
                    inv.trunc_error()
                );
            }
        }
    }

    #[test]
    fn max_taps_bounds_length() {
        let f = FirFilter::new(vec![0.233, 0.480, 0.233], 1).unwrap();
        let inv = invert_fir(&f, 1e-12, 129).unwrap();
        assert!(inv.filter().len() <= 129);
        let short = invert_fir(&f, 1e-12, 21).unwrap();
        assert_eq!(short.filter().len(), 21);
        assert!(short.trunc_error() > inv.trunc_error());
    }

    #[test]
    fn invalid_arguments() {
        assert!(invert_fir(&FirFilter::delta(), 0.0, 10).is_err());
        assert!(invert_fir(&FirFilter::delta(), 1e-12, 0).is_err());
    }
}
