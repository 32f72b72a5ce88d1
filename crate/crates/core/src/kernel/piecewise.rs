use super::Kernel;
use crate::error::{Error, Result};

/// Highest B-spline order whose pieces are built exactly.
pub const MAX_BSPLINE_ORDER: usize = 15;

/// Piecewise polynomial supported on `(0, pieces.len())`.
///
/// Piece `k` covers `[k, k+1)` and stores coefficients in the local variable
/// `s = t - k`, lowest power first.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePolyKernel {
    order: usize,
    pieces: Vec<Vec<f64>>,
}

impl PiecewisePolyKernel {
    pub fn from_pieces(order: usize, pieces: Vec<Vec<f64>>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("kernel needs at least one piece".into()));
        }
        if let Some(p) = pieces.iter().find(|p| p.len() > order + 1 || p.is_empty()) {
            return Err(Error::InvalidArgument(format!(
                "piece with {} coefficients exceeds degree {order}",
                p.len()
            )));
        }
        Ok(Self { order, pieces })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    /// Support length in sample periods.
    pub fn support_len(&self) -> usize {
        self.pieces.len()
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) || t >= self.pieces.len() as f64 {
            return 0.0;
        }
        let k = t.floor() as usize;
        horner(&self.pieces[k], t - k as f64)
    }

    /// Value of piece `k` at local coordinate `s`, which may be 1 (left limit at k+1).
    pub fn eval_piece(&self, k: usize, s: f64) -> f64 {
        horner(&self.pieces[k], s)
    }

    /// Piecewise derivative (support unchanged).
    pub fn derivative(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                if p.len() <= 1 {
                    vec![0.0]
                } else {
                    p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect()
                }
            })
            .collect();
        Self { order: self.order.saturating_sub(1), pieces }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            order: self.order,
            pieces: self.pieces.iter().map(|p| p.iter().map(|c| c * factor).collect()).collect(),
        }
    }
}

impl Kernel for PiecewisePolyKernel {
    fn support(&self) -> (i64, i64) {
        (0, self.pieces.len() as i64)
    }

    fn eval(&self, t: f64) -> f64 {
        PiecewisePolyKernel::eval(self, t)
    }

    fn order(&self) -> usize {
        self.order
    }
}

#[inline]
fn horner(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
}

fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Polynomial B-spline of order `m` supported on `(0, m+1)`.
///
/// The alternating sum of truncated powers is expanded per interval in the local
/// variable with exact integer arithmetic, so no cancellation happens before the
/// final division by `m!`.
pub fn make_bspline(m: usize) -> Result<PiecewisePolyKernel> {
    if m > MAX_BSPLINE_ORDER {
        return Err(Error::OrderOutOfRange { order: m, max: MAX_BSPLINE_ORDER });
    }
    let mu = m as u32;
    let factorial: f64 = (1..=m).map(|i| i as f64).product();
    let pieces = (0..=m)
        .map(|k| {
            (0..=m)
                .map(|j| {
                    let inner: i128 = (0..=k)
                        .map(|n| {
                            let sign = if n % 2 == 0 { 1 } else { -1 };
                            sign * binomial(mu + 1, n as u32) * ((k - n) as i128).pow(mu - j as u32)
                        })
                        .sum();
                    (binomial(mu, j as u32) * inner) as f64 / factorial
                })
                .collect()
        })
        .collect();
    PiecewisePolyKernel::from_pieces(m, pieces)
}

/// Keys cubic convolution kernel with parameter `a`, shifted onto `(0, 4)`.
pub fn keys_cubic(a: f64) -> PiecewisePolyKernel {
    // in u = |t - 2|: inner (a+2)u^3 - (a+3)u^2 + 1, outer a u^3 - 5a u^2 + 8a u - 4a
    let inner = [1.0, 0.0, -(a + 3.0), a + 2.0];
    let outer = [-4.0 * a, 8.0 * a, -5.0 * a, a];
    // piece k: u = c + d*s
    let maps = [(&outer, 2.0, -1.0), (&inner, 1.0, -1.0), (&inner, 0.0, 1.0), (&outer, 1.0, 1.0)];
    let pieces = maps.iter().map(|(poly, c, d)| compose_linear(poly.as_slice(), *c, *d)).collect();
    PiecewisePolyKernel::from_pieces(3, pieces).expect("valid pieces")
}

/// Coefficients of `p(c + d s)` in `s`.
fn compose_linear(p: &[f64], c: f64, d: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    // power of (c + d s), updated incrementally
    let mut power = vec![1.0];
    for &coef in p {
        for (i, &q) in power.iter().enumerate() {
            out[i] += coef * q;
        }
        let mut next = vec![0.0; power.len() + 1];
        for (i, &q) in power.iter().enumerate() {
            next[i] += c * q;
            next[i + 1] += d * q;
        }
        power = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct alternating sum of truncated powers.
    fn truncated_power_sum(m: usize, t: f64) -> f64 {
        let fact: f64 = (1..=m).map(|i| i as f64).product();
        (0..=m + 1)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let x = t - n as f64;
                let u = if x > 0.0 { x.powi(m as i32) } else { 0.0 };
                sign * binomial(m as u32 + 1, n as u32) as f64 * u
            })
            .sum::<f64>()
            / fact
    }

    #[test]
    fn order_zero_is_box() {
        let b = make_bspline(0).unwrap();
        assert_eq!(b.eval(0.5), 1.0);
        assert_eq!(b.eval(0.0), 0.0);
        assert_eq!(b.eval(1.0), 0.0);
        assert_eq!(b.eval(-0.5), 0.0);
    }

    #[test]
    fn cubic_values() {
        let b = make_bspline(3).unwrap();
        assert!((b.eval(1.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((b.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((b.eval(3.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((b.eval(1.5) - 23.0 / 48.0).abs() < 1e-15);
        assert_eq!(b.eval(5.0), 0.0);
        assert_eq!(b.eval(-1.0), 0.0);
    }

    #[test]
    fn linear_is_triangle() {
        let b = make_bspline(1).unwrap();
        assert!((b.eval(0.5) - 0.5).abs() < 1e-15);
        assert_eq!(b.eval(1.0), 1.0);
    }

    #[test]
    fn matches_truncated_power_formula() {
        for m in 0..=9 {
            let b = make_bspline(m).unwrap();
            for i in 1..400 {
                let t = i as f64 * (m as f64 + 1.0) / 400.0;
                assert!((b.eval(t) - truncated_power_sum(m, t)).abs() < 1e-10, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn high_order_stays_accurate() {
        let b = make_bspline(15).unwrap();
        // partition of unity at a few points for the hardest order
        for &t in &[0.1, 0.37, 0.5, 0.93] {
            let s: f64 = (0..16).map(|n| b.eval(t + n as f64)).sum();
            assert!((s - 1.0).abs() < 1e-12, "t={t} sum={s}");
        }
        assert!(matches!(make_bspline(16), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn keys_kernel_shape() {
        let k = keys_cubic(-0.5);
        let direct = |x: f64| {
            let u = x.abs();
            let a = -0.5;
            if u < 1.0 {
                (a + 2.0) * u.powi(3) - (a + 3.0) * u * u + 1.0
            } else if u < 2.0 {
                a * u.powi(3) - 5.0 * a * u * u + 8.0 * a * u - 4.0 * a
            } else {
                0.0
            }
        };
        for i in 1..800 {
            let t = i as f64 / 200.0;
            assert!((k.eval(t) - direct(t - 2.0)).abs() < 1e-14, "t={t}");
        }
        assert_eq!(k.eval(2.0), 1.0);
        assert!(k.eval(1.0).abs() < 1e-15 && k.eval(3.0).abs() < 1e-15);
    }
}
