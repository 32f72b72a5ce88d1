//! Polynomial root finding (Aberth-Ehrlich with Newton polishing).

use num_complex::Complex64;

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub(crate) fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    horner(coeffs, z).0
}

/// Roots of `sum_i coeffs[i] z^i`. The leading and constant coefficients must be nonzero.
pub(crate) fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    assert!(n >= 1 && coeffs[n] != 0.0 && coeffs[0] != 0.0);
    if n == 1 {
        return vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)];
    }
    if n == 2 {
        let (a, b, c) = (coeffs[2], coeffs[1], coeffs[0]);
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            // citardauq form for the smaller root
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            return vec![Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)];
        }
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        return vec![Complex64::new(re, im), Complex64::new(re, -im)];
    }

    // Start on a circle whose radius is the geometric mean of the root moduli.
    let radius = (coeffs[0] / coeffs[n]).abs().powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    for _ in 0..1000 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = horner(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    for root in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *root);
            if dp.norm() == 0.0 {
                break;
            }
            let next = *root - p / dp;
            if next.is_finite() && horner(coeffs, next).0.norm() < p.norm() {
                *root = next;
            } else {
                break;
            }
        }
    }
    z
}
