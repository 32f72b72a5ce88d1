//! Cross-checks against independent computations: frequency-grid inversion,
//! closed-form B-spline pieces and brute-force sums.

use std::f64::consts::PI;

use num_complex::Complex64;
use optspline::design::*;
use optspline::filters::{invert_fir_default, FirFilter};
use optspline::kernel::*;

const N_FREQ: usize = 4096;

/// Inverse filter taps from `1 / F(e^{jw})` sampled on `N_FREQ` points.
fn freq_inverse(f: &FirFilter, k: i64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..N_FREQ {
        let w = 2.0 * PI * j as f64 / N_FREQ as f64;
        let resp: Complex64 = f.iter().map(|(n, a)| a * Complex64::from_polar(1.0, -w * n as f64)).sum();
        acc += Complex64::from_polar(1.0, w * k as f64) / resp;
    }
    acc.re / N_FREQ as f64
}

/// `(1/N) sum 1 / |F|^2`: lag zero of the inverse's autocorrelation.
fn freq_v0(f: &FirFilter) -> f64 {
    (0..N_FREQ)
        .map(|j| {
            let w = 2.0 * PI * j as f64 / N_FREQ as f64;
            let resp: Complex64 = f.iter().map(|(n, a)| a * Complex64::from_polar(1.0, -w * n as f64)).sum();
            1.0 / resp.norm_sqr()
        })
        .sum::<f64>()
        / N_FREQ as f64
}

fn centered_cubic(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        2.0 / 3.0 - a * a + a * a * a / 2.0
    } else if a < 2.0 {
        (2.0 - a).powi(3) / 6.0
    } else {
        0.0
    }
}

fn cubic_d() -> FirFilter {
    FirFilter::new(vec![1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], 1).unwrap()
}

#[test]
fn cubic_inverse_matches_frequency_grid_and_closed_form() {
    let inv = invert_fir_default(&cubic_d()).unwrap();
    let alpha = 3f64.sqrt() - 2.0;
    for k in -22..=18 {
        let got = inv.filter().at(k);
        let closed = 3f64.sqrt() * alpha.powi((k + 2).abs() as i32);
        assert!((got - closed).abs() < 1e-9, "k={k}");
        assert!((got - freq_inverse(&cubic_d(), k)).abs() < 1e-9, "k={k}");
    }
}

#[test]
fn default_rho_inverse_and_v0_match_frequency_grid() {
    let rho = FirFilter::new(DEFAULT_RHO3.to_vec(), 1).unwrap();
    let inv = invert_fir_default(&rho).unwrap();
    for k in [-2, -1, 0, -3, -10, 6, -30] {
        assert!((inv.filter().at(k) - freq_inverse(&rho, k)).abs() < 1e-9, "k={k}");
    }
    let v = build_v(&DesignSpec::default_cubic()).unwrap();
    assert!((v.at(0) - freq_v0(&rho)).abs() < 1e-8, "{} vs {}", v.at(0), freq_v0(&rho));
    for k in 1..=3 {
        assert_eq!(v.at(k), v.at(-k));
    }
}

/// Direct `sum_k a[k] h_W(t + k)` at ten fixed pseudo-random grid points.
fn dense_w_points(spec: &DesignSpec, window: f64) -> Vec<(usize, usize, f64)> {
    let taps: Vec<(i64, f64)> = (-200..=196).map(|k| (k, freq_inverse(&spec.rho_d, k))).collect();
    let g = spec.grid;
    let mut state = 12345u64;
    (0..10)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let n = (state >> 33) as usize % 4;
            let j = (state >> 13) as usize % g;
            let t = n as f64 + j as f64 / g as f64;
            let dense = taps
                .iter()
                .map(|&(k, a)| {
                    let x = t + k as f64;
                    if x.abs() > window {
                        0.0
                    } else {
                        a * sinc(x)
                    }
                })
                .sum();
            (n, j, dense)
        })
        .collect()
}

#[test]
fn w_matches_dense_sum() {
    // same truncation window, with inverse long enough to drop nothing
    let mut spec = DesignSpec::default_cubic();
    spec.max_taps = 401;
    let w = build_w(&spec).unwrap();
    for (n, j, dense) in dense_w_points(&spec, spec.window as f64) {
        assert!((w[n][j] - dense).abs() < 1e-9, "n={n} j={j}: {} vs {dense}", w[n][j]);
    }
}

#[test]
fn w_is_insensitive_to_doubling_the_window() {
    // default inverse length and window against a doubled window: the
    // dropped target tail stays far below 1e-6 of max |w|
    let spec = DesignSpec::default_cubic();
    let w = build_w(&spec).unwrap();
    let scale = w.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for (n, j, dense) in dense_w_points(&spec, 2.0 * spec.window as f64) {
        assert!((w[n][j] - dense).abs() < 1e-6 * scale, "n={n} j={j}");
    }
}

#[test]
fn cardinal_cubic_matches_brute_force_sum() {
    let card = cardinal_from_basis(&make_bspline(3).unwrap(), DEFAULT_GRID, DEFAULT_CARDINAL_TAPS).unwrap();
    let alpha = 3f64.sqrt() - 2.0;
    for t in [0.5, 1.25, 2.5, -3.75, 7.5] {
        let brute: f64 = (-60..=60)
            .map(|k: i64| 3f64.sqrt() * alpha.powi(k.abs() as i32) * centered_cubic(t - k as f64))
            .sum();
        assert!((card.eval(t) - brute).abs() < 1e-9, "t={t}");
    }
    assert!((card.eval(0.0) - 1.0).abs() < 1e-12);
    for n in 1..=20 {
        assert!(card.eval(n as f64).abs() <= 1e-6 && card.eval(-(n as f64)).abs() <= 1e-6);
    }
}

#[test]
fn bspline_pieces_match_closed_form_cubic() {
    let b = make_bspline(3).unwrap();
    for i in 0..400 {
        let t = i as f64 / 100.0;
        assert!((b.eval(t) - centered_cubic(t - 2.0)).abs() < 1e-14, "t={t}");
    }
}

#[test]
fn designed_cardinal_interpolates() {
    let spec = DesignSpec::default_cubic();
    let k = design_optimized_spline(&spec).unwrap();
    let inv = invert_fir_default(&spec.rho_d).unwrap();
    let card = k.kernel.convolve_discrete(inv.filter());
    assert!((card.eval(0.0) - 1.0).abs() < 1e-6);
    for n in 1..=20 {
        assert!(card.eval(n as f64).abs() < 1e-6, "n={n}: {}", card.eval(n as f64));
        assert!(card.eval(-(n as f64)).abs() < 1e-6, "n=-{n}");
    }
}

#[test]
fn optimized_beats_bspline_on_the_same_constraint_set() {
    let spec = DesignSpec::new(3, &[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], TargetFilter::sinc()).unwrap();
    let opt = design_optimized_spline(&spec).unwrap();
    let b3 = tabulate(&make_bspline(3).unwrap(), spec.grid);
    let e_opt = opt.error.unwrap();
    let e_b3 = error_functional(&b3, &spec).unwrap();
    assert!(e_opt < e_b3, "{e_opt} vs {e_b3}");
    let diff = opt.kernel.samples().iter().zip(b3.samples()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(diff > 1e-3);
}

#[test]
fn optimized_dominates_feasible_candidates() {
    let spec = DesignSpec::default_cubic().with_grid(256);
    let opt = design_optimized_spline(&spec).unwrap();
    let e_opt = opt.error.unwrap();
    // B-spline shape rescaled per segment to hit rho_d at the integers
    let b3 = tabulate(&make_bspline(3).unwrap(), 256);
    let rescaled: Vec<f64> = b3
        .samples()
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let t = j as f64 / 256.0;
            let n = t.round() as i64;
            let scale = if (1..=3).contains(&n) { spec.rho_d.at(n) / b3.at_integer(n) } else { 1.0 };
            v * scale
        })
        .collect();
    let cand = TabulatedKernel::new(256, 0, rescaled, 3).unwrap();
    assert!(e_opt < error_functional(&cand, &spec).unwrap());

    let oracle = dense_oracle(&spec).unwrap();
    assert!(e_opt <= error_functional(&oracle, &spec).unwrap() * (1.0 + 1e-12));

    for s in 1..=5 {
        let mut bumped = opt.kernel.samples().to_vec();
        let j = 37 * s;
        if j % 256 != 0 {
            bumped[j] += 1e-3;
        }
        let y = TabulatedKernel::new(256, 0, bumped, 3).unwrap();
        assert!(error_functional(&y, &spec).unwrap() > e_opt);
    }
}

#[test]
fn error_converges_with_grid() {
    let e: Vec<f64> = [128, 256, 512, 1024]
        .iter()
        .map(|&g| design_optimized_spline(&DesignSpec::default_cubic().with_grid(g)).unwrap().error.unwrap())
        .collect();
    let d1 = (e[1] - e[0]).abs();
    let d2 = (e[2] - e[1]).abs();
    let d3 = (e[3] - e[2]).abs();
    assert!(d2 <= 0.3 * d1 && d3 <= 0.3 * d2, "{e:?}");
    assert!(d3 / e[3] < 1e-6);
}

#[test]
fn kernel_is_stable_when_window_doubles() {
    let a = design_optimized_spline(&DesignSpec::default_cubic()).unwrap();
    let b = design_optimized_spline(&DesignSpec::default_cubic().with_window(128)).unwrap();
    let diff =
        a.kernel.samples().iter().zip(b.kernel.samples()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    assert!(diff < 1e-6, "{diff}");
}
