use super::spec::DesignSpec;
use super::toeplitz::SymmetricToeplitz;
use crate::error::{Error, Result};
use crate::filters::{autocorrelate, convolve, invert_fir, FirFilter};

/// Discrete filter `c = rho_d^{-1} * x_d` mapping a basis kernel to its
/// reconstruction of the target. For an interpolating target `x_d = delta`
/// and `c` is the inverse prefilter alone.
pub fn analysis_filter(spec: &DesignSpec) -> Result<FirFilter> {
    let inv = invert_fir(&spec.rho_d, spec.eps, spec.max_taps)?;
    match spec.target.integer_samples(spec.window) {
        Some(xd) if !xd.is_delta(1e-12) => Ok(convolve(inv.filter(), &xd)),
        // interpolating (or identically zero on the lattice) target
        _ => Ok(inv.filter().clone()),
    }
}

/// Autocorrelation of the analysis filter (the lags of the normal matrix).
pub fn build_v(spec: &DesignSpec) -> Result<FirFilter> {
    Ok(autocorrelate(analysis_filter(spec)?))
}

/// Unit-interval slices `W_n(g / G) = w(n + g / G)` of
/// `w(t) = sum_k c[k] h(t + k)`, for `n = 0..=order`.
pub fn build_w(spec: &DesignSpec) -> Result<Vec<Vec<f64>>> {
    Ok(w_segments(spec, &analysis_filter(spec)?))
}

fn w_segments(spec: &DesignSpec, c: &FirFilter) -> Vec<Vec<f64>> {
    let g = spec.grid;
    let window = spec.window as f64;
    (0..=spec.order)
        .map(|n| {
            (0..g)
                .map(|j| {
                    let t = n as f64 + j as f64 / g as f64;
                    c.iter().map(|(k, ck)| ck * spec.target.eval_windowed(t + k as f64, window)).sum()
                })
                .collect()
        })
        .collect()
}

/// The per-column linear system `T R(t) = W(t)` on `t in [0, 1)`.
#[derive(Clone, Debug)]
pub struct NormalSystem {
    pub v: FirFilter,
    pub w: Vec<Vec<f64>>,
    pub toeplitz: SymmetricToeplitz,
}

impl NormalSystem {
    pub fn build(spec: &DesignSpec) -> Result<Self> {
        let c = analysis_filter(spec)?;
        let v = autocorrelate(&c);
        let w = w_segments(spec, &c);
        Self::from_parts(v, w)
    }

    /// `T[i][j] = v[i - j]` sized by the number of segments in `w`.
    pub fn from_parts(v: FirFilter, w: Vec<Vec<f64>>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::DimensionMismatch("no segments".into()));
        }
        let cols = w[0].len();
        if w.iter().any(|s| s.len() != cols) || cols == 0 {
            return Err(Error::DimensionMismatch("segments differ in length".into()));
        }
        let lags: Vec<f64> = (0..w.len() as i64).map(|k| v.at(k)).collect();
        for k in 1..w.len() as i64 {
            let (a, b) = (v.at(k), v.at(-k));
            if (a - b).abs() > 1e-12 * (a.abs() + b.abs()).max(1e-300) {
                return Err(Error::InvalidArgument(format!("v is not symmetric at lag {k}")));
            }
        }
        Ok(Self { v, w, toeplitz: SymmetricToeplitz::new(lags) })
    }

    pub fn order(&self) -> usize {
        self.w.len() - 1
    }

    pub fn grid(&self) -> usize {
        self.w[0].len()
    }

    pub fn max_abs_w(&self) -> f64 {
        self.w.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Solves every grid column with one Cholesky factorization.
pub fn solve_segments(sys: &NormalSystem) -> Result<Vec<Vec<f64>>> {
    let chol = sys.toeplitz.cholesky()?;
    let n = sys.w.len();
    let cols = sys.grid();
    let mut r = vec![vec![0.0; cols]; n];
    let mut col = vec![0.0; n];
    for g in 0..cols {
        for i in 0..n {
            col[i] = sys.w[i][g];
        }
        chol.solve_in_place(&mut col);
        for i in 0..n {
            r[i][g] = col[i];
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::target::TargetFilter;

    #[test]
    fn identity_system_copies_w() {
        let w = vec![vec![0.5, -1.0, 2.0], vec![3.0, 0.25, -0.125]];
        let sys = NormalSystem::from_parts(FirFilter::delta(), w.clone()).unwrap();
        assert_eq!(solve_segments(&sys).unwrap(), w);
    }

    #[test]
    fn hand_solved_two_by_two() {
        let v = FirFilter::new(vec![1.0, 2.0, 1.0], -1).unwrap();
        let sys = NormalSystem::from_parts(v, vec![vec![3.0], vec![3.0]]).unwrap();
        let r = solve_segments(&sys).unwrap();
        assert!((r[0][0] - 1.0).abs() < 1e-15 && (r[1][0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shifted_delta_constraint_gives_unit_v() {
        let spec = DesignSpec::new(1, &[1.0], TargetFilter::sinc()).unwrap();
        assert_eq!(build_v(&spec).unwrap(), FirFilter::delta());
    }

    #[test]
    fn w_for_delta_inverse_is_sinc_slices() {
        let spec = DesignSpec::new(1, &[1.0], TargetFilter::sinc()).unwrap().with_grid(16);
        let w = build_w(&spec).unwrap();
        // inverse of delta at n=1 sits at n=-1, so w(t) = h(t - 1)
        for (n, seg) in w.iter().enumerate() {
            for (j, v) in seg.iter().enumerate() {
                let t = n as f64 + j as f64 / 16.0;
                assert!((v - crate::design::target::sinc(t - 1.0)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_target_gives_zero_w() {
        let zero = crate::kernel::TabulatedKernel::new(4, -1, vec![0.0; 9], 0).unwrap();
        let spec = DesignSpec::default_cubic().with_grid(8).with_target(TargetFilter::Tabulated(zero));
        let w = build_w(&spec).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.iter().flatten().all(|&x| x == 0.0));
    }
}
