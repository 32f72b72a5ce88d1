use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::normal::{analysis_filter, NormalSystem};
use super::objective::{reconstruction_filter, Objective};
use super::spec::DesignSpec;
use super::OptimizedKernel;
use crate::error::{Error, Result};
use crate::kernel::TabulatedKernel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub perturbations: usize,
    /// Central-difference step.
    pub step: f64,
    pub seed: u64,
    /// Grid used by the dense oracle; `None` skips it.
    pub oracle_grid: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { perturbations: 100, step: 1e-5, seed: 0x5eed, oracle_grid: Some(256) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    /// `max |(v * rho)(t) - w(t)|` over non-integer grid points.
    pub residual: f64,
    /// `residual / max |w|`.
    pub residual_rel: f64,
    /// Directional derivatives of the error, each divided by `||gamma|| ||h||`.
    pub directional: Vec<f64>,
    pub max_directional: f64,
    /// Relative L2 distance to the dense least-squares solution.
    pub oracle_distance: Option<f64>,
}

/// Normal-equation residual of a kernel on `[0, m+1]` sharing the system's grid.
pub fn normal_residual(kernel: &TabulatedKernel, sys: &NormalSystem) -> f64 {
    let g = sys.grid();
    let n = sys.w.len();
    assert_eq!(kernel.grid(), g);
    assert_eq!(kernel.samples().len(), n * g + 1);
    let s = kernel.samples();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for col in 1..g {
            let lhs: f64 = (0..n).map(|j| sys.toeplitz.get(i, j) * s[j * g + col]).sum();
            worst = worst.max((lhs - sys.w[i][col]).abs());
        }
    }
    worst
}

/// Random direction in the feasible tangent space: a short sine series on
/// each unit segment, so it vanishes at every integer.
fn perturbation(rng: &mut ChaCha8Rng, order: usize, grid: usize) -> Vec<f64> {
    let mut out = vec![0.0; (order + 1) * grid + 1];
    for n in 0..=order {
        let coef: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for j in 1..grid {
            let s = j as f64 / grid as f64;
            out[n * grid + j] = coef
                .iter()
                .enumerate()
                .map(|(k, a)| a * ((k + 1) as f64 * std::f64::consts::PI * s).sin())
                .sum();
        }
    }
    out
}

fn l2(values: &[f64], grid: usize) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() / grid as f64).sqrt()
}

/// Solves the grid-discretized constrained least-squares problem directly:
/// unknowns are all non-integer kernel samples, integer samples are pinned,
/// and the normal matrix is assembled densely from the explicit rows.
pub fn dense_oracle(spec: &DesignSpec) -> Result<TabulatedKernel> {
    spec.validate()?;
    let m = spec.order;
    let g = spec.grid;
    let c = analysis_filter(spec)?;
    // unknown index for kernel node p in 0..=(m+1)g
    let unknown = |p: usize| -> Option<usize> {
        if p.is_multiple_of(g) {
            None
        } else {
            Some(p / g * (g - 1) + p % g - 1)
        }
    };
    let pinned = |p: usize| -> f64 { spec.rho_d.at((p / g) as i64) };
    let nu = (m + 1) * (g - 1);
    let lo = (-(spec.window as i64)).min(c.first_index());
    let hi = (spec.window as i64).max(c.last_index() + m as i64 + 1);
    let rows = (hi - lo) as usize * g + 1;
    let kernel_nodes = (m + 1) * g;

    let mut ata = DMatrix::<f64>::zeros(nu, nu);
    let mut atb = DVector::<f64>::zeros(nu);
    let mut idx = Vec::with_capacity(m + 2);
    let mut val = Vec::with_capacity(m + 2);
    for r in 0..rows {
        let q = lo * g as i64 + r as i64;
        let weight = if r == 0 || r + 1 == rows { 0.5 } else { 1.0 };
        let mut rhs = spec.target.eval_windowed(q as f64 / g as f64, spec.window as f64);
        idx.clear();
        val.clear();
        for (k, ck) in c.iter() {
            let p = q - k * g as i64;
            if p < 0 || p as usize > kernel_nodes {
                continue;
            }
            match unknown(p as usize) {
                Some(u) => {
                    idx.push(u);
                    val.push(ck);
                }
                None => rhs -= ck * pinned(p as usize),
            }
        }
        for (a, &ia) in idx.iter().enumerate() {
            atb[ia] += weight * val[a] * rhs;
            for (b, &ib) in idx.iter().enumerate() {
                ata[(ia, ib)] += weight * val[a] * val[b];
            }
        }
    }
    let chol = ata.cholesky().ok_or(Error::SingularSystem { pivot: 0, value: f64::NAN })?;
    let x = chol.solve(&atb);

    let samples = (0..=kernel_nodes)
        .map(|p| match unknown(p) {
            Some(u) if p < kernel_nodes => x[u],
            _ => pinned(p),
        })
        .collect();
    TabulatedKernel::new(g, 0, samples, m)
}

pub fn verify_optimality(k: &OptimizedKernel, spec: &DesignSpec) -> Result<OptimalityReport> {
    verify_optimality_with(k, spec, &VerifyOptions::default())
}

pub fn verify_optimality_with(
    k: &OptimizedKernel,
    spec: &DesignSpec,
    opts: &VerifyOptions,
) -> Result<OptimalityReport> {
    let kern = &k.kernel;
    let g = kern.grid();
    if g != spec.grid || kern.start() != 0 || kern.span() != spec.order + 1 {
        return Err(Error::DimensionMismatch("kernel does not match the spec layout".into()));
    }

    let sys = NormalSystem::build(spec)?;
    let residual = normal_residual(kern, &sys);
    let residual_rel = residual / sys.max_abs_w().max(f64::MIN_POSITIVE);

    let c = reconstruction_filter(kern, spec)?;
    let base = kern.convolve_discrete(&c);
    let obj = Objective::new(&spec.target, spec.window, g, base.start(), base.end());
    let h_norm = obj.energy().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let eval = |samples: Vec<f64>| -> Result<f64> {
        let y = TabulatedKernel::new(g, 0, samples, spec.order)?;
        Ok(obj.error(&y.convolve_discrete(&c)))
    };
    let mut directional = Vec::with_capacity(opts.perturbations);
    for _ in 0..opts.perturbations {
        let gamma = perturbation(&mut rng, spec.order, g);
        let shifted = |sign: f64| -> Vec<f64> {
            kern.samples().iter().zip(&gamma).map(|(r, d)| r + sign * opts.step * d).collect()
        };
        let d = (eval(shifted(1.0))? - eval(shifted(-1.0))?) / (2.0 * opts.step);
        directional.push(d / (l2(&gamma, g) * h_norm));
    }
    let max_directional = directional.iter().fold(0.0f64, |m, d| m.max(d.abs()));

    let oracle_distance = match opts.oracle_grid {
        Some(og) => {
            let og = og.min(g);
            if !g.is_multiple_of(og) {
                return Err(Error::InvalidArgument(format!("oracle grid {og} does not divide {g}")));
            }
            let oracle = dense_oracle(&spec.clone().with_grid(og))?;
            let step = g / og;
            let (mut num, mut den) = (0.0, 0.0);
            for (j, o) in oracle.samples().iter().enumerate() {
                let d = kern.samples()[j * step] - o;
                num += d * d;
                den += o * o;
            }
            Some((num / den).sqrt())
        }
        None => None,
    };

    Ok(OptimalityReport { residual, residual_rel, directional, max_directional, oracle_distance })
}
