//! Downsample, enlarge and score: one row per image, one column per method.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::design::{design_optimized_spline, error_report, DesignSpec, TargetFilter};
use crate::error::{Error, Result};
use crate::filters::BoundaryMode;
use crate::kernel::{make_bspline, tabulate};
use crate::registry::{KernelOptions, KernelRegistry};
use crate::resample::{downsample, psnr, DownsampleMode, GrayImage, ResampleConfig, Resampler};

/// Everything that determines a report; echoed into it verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub factor: usize,
    pub downsample_mode: DownsampleMode,
    pub boundary: BoundaryMode,
    #[serde(rename = "G")]
    pub grid: usize,
    pub window: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        let k = KernelOptions::default();
        Self {
            factor: 2,
            downsample_mode: DownsampleMode::Decimate,
            boundary: BoundaryMode::Mirror,
            grid: k.grid,
            window: k.window,
        }
    }
}

/// PSNR in dB; identical images serialize as the string `"inf"`.
pub mod psnr_value {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad PSNR '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    #[serde(with = "psnr_value")]
    pub psnr_bicubic: f64,
    #[serde(with = "psnr_value")]
    pub psnr_bspline3: f64,
    #[serde(with = "psnr_value")]
    pub psnr_optspline3: f64,
}

/// Cardinal cubic B-spline and optimized cubic against the ideal lowpass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelMetrics {
    pub snr_cardinal_db: f64,
    pub snr_optimized_db: f64,
    pub e_h_cardinal: f64,
    pub e_h_optimized: f64,
    pub target_energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub images: usize,
    /// Images where the optimized kernel scores at least as well as bicubic.
    pub optspline3_ge_bicubic: usize,
    /// Mean of `psnr_optspline3 - psnr_bicubic` over rows where both are finite.
    pub mean_gap_vs_bicubic_db: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub kernel_metrics: KernelMetrics,
    pub rows: Vec<BenchRow>,
    pub summary: BenchSummary,
}

impl BenchReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_csv(&self) -> String {
        let fmt = |v: f64| if v.is_infinite() { "inf".to_string() } else { format!("{v:.6}") };
        let mut out = String::from("name,psnr_bicubic,psnr_bspline3,psnr_optspline3\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.name,
                fmt(r.psnr_bicubic),
                fmt(r.psnr_bspline3),
                fmt(r.psnr_optspline3)
            ));
        }
        out
    }
}

pub fn kernel_metrics(cfg: &BenchConfig) -> Result<KernelMetrics> {
    let cubic = DesignSpec::new(3, &[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], TargetFilter::sinc())?
        .with_grid(cfg.grid)
        .with_window(cfg.window);
    let card = error_report(&tabulate(&make_bspline(3)?, cfg.grid), &cubic)?;
    let spec = DesignSpec::default_cubic().with_grid(cfg.grid).with_window(cfg.window);
    let opt = error_report(&design_optimized_spline(&spec)?.kernel, &spec)?;
    Ok(KernelMetrics {
        snr_cardinal_db: card.snr_db(),
        snr_optimized_db: opt.snr_db(),
        e_h_cardinal: card.error,
        e_h_optimized: opt.error,
        target_energy: opt.energy,
    })
}

/// Every `*.pgm` in `dir`, keyed by file stem and sorted by name.
pub fn load_corpus(dir: &Path) -> Result<Vec<(String, GrayImage)>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::InvalidArgument(format!("no .pgm images in {}", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok((name, GrayImage::load_pgm(p)?))
        })
        .collect()
}

pub fn run_bench(images: &[(String, GrayImage)], cfg: &BenchConfig) -> Result<BenchReport> {
    if images.is_empty() {
        return Err(Error::InvalidArgument("benchmark needs at least one image".into()));
    }
    let registry = KernelRegistry::with_builtins();
    let opts = KernelOptions { grid: cfg.grid, window: cfg.window };
    let make = |name: &str| -> Result<Resampler> {
        let rc = ResampleConfig::new(registry.build(name, &opts)?, cfg.factor).with_boundary(cfg.boundary);
        Resampler::new(&rc)
    };
    let methods = [make("bicubic-keys")?, make("bspline3")?, make("optspline3-paper")?];

    let mut rows = images
        .par_iter()
        .map(|(name, img)| {
            let low = downsample(img, cfg.factor, cfg.downsample_mode)?;
            let mut scores = [0.0; 3];
            for (s, m) in scores.iter_mut().zip(&methods) {
                *s = psnr(&m.enlarge_image(&low)?, img)?;
            }
            Ok(BenchRow {
                name: name.clone(),
                psnr_bicubic: scores[0],
                psnr_bspline3: scores[1],
                psnr_optspline3: scores[2],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.name.cmp(&b.name));

    let wins = rows.iter().filter(|r| r.psnr_optspline3 >= r.psnr_bicubic).count();
    let gaps: Vec<f64> = rows
        .iter()
        .filter(|r| r.psnr_optspline3.is_finite() && r.psnr_bicubic.is_finite())
        .map(|r| r.psnr_optspline3 - r.psnr_bicubic)
        .collect();
    let mean_gap = if gaps.is_empty() { 0.0 } else { gaps.iter().sum::<f64>() / gaps.len() as f64 };

    Ok(BenchReport {
        config: cfg.clone(),
        kernel_metrics: kernel_metrics(cfg)?,
        summary: BenchSummary {
            images: rows.len(),
            optspline3_ge_bicubic: wins,
            mean_gap_vs_bicubic_db: mean_gap,
        },
        rows,
    })
}
