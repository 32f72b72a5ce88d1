use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use optspline::bench::{load_corpus, run_bench, BenchConfig, BenchReport};
use optspline::design::{
    design_optimized_spline, target_error, verify_optimality_with, DesignConfig, TargetFilter, VerifyOptions,
};
use optspline::kernel::{tabulate_kernel, TabulatedKernel, DEFAULT_GRID};
use optspline::resample::DownsampleMode;
use optspline::{synth, BoundaryMode, GrayImage, KernelOptions, KernelRegistry, ResampleConfig, Resampler};
use serde_json::json;

#[derive(Parser)]
#[command(name = "optspline", version, about = "Optimized spline kernel design and image enlargement")]
struct Cli {
    /// Directory for generated files.
    #[arg(long, global = true, env = "OPTSPLINE_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct GridArgs {
    /// Samples per unit interval for tabulated kernels.
    #[arg(long)]
    grid: Option<usize>,

    /// Target truncation half-width in samples.
    #[arg(long)]
    window: Option<usize>,
}

impl GridArgs {
    fn options(&self) -> KernelOptions {
        let d = KernelOptions::default();
        KernelOptions { grid: self.grid.unwrap_or(d.grid), window: self.window.unwrap_or(d.window) }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Design an optimized kernel from a JSON spec; writes <name>.csv and <name>.metrics.json.
    Design {
        /// JSON spec: {m, rho_d, target: {kind, ...}, G, window}.
        spec: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Output file stem (defaults to the spec's stem).
        #[arg(long)]
        name: Option<String>,
        /// Also run the optimality checks (residual, perturbations, dense oracle).
        #[arg(long)]
        verify: bool,
    },
    /// SNR of a kernel's cardinal interpolator against a target.
    Snr {
        /// Kernel CSV or built-in kernel name.
        kernel: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Ideal lowpass cutoff in cycles per sample.
        #[arg(long, default_value_t = 0.5, conflicts_with = "target_csv")]
        cutoff: f64,
        /// Tabulated target kernel CSV instead of the ideal lowpass.
        #[arg(long)]
        target_csv: Option<PathBuf>,
    },
    /// Enlarge a PGM image.
    Enlarge {
        /// Input PGM (P5, 8-bit).
        input: PathBuf,
        /// Output path; relative paths land in --out-dir.
        output: PathBuf,
        /// Kernel CSV or built-in kernel name.
        #[arg(long, default_value = "optspline3-paper")]
        kernel: String,
        #[arg(long, default_value_t = 2)]
        factor: usize,
        /// mirror | zero
        #[arg(long, default_value_t = BoundaryMode::Mirror)]
        boundary: BoundaryMode,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Downsample, enlarge and score every PGM in a directory; writes bench.json and bench.csv.
    Bench {
        /// Directory of PGM images (all dimensions divisible by 2).
        images: PathBuf,
        /// Reuse the config echoed in a previous report (or a bare config file).
        #[arg(long)]
        config: Option<PathBuf>,
        /// decimate | average [default: decimate]
        #[arg(long)]
        downsample_mode: Option<DownsampleMode>,
        /// mirror | zero [default: mirror]
        #[arg(long)]
        boundary: Option<BoundaryMode>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Write seeded synthetic test images (checker+noise and smooth) as PGM.
    Synth {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 512)]
        size: usize,
    },
    /// List built-in kernels.
    Kernels,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 3 for numerical failures, 2 for bad input, 1 for anything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    use optspline::Error as E;
    match e.chain().find_map(|c| c.downcast_ref::<E>()) {
        Some(err) if err.is_numeric() => 3,
        Some(E::Io(_)) | None => 1,
        Some(_) => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global()?;
    }
    let out_dir = cli.out_dir;
    match cli.command {
        Command::Design { spec, grid, name, verify } => cmd_design(&spec, grid, name, verify, &out_dir),
        Command::Snr { kernel, grid, cutoff, target_csv } => cmd_snr(&kernel, grid, cutoff, target_csv),
        Command::Enlarge { input, output, kernel, factor, boundary, grid } => {
            cmd_enlarge(&input, &out_dir.join(output), &kernel, factor, boundary, grid)
        }
        Command::Bench { images, config, downsample_mode, boundary, grid } => {
            let mut cfg = match config {
                Some(p) => load_bench_config(&p)?,
                None => BenchConfig::default(),
            };
            if let Some(m) = downsample_mode {
                cfg.downsample_mode = m;
            }
            if let Some(b) = boundary {
                cfg.boundary = b;
            }
            cfg.grid = grid.grid.unwrap_or(cfg.grid);
            cfg.window = grid.window.unwrap_or(cfg.window);
            cmd_bench(&images, &cfg, &out_dir)
        }
        Command::Synth { seed, size } => cmd_synth(seed, size, &out_dir),
        Command::Kernels => {
            let reg = KernelRegistry::with_builtins();
            for name in reg.names() {
                println!("{name}\t{}", reg.get(name).map(|s| s.description()).unwrap_or_default());
            }
            Ok(())
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn cmd_design(
    spec_path: &Path,
    grid: GridArgs,
    name: Option<String>,
    verify: bool,
    out_dir: &Path,
) -> Result<()> {
    let (mut cfg, base) = DesignConfig::load(spec_path)
        .with_context(|| format!("reading design spec {}", spec_path.display()))?;
    cfg.grid = grid.grid.unwrap_or(cfg.grid);
    cfg.window = grid.window.unwrap_or(cfg.window);
    let spec = cfg.to_spec(&base)?;
    let k = design_optimized_spline(&spec)?;
    let report = optspline::design::error_report(&k.kernel, &spec)?;

    let stem = name.unwrap_or_else(|| {
        spec_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "kernel".into())
    });
    create_dir(out_dir)?;
    let csv_path = out_dir.join(format!("{stem}.csv"));
    k.kernel.write_csv(std::fs::File::create(&csv_path)?)?;

    let mut metrics = json!({
        "spec": cfg,
        "kernel_csv": csv_path.file_name().map(|s| s.to_string_lossy()),
        "residual": k.residual,
        "snap_delta": k.snap_delta,
        "e_h": report.error,
        "target_energy": report.energy,
        "snr_db": finite_or_inf(report.snr_db()),
    });
    if verify {
        let opts = VerifyOptions { oracle_grid: Some(256.min(spec.grid)), ..Default::default() };
        let grid_ok = spec.grid % opts.oracle_grid.unwrap_or(1) == 0;
        let opts = if grid_ok { opts } else { VerifyOptions { oracle_grid: None, ..opts } };
        metrics["optimality"] = serde_json::to_value(verify_optimality_with(&k, &spec, &opts)?)?;
    }
    let text = serde_json::to_string_pretty(&metrics)? + "\n";
    std::fs::write(out_dir.join(format!("{stem}.metrics.json")), &text)?;
    print!("{text}");
    Ok(())
}

fn finite_or_inf(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!("inf")
    }
}

fn load_kernel(name_or_path: &str, opts: &KernelOptions) -> Result<std::sync::Arc<dyn optspline::Kernel>> {
    KernelRegistry::with_builtins()
        .resolve(name_or_path, opts)
        .with_context(|| format!("loading kernel '{name_or_path}'"))
}

fn cmd_snr(kernel: &str, grid: GridArgs, cutoff: f64, target_csv: Option<PathBuf>) -> Result<()> {
    let opts = grid.options();
    let path = Path::new(kernel);
    let tab = if path.is_file() {
        TabulatedKernel::read_csv(std::fs::File::open(path)?)?
    } else {
        tabulate_kernel(load_kernel(kernel, &opts)?.as_ref(), grid.grid.unwrap_or(DEFAULT_GRID))
    };
    let target = match &target_csv {
        Some(p) => TargetFilter::Tabulated(TabulatedKernel::read_csv(
            std::fs::File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )?),
        None => TargetFilter::IdealLowpass { cutoff },
    };
    let r = target_error(&tab, &target, opts.window)?;
    let out = json!({
        "kernel": kernel,
        "target": match &target_csv {
            Some(p) => json!({"kind": "tabulated", "csv": p}),
            None => json!({"kind": "ideal_lowpass", "cutoff": cutoff}),
        },
        "G": tab.grid(),
        "window": opts.window,
        "e_h": r.error,
        "target_energy": r.energy,
        "snr_db": finite_or_inf(r.snr_db()),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn cmd_enlarge(
    input: &Path,
    output: &Path,
    kernel: &str,
    factor: usize,
    boundary: BoundaryMode,
    grid: GridArgs,
) -> Result<()> {
    if factor < 2 {
        return Err(
            optspline::Error::InvalidArgument(format!("factor must be at least 2, got {factor}")).into()
        );
    }
    let k = load_kernel(kernel, &grid.options())?;
    let img = GrayImage::load_pgm(input).with_context(|| format!("reading {}", input.display()))?;
    let rs = Resampler::new(&ResampleConfig::new(k, factor).with_boundary(boundary))?;
    let out = rs.enlarge_image(&img)?;
    if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    out.save_pgm(output).with_context(|| format!("writing {}", output.display()))?;
    eprintln!("{}x{} -> {}x{} ({})", img.width(), img.height(), out.width(), out.height(), output.display());
    Ok(())
}

fn load_bench_config(path: &Path) -> Result<BenchConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(optspline::Error::from)?;
    let cfg = value.get("config").cloned().unwrap_or(value);
    Ok(serde_json::from_value(cfg).map_err(optspline::Error::from)?)
}

fn cmd_bench(images: &Path, cfg: &BenchConfig, out_dir: &Path) -> Result<()> {
    if !images.is_dir() {
        bail!(optspline::Error::InvalidArgument(format!("{} is not a directory", images.display())));
    }
    let corpus = load_corpus(images)?;
    let report: BenchReport = run_bench(&corpus, cfg)?;
    create_dir(out_dir)?;
    let json_path = out_dir.join("bench.json");
    let csv_path = out_dir.join("bench.csv");
    std::fs::write(&json_path, report.to_json()?)?;
    std::fs::write(&csv_path, report.to_csv())?;
    print!("{}", report.to_csv());
    let s = &report.summary;
    eprintln!(
        "optspline3 >= bicubic on {}/{} images, mean gap {:+.3} dB; wrote {} and {}",
        s.optspline3_ge_bicubic,
        s.images,
        s.mean_gap_vs_bicubic_db,
        json_path.display(),
        csv_path.display()
    );
    Ok(())
}

fn cmd_synth(seed: u64, size: usize, out_dir: &Path) -> Result<()> {
    if size < 2 || !size.is_multiple_of(2) {
        return Err(anyhow!(optspline::Error::InvalidArgument(format!(
            "size must be even and >= 2, got {size}"
        ))));
    }
    create_dir(out_dir)?;
    for (name, img) in [
        ("checker_noise", synth::checker_noise(size, size, seed)?),
        ("smooth", synth::smooth(size, size, seed)?),
    ] {
        let p = out_dir.join(format!("{name}.pgm"));
        img.save_pgm(&p)?;
        println!("{}", p.display());
    }
    Ok(())
}
