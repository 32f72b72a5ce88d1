//! Named kernel strategies selectable at runtime.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::design::{design_optimized_spline, DesignSpec, DEFAULT_WINDOW};
use crate::error::{Error, Result};
use crate::kernel::{keys_cubic, make_bspline, Kernel, TabulatedKernel, DEFAULT_GRID};

/// Knobs shared by all strategies; only designed kernels use them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelOptions {
    pub grid: usize,
    pub window: usize,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self { grid: DEFAULT_GRID, window: DEFAULT_WINDOW }
    }
}

pub trait KernelStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn build(&self, opts: &KernelOptions) -> Result<Arc<dyn Kernel>>;
}

struct BSpline(usize, &'static str, &'static str);

impl KernelStrategy for BSpline {
    fn name(&self) -> &'static str {
        self.1
    }

    fn description(&self) -> &'static str {
        self.2
    }

    fn build(&self, _: &KernelOptions) -> Result<Arc<dyn Kernel>> {
        Ok(Arc::new(make_bspline(self.0)?))
    }
}

struct Keys;

impl KernelStrategy for Keys {
    fn name(&self) -> &'static str {
        "bicubic-keys"
    }

    fn description(&self) -> &'static str {
        "Keys cubic convolution, a = -0.5"
    }

    fn build(&self, _: &KernelOptions) -> Result<Arc<dyn Kernel>> {
        Ok(Arc::new(keys_cubic(-0.5)))
    }
}

struct OptSpline3;

impl KernelStrategy for OptSpline3 {
    fn name(&self) -> &'static str {
        "optspline3-paper"
    }

    fn description(&self) -> &'static str {
        "least-squares cubic vs ideal lowpass, rho_d = (0.233, 0.480, 0.233)"
    }

    fn build(&self, opts: &KernelOptions) -> Result<Arc<dyn Kernel>> {
        let spec = DesignSpec::default_cubic().with_grid(opts.grid).with_window(opts.window);
        Ok(Arc::new(design_optimized_spline(&spec)?))
    }
}

pub struct KernelRegistry {
    strategies: BTreeMap<&'static str, Box<dyn KernelStrategy>>,
}

impl KernelRegistry {
    pub fn empty() -> Self {
        Self { strategies: BTreeMap::new() }
    }

    /// `bspline1`, `bspline3`, `bicubic-keys` and `optspline3-paper`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(BSpline(1, "bspline1", "linear B-spline (bilinear in 2-D)")));
        r.register(Box::new(BSpline(3, "bspline3", "cubic B-spline with exact prefilter")));
        r.register(Box::new(Keys));
        r.register(Box::new(OptSpline3));
        r
    }

    /// Adds a strategy, replacing any previous one with the same name.
    pub fn register(&mut self, s: Box<dyn KernelStrategy>) {
        self.strategies.insert(s.name(), s);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }

    pub fn get(&self, name: &str) -> Option<&dyn KernelStrategy> {
        self.strategies.get(name).map(|b| b.as_ref())
    }

    pub fn build(&self, name: &str, opts: &KernelOptions) -> Result<Arc<dyn Kernel>> {
        match self.get(name) {
            Some(s) => s.build(opts),
            None => Err(Error::InvalidArgument(format!(
                "unknown kernel '{name}' (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// A registered name, or else a path to a kernel CSV.
    pub fn resolve(&self, name_or_path: &str, opts: &KernelOptions) -> Result<Arc<dyn Kernel>> {
        if self.get(name_or_path).is_some() {
            return self.build(name_or_path, opts);
        }
        let path = Path::new(name_or_path);
        if path.is_file() {
            let k = TabulatedKernel::read_csv(std::fs::File::open(path)?)?;
            return Ok(Arc::new(k));
        }
        self.build(name_or_path, opts)
    }
}

impl Default for KernelRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
