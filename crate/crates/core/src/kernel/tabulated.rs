use super::Kernel;
use crate::error::{Error, Result};
use crate::filters::FirFilter;

/// Kernel sampled on the uniform grid `t = start + j / grid`.
///
/// Samples span `[start, start + span]` with zero at both ends. Off-grid
/// evaluation interpolates linearly. The `centered` flag only affects CSV
/// export, where `t` is shifted by `-(order+1)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedKernel {
    grid: usize,
    start: i64,
    samples: Vec<f64>,
    order: usize,
    centered: bool,
}

impl TabulatedKernel {
    pub fn new(grid: usize, start: i64, mut samples: Vec<f64>, order: usize) -> Result<Self> {
        if grid == 0 {
            return Err(Error::InvalidArgument("grid must be positive".into()));
        }
        if samples.len() < grid + 1 || !(samples.len() - 1).is_multiple_of(grid) {
            return Err(Error::InvalidArgument(format!(
                "{} samples do not cover a whole number of periods at grid {grid}",
                samples.len()
            )));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument("kernel samples must be finite".into()));
        }
        let last = samples.len() - 1;
        for end in [0, last] {
            if samples[end].abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "kernel must vanish at its support ends (found {})",
                    samples[end]
                )));
            }
            samples[end] = 0.0;
        }
        Ok(Self { grid, start, samples, order, centered: false })
    }

    pub fn with_centered(mut self, centered: bool) -> Self {
        self.centered = centered;
        self
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.span() as i64
    }

    /// Support length in sample periods.
    pub fn span(&self) -> usize {
        (self.samples.len() - 1) / self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn centered(&self) -> bool {
        self.centered
    }

    pub fn t_at(&self, j: usize) -> f64 {
        self.start as f64 + j as f64 / self.grid as f64
    }

    /// Sample at integer time `n`, zero outside the support.
    pub fn at_integer(&self, n: i64) -> f64 {
        let off = n - self.start;
        if off < 0 || off > self.span() as i64 {
            0.0
        } else {
            self.samples[off as usize * self.grid]
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = (t - self.start as f64) * self.grid as f64;
        if !(x > 0.0) || x >= (self.samples.len() - 1) as f64 {
            return 0.0;
        }
        let i = x.floor() as usize;
        let frac = x - i as f64;
        if frac == 0.0 {
            self.samples[i]
        } else {
            self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
        }
    }

    /// `sum_n f[n] k(t - n)` on the same grid.
    pub fn convolve_discrete(&self, f: &FirFilter) -> TabulatedKernel {
        let g = self.grid;
        let span = self.span() + (f.last_index() - f.first_index()) as usize;
        let mut out = vec![0.0; span * g + 1];
        for (i, a) in f.taps().iter().enumerate() {
            let off = i * g;
            for (j, &s) in self.samples.iter().enumerate() {
                out[off + j] += a * s;
            }
        }
        let n = out.len();
        out[0] = 0.0;
        out[n - 1] = 0.0;
        TabulatedKernel {
            grid: g,
            start: self.start + f.first_index(),
            samples: out,
            order: self.order,
            centered: false,
        }
    }

    /// Zero-pads the support out to `[new_start, new_end]`.
    pub fn widened(&self, new_start: i64, new_end: i64) -> TabulatedKernel {
        assert!(new_start <= self.start && new_end >= self.end());
        let g = self.grid;
        let pre = (self.start - new_start) as usize * g;
        let total = (new_end - new_start) as usize * g + 1;
        let mut samples = vec![0.0; total];
        samples[pre..pre + self.samples.len()].copy_from_slice(&self.samples);
        TabulatedKernel { grid: g, start: new_start, samples, order: self.order, centered: self.centered }
    }

    fn export_shift(&self) -> f64 {
        if self.centered {
            (self.order as f64 + 1.0) / 2.0
        } else {
            0.0
        }
    }

    /// CSV with header `t,value`, one row per grid point.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "value"])?;
        let shift = self.export_shift();
        for (j, v) in self.samples.iter().enumerate() {
            w.write_record([format!("{}", self.t_at(j) - shift), format!("{v:.16e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a `t,value` CSV written by [`write_csv`](Self::write_csv).
    ///
    /// A support that does not start on an integer is taken to be a centred
    /// export of a kernel living on `(0, span)`.
    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let parse = |i: usize, what: &str| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Parse(format!("missing {what} column")))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
            };
            ts.push(parse(0, "t")?);
            vs.push(parse(1, "value")?);
        }
        if ts.len() < 3 {
            return Err(Error::Parse("kernel CSV needs at least three rows".into()));
        }
        let step = ts[1] - ts[0];
        if !(step > 0.0) {
            return Err(Error::Parse("kernel CSV t column must increase".into()));
        }
        let grid = (1.0 / step).round() as usize;
        let tol = 1e-6 / grid as f64;
        for (j, t) in ts.iter().enumerate() {
            if (t - (ts[0] + j as f64 / grid as f64)).abs() > tol {
                return Err(Error::Parse(format!("non-uniform grid at row {}", j + 1)));
            }
        }
        if (ts.len() - 1) % grid != 0 {
            return Err(Error::Parse("kernel CSV does not cover whole sample periods".into()));
        }
        let span = (ts.len() - 1) / grid;
        let t0 = ts[0];
        let (start, centered) = if (t0 - t0.round()).abs() <= tol {
            (t0.round() as i64, false)
        } else if (t0 + span as f64 / 2.0).abs() <= tol {
            (0, true)
        } else {
            return Err(Error::Parse(format!("kernel support start {t0} is not on the integer lattice")));
        };
        let order = if start == 0 { span.saturating_sub(1) } else { 0 };
        Ok(Self::new(grid, start, vs, order)?.with_centered(centered))
    }
}

impl Kernel for TabulatedKernel {
    fn support(&self) -> (i64, i64) {
        (self.start, self.end())
    }

    fn eval(&self, t: f64) -> f64 {
        TabulatedKernel::eval(self, t)
    }

    fn order(&self) -> usize {
        self.order
    }
}
