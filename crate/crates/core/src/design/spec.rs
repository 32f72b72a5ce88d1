use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::target::TargetFilter;
use crate::error::{Error, Result};
use crate::filters::{invert_fir, FirFilter, DEFAULT_EPS, DEFAULT_MAX_TAPS};
use crate::kernel::{
    cardinal_from_basis, make_bspline, TabulatedKernel, DEFAULT_CARDINAL_TAPS, DEFAULT_GRID,
};

pub const DEFAULT_WINDOW: usize = 64;

/// Integer samples used by the default optimized cubic design.
pub const DEFAULT_RHO3: [f64; 3] = [0.233, 0.480, 0.233];

/// Everything needed to design an optimized kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignSpec {
    pub order: usize,
    /// Prescribed kernel values at `n = 1..=order`.
    pub rho_d: FirFilter,
    pub target: TargetFilter,
    pub grid: usize,
    /// Half-width of the target truncation window, in sample periods.
    pub window: usize,
    pub eps: f64,
    pub max_taps: usize,
}

impl DesignSpec {
    pub fn new(order: usize, rho_d: &[f64], target: TargetFilter) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("design order must be at least 1".into()));
        }
        if rho_d.len() != order {
            return Err(Error::InvalidArgument(format!(
                "order {order} needs {order} integer samples, got {}",
                rho_d.len()
            )));
        }
        let spec = Self {
            order,
            rho_d: FirFilter::new(rho_d.to_vec(), 1)?,
            target,
            grid: DEFAULT_GRID,
            window: DEFAULT_WINDOW,
            eps: DEFAULT_EPS,
            max_taps: DEFAULT_MAX_TAPS,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Cubic design against the ideal lowpass with `rho_d = (0.233, 0.480, 0.233)`.
    pub fn default_cubic() -> Self {
        Self::new(3, &DEFAULT_RHO3, TargetFilter::sinc()).expect("valid default")
    }

    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }

    pub fn with_target(mut self, target: TargetFilter) -> Self {
        self.target = target;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(Error::InvalidArgument(format!("grid must be at least 2, got {}", self.grid)));
        }
        if self.window == 0 {
            return Err(Error::InvalidArgument("window must be positive".into()));
        }
        if self.rho_d.origin() != 1 || self.rho_d.len() != self.order {
            return Err(Error::InvalidArgument("rho_d must hold taps at n = 1..=order".into()));
        }
        self.target.validate()?;
        invert_fir(&self.rho_d, self.eps, self.max_taps)?;
        Ok(())
    }
}

/// JSON form of a design: `{m, rho_d, target: {kind, ...}, G, window}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignConfig {
    pub m: usize,
    pub rho_d: Vec<f64>,
    pub target: TargetConfig,
    #[serde(rename = "G", default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_taps: Option<usize>,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn default_window() -> usize {
    DEFAULT_WINDOW
}

fn default_cutoff() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetConfig {
    #[serde(alias = "ideal_lowpass_sinc", alias = "sinc")]
    IdealLowpass {
        #[serde(default = "default_cutoff")]
        cutoff: f64,
    },
    /// Kernel CSV (`t,value`); relative paths resolve against the config file.
    Tabulated { csv: PathBuf },
    /// Cardinal spline of the given B-spline order.
    CardinalBspline { order: usize },
}

impl DesignConfig {
    pub fn default_cubic() -> Self {
        Self {
            m: 3,
            rho_d: DEFAULT_RHO3.to_vec(),
            target: TargetConfig::IdealLowpass { cutoff: 0.5 },
            grid: DEFAULT_GRID,
            window: DEFAULT_WINDOW,
            eps: None,
            max_taps: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json(&text)?, base))
    }

    pub fn to_spec(&self, base_dir: &Path) -> Result<DesignSpec> {
        if self.m == 0 || self.rho_d.len() != self.m {
            return Err(Error::InvalidArgument(format!(
                "m = {} needs {} rho_d values, got {}",
                self.m,
                self.m,
                self.rho_d.len()
            )));
        }
        let target = resolve_target(&self.target, self.grid, base_dir)?;
        let spec = DesignSpec {
            order: self.m,
            rho_d: FirFilter::new(self.rho_d.clone(), 1)?,
            target,
            grid: self.grid,
            window: self.window,
            eps: self.eps.unwrap_or(DEFAULT_EPS),
            max_taps: self.max_taps.unwrap_or(DEFAULT_MAX_TAPS),
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn resolve_target(cfg: &TargetConfig, grid: usize, base_dir: &Path) -> Result<TargetFilter> {
    Ok(match cfg {
        TargetConfig::IdealLowpass { cutoff } => TargetFilter::IdealLowpass { cutoff: *cutoff },
        TargetConfig::Tabulated { csv } => {
            let path = if csv.is_absolute() { csv.clone() } else { base_dir.join(csv) };
            let file = std::fs::File::open(&path)?;
            TargetFilter::Tabulated(TabulatedKernel::read_csv(file)?)
        }
        TargetConfig::CardinalBspline { order } => TargetFilter::Tabulated(cardinal_from_basis(
            &make_bspline(*order)?,
            grid.max(1),
            DEFAULT_CARDINAL_TAPS,
        )?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_json() {
        let cfg = DesignConfig::from_json(
            r#"{"m": 3, "rho_d": [0.233, 0.480, 0.233], "target": {"kind": "ideal_lowpass_sinc", "cutoff": 0.5}, "G": 512, "window": 32}"#,
        )
        .unwrap();
        assert_eq!(cfg.grid, 512);
        let spec = cfg.to_spec(Path::new(".")).unwrap();
        assert_eq!(spec.window, 32);
        assert_eq!(spec.rho_d.taps(), &DEFAULT_RHO3);
        assert_eq!(spec.target, TargetFilter::sinc());

        let d = DesignConfig::from_json(r#"{"m":1,"rho_d":[1.0],"target":{"kind":"sinc"}}"#).unwrap();
        assert_eq!((d.grid, d.window), (DEFAULT_GRID, DEFAULT_WINDOW));
    }

    #[test]
    fn json_round_trip() {
        let cfg = DesignConfig::default_cubic();
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"G\":1024"));
        assert_eq!(DesignConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(DesignSpec::new(3, &[0.2, 0.6], TargetFilter::sinc()).is_err());
        assert!(DesignSpec::new(0, &[], TargetFilter::sinc()).is_err());
        assert!(matches!(
            DesignSpec::new(3, &[0.24, 0.48, 0.24], TargetFilter::sinc()),
            Err(Error::NotAppropriate { .. })
        ));
        assert!(DesignSpec::default_cubic().with_grid(1).validate().is_err());
    }
}
