//! Sweep configuration files.
//!
//! ```toml
//! x = [1e6]
//! y = [50, 100, 300, 1000]
//! delta = 0.25          # bump test function; omit for the indicator of ]0, 1]
//! primitive = true
//! count_budget = 10_000_000
//! output = "ratio_x1e6.csv"
//! ```

use std::path::{Path, PathBuf};

use friable::archimedean::{make_bump, TestFunction};
use friable::counting::{PredictOptions, DEFAULT_COUNT_BUDGET};
use friable::series::DEFAULT_P_MAX;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default = "yes")]
    pub primitive: bool,
    #[serde(default = "default_budget")]
    pub count_budget: u64,
    #[serde(default = "default_p_max")]
    pub p_max: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn yes() -> bool {
    true
}

fn default_budget() -> u64 {
    DEFAULT_COUNT_BUDGET
}

fn default_p_max() -> u64 {
    DEFAULT_P_MAX
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: SweepConfig =
            toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.x.is_empty() || self.y.is_empty() {
            return Err("the x and y grids must both be nonempty".into());
        }
        if let Some(v) = self
            .x
            .iter()
            .chain(&self.y)
            .find(|v| !(v.is_finite() && **v >= 2.0))
        {
            return Err(format!("grid value {v} must be a finite number >= 2"));
        }
        if self.count_budget == 0 || self.p_max < 2 {
            return Err("count_budget must be positive and p_max at least 2".into());
        }
        if self.threads == Some(0) {
            return Err("threads must be positive".into());
        }
        self.test_function().map(|_| ())
    }

    pub fn test_function(&self) -> Result<TestFunction, String> {
        match self.delta {
            None => Ok(TestFunction::indicator_unit()),
            Some(d) => make_bump(d).map_err(|e| e.to_string()),
        }
    }

    pub fn predict_options(&self) -> PredictOptions {
        PredictOptions {
            count_budget: self.count_budget,
            primitive: self.primitive,
            p_max: self.p_max,
        }
    }

    /// Grid points in row-major order, `x` outer.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.x
            .iter()
            .flat_map(|&x| self.y.iter().map(move |&y| (x, y)))
            .collect()
    }
}
