//! Run configuration: an optional JSON file whose values sit below command
//! flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use staircase_core::genpowers::DEFAULT_GP_TOL;
use staircase_core::numeric_model::{DEFAULT_GRAM_TOL, DEFAULT_RANK_TOL};

use crate::CliError;

/// Environment variable naming a config file when `--run-config` is absent.
pub const CONFIG_ENV: &str = "STAIRCASE_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `[i0, i1, j0, j1]`.
    pub window: Option<[i64; 4]>,
    pub margin: Option<usize>,
    pub gram_tol: Option<f64>,
    pub rank_tol: Option<f64>,
    pub gp_tol: Option<f64>,
    #[serde(rename = "M")]
    pub big_m: Option<usize>,
    pub d: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| CliError::json(path, e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The file named by the flag, else by `STAIRCASE_CONFIG`, else defaults.
    pub fn discover(flag: Option<&Path>) -> Result<Self, CliError> {
        match flag {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("gram_tol", self.gram_tol), ("rank_tol", self.rank_tol), ("gp_tol", self.gp_tol)] {
            if let Some(t) = v {
                if !(t.is_finite() && t > 0.0) {
                    return Err(CliError::Invalid(format!("config: {name} = {t} must be positive")));
                }
            }
        }
        if let (Some(m), Some(d)) = (self.big_m, self.d) {
            if d == 0 || m % d != 0 {
                return Err(CliError::Invalid(format!("config: d = {d} does not divide M = {m}")));
            }
        }
        if let Some([i0, i1, j0, j1]) = self.window {
            if i0 > i1 || j0 > j1 {
                return Err(CliError::Invalid(format!("config: window {:?} is empty", [i0, i1, j0, j1])));
            }
        }
        Ok(())
    }

    pub fn gram_tol(&self) -> f64 {
        self.gram_tol.unwrap_or(DEFAULT_GRAM_TOL)
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol.unwrap_or(DEFAULT_RANK_TOL)
    }

    pub fn gp_tol(&self) -> f64 {
        self.gp_tol.unwrap_or(DEFAULT_GP_TOL)
    }

    /// Relative output paths land in `out_dir` when one is configured.
    pub fn output_path(&self, p: &Path) -> PathBuf {
        match &self.out_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }
}
