//! Resolved run configuration: defaults, then a `key = value` file, then the
//! precision environment variable, then flags.

use platevoid::envelopes::{OracleConfig, SweepConfig};
use platevoid::perturbation::{JacobianGrid, RampSpec};
use platevoid::specfun::{Accuracy, Precision};
use platevoid::voidcert::VoidConfig;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grids {
    pub lemma3_n_max: u32,
    pub lemma3_x_steps: u32,
    pub lemma3_log_points: usize,
    pub lemma6_trials: usize,
    pub lemma6_points: usize,
    pub lemma6_pool: usize,
    pub lemma8_grid: usize,
    pub lemma10_radial: usize,
    /// `None` means `max(2048, 64N)`.
    pub lemma10_angular: Option<usize>,
    pub sec6_grid: usize,
    pub sigma_grid: usize,
    pub void_radii: usize,
    pub void_resolution: f64,
}

impl Default for Grids {
    fn default() -> Self {
        let sweep = SweepConfig::default();
        let oracle = OracleConfig::default();
        let jac = JacobianGrid::default();
        let void = VoidConfig::default();
        Grids {
            lemma3_n_max: sweep.n_max,
            lemma3_x_steps: sweep.x_steps,
            lemma3_log_points: sweep.log_points,
            lemma6_trials: oracle.trials,
            lemma6_points: oracle.points_per_trial,
            lemma6_pool: oracle.pool_size,
            lemma8_grid: 2000,
            lemma10_radial: jac.radial,
            lemma10_angular: jac.angular,
            sec6_grid: 400,
            sigma_grid: 10_000,
            void_radii: void.radii,
            void_resolution: void.resolution,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub precision: Precision,
    pub seed: u64,
    pub output: OutputFormat,
    pub out_path: Option<PathBuf>,
    pub grids: Grids,
    pub ramp: RampSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: Precision::Double,
            seed: OracleConfig::default().seed,
            output: OutputFormat::Json,
            out_path: None,
            grids: Grids::default(),
            ramp: RampSpec::default(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| format!("{key}: cannot parse {value:?}: {e}"))
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let g = &mut self.grids;
        match key {
            "precision" => self.precision = value.parse().map_err(|e| format!("{e}"))?,
            "seed" => {
                self.seed = match value.strip_prefix("0x") {
                    Some(hex) => u64::from_str_radix(hex, 16).map_err(|e| format!("seed: {e}"))?,
                    None => parse(key, value)?,
                }
            }
            "output" => {
                self.output = <OutputFormat as clap::ValueEnum>::from_str(value, true).map_err(|e| format!("output: {e}"))?
            }
            "out" => self.out_path = Some(PathBuf::from(value)),
            "lemma3_n_max" => g.lemma3_n_max = parse(key, value)?,
            "lemma3_x_steps" => g.lemma3_x_steps = parse(key, value)?,
            "lemma3_log_points" => g.lemma3_log_points = parse(key, value)?,
            "lemma6_trials" => g.lemma6_trials = parse(key, value)?,
            "lemma6_points" => g.lemma6_points = parse(key, value)?,
            "lemma6_pool" => g.lemma6_pool = parse(key, value)?,
            "lemma8_grid" => g.lemma8_grid = parse(key, value)?,
            "lemma10_radial" => g.lemma10_radial = parse(key, value)?,
            "lemma10_angular" => g.lemma10_angular = Some(parse(key, value)?),
            "sec6_grid" => g.sec6_grid = parse(key, value)?,
            "sigma_grid" => g.sigma_grid = parse(key, value)?,
            "void_radii" => g.void_radii = parse(key, value)?,
            "void_resolution" => g.void_resolution = parse(key, value)?,
            "ramp" => {
                let lo = self.ramp.lo();
                self.ramp = match value {
                    "quadratic" => RampSpec::PiecewiseQuadratic { lo },
                    "smooth" => RampSpec::Smooth { lo, edge: 0.1 },
                    other => return Err(format!("ramp: expected quadratic or smooth, got {other:?}")),
                }
            }
            "ramp_lo" => {
                let v: f64 = parse(key, value)?;
                match &mut self.ramp {
                    RampSpec::PiecewiseQuadratic { lo } | RampSpec::Smooth { lo, .. } => *lo = v,
                }
            }
            "ramp_edge" => match &mut self.ramp {
                RampSpec::Smooth { edge, .. } => *edge = parse(key, value)?,
                RampSpec::PiecewiseQuadratic { .. } => return Err("ramp_edge needs ramp = smooth".into()),
            },
            other => return Err(format!("unknown setting {other:?}")),
        }
        Ok(())
    }

    /// Apply a config file: one `key = value` per line, `#` comments.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("{origin}:{}: expected key = value", i + 1))?;
            self.set(k.trim(), v.trim()).map_err(|e| format!("{origin}:{}: {e}", i + 1))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        self.apply_text(&text, &path.display().to_string())
    }

    pub fn accuracy(&self) -> Accuracy {
        Accuracy::default().with_precision(self.precision)
    }

    pub fn sweep(&self) -> SweepConfig {
        SweepConfig {
            n_max: self.grids.lemma3_n_max,
            x_steps: self.grids.lemma3_x_steps,
            log_points: self.grids.lemma3_log_points,
            ..SweepConfig::default()
        }
    }

    pub fn oracle(&self) -> OracleConfig {
        OracleConfig {
            trials: self.grids.lemma6_trials,
            points_per_trial: self.grids.lemma6_points,
            pool_size: self.grids.lemma6_pool,
            seed: self.seed,
            ..OracleConfig::default()
        }
    }

    pub fn jacobian_grid(&self) -> JacobianGrid {
        JacobianGrid { radial: self.grids.lemma10_radial, angular: self.grids.lemma10_angular }
    }

    pub fn void(&self, k_n: Option<f64>) -> VoidConfig {
        VoidConfig { k_n, resolution: self.grids.void_resolution, radii: self.grids.void_radii }
    }
}
