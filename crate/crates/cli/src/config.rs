//! Run configuration: a TOML file, `--set` overrides and command-line flags,
//! applied in that order.

use std::fs;
use std::path::{Path, PathBuf};

use qbcharge::dynamics::DEFAULT_TOL;
use qbcharge::oracle::{DEFAULT_MODES, DEFAULT_SPAN};
use qbcharge::sweep::{Axis, FigureId, SweepParam};
use qbcharge::{Engine, SystemParams, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Output root used when neither `--out` nor the config file name one.
pub const OUT_ENV: &str = "QBCHARGE_OUT";
pub const DEFAULT_OUT: &str = "qbcharge-out";
pub const DEFAULT_POINTS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub engine: Engine,
    pub tol: f64,
    /// Sweep workers; 0 lets the pool decide.
    pub threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Figure for `reproduce`, e.g. "fig7".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    pub params: SystemParams,
    pub grid: GridConfig,
    pub sweep: SweepConfig,
    pub oracle: OracleConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            engine: Engine::ClosedForm,
            tol: DEFAULT_TOL,
            threads: 0,
            out: None,
            figure: None,
            params: SystemParams::default(),
            grid: GridConfig::default(),
            sweep: SweepConfig::default(),
            oracle: OracleConfig::default(),
        }
    }
}

/// Sampling window in units of 1/λ. A missing `t_max` resolves to 10 for
/// R ≤ 1 and 5 for R > 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    pub n_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            t_max: None,
            n_points: DEFAULT_POINTS,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<Axis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub n_modes: usize,
    /// Half-width of the discretized band in units of λ.
    pub span: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_modes: DEFAULT_MODES,
            span: DEFAULT_SPAN,
        }
    }
}

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub engine: Option<Engine>,
    pub tol: Option<f64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    /// `dotted.key=value` pairs, value in TOML syntax.
    pub set: Vec<String>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| config_err(e.to_string()))
    }

    /// Reads `path` (or starts from defaults), applies `overrides` and
    /// validates the result.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut table = match path {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| config_err(format!("cannot read {}: {e}", p.display())))?;
                text.parse::<toml::Table>()
                    .map_err(|e| config_err(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for assignment in &overrides.set {
            apply_assignment(&mut table, assignment)?;
        }
        let mut cfg: RunConfig = table.try_into().map_err(|e: toml::de::Error| config_err(e.to_string()))?;
        if let Some(engine) = overrides.engine {
            cfg.engine = engine;
        }
        if let Some(tol) = overrides.tol {
            cfg.tol = tol;
        }
        if let Some(threads) = overrides.threads {
            cfg.threads = threads;
        }
        if let Some(out) = &overrides.out {
            cfg.out = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params.validate()?;
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(config_err(format!("tol must be positive, got {}", self.tol)));
        }
        if self.engine == Engine::Oracle {
            return Err(config_err("engine must be closed_form or pseudomode"));
        }
        if self.oracle.n_modes < 2 || !(self.oracle.span.is_finite() && self.oracle.span > 0.0) {
            return Err(config_err("oracle needs n_modes >= 2 and a positive span"));
        }
        if let Some(f) = &self.figure {
            f.parse::<FigureId>()?;
        }
        self.time_grid()?;
        Ok(())
    }

    pub fn t_max(&self) -> f64 {
        self.grid
            .t_max
            .unwrap_or(if self.params.coupling_ratio > 1.0 { 5.0 } else { 10.0 })
    }

    pub fn time_grid(&self) -> Result<TimeGrid, CliError> {
        Ok(TimeGrid::uniform(self.t_max() / self.params.lambda, self.grid.n_points)?)
    }

    /// `--out`, then the file's `out`, then `$QBCHARGE_OUT`, then
    /// `qbcharge-out`.
    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }

    /// Copy with every implicit default written out.
    pub fn resolved(&self) -> Self {
        let mut cfg = self.clone();
        cfg.grid.t_max = Some(self.t_max());
        cfg.out = Some(self.out_dir());
        cfg
    }
}

/// Parses `name=v1,v2,...` into a sweep axis.
pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let (name, values) = spec
        .split_once('=')
        .ok_or_else(|| config_err(format!("axis `{spec}` is not of the form name=v1,v2")))?;
    let param: SweepParam = name.trim().parse()?;
    let values = values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| config_err(format!("axis {name}: `{v}`: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Axis::new(param, values))
}

fn apply_assignment(table: &mut toml::Table, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| config_err(format!("--set `{assignment}` is not of the form key=value")))?;
    let value = parse_value(raw.trim());
    let mut parts: Vec<&str> = key.trim().split('.').collect();
    let leaf = parts.pop().filter(|k| !k.is_empty()).ok_or_else(|| config_err("empty --set key"))?;
    let mut node = table;
    for part in parts {
        node = node
            .entry(part)
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| config_err(format!("--set {key}: `{part}` is not a table")))?;
    }
    node.insert(leaf.to_string(), value);
    Ok(())
}

/// TOML literal if it parses as one, bare string otherwise.
fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
