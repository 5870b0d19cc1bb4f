//! Cartesian parameter sweeps and figure-reproduction pipelines.

pub mod figures;

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, Engine, TimeGrid, DEFAULT_TOL};
use crate::metrics::{MetricsSeries, Peak};
use crate::model::SystemParams;
use crate::{Error, Result};

pub use figures::{figure_pipeline, FigureId, FigureOutput, FigureSpec, Panel};

/// Parameter that a sweep axis may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "omega_drive")]
    OmegaDrive,
    #[serde(rename = "delta_A")]
    DeltaA,
    #[serde(rename = "delta_B")]
    DeltaB,
    /// Sets Δ_A = Δ_B together.
    #[serde(rename = "delta_common")]
    DeltaCommon,
    #[serde(rename = "delta_L")]
    DeltaL,
    #[serde(rename = "R")]
    CouplingRatio,
    #[serde(rename = "r1")]
    R1,
}

impl SweepParam {
    pub const ALL: [SweepParam; 7] = [
        SweepParam::OmegaDrive,
        SweepParam::DeltaA,
        SweepParam::DeltaB,
        SweepParam::DeltaCommon,
        SweepParam::DeltaL,
        SweepParam::CouplingRatio,
        SweepParam::R1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::OmegaDrive => "omega_drive",
            SweepParam::DeltaA => "delta_A",
            SweepParam::DeltaB => "delta_B",
            SweepParam::DeltaCommon => "delta_common",
            SweepParam::DeltaL => "delta_L",
            SweepParam::CouplingRatio => "R",
            SweepParam::R1 => "r1",
        }
    }

    pub fn apply(self, params: &mut SystemParams, value: f64) {
        match self {
            SweepParam::OmegaDrive => params.omega_drive = value,
            SweepParam::DeltaA => params.delta_a = value,
            SweepParam::DeltaB => params.delta_b = value,
            SweepParam::DeltaCommon => {
                params.delta_a = value;
                params.delta_b = value;
            }
            SweepParam::DeltaL => params.delta_l = value,
            SweepParam::CouplingRatio => params.coupling_ratio = value,
            SweepParam::R1 => params.r1 = value,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidSweep(format!("unknown sweep parameter `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(param: SweepParam, values: impl Into<Vec<f64>>) -> Self {
        Axis {
            param,
            values: values.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    pub grid: TimeGrid,
    pub engine: Engine,
    pub tol: f64,
    /// Keep the full metric series of every point, not just the maxima.
    pub keep_series: bool,
}

impl SweepSpec {
    pub fn new(base: SystemParams, axes: Vec<Axis>, grid: TimeGrid, engine: Engine) -> Self {
        SweepSpec {
            base,
            axes,
            grid,
            engine,
            tol: DEFAULT_TOL,
            keep_series: false,
        }
    }

    /// Every Cartesian point in row order: the first axis varies slowest.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        points
    }

    pub fn params_at(&self, point: &[f64]) -> SystemParams {
        let mut params = self.base;
        for (axis, &v) in self.axes.iter().zip(point) {
            axis.param.apply(&mut params, v);
        }
        params
    }

    fn describe(&self, point: &[f64]) -> String {
        if point.is_empty() {
            return "base point".into();
        }
        self.axes
            .iter()
            .zip(point)
            .map(|(a, v)| format!("{}={v}", a.param))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Checks axis values and every resolved point before anything runs.
    pub fn validate(&self) -> Result<()> {
        if self.engine == Engine::Oracle {
            return Err(Error::InvalidSweep("sweeps run the closed_form or pseudomode engine".into()));
        }
        for axis in &self.axes {
            if axis.values.is_empty() {
                return Err(Error::InvalidSweep(format!("axis `{}` has no values", axis.param)));
            }
            if axis.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSweep(format!("axis `{}` has a non-finite value", axis.param)));
            }
        }
        for point in self.points() {
            let params = self.params_at(&point);
            let located = |e: Error| Error::AtPoint {
                point: self.describe(&point),
                source: Box::new(e),
            };
            params.validate().map_err(located)?;
            if self.engine == Engine::ClosedForm && !params.has_equal_detunings() {
                return Err(located(Error::UnequalDetunings {
                    delta_a: params.delta_a,
                    delta_b: params.delta_b,
                }));
            }
        }
        Ok(())
    }
}

/// Metrics of a single parameter point.
pub fn evaluate_point(params: &SystemParams, grid: &TimeGrid, engine: Engine, tol: f64) -> Result<MetricsSeries> {
    let traj = dynamics::trajectory(engine, params, grid, tol)?;
    Ok(MetricsSeries::from_trajectory(&traj, params.dressed_frame().chi_b()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    /// Axis values in axis order.
    pub point: Vec<f64>,
    pub max_energy: Peak,
    pub max_power: Peak,
    pub max_ergotropy: Peak,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<SweepParam>,
    pub rows: Vec<SweepRow>,
    /// Per-point series, present when the spec asked for them.
    pub series: Option<Vec<MetricsSeries>>,
}

/// Evaluates every point of the sweep on `threads` workers (0 picks rayon's
/// default). Row order and values do not depend on the worker count.
pub fn run_sweep(spec: &SweepSpec, threads: usize) -> Result<SweepResult> {
    spec.validate()?;
    let points = spec.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidSweep(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<MetricsSeries>> = pool.install(|| {
        points
            .par_iter()
            .map(|point| evaluate_point(&spec.params_at(point), &spec.grid, spec.engine, spec.tol))
            .collect()
    });

    let mut rows = Vec::with_capacity(points.len());
    let mut series = spec.keep_series.then(|| Vec::with_capacity(points.len()));
    for (point, outcome) in points.into_iter().zip(outcomes) {
        let metrics = outcome.map_err(|e| Error::AtPoint {
            point: spec.describe(&point),
            source: Box::new(e),
        })?;
        rows.push(SweepRow {
            point,
            max_energy: metrics.max_energy,
            max_power: metrics.max_power,
            max_ergotropy: metrics.max_ergotropy,
        });
        if let Some(s) = series.as_mut() {
            s.push(metrics);
        }
    }
    Ok(SweepResult {
        axes: spec.axes.iter().map(|a| a.param).collect(),
        rows,
        series,
    })
}

/// Round-trippable decimal with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub const MAXIMA_COLUMNS: [&str; 6] = ["E_max", "t_E", "P_max", "t_P", "W_max", "t_W"];

impl SweepResult {
    pub fn header(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|p| format!("param_{p}"))
            .chain(MAXIMA_COLUMNS.iter().map(|c| c.to_string()))
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.header().join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row
                .point
                .iter()
                .copied()
                .chain([
                    row.max_energy.value,
                    row.max_energy.time,
                    row.max_power.value,
                    row.max_power.time,
                    row.max_ergotropy.value,
                    row.max_ergotropy.time,
                ])
                .map(format_float)
                .collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}
