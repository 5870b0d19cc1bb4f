//! Parameter sets and table layouts for figures 2–11.
//!
//! Time-series figures (2–4, 7–9) produce three panels: (a) power,
//! (b) energy and (c) ergotropy against charging time, one column per family
//! member. Maxima figures (5, 6, 10, 11) produce the same three quantities'
//! maxima against the drive strength Ω, one column per family member.
//!
//! The figure legends do not give numeric family values, so the defaults
//! below are choices of this crate and are written into every run's
//! metadata.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use super::{format_float, run_sweep, Axis, SweepParam, SweepSpec};
use crate::dynamics::{Engine, TimeGrid};
use crate::metrics::MetricsSeries;
use crate::model::SystemParams;
use crate::{Error, Result};

pub const WEAK_R: f64 = 0.5;
pub const STRONG_R: f64 = 10.0;
pub const DEFAULT_OMEGA_FAMILY: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const DEFAULT_DELTA_FAMILY: [f64; 4] = [0.0, 1.0, 3.0, 5.0];
pub const DEFAULT_DELTA_L_FAMILY: [f64; 4] = [0.0, 2.0, 5.0, 10.0];
/// Drive strength held fixed when the family varies a detuning.
pub const DEFAULT_FIXED_OMEGA: f64 = 1.0;
/// Ω axis of the maxima figures: 0 to 2 in steps of 0.1.
pub fn default_omega_axis() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
        FigureId::Fig10,
        FigureId::Fig11,
    ];

    pub fn number(self) -> u8 {
        match self {
            FigureId::Fig2 => 2,
            FigureId::Fig3 => 3,
            FigureId::Fig4 => 4,
            FigureId::Fig5 => 5,
            FigureId::Fig6 => 6,
            FigureId::Fig7 => 7,
            FigureId::Fig8 => 8,
            FigureId::Fig9 => 9,
            FigureId::Fig10 => 10,
            FigureId::Fig11 => 11,
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fig{}", self.number())
    }
}

impl From<FigureId> for String {
    fn from(id: FigureId) -> Self {
        id.to_string()
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FigureKind {
    TimeSeries,
    MaximaVsOmega { omega_values: Vec<f64> },
}

/// Fully resolved inputs of one figure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureSpec {
    pub id: FigureId,
    pub base: SystemParams,
    pub family: Axis,
    pub kind: FigureKind,
    pub t_max: f64,
    pub n_points: usize,
}

impl FigureSpec {
    pub fn new(id: FigureId) -> Self {
        let n = id.number();
        let strong = n >= 7;
        let r = if strong { STRONG_R } else { WEAK_R };
        let family = match n {
            2 | 7 => Axis::new(SweepParam::OmegaDrive, DEFAULT_OMEGA_FAMILY),
            3 | 5 | 8 | 10 => Axis::new(SweepParam::DeltaCommon, DEFAULT_DELTA_FAMILY),
            _ => Axis::new(SweepParam::DeltaL, DEFAULT_DELTA_L_FAMILY),
        };
        let kind = match n {
            5 | 6 | 10 | 11 => FigureKind::MaximaVsOmega {
                omega_values: default_omega_axis(),
            },
            _ => FigureKind::TimeSeries,
        };
        FigureSpec {
            id,
            base: SystemParams {
                coupling_ratio: r,
                omega_drive: DEFAULT_FIXED_OMEGA,
                ..SystemParams::default()
            },
            family,
            kind,
            t_max: if strong { 5.0 } else { 10.0 },
            n_points: 2000,
        }
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::uniform(self.t_max / self.base.lambda, self.n_points)
    }

    fn family_label(&self, value: f64) -> String {
        format!("{}={}", self.family.param, value)
    }
}

/// One CSV table: a header row and equally long columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    /// File stem, e.g. `fig2a_power`.
    pub name: String,
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Panel {
    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        let rows = self.columns.first().map_or(0, Vec::len);
        for r in 0..rows {
            let fields: Vec<String> = self.columns.iter().map(|c| format_float(c[r])).collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub spec: FigureSpec,
    pub engine: Engine,
    pub panels: Vec<Panel>,
}

const QUANTITIES: [(&str, &str, &str); 3] = [("a", "power", "P_B"), ("b", "energy", "E_B"), ("c", "ergotropy", "W_B")];

fn pick(m: &MetricsSeries, which: usize) -> &[f64] {
    match which {
        0 => &m.power,
        1 => &m.energy,
        _ => &m.ergotropy,
    }
}

/// Computes every panel of a figure.
pub fn figure_pipeline(id: FigureId, engine: Engine, tol: f64, threads: usize) -> Result<FigureOutput> {
    let spec = FigureSpec::new(id);
    let grid = spec.grid()?;
    let panels = match &spec.kind {
        FigureKind::TimeSeries => {
            let sweep = SweepSpec {
                keep_series: true,
                tol,
                ..SweepSpec::new(spec.base, vec![spec.family.clone()], grid.clone(), engine)
            };
            let series = run_sweep(&sweep, threads)?.series.expect("series were requested");
            QUANTITIES
                .iter()
                .enumerate()
                .map(|(q, (letter, word, symbol))| {
                    let mut header = vec!["t".to_string()];
                    let mut columns = vec![grid.samples().to_vec()];
                    for (value, m) in spec.family.values.iter().zip(&series) {
                        header.push(format!("{symbol}({})", spec.family_label(*value)));
                        columns.push(pick(m, q).to_vec());
                    }
                    Panel {
                        name: format!("{id}{letter}_{word}"),
                        header,
                        columns,
                    }
                })
                .collect()
        }
        FigureKind::MaximaVsOmega { omega_values } => {
            let sweep = SweepSpec {
                tol,
                ..SweepSpec::new(
                    spec.base,
                    vec![spec.family.clone(), Axis::new(SweepParam::OmegaDrive, omega_values.clone())],
                    grid,
                    engine,
                )
            };
            let rows = run_sweep(&sweep, threads)?.rows;
            let n_omega = omega_values.len();
            QUANTITIES
                .iter()
                .enumerate()
                .map(|(q, (letter, word, symbol))| {
                    let symbol = symbol.replace("_B", "_max");
                    let mut header = vec![SweepParam::OmegaDrive.name().to_string()];
                    let mut columns = vec![omega_values.clone()];
                    for (f, value) in spec.family.values.iter().enumerate() {
                        header.push(format!("{symbol}({})", spec.family_label(*value)));
                        columns.push(
                            rows[f * n_omega..(f + 1) * n_omega]
                                .iter()
                                .map(|r| match q {
                                    0 => r.max_power.value,
                                    1 => r.max_energy.value,
                                    _ => r.max_ergotropy.value,
                                })
                                .collect(),
                        );
                    }
                    Panel {
                        name: format!("{id}{letter}_{word}_max"),
                        header,
                        columns,
                    }
                })
                .collect()
        }
    };
    Ok(FigureOutput { spec, engine, panels })
}
