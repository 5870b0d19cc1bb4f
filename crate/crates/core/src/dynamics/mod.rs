//! Charger and battery amplitudes C₁(t), C₂(t) in the single-excitation sector.
//!
//! Two engines are provided:
//!
//! - [`equal_frequency_trajectory`]: closed form for Δ_A = Δ_B, built from the
//!   decoherence-free (sub-radiant) combination and the survival amplitude
//!   Z(t) of the decaying (super-radiant) one.
//! - [`general_trajectory`]: the Lorentzian memory kernel is a single
//!   exponential, so the two integro-differential amplitude equations are
//!   equivalent to a three-amplitude linear ODE with one lossy auxiliary
//!   mode b(t). Valid for any detunings.

mod closed_form;
pub mod ode;
mod pseudomode;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::{DressedFrame, SystemParams};
use crate::{Error, Result};

pub use closed_form::{equal_frequency_trajectory, survival_amplitude, KernelParams};
pub use ode::Tolerances;
pub use pseudomode::{general_trajectory, PseudomodeSystem};

/// Default local error target of the adaptive engines.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Sample times, starting at zero and strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeGrid {
    samples: Vec<f64>,
}

impl TimeGrid {
    /// `n_points` uniform samples on [0, t_max], endpoints included.
    pub fn uniform(t_max: f64, n_points: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidGrid(format!("t_max must be positive, got {t_max}")));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        let last = (n_points - 1) as f64;
        let samples = (0..n_points)
            .map(|i| if i == n_points - 1 { t_max } else { t_max * i as f64 / last })
            .collect();
        Ok(TimeGrid { samples })
    }

    /// Weak-coupling default: 2000 points on [0, 10/λ].
    pub fn weak_default(lambda: f64) -> Self {
        TimeGrid::uniform(10.0 / lambda, 2000).expect("valid default grid")
    }

    /// Strong-coupling default: 2000 points on [0, 5/λ].
    pub fn strong_default(lambda: f64) -> Self {
        TimeGrid::uniform(5.0 / lambda, 2000).expect("valid default grid")
    }

    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidGrid("need at least 2 points".into()));
        }
        if samples[0] != 0.0 {
            return Err(Error::InvalidGrid("first sample must be 0".into()));
        }
        if samples.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("samples must be finite".into()));
        }
        if samples.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("samples must be strictly increasing".into()));
        }
        Ok(TimeGrid { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        self.samples[self.samples.len() - 1]
    }

    /// Same grid with every time multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        TimeGrid::from_samples(self.samples.iter().map(|t| t * s).collect())
    }
}

impl TryFrom<Vec<f64>> for TimeGrid {
    type Error = Error;
    fn try_from(samples: Vec<f64>) -> Result<Self> {
        TimeGrid::from_samples(samples)
    }
}

impl From<TimeGrid> for Vec<f64> {
    fn from(grid: TimeGrid) -> Self {
        grid.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[serde(alias = "closed")]
    ClosedForm,
    Pseudomode,
    Oracle,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::ClosedForm => "closed_form",
            Engine::Pseudomode => "pseudomode",
            Engine::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" | "closed_form" | "closed-form" => Ok(Engine::ClosedForm),
            "pseudomode" => Ok(Engine::Pseudomode),
            "oracle" => Ok(Engine::Oracle),
            other => Err(Error::InvalidParams(format!("unknown engine `{other}`"))),
        }
    }
}

/// Charger (C₁) and battery (C₂) amplitudes sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    pub grid: TimeGrid,
    pub c1: Vec<Complex64>,
    pub c2: Vec<Complex64>,
    pub engine: Engine,
}

impl AmplitudeTrajectory {
    /// |C₁|² + |C₂|² per sample.
    pub fn qubit_norms(&self) -> Vec<f64> {
        self.c1
            .iter()
            .zip(&self.c2)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect()
    }

    /// Battery excited population |C₂|² per sample.
    pub fn battery_population(&self) -> Vec<f64> {
        self.c2.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Largest deviation between the two trajectories over both amplitudes.
    pub fn sup_distance(&self, other: &AmplitudeTrajectory) -> f64 {
        assert_eq!(self.grid.len(), other.grid.len(), "trajectories on different grids");
        self.c1
            .iter()
            .zip(&other.c1)
            .chain(self.c2.iter().zip(&other.c2))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of C₂ alone.
    pub fn sup_distance_battery(&self, other: &AmplitudeTrajectory) -> f64 {
        self.c2
            .iter()
            .zip(&other.c2)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Runs the requested engine. The oracle is not reachable from here; see
/// [`crate::oracle`].
pub fn trajectory(engine: Engine, params: &SystemParams, grid: &TimeGrid, tol: f64) -> Result<AmplitudeTrajectory> {
    let params = params.validate()?;
    let frame = DressedFrame::new(&params);
    match engine {
        Engine::ClosedForm => equal_frequency_trajectory(&params, &frame, grid),
        Engine::Pseudomode => general_trajectory(&params, &frame, grid, tol),
        Engine::Oracle => Err(Error::InvalidParams(
            "the oracle engine is only available through oracle-check".into(),
        )),
    }
}
