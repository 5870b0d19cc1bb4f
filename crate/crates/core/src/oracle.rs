//! Brute-force reference: the full single-excitation Schrödinger equation
//! over an explicitly discretized Lorentzian bath.
//!
//! Nothing here uses the memory-kernel algebra of [`crate::dynamics`], so
//! agreement between the two is a genuine check of both.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::ode::{integrate, ComplexOde, Tolerances};
use crate::dynamics::{self, AmplitudeTrajectory, Engine, TimeGrid};
use crate::model::{DressedFrame, SystemParams};
use crate::sum::{pairwise_sum, pairwise_sum_by};
use crate::{Error, Result};

pub const DEFAULT_MODES: usize = 4000;
pub const DEFAULT_SPAN: f64 = 50.0;
/// Local error target of the bath propagation.
pub const ORACLE_TOL: f64 = 1e-10;
/// Sup-norm agreement required between the oracle and an engine.
pub const CERTIFICATION_TOL: f64 = 5e-3;
/// Norm leak at which propagation is abandoned.
pub const NORM_ABORT: f64 = 1e-6;

/// Lower bound on the captured fraction of the Lorentzian weight.
const MIN_WEIGHT_FRACTION: f64 = 0.98;

/// Lorentzian J(δ) = W² λ / (π (δ² + λ²)) as a function of δ = ω − ω_c.
pub fn lorentzian(w: f64, lambda: f64, detuning: f64) -> f64 {
    w * w * lambda / (PI * (detuning * detuning + lambda * lambda))
}

/// Uniform midpoint discretization of the cavity spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedBath {
    pub n_modes: usize,
    /// Half-width of the window in units of λ.
    pub span: f64,
    /// Mode spacing Δω.
    pub spacing: f64,
    /// ω_k − ω_c per mode.
    pub mode_detunings: Vec<f64>,
    /// g_k = sqrt(J(ω_k) Δω).
    pub couplings: Vec<f64>,
}

impl DiscretizedBath {
    pub fn build(params: &SystemParams, frame: &DressedFrame, n_modes: usize, span: f64) -> Result<Self> {
        if n_modes < 100 {
            return Err(Error::InvalidBath(format!("need at least 100 modes, got {n_modes}")));
        }
        if !(span >= 10.0 && span.is_finite()) {
            return Err(Error::InvalidBath(format!("span must be at least 10, got {span}")));
        }
        let lambda = params.lambda;
        let spacing = 2.0 * span * lambda / n_modes as f64;
        if spacing > lambda / 20.0 {
            return Err(Error::InvalidBath(format!(
                "mode spacing {spacing} does not resolve the Lorentzian width {lambda}"
            )));
        }
        let mode_detunings: Vec<f64> = (0..n_modes)
            .map(|k| -span * lambda + (k as f64 + 0.5) * spacing)
            .collect();
        let couplings: Vec<f64> = mode_detunings
            .iter()
            .map(|&d| (lorentzian(frame.w, lambda, d) * spacing).sqrt())
            .collect();
        let bath = DiscretizedBath {
            n_modes,
            span,
            spacing,
            mode_detunings,
            couplings,
        };
        let target = frame.w * frame.w;
        if target > 0.0 {
            let captured = bath.total_weight() / target;
            if !(MIN_WEIGHT_FRACTION..=1.0 + 1e-9).contains(&captured) {
                return Err(Error::InvalidBath(format!(
                    "window captures {captured:.4} of the spectral weight"
                )));
            }
        }
        Ok(bath)
    }

    pub fn with_defaults(params: &SystemParams, frame: &DressedFrame) -> Result<Self> {
        DiscretizedBath::build(params, frame, DEFAULT_MODES, DEFAULT_SPAN)
    }

    /// Σ g_k², the discretized ∫ J(ω) dω.
    pub fn total_weight(&self) -> f64 {
        let sq: Vec<f64> = self.couplings.iter().map(|g| g * g).collect();
        pairwise_sum(&sq)
    }

    /// First revival time 2π/Δω of the discrete spectrum.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * PI / self.spacing
    }

    /// Latest time at which comparisons against continuum dynamics are trusted.
    pub fn validity_horizon(&self) -> f64 {
        0.5 * self.recurrence_time()
    }
}

/// Qubit amplitudes and all bath amplitudes in the interaction picture.
///
/// State layout is `[C_A, C_B, C_1, …, C_n]`:
///
/// ```text
/// dC_j/dt = −i α_j cos²(η_j/2) e^{+i(χ_j + Δ_L)t} Σ_k g_k e^{−iδω_k t} C_k
/// dC_k/dt = −i g_k e^{+iδω_k t} Σ_j α_j cos²(η_j/2) e^{−i(χ_j + Δ_L)t} C_j
/// ```
struct BathSystem<'a> {
    bath: &'a DiscretizedBath,
    qubit_couplings: [f64; 2],
    /// χ_j + Δ_L
    qubit_freqs: [f64; 2],
}

impl ComplexOde for BathSystem<'_> {
    fn dim(&self) -> usize {
        2 + self.bath.n_modes
    }

    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        let minus_i = Complex64::new(0.0, -1.0);
        let modes = &y[2..];
        let (dq, dmodes) = dy.split_at_mut(2);

        // dmodes doubles as scratch for the phases e^{+iδω_k t}.
        for (d, &w) in dmodes.iter_mut().zip(&self.bath.mode_detunings) {
            *d = Complex64::cis(w * t);
        }
        let g = &self.bath.couplings;
        let field = pairwise_sum_by(modes.len(), &|k| g[k] * modes[k] * dmodes[k].conj());

        let mut source = Complex64::default();
        for j in 0..2 {
            let phase = Complex64::cis(self.qubit_freqs[j] * t);
            dq[j] = minus_i * self.qubit_couplings[j] * phase * field;
            source += self.qubit_couplings[j] * phase.conj() * y[j];
        }
        for (d, gk) in dmodes.iter_mut().zip(g) {
            *d = minus_i * *gk * *d * source;
        }
    }
}

/// Oracle output with the diagnostics gathered along the way.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub trajectory: AmplitudeTrajectory,
    /// Total norm |C_A|² + |C_B|² + Σ|C_k|² per sample.
    pub total_norm: Vec<f64>,
    pub max_norm_deviation: f64,
    pub validity_horizon: f64,
}

pub fn propagate(
    params: &SystemParams,
    frame: &DressedFrame,
    bath: &DiscretizedBath,
    grid: &TimeGrid,
    tol: f64,
) -> Result<OracleRun> {
    let horizon = bath.validity_horizon();
    if grid.t_max() >= horizon {
        return Err(Error::InvalidGrid(format!(
            "t_max = {} reaches past half the bath recurrence time ({horizon})",
            grid.t_max()
        )));
    }
    let sys = BathSystem {
        bath,
        qubit_couplings: [
            frame.alpha_a * frame.charger.cos2,
            frame.alpha_b * frame.battery.cos2,
        ],
        qubit_freqs: [frame.charger.chi + params.delta_l, frame.battery.chi + params.delta_l],
    };
    let mut y0 = vec![Complex64::default(); sys.dim()];
    y0[0] = params.c01;
    y0[1] = params.c02;

    let mut c1 = Vec::with_capacity(grid.len());
    let mut c2 = Vec::with_capacity(grid.len());
    let mut total_norm = Vec::with_capacity(grid.len());
    let mut max_dev: f64 = 0.0;
    integrate(&sys, &y0, grid.samples(), &Tolerances::relative(tol), |_, t, y| {
        let sq: Vec<f64> = y.iter().map(|c| c.norm_sqr()).collect();
        let norm = pairwise_sum(&sq);
        let dev = (norm - 1.0).abs();
        if dev > NORM_ABORT {
            return Err(Error::NormBreach { t, deviation: dev });
        }
        max_dev = max_dev.max(dev);
        total_norm.push(norm);
        c1.push(y[0]);
        c2.push(y[1]);
        Ok(())
    })?;

    Ok(OracleRun {
        trajectory: AmplitudeTrajectory {
            grid: grid.clone(),
            c1,
            c2,
            engine: Engine::Oracle,
        },
        total_norm,
        max_norm_deviation: max_dev,
        validity_horizon: horizon,
    })
}

/// One oracle-versus-engine comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CertificationCase {
    pub label: String,
    pub params: SystemParams,
    pub engine: Engine,
    pub t_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub label: String,
    pub engine: Engine,
    pub n_modes: usize,
    pub span: f64,
    pub t_max: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub max_norm_deviation: f64,
    pub passed: bool,
}

/// The two reference comparisons: weak-coupling resonance against the
/// closed form, and unequal detunings at strong coupling against the
/// pseudomode engine.
pub fn certification_cases() -> Vec<CertificationCase> {
    vec![
        CertificationCase {
            label: "equal_frequency_weak".into(),
            params: SystemParams {
                coupling_ratio: 0.5,
                omega_drive: 1.0,
                ..Default::default()
            },
            engine: Engine::ClosedForm,
            t_max: 10.0,
            n_points: 2000,
        },
        CertificationCase {
            label: "unequal_frequency_strong".into(),
            params: SystemParams {
                delta_a: 0.0,
                delta_b: 4.0,
                omega_drive: 1.0,
                coupling_ratio: 10.0,
                ..Default::default()
            },
            engine: Engine::Pseudomode,
            t_max: 5.0,
            n_points: 2000,
        },
    ]
}

/// Runs one case with a bath of `n_modes` modes over ±`span`·λ.
pub fn certify(case: &CertificationCase, n_modes: usize, span: f64, engine_tol: f64) -> Result<CertificationReport> {
    let params = case.params.validate()?;
    let frame = params.dressed_frame();
    let grid = TimeGrid::uniform(case.t_max / params.lambda, case.n_points)?;
    let bath = DiscretizedBath::build(&params, &frame, n_modes, span)?;
    let reference = propagate(&params, &frame, &bath, &grid, ORACLE_TOL)?;
    let candidate = dynamics::trajectory(case.engine, &params, &grid, engine_tol)?;
    let gap = reference.trajectory.sup_distance(&candidate);
    Ok(CertificationReport {
        label: case.label.clone(),
        engine: case.engine,
        n_modes,
        span,
        t_max: grid.t_max(),
        gap,
        tolerance: CERTIFICATION_TOL,
        max_norm_deviation: reference.max_norm_deviation,
        passed: gap <= CERTIFICATION_TOL,
    })
}
