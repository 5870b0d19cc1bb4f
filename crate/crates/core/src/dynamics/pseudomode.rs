use num_complex::Complex64;

use super::ode::{integrate, ComplexOde, Tolerances};
use super::{AmplitudeTrajectory, Engine, TimeGrid};
use crate::model::{DressedFrame, SystemParams};
use crate::{Error, Result};

/// Charger, battery and one auxiliary lossy mode.
///
/// State layout is `[C_A, C_B, b]`:
///
/// ```text
/// dC_j/dt = −g_j e^{+iχ_j t} b
/// db/dt   = −(λ − iΔ_L) b + Σ_j g_j e^{−iχ_j t} C_j
/// ```
///
/// with g_j = W α_j cos²(η_j/2) and b(0) = 0. Eliminating b reproduces the
/// exponential memory kernel W² e^{−(λ − iΔ_L)(t − t′)} exactly.
#[derive(Debug, Clone, Copy)]
pub struct PseudomodeSystem {
    pub couplings: [f64; 2],
    pub chi: [f64; 2],
    /// λ − iΔ_L
    pub decay: Complex64,
}

impl PseudomodeSystem {
    pub fn new(params: &SystemParams, frame: &DressedFrame) -> Self {
        PseudomodeSystem {
            couplings: frame.cavity_couplings(),
            chi: [frame.charger.chi, frame.battery.chi],
            decay: Complex64::new(params.lambda, -params.delta_l),
        }
    }
}

impl ComplexOde for PseudomodeSystem {
    fn dim(&self) -> usize {
        3
    }

    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        let b = y[2];
        let mut feed = -self.decay * b;
        for j in 0..2 {
            let phase = Complex64::cis(self.chi[j] * t);
            dy[j] = -self.couplings[j] * phase * b;
            feed += self.couplings[j] * phase.conj() * y[j];
        }
        dy[2] = feed;
    }
}

/// Amplitudes for arbitrary detunings; `tol` is the relative local error target.
pub fn general_trajectory(
    params: &SystemParams,
    frame: &DressedFrame,
    grid: &TimeGrid,
    tol: f64,
) -> Result<AmplitudeTrajectory> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let sys = PseudomodeSystem::new(params, frame);
    let y0 = [params.c01, params.c02, Complex64::default()];
    let mut c1 = Vec::with_capacity(grid.len());
    let mut c2 = Vec::with_capacity(grid.len());
    integrate(&sys, &y0, grid.samples(), &Tolerances::relative(tol), |_, _, y| {
        c1.push(y[0]);
        c2.push(y[1]);
        Ok(())
    })?;
    Ok(AmplitudeTrajectory {
        grid: grid.clone(),
        c1,
        c2,
        engine: Engine::Pseudomode,
    })
}
