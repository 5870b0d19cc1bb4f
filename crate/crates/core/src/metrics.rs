//! Stored energy, average charging power and ergotropy of the battery qubit,
//! plus their maxima over charging time.

use serde::Serialize;

use crate::dynamics::{AmplitudeTrajectory, TimeGrid};
use crate::{Error, Result};

const PROB_TOL: f64 = 1e-12;

/// Diagonal qubit state in the dressed basis: `excited_population` in |E⟩,
/// the rest in |G⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitState {
    pub excited_population: f64,
}

impl QubitState {
    pub fn new(excited_population: f64) -> Result<Self> {
        if !(-PROB_TOL..=1.0 + PROB_TOL).contains(&excited_population) {
            return Err(Error::InvalidState(format!(
                "excited population {excited_population} outside [0, 1]"
            )));
        }
        Ok(QubitState {
            excited_population: excited_population.clamp(0.0, 1.0),
        })
    }

    pub fn ground() -> Self {
        QubitState { excited_population: 0.0 }
    }

    pub fn ground_population(&self) -> f64 {
        1.0 - self.excited_population
    }

    /// Populations ordered as (ground, excited).
    pub fn populations(&self) -> [f64; 2] {
        [self.ground_population(), self.excited_population]
    }
}

/// Eigenvalues (ground, excited) of H_B = (χ/2)(|E⟩⟨E| − |G⟩⟨G|).
pub fn battery_levels(chi: f64) -> [f64; 2] {
    [-0.5 * chi, 0.5 * chi]
}

fn mean_energy(state: &QubitState, chi: f64) -> f64 {
    let levels = battery_levels(chi);
    state.populations().iter().zip(levels).map(|(p, e)| p * e).sum()
}

/// Tr[H_B ρ] − Tr[H_B ρ_0] with the empty battery ρ_0 = |G⟩⟨G| as reference.
pub fn trace_energy(state: &QubitState, chi: f64) -> f64 {
    mean_energy(state, chi) - mean_energy(&QubitState::ground(), chi)
}

/// E_B(t) = |C₂(t)|² χ_B.
pub fn stored_energy(traj: &AmplitudeTrajectory, chi_b: f64) -> Vec<f64> {
    traj.c2.iter().map(|c| c.norm_sqr() * chi_b).collect()
}

/// P_B(t) = E_B(t)/t, with P_B(0) = 0.
pub fn charging_power(energy: &[f64], grid: &TimeGrid) -> Vec<f64> {
    assert_eq!(energy.len(), grid.len(), "energy series and grid differ in length");
    energy
        .iter()
        .zip(grid.samples())
        .map(|(&e, &t)| if t > 0.0 { e / t } else { 0.0 })
        .collect()
}

/// Ergotropy of a diagonal qubit with excited population `p`:
/// (2p − 1) Θ(p − 1/2) χ, taking Θ(0) = 0.
pub fn ergotropy_from_population(p: f64, chi: f64) -> f64 {
    if p > 0.5 {
        (2.0 * p - 1.0) * chi
    } else {
        0.0
    }
}

pub fn ergotropy_closed(traj: &AmplitudeTrajectory, chi_b: f64) -> Vec<f64> {
    traj.c2
        .iter()
        .map(|c| ergotropy_from_population(c.norm_sqr(), chi_b))
        .collect()
}

/// Ergotropy from spectral data of arbitrary dimension d.
///
/// `rho_eigenvalues` must be non-increasing and sum to one,
/// `hamiltonian_eigenvalues` non-decreasing, and `overlaps` is the row-major
/// d×d matrix |⟨r_i|ε_j⟩|².
///
/// W = Σ_ij r_i ε_j (|⟨r_i|ε_j⟩|² − δ_ij).
pub fn ergotropy_spectral(rho_eigenvalues: &[f64], hamiltonian_eigenvalues: &[f64], overlaps: &[f64]) -> Result<f64> {
    let d = rho_eigenvalues.len();
    if d == 0 || hamiltonian_eigenvalues.len() != d || overlaps.len() != d * d {
        return Err(Error::InvalidState(format!(
            "dimension mismatch: {} state eigenvalues, {} energies, {} overlaps",
            d,
            hamiltonian_eigenvalues.len(),
            overlaps.len()
        )));
    }
    if rho_eigenvalues.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidState("state eigenvalues must be non-increasing".into()));
    }
    if hamiltonian_eigenvalues.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidState("energies must be non-decreasing".into()));
    }
    if rho_eigenvalues.iter().any(|&r| r < -PROB_TOL) {
        return Err(Error::InvalidState("negative state eigenvalue".into()));
    }
    let trace: f64 = rho_eigenvalues.iter().sum();
    if (trace - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("state eigenvalues sum to {trace}")));
    }

    let mut w = 0.0;
    for (i, &r) in rho_eigenvalues.iter().enumerate() {
        for (j, &e) in hamiltonian_eigenvalues.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            w += r * e * (overlaps[i * d + j] - delta);
        }
    }
    Ok(w)
}

/// Spectral-route ergotropy of a diagonal battery state.
pub fn qubit_ergotropy(state: &QubitState, chi: f64) -> f64 {
    let [pg, pe] = state.populations();
    let levels = battery_levels(chi);
    // State eigenvectors sorted by decreasing weight; energies ascending
    // (|G⟩ then |E⟩), so the overlap matrix is a permutation.
    let (rho, overlaps) = if pe > pg {
        ([pe, pg], [0.0, 1.0, 1.0, 0.0])
    } else {
        ([pg, pe], [1.0, 0.0, 0.0, 1.0])
    };
    ergotropy_spectral(&rho, &levels, &overlaps).expect("diagonal qubit state is well formed")
}

/// Maximum of a sampled series and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub value: f64,
    pub time: f64,
}

/// Grid argmax refined by the vertex of the parabola through the sample and
/// its two neighbours. Endpoint maxima are returned unrefined. Ties resolve
/// to the earliest sample.
pub fn find_peak(times: &[f64], values: &[f64]) -> Peak {
    assert!(!values.is_empty(), "empty series has no maximum");
    assert_eq!(times.len(), values.len());
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let grid_peak = Peak {
        value: values[best],
        time: times[best],
    };
    if best == 0 || best + 1 == values.len() {
        return grid_peak;
    }

    let (t0, t1, t2) = (times[best - 1], times[best], times[best + 1]);
    let (y0, y1, y2) = (values[best - 1], values[best], values[best + 1]);
    // Newton form: y = y0 + a(t − t0) + b(t − t0)(t − t1)
    let a = (y1 - y0) / (t1 - t0);
    let b = ((y2 - y1) / (t2 - t1) - a) / (t2 - t0);
    if b.is_nan() || b >= 0.0 {
        return grid_peak;
    }
    let t_star = (0.5 * (t0 + t1 - a / b)).clamp(t0, t2);
    let y_star = y0 + a * (t_star - t0) + b * (t_star - t0) * (t_star - t1);
    if y_star.is_finite() && y_star >= grid_peak.value {
        Peak {
            value: y_star,
            time: t_star,
        }
    } else {
        grid_peak
    }
}

/// E_B, P_B, W_B on the trajectory's grid with their maxima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSeries {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub power: Vec<f64>,
    pub ergotropy: Vec<f64>,
    pub max_energy: Peak,
    pub max_power: Peak,
    pub max_ergotropy: Peak,
}

impl MetricsSeries {
    pub fn from_trajectory(traj: &AmplitudeTrajectory, chi_b: f64) -> Self {
        let energy = stored_energy(traj, chi_b);
        let power = charging_power(&energy, &traj.grid);
        let ergotropy = ergotropy_closed(traj, chi_b);
        MetricsSeries::from_series(traj.grid.samples().to_vec(), energy, power, ergotropy)
    }

    /// Builds the record from precomputed series and fills in the maxima.
    pub fn from_series(times: Vec<f64>, energy: Vec<f64>, power: Vec<f64>, ergotropy: Vec<f64>) -> Self {
        let max_energy = find_peak(&times, &energy);
        let max_power = find_peak(&times, &power);
        let max_ergotropy = find_peak(&times, &ergotropy);
        MetricsSeries {
            times,
            energy,
            power,
            ergotropy,
            max_energy,
            max_power,
            max_ergotropy,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Engine;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn traj_from_c2(c2: Vec<Complex64>, grid: TimeGrid) -> AmplitudeTrajectory {
        AmplitudeTrajectory {
            c1: vec![Complex64::default(); c2.len()],
            c2,
            grid,
            engine: Engine::ClosedForm,
        }
    }

    #[test]
    fn empty_and_full_battery() {
        let grid = TimeGrid::uniform(1.0, 3).unwrap();
        let empty = traj_from_c2(vec![Complex64::default(); 3], grid.clone());
        assert!(stored_energy(&empty, 4.0).iter().all(|&e| e == 0.0));
        let full = traj_from_c2(vec![Complex64::new(0.0, 1.0); 3], grid);
        assert!(stored_energy(&full, 4.0).iter().all(|&e| e == 4.0));
        assert!(ergotropy_closed(&full, 4.0).iter().all(|&w| w == 4.0));
    }

    #[test]
    fn trace_form_matches_population_form() {
        for p in [0.0, 0.25, 0.5, 0.8, 1.0] {
            let s = QubitState::new(p).unwrap();
            assert!((trace_energy(&s, 3.0) - 3.0 * p).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_energy_gives_constant_power() {
        let grid = TimeGrid::uniform(4.0, 9).unwrap();
        let energy: Vec<f64> = grid.samples().iter().map(|t| 2.5 * t).collect();
        let power = charging_power(&energy, &grid);
        assert_eq!(power[0], 0.0);
        assert!(power[1..].iter().all(|&p| (p - 2.5).abs() < 1e-15));
    }

    #[test]
    fn heaviside_threshold() {
        assert_eq!(ergotropy_from_population(0.5, 2.0), 0.0);
        assert_eq!(ergotropy_from_population(0.3, 2.0), 0.0);
        assert_eq!(ergotropy_from_population(1.0, 4.0), 4.0);
    }

    #[test]
    fn passive_qubit_has_no_ergotropy() {
        let w = ergotropy_spectral(&[0.7, 0.3], &[-1.0, 1.0], &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(w, 0.0);
        assert_eq!(qubit_ergotropy(&QubitState::new(0.3).unwrap(), 2.0), 0.0);
    }

    #[test]
    fn inverted_qubit_ergotropy() {
        let w = qubit_ergotropy(&QubitState::new(0.8).unwrap(), 2.0);
        assert!((w - 1.2).abs() < 1e-15);
    }

    #[test]
    fn spectral_input_is_validated() {
        assert!(ergotropy_spectral(&[0.3, 0.7], &[-1.0, 1.0], &[1.0, 0.0, 0.0, 1.0]).is_err());
        assert!(ergotropy_spectral(&[0.7, 0.3], &[1.0, -1.0], &[1.0, 0.0, 0.0, 1.0]).is_err());
        assert!(ergotropy_spectral(&[0.7, 0.4], &[-1.0, 1.0], &[1.0, 0.0, 0.0, 1.0]).is_err());
        assert!(ergotropy_spectral(&[0.7, 0.3], &[-1.0, 1.0], &[1.0, 0.0, 0.0]).is_err());
        assert!(QubitState::new(1.5).is_err());
    }

    #[test]
    fn monotone_series_peaks_at_the_end() {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = t.iter().map(|t| t * t).collect();
        let peak = find_peak(&t, &y);
        assert_eq!(peak.time, t[49]);
        assert_eq!(peak.value, y[49]);
    }

    #[test]
    fn refined_peak_of_sine_squared() {
        let grid = TimeGrid::uniform(2.0, 200).unwrap();
        let y: Vec<f64> = grid.samples().iter().map(|t| t.sin().powi(2)).collect();
        let peak = find_peak(grid.samples(), &y);
        assert!((peak.value - 1.0).abs() < 1e-4);
        assert!((peak.time - FRAC_PI_2).abs() < 1e-4);
    }

    #[test]
    fn flat_series_peaks_at_start() {
        let t = [0.0, 1.0, 2.0];
        assert_eq!(find_peak(&t, &[0.0; 3]), Peak { value: 0.0, time: 0.0 });
    }

    proptest! {
        #[test]
        fn spectral_matches_closed_form(p in 0.0..=1.0f64, chi in 0.0..20.0f64) {
            let spectral = qubit_ergotropy(&QubitState::new(p).unwrap(), chi);
            prop_assert!((spectral - ergotropy_from_population(p, chi)).abs() <= 1e-12);
            prop_assert!(spectral <= trace_energy(&QubitState::new(p).unwrap(), chi) + 1e-12);
        }

        #[test]
        fn peak_never_undershoots(values in proptest::collection::vec(-10.0..10.0f64, 3..60)) {
            let t: Vec<f64> = (0..values.len()).map(|i| i as f64 * 0.37).collect();
            let peak = find_peak(&t, &values);
            prop_assert!(values.iter().all(|&v| v <= peak.value));
            prop_assert!(peak.time >= t[0] && peak.time <= t[t.len() - 1]);
        }
    }
}
