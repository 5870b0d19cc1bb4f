//! Physical parameters and the dressed-frame quantities derived from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Physical inputs of the driven two-qubit battery.
///
/// All frequencies are detunings in the frame rotating with the drive, in
/// the same units as `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    /// Charger detuning from the drive, ω_A − ω_L.
    #[serde(rename = "delta_A")]
    pub delta_a: f64,
    /// Battery detuning from the drive, ω_B − ω_L.
    #[serde(rename = "delta_B")]
    pub delta_b: f64,
    /// Drive detuning from the cavity center, ω_L − ω_c.
    #[serde(rename = "delta_L")]
    pub delta_l: f64,
    /// Classical drive strength Ω.
    pub omega_drive: f64,
    /// Cavity loss rate (Lorentzian half-width).
    pub lambda: f64,
    /// Collective coupling constant sqrt(α_A² + α_B²).
    #[serde(rename = "alpha_T")]
    pub alpha_t: f64,
    /// Relative charger coupling α_A / α_T.
    pub r1: f64,
    /// Coupling regime ratio: vacuum Rabi frequency over loss rate.
    #[serde(rename = "R")]
    pub coupling_ratio: f64,
    /// Initial amplitude of |E⟩_A|G⟩_B.
    pub c01: Complex64,
    /// Initial amplitude of |G⟩_A|E⟩_B.
    pub c02: Complex64,
}

impl Default for SystemParams {
    /// Weak-coupling resonance with the battery empty and the charger full.
    fn default() -> Self {
        SystemParams {
            delta_a: 0.0,
            delta_b: 0.0,
            delta_l: 0.0,
            omega_drive: 1.0,
            lambda: 1.0,
            alpha_t: 1.0,
            r1: std::f64::consts::FRAC_1_SQRT_2,
            coupling_ratio: 0.5,
            c01: Complex64::new(1.0, 0.0),
            c02: Complex64::new(0.0, 0.0),
        }
    }
}

impl SystemParams {
    /// Relative battery coupling α_B / α_T.
    pub fn r2(&self) -> f64 {
        (1.0 - self.r1 * self.r1).max(0.0).sqrt()
    }

    /// Sets Δ_A = Δ_B = `delta`.
    pub fn with_common_detuning(mut self, delta: f64) -> Self {
        self.delta_a = delta;
        self.delta_b = delta;
        self
    }

    pub fn has_equal_detunings(&self) -> bool {
        self.delta_a == self.delta_b
    }

    /// Checks every invariant and returns the parameters unchanged.
    pub fn validate(self) -> Result<Self> {
        let finite = [
            ("delta_A", self.delta_a),
            ("delta_B", self.delta_b),
            ("delta_L", self.delta_l),
            ("omega_drive", self.omega_drive),
            ("lambda", self.lambda),
            ("alpha_T", self.alpha_t),
            ("r1", self.r1),
            ("R", self.coupling_ratio),
            ("c01", self.c01.re + self.c01.im),
            ("c02", self.c02.re + self.c02.im),
        ];
        if let Some((name, _)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err(invalid(format!("{name} is not finite")));
        }
        if self.lambda <= 0.0 {
            return Err(invalid("lambda must be positive"));
        }
        if self.alpha_t <= 0.0 {
            return Err(invalid("alpha_T must be positive"));
        }
        if !(0.0..=1.0).contains(&self.r1) {
            return Err(invalid("r1 out of [0,1]"));
        }
        if self.coupling_ratio < 0.0 {
            return Err(invalid("R must be non-negative"));
        }
        if self.omega_drive < 0.0 {
            return Err(invalid("omega_drive must be non-negative"));
        }
        let norm = self.c01.norm_sqr() + self.c02.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(invalid("initial state not normalized"));
        }
        let r2 = self.r2();
        if (self.r1 * self.r1 + r2 * r2 - 1.0).abs() > NORM_TOL {
            return Err(invalid("r1^2 + r2^2 != 1"));
        }
        Ok(self)
    }

    /// Returns the same physical system with every rate multiplied by `s`.
    /// Dimensionless quantities at time t/s are unchanged.
    pub fn scaled(mut self, s: f64) -> Self {
        self.delta_a *= s;
        self.delta_b *= s;
        self.delta_l *= s;
        self.omega_drive *= s;
        self.lambda *= s;
        self
    }

    pub fn dressed_frame(&self) -> DressedFrame {
        DressedFrame::new(self)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

/// Mixing angle, splitting and cavity weight of one driven qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedQubit {
    /// η ∈ [0, π) for Ω ≥ 0.
    pub eta: f64,
    /// χ = sqrt(Δ² + 4Ω²).
    pub chi: f64,
    /// cos²(η/2) = (1 + cos η)/2.
    pub cos2: f64,
}

impl DressedQubit {
    /// Ω = Δ = 0 resolves to the bare basis (η = 0, χ = 0).
    pub fn new(detuning: f64, omega_drive: f64) -> Self {
        let eta = (2.0 * omega_drive).atan2(detuning);
        let chi = detuning.hypot(2.0 * omega_drive);
        DressedQubit {
            eta,
            chi,
            cos2: (1.0 + eta.cos()) / 2.0,
        }
    }
}

/// Derived quantities consumed by every engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedFrame {
    pub charger: DressedQubit,
    pub battery: DressedQubit,
    /// Cavity coupling scale, W = R·λ/α_T.
    pub w: f64,
    /// Charger coupling α_A = α_T·r1.
    pub alpha_a: f64,
    /// Battery coupling α_B = α_T·r2.
    pub alpha_b: f64,
}

impl DressedFrame {
    pub fn new(params: &SystemParams) -> Self {
        DressedFrame {
            charger: DressedQubit::new(params.delta_a, params.omega_drive),
            battery: DressedQubit::new(params.delta_b, params.omega_drive),
            w: params.coupling_ratio * params.lambda / params.alpha_t,
            alpha_a: params.alpha_t * params.r1,
            alpha_b: params.alpha_t * params.r2(),
        }
    }

    pub fn eta_a(&self) -> f64 {
        self.charger.eta
    }

    pub fn eta_b(&self) -> f64 {
        self.battery.eta
    }

    pub fn chi_a(&self) -> f64 {
        self.charger.chi
    }

    pub fn chi_b(&self) -> f64 {
        self.battery.chi
    }

    /// Effective cavity couplings W·α_j·cos²(η_j/2) for (A, B).
    pub fn cavity_couplings(&self) -> [f64; 2] {
        [
            self.w * self.alpha_a * self.charger.cos2,
            self.w * self.alpha_b * self.battery.cos2,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn default_params_validate_unchanged() {
        let p = SystemParams::default();
        assert_eq!(p.validate().unwrap(), p);
    }

    #[test]
    fn r1_out_of_range_is_rejected() {
        let p = SystemParams {
            r1: 1.2,
            ..Default::default()
        };
        let err = p.validate().unwrap_err().to_string();
        assert!(err.contains("r1 out of [0,1]"), "{err}");
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let p = SystemParams {
            c01: Complex64::new(1.0, 0.0),
            c02: Complex64::new(1.0, 0.0),
            ..Default::default()
        };
        let err = p.validate().unwrap_err().to_string();
        assert!(err.contains("initial state not normalized"), "{err}");
    }

    #[test]
    fn non_positive_lambda_and_alpha_are_rejected() {
        for p in [
            SystemParams { lambda: 0.0, ..Default::default() },
            SystemParams { alpha_t: -1.0, ..Default::default() },
            SystemParams { coupling_ratio: -0.1, ..Default::default() },
            SystemParams { omega_drive: -0.1, ..Default::default() },
            SystemParams { delta_l: f64::NAN, ..Default::default() },
        ] {
            assert!(matches!(p.validate(), Err(Error::InvalidParams(_))));
        }
    }

    #[test]
    fn undriven_qubit_is_bare() {
        let q = DressedQubit::new(5.0, 0.0);
        assert_eq!(q.eta, 0.0);
        assert_eq!(q.chi, 5.0);
        assert_eq!(q.cos2, 1.0);
    }

    #[test]
    fn resonant_drive_mixes_equally() {
        let q = DressedQubit::new(0.0, 2.0);
        assert!((q.eta - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(q.chi, 4.0);
        assert!((q.cos2 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn three_four_five() {
        let q = DressedQubit::new(3.0, 2.0);
        assert!((q.chi - 5.0).abs() < 1e-15);
        assert!((q.cos2 - 0.8).abs() < 1e-15);
    }

    #[test]
    fn degenerate_point_is_bare_and_gapless() {
        let q = DressedQubit::new(0.0, 0.0);
        assert_eq!((q.eta, q.chi, q.cos2), (0.0, 0.0, 1.0));
    }

    #[test]
    fn negative_detuning_lands_in_upper_half() {
        let q = DressedQubit::new(-1.0, 0.5);
        assert!(q.eta > FRAC_PI_2 && q.eta < PI);
    }

    #[test]
    fn coupling_scale_follows_r() {
        let p = SystemParams {
            coupling_ratio: 10.0,
            alpha_t: 2.0,
            lambda: 1.5,
            ..Default::default()
        };
        assert!((p.dressed_frame().w - 7.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn splitting_reconstructs(delta in -50.0..50.0f64, omega in 0.0..50.0f64) {
            let q = DressedQubit::new(delta, omega);
            let lhs = q.chi * q.chi;
            let rhs = delta * delta + 4.0 * omega * omega;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
            prop_assert!(q.chi >= delta.abs() && q.chi >= 2.0 * omega);
            prop_assert!((0.0..PI).contains(&q.eta));
            prop_assert_eq!(q.cos2, (1.0 + q.eta.cos()) / 2.0);
        }

        #[test]
        fn eta_is_continuous_in_drive(delta in -10.0..10.0f64, omega in 0.01..10.0f64) {
            let h = 1e-7;
            let a = DressedQubit::new(delta, omega).eta;
            let b = DressedQubit::new(delta, omega + h).eta;
            let c = DressedQubit::new(delta + h, omega).eta;
            prop_assert!((a - b).abs() < 1e-5);
            prop_assert!((a - c).abs() < 1e-5);
        }
    }
}
