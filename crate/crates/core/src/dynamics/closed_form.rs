use num_complex::Complex64;

use super::{AmplitudeTrajectory, Engine, TimeGrid};
use crate::model::{DressedFrame, SystemParams};
use crate::{Error, Result};

/// Laplace-domain constants of the super-radiant survival amplitude.
///
/// `m = λ − i(χ + Δ_L)` and `f = sqrt(m² − α_T²W²(1 + cos η)²)`. Either
/// branch of the square root gives the same Z(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub m: Complex64,
    pub f: Complex64,
}

impl KernelParams {
    pub fn new(m: Complex64, coupling: f64) -> Self {
        // sqrt(m²) need not round-trip to m; keep Z ≡ 1 exact when uncoupled.
        let f = if coupling == 0.0 { m } else { (m * m - coupling * coupling).sqrt() };
        KernelParams { m, f }
    }

    /// Kernel for equal qubit frequencies. Only the battery's dressed
    /// quantities are read, so the caller must ensure Δ_A = Δ_B.
    pub fn equal_frequency(params: &SystemParams, frame: &DressedFrame) -> Self {
        let chi = frame.battery.chi;
        let m = Complex64::new(params.lambda, -(chi + params.delta_l));
        // α_T W (1 + cos η) = 2 α_T W cos²(η/2)
        let coupling = 2.0 * params.alpha_t * frame.w * frame.battery.cos2;
        KernelParams::new(m, coupling)
    }

    /// Same kernel on the other square-root branch.
    pub fn other_branch(self) -> Self {
        KernelParams { m: self.m, f: -self.f }
    }
}

const SERIES_ABS: f64 = 1e-6;
const SERIES_REL: f64 = 1e-10;

/// Survival amplitude Z(t) of the super-radiant state.
pub fn survival_amplitude(kernel: &KernelParams, t: f64) -> Complex64 {
    let KernelParams { m, f } = *kernel;
    let half_t = 0.5 * t;
    if f.norm() < SERIES_REL * m.norm() || f.norm() * t < SERIES_ABS {
        // cosh x + (Mt/2)·sinh(x)/x to second order in x = Ft/2
        let x2 = f * f * half_t * half_t;
        let mt2 = m * half_t;
        return (-mt2).exp() * (1.0 + x2 / 2.0 + mt2 * (1.0 + x2 / 6.0));
    }
    // e^{-Mt/2}(cosh(Ft/2) + (M/F) sinh(Ft/2)) split into its two decaying
    // exponentials so large t cannot overflow cosh/sinh.
    let ratio = m / f;
    let plus = (1.0 + ratio) * ((f - m) * half_t).exp();
    let minus = (1.0 - ratio) * ((-f - m) * half_t).exp();
    0.5 * (plus + minus)
}

/// Closed-form amplitudes for Δ_A = Δ_B.
pub fn equal_frequency_trajectory(
    params: &SystemParams,
    frame: &DressedFrame,
    grid: &TimeGrid,
) -> Result<AmplitudeTrajectory> {
    if !params.has_equal_detunings() {
        return Err(Error::UnequalDetunings {
            delta_a: params.delta_a,
            delta_b: params.delta_b,
        });
    }
    let kernel = KernelParams::equal_frequency(params, frame);
    let r1 = params.r1;
    let r2 = params.r2();
    let beta_plus = r1 * params.c01 + r2 * params.c02;
    let beta_minus = r2 * params.c01 - r1 * params.c02;

    let (c1, c2) = grid
        .samples()
        .iter()
        .map(|&t| {
            let z = survival_amplitude(&kernel, t);
            (r2 * beta_minus + r1 * z * beta_plus, -r1 * beta_minus + r2 * z * beta_plus)
        })
        .unzip();

    Ok(AmplitudeTrajectory {
        grid: grid.clone(),
        c1,
        c2,
        engine: Engine::ClosedForm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn resonance(r: f64, omega: f64) -> SystemParams {
        SystemParams {
            omega_drive: omega,
            coupling_ratio: r,
            ..Default::default()
        }
    }

    fn kernel(p: &SystemParams) -> KernelParams {
        KernelParams::equal_frequency(p, &p.dressed_frame())
    }

    #[test]
    fn starts_at_one() {
        for p in [resonance(0.5, 1.0), resonance(10.0, 0.5), resonance(0.5, 0.0)] {
            assert_eq!(survival_amplitude(&kernel(&p), 0.0), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn starts_flat() {
        for p in [resonance(0.5, 1.0), resonance(10.0, 2.0), resonance(0.5, 0.0)] {
            let k = kernel(&p);
            let h = 1e-6;
            let slope = (survival_amplitude(&k, h) - survival_amplitude(&k, 0.0)) / h;
            assert!(slope.norm() < 1e-4, "slope {slope}");
        }
    }

    #[test]
    fn critical_damping_uses_series() {
        // Ω = Δ = Δ_L = 0 and R = 1/2 puts F exactly at zero.
        let k = kernel(&resonance(0.5, 0.0));
        assert_eq!(k.f.norm(), 0.0);
        for t in [0.3, 1.0, 4.0, 10.0] {
            let z = survival_amplitude(&k, t);
            let exact = (-t / 2.0_f64).exp() * (1.0 + t / 2.0);
            assert!((z.re - exact).abs() < 1e-14 && z.im.abs() < 1e-14);
        }
    }

    #[test]
    fn series_and_exponential_forms_agree_near_critical_point() {
        for eps in [1e-7, 1e-5, 1e-3] {
            let k = kernel(&resonance(0.5 + eps, 0.0));
            for t in [1e-7, 0.5, 2.0] {
                let direct = survival_amplitude(&k, t);
                let near = survival_amplitude(&kernel(&resonance(0.5, 0.0)), t);
                assert!((direct - near).norm() < 10.0 * eps, "eps {eps} t {t}");
            }
        }
    }

    #[test]
    fn battery_starts_empty() {
        let p = resonance(0.5, 1.0);
        let grid = TimeGrid::uniform(10.0, 200).unwrap();
        let traj = equal_frequency_trajectory(&p, &p.dressed_frame(), &grid).unwrap();
        let k = kernel(&p);
        assert_eq!(traj.c2[0].norm(), 0.0);
        for (t, c2) in grid.samples().iter().zip(&traj.c2) {
            let expected = (survival_amplitude(&k, *t) - 1.0) / 2.0;
            assert!((c2 - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn subradiant_state_is_frozen() {
        let r1 = 0.6;
        let r2 = 0.8;
        let p = SystemParams {
            r1,
            coupling_ratio: 10.0,
            omega_drive: 0.7,
            delta_a: 1.3,
            delta_b: 1.3,
            delta_l: 2.0,
            c01: Complex64::new(r2, 0.0),
            c02: Complex64::new(-r1, 0.0),
            ..Default::default()
        };
        let grid = TimeGrid::uniform(5.0, 100).unwrap();
        let traj = equal_frequency_trajectory(&p, &p.dressed_frame(), &grid).unwrap();
        for (a, b) in traj.c1.iter().zip(&traj.c2) {
            assert!((a - r2).norm() < 1e-12 && (b + r1).norm() < 1e-12);
        }
    }

    #[test]
    fn superradiant_state_decays_in_weak_coupling() {
        // Undriven: with Ω > 0 the dressed splitting detunes the decaying
        // state from the cavity and |Z(50)| stays well above 1e-4.
        let p = SystemParams {
            c01: Complex64::new(FRAC_1_SQRT_2, 0.0),
            c02: Complex64::new(FRAC_1_SQRT_2, 0.0),
            ..resonance(0.5, 0.0)
        };
        let grid = TimeGrid::from_samples(vec![0.0, 25.0, 50.0]).unwrap();
        let traj = equal_frequency_trajectory(&p, &p.dressed_frame(), &grid).unwrap();
        let z = survival_amplitude(&kernel(&p), 50.0);
        assert!(z.norm() < 1e-4);
        assert!((traj.c2[2] - FRAC_1_SQRT_2 * z).norm() < 1e-15);
    }

    #[test]
    fn uncoupled_survival_is_exactly_one() {
        let p = SystemParams {
            coupling_ratio: 0.0,
            delta_l: 3.0,
            ..resonance(0.5, 1.3)
        };
        let k = kernel(&p);
        for t in [0.0, 0.7, 10.0, 100.0] {
            assert_eq!(survival_amplitude(&k, t), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn unequal_detunings_rejected() {
        let p = SystemParams {
            delta_b: 4.0,
            ..Default::default()
        };
        let grid = TimeGrid::uniform(1.0, 3).unwrap();
        let res = equal_frequency_trajectory(&p, &p.dressed_frame(), &grid);
        assert!(matches!(res, Err(Error::UnequalDetunings { .. })));
    }

    fn z_abs_series(p: &SystemParams, t_max: f64, n: usize) -> Vec<f64> {
        let k = kernel(p);
        (0..n)
            .map(|i| survival_amplitude(&k, t_max * i as f64 / (n - 1) as f64).norm())
            .collect()
    }

    #[test]
    fn strong_coupling_survival_oscillates() {
        let z = z_abs_series(&resonance(10.0, 0.5), 5.0, 2000);
        let rebound = (1..z.len() - 1)
            .filter(|&i| z[i] < z[i - 1] && z[i] <= z[i + 1])
            .map(|i| z[i..].iter().cloned().fold(0.0, f64::max) - z[i])
            .fold(0.0, f64::max);
        assert!(rebound >= 1e-3, "rebound {rebound}");
    }

    #[test]
    fn weak_coupling_survival_is_monotone() {
        let z = z_abs_series(&resonance(0.5, 0.5), 5.0, 2000);
        assert!(z.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    }

    proptest! {
        #[test]
        fn bounded_and_branch_free(
            omega in 0.0..5.0f64,
            delta in 0.0..5.0f64,
            delta_l in 0.0..5.0f64,
            strong in any::<bool>(),
            t in 0.0..20.0f64,
        ) {
            let p = SystemParams {
                omega_drive: omega,
                delta_l,
                coupling_ratio: if strong { 10.0 } else { 0.5 },
                ..Default::default()
            }
            .with_common_detuning(delta);
            let k = kernel(&p);
            let z = survival_amplitude(&k, t);
            prop_assert!(z.norm() <= 1.0 + 1e-9);
            let z_other = survival_amplitude(&k.other_branch(), t);
            prop_assert!((z - z_other).norm() <= 1e-12);
        }
    }
}
