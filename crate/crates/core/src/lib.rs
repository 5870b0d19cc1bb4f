//! Charging dynamics of a driven open quantum battery.
//!
//! Two qubits, a charger (A) and a battery (B), are driven by a classical
//! field and share a lossy cavity with a Lorentzian spectral density. The
//! single-excitation sector is solved either in closed form (equal qubit
//! frequencies) or through an exact pseudomode reduction of the memory
//! kernel (general case). A brute-force discretized-bath propagator is kept
//! as an independent reference.
//!
//! Frequencies are measured in units of the cavity loss rate λ and times in
//! units of 1/λ unless a different λ is configured.

pub mod dynamics;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod sum;
pub mod sweep;

mod error;

pub use error::{Error, Result};

pub use dynamics::{AmplitudeTrajectory, Engine, KernelParams, TimeGrid};
pub use metrics::{MetricsSeries, Peak, QubitState};
pub use model::{DressedFrame, SystemParams};
