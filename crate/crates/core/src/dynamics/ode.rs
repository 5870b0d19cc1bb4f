//! Adaptive Dormand–Prince 5(4) for complex linear and nonlinear systems.
//!
//! Steps are clipped so that every requested output time is hit exactly;
//! no interpolation is involved in the sampled values.

use num_complex::Complex64;

use crate::{Error, Result};

pub trait ComplexOde {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Accepted plus rejected steps allowed over the whole run.
    pub max_steps: usize,
}

impl Tolerances {
    /// Relative tolerance `rtol` with an absolute floor three decades lower.
    pub fn relative(rtol: f64) -> Self {
        Tolerances {
            rtol,
            atol: rtol * 1e-3,
            max_steps: 2_000_000,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::relative(1e-9)
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

struct Stages {
    k: [Vec<Complex64>; 7],
    tmp: Vec<Complex64>,
    y_new: Vec<Complex64>,
}

impl Stages {
    fn new(n: usize) -> Self {
        let z = vec![Complex64::default(); n];
        Stages {
            k: std::array::from_fn(|_| z.clone()),
            tmp: z.clone(),
            y_new: z,
        }
    }
}

fn combine(out: &mut [Complex64], y: &[Complex64], h: f64, terms: &[(f64, &[Complex64])]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::default();
        for (c, k) in terms {
            acc += k[i] * *c;
        }
        *o = y[i] + acc * h;
    }
}

/// One Dormand–Prince step from (t, y) with k[0] = f(t, y) already filled.
/// Leaves the fifth-order solution in `st.y_new`, f(t+h, y_new) in `st.k[6]`,
/// and returns the scaled RMS error estimate.
fn step<S: ComplexOde>(sys: &S, t: f64, y: &[Complex64], h: f64, st: &mut Stages, tol: &Tolerances) -> f64 {
    let Stages { k, tmp, y_new } = st;
    let [k1, k2, k3, k4, k5, k6, k7] = k;

    combine(tmp, y, h, &[(A21, &k1[..])]);
    sys.rhs(t + C2 * h, tmp, k2);
    combine(tmp, y, h, &[(A31, &k1[..]), (A32, &k2[..])]);
    sys.rhs(t + C3 * h, tmp, k3);
    combine(tmp, y, h, &[(A41, &k1[..]), (A42, &k2[..]), (A43, &k3[..])]);
    sys.rhs(t + C4 * h, tmp, k4);
    combine(tmp, y, h, &[(A51, &k1[..]), (A52, &k2[..]), (A53, &k3[..]), (A54, &k4[..])]);
    sys.rhs(t + C5 * h, tmp, k5);
    combine(tmp, y, h, &[(A61, &k1[..]), (A62, &k2[..]), (A63, &k3[..]), (A64, &k4[..]), (A65, &k5[..])]);
    sys.rhs(t + h, tmp, k6);
    combine(y_new, y, h, &[(A71, &k1[..]), (A73, &k3[..]), (A74, &k4[..]), (A75, &k5[..]), (A76, &k6[..])]);
    sys.rhs(t + h, y_new, k7);

    let mut acc = 0.0;
    for i in 0..y.len() {
        let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
        let scale = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
        acc += e.norm_sqr() / (scale * scale);
    }
    (acc / y.len() as f64).sqrt()
}

fn rms_scaled(v: &[Complex64], y: &[Complex64], tol: &Tolerances) -> f64 {
    let acc: f64 = v
        .iter()
        .zip(y)
        .map(|(vi, yi)| {
            let s = tol.atol + tol.rtol * yi.norm();
            vi.norm_sqr() / (s * s)
        })
        .sum();
    (acc / v.len() as f64).sqrt()
}

/// Starting step size heuristic (Hairer, Nørsett & Wanner, II.4).
fn initial_step<S: ComplexOde>(sys: &S, t: f64, y: &[Complex64], f0: &[Complex64], span: f64, tol: &Tolerances) -> f64 {
    let d0 = rms_scaled(y, y, tol);
    let d1 = rms_scaled(f0, y, tol);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1: Vec<Complex64> = y.iter().zip(f0).map(|(yi, fi)| yi + fi * h0).collect();
    let mut f1 = vec![Complex64::default(); y.len()];
    sys.rhs(t + h0, &y1, &mut f1);
    let diff: Vec<Complex64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms_scaled(&diff, y, tol) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Integrates from `times[0]` through every entry of `times` (strictly
/// increasing), calling `observe(index, t, y)` at each one, including the
/// initial point.
pub fn integrate<S, O>(sys: &S, y0: &[Complex64], times: &[f64], tol: &Tolerances, mut observe: O) -> Result<()>
where
    S: ComplexOde,
    O: FnMut(usize, f64, &[Complex64]) -> Result<()>,
{
    let n = sys.dim();
    assert_eq!(y0.len(), n, "initial state has wrong dimension");
    let Some(&t0) = times.first() else {
        return Ok(());
    };
    let mut y = y0.to_vec();
    let mut t = t0;
    observe(0, t, &y)?;
    if times.len() == 1 {
        return Ok(());
    }

    let mut st = Stages::new(n);
    sys.rhs(t, &y, &mut st.k[0]);
    let span = times[times.len() - 1] - t0;
    let mut h = initial_step(sys, t, &y, &st.k[0], span, tol);
    let mut steps = 0usize;

    for (idx, &target) in times.iter().enumerate().skip(1) {
        while t < target {
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::Integrator {
                    t,
                    reason: format!("step budget of {} exhausted", tol.max_steps),
                });
            }
            let remaining = target - t;
            let clipped = h * (1.0 + 1e-10) >= remaining;
            let h_try = if clipped { remaining } else { h };
            if !clipped && h_try <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integrator {
                    t,
                    reason: format!("step size underflow (h = {h_try:e})"),
                });
            }
            let err = step(sys, t, &y, h_try, &mut st, tol);
            if !err.is_finite() {
                h = h_try * MIN_FACTOR;
                continue;
            }
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if err <= 1.0 {
                t = if clipped { target } else { t + h_try };
                std::mem::swap(&mut y, &mut st.y_new);
                st.k.swap(0, 6);
                // A clipped step says nothing about how large the next may be.
                if !clipped || factor < 1.0 {
                    h = h_try * factor;
                }
            } else {
                h = h_try * factor.min(1.0);
            }
        }
        observe(idx, t, &y)?;
    }
    Ok(())
}
