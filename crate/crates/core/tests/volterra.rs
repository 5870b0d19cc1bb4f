//! Direct quadrature of the two integro-differential amplitude equations,
//! independent of the auxiliary-mode reduction used by the engine.

use num_complex::Complex64;
use qbcharge::dynamics::{general_trajectory, TimeGrid, DEFAULT_TOL};
use qbcharge::SystemParams;

/// Trapezoidal rule in both the memory integral and the time step. O(n²).
fn volterra_reference(p: &SystemParams, t_max: f64, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let frame = p.dressed_frame();
    let g = frame.cavity_couplings();
    let chi = [frame.charger.chi, frame.battery.chi];
    let decay = Complex64::new(p.lambda, -p.delta_l);
    let h = t_max / (n - 1) as f64;
    let time = |i: usize| i as f64 * h;
    let kernel = |j: usize, l: usize, t: f64, s: f64| -> Complex64 {
        g[j] * g[l] * (-decay * (t - s)).exp() * Complex64::cis(chi[j] * t - chi[l] * s)
    };
    // Memory integral at t_m over samples 0..=m, optionally leaving out the
    // endpoint term.
    let memory = |c: &[[Complex64; 2]], m: usize, with_end: bool| -> [Complex64; 2] {
        let t = time(m);
        let mut out = [Complex64::default(); 2];
        for (j, o) in out.iter_mut().enumerate() {
            for q in 0..=m {
                if q == m && !with_end {
                    continue;
                }
                let w = if q == 0 || q == m { 0.5 * h } else { h };
                for l in 0..2 {
                    *o += w * kernel(j, l, t, time(q)) * c[q][l];
                }
            }
        }
        out
    };

    let mut c = vec![[p.c01, p.c02]];
    for m in 0..n - 1 {
        let now = memory(&c, m, true);
        c.push([Complex64::default(); 2]);
        let partial = memory(&c, m + 1, false);
        let t1 = time(m + 1);
        let rhs: Vec<Complex64> = (0..2)
            .map(|j| c[m][j] - 0.5 * h * (now[j] + partial[j]))
            .collect();
        // (1 + h²/4 K(t1, t1)) C_{m+1} = rhs
        let a = |j: usize, l: usize| {
            let id = if j == l { 1.0 } else { 0.0 };
            id + 0.25 * h * h * kernel(j, l, t1, t1)
        };
        let det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        c[m + 1] = [
            (rhs[0] * a(1, 1) - a(0, 1) * rhs[1]) / det,
            (a(0, 0) * rhs[1] - a(1, 0) * rhs[0]) / det,
        ];
    }
    c.into_iter().map(|[a, b]| (a, b)).unzip()
}

#[test]
fn auxiliary_mode_reduction_matches_direct_quadrature() {
    let cases = [
        SystemParams {
            coupling_ratio: 2.0,
            omega_drive: 0.5,
            delta_a: 0.0,
            delta_b: 1.0,
            ..Default::default()
        },
        SystemParams {
            coupling_ratio: 0.5,
            omega_drive: 1.0,
            delta_l: 1.0,
            ..Default::default()
        },
    ];
    for p in cases {
        let t_max = 5.0;
        let n = 500;
        let (c1_ref, c2_ref) = volterra_reference(&p, t_max, n);
        let grid = TimeGrid::uniform(t_max, n).unwrap();
        let traj = general_trajectory(&p, &p.dressed_frame(), &grid, DEFAULT_TOL).unwrap();
        let gap = traj
            .c1
            .iter()
            .zip(&c1_ref)
            .chain(traj.c2.iter().zip(&c2_ref))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(gap < 1e-4, "{p:?}: gap {gap:e}");
    }
}
