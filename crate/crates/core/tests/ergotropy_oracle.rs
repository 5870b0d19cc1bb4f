//! Spectral ergotropy against brute-force work extraction on random
//! three-level systems.

use num_complex::Complex64;
use qbcharge::metrics::ergotropy_spectral;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

type Matrix = [[Complex64; 3]; 3];

fn gaussian(rng: &mut StdRng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-ish random unitary from Gram–Schmidt on Gaussian columns.
fn random_unitary(rng: &mut StdRng) -> Matrix {
    let mut cols: Vec<[Complex64; 3]> = Vec::new();
    while cols.len() < 3 {
        let mut v = [gaussian(rng), gaussian(rng), gaussian(rng)];
        for u in &cols {
            let proj: Complex64 = (0..3).map(|i| u[i].conj() * v[i]).sum();
            for i in 0..3 {
                v[i] -= proj * u[i];
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.map(|x| x / norm));
        }
    }
    let mut u = [[Complex64::default(); 3]; 3];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            u[i][j] = col[i];
        }
    }
    u
}

/// U diag(p) U†
fn conjugate_diag(u: &Matrix, p: &[f64; 3]) -> Matrix {
    let mut out = [[Complex64::default(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| u[i][k] * p[k] * u[j][k].conj()).sum();
        }
    }
    out
}

/// V ρ V†
fn conjugate(v: &Matrix, rho: &Matrix) -> Matrix {
    let mut vr = [[Complex64::default(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            vr[i][j] = (0..3).map(|k| v[i][k] * rho[k][j]).sum();
        }
    }
    let mut out = [[Complex64::default(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| vr[i][k] * v[j][k].conj()).sum();
        }
    }
    out
}

/// Tr(ρ H) for H diagonal in the computational basis.
fn energy(rho: &Matrix, levels: &[f64; 3]) -> f64 {
    (0..3).map(|i| rho[i][i].re * levels[i]).sum()
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

#[test]
fn spectral_ergotropy_is_the_optimum_over_unitaries() {
    let mut rng = StdRng::seed_from_u64(0x5eed_e4607);
    for _ in 0..20 {
        let mut p = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        p.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut levels = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let u = random_unitary(&mut rng);
        let rho = conjugate_diag(&u, &p);
        // |⟨r_i|ε_j⟩|² with |r_i⟩ the i-th column of U and |ε_j⟩ = e_j.
        let overlaps: Vec<f64> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| u[j][i].norm_sqr())
            .collect();
        let w = ergotropy_spectral(&p, &levels, &overlaps).unwrap();
        let initial = energy(&rho, &levels);

        for _ in 0..2000 {
            let v = random_unitary(&mut rng);
            let extracted = initial - energy(&conjugate(&v, &rho), &levels);
            assert!(extracted <= w + 1e-12, "extracted {extracted} > ergotropy {w}");
        }

        let passive = PERMUTATIONS
            .iter()
            .map(|perm| (0..3).map(|i| p[i] * levels[perm[i]]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!((w - (initial - passive)).abs() <= 1e-12, "{w} vs {}", initial - passive);
    }
}
