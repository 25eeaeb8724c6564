//! Seeded generators of states with nonnegative Wigner functions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::states::{coherent_state, FockState, GaussianState};

/// Largest coherent amplitude drawn by [`random_coherent_mixture`].
pub const MAX_COHERENT_AMPLITUDE: f64 = 1.2;

fn passive(rng: &mut impl Rng, modes: usize) -> DMatrix<f64> {
    // Orthogonal symplectic matrix of a random SU(2) (or phase) interferometer.
    let u: Vec<Vec<Complex64>> = if modes == 1 {
        vec![vec![Complex64::from_polar(
            1.0,
            rng.gen_range(0.0..std::f64::consts::TAU),
        )]]
    } else {
        let th = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let b = rng.gen_range(0.0..std::f64::consts::TAU);
        vec![
            vec![
                Complex64::from_polar(th.cos(), a),
                -Complex64::from_polar(th.sin(), b),
            ],
            vec![
                Complex64::from_polar(th.sin(), -b),
                Complex64::from_polar(th.cos(), -a),
            ],
        ]
    };
    let k = modes;
    DMatrix::from_fn(2 * k, 2 * k, |i, j| {
        let v = u[i % k][j % k];
        match (i < k, j < k) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    })
}

/// Random one- or two-mode Gaussian state: thermal noise, a passive
/// interferometer, single-mode squeezing, another interferometer and a
/// displacement.
pub fn random_gaussian_state(rng: &mut impl Rng, modes: usize) -> Result<GaussianState> {
    assert!((1..=2).contains(&modes), "one or two modes");
    let n = 2 * modes;
    let mut thermal = DMatrix::zeros(n, n);
    let mut squeeze = DMatrix::zeros(n, n);
    for i in 0..modes {
        let nu = 1.0 + rng.gen_range(0.0..1.5);
        thermal[(i, i)] = nu;
        thermal[(i + modes, i + modes)] = nu;
        let r: f64 = rng.gen_range(-0.9..0.9);
        squeeze[(i, i)] = r.exp();
        squeeze[(i + modes, i + modes)] = (-r).exp();
    }
    let s = passive(rng, modes) * squeeze * passive(rng, modes);
    let sigma = &s * thermal * s.transpose() * 0.5;
    let sigma = (&sigma + sigma.transpose()) * 0.5;
    let mean = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    GaussianState::new(mean, sigma)
}

/// Convex mixture of one to five coherent projectors with `|alpha| <= 1.2`.
pub fn random_coherent_mixture(rng: &mut impl Rng, cutoff: usize) -> Result<FockState> {
    let count = rng.gen_range(1..=5);
    let mut parts = Vec::with_capacity(count);
    for _ in 0..count {
        let radius = MAX_COHERENT_AMPLITUDE * rng.gen::<f64>().sqrt();
        let alpha = Complex64::from_polar(radius, rng.gen_range(0.0..std::f64::consts::TAU));
        let weight = rng.gen_range(0.05..1.0);
        parts.push((weight, coherent_state(alpha, cutoff)?));
    }
    FockState::mixture(&parts)
}
