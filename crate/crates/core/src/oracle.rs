//! Brute-force reference computations: a midpoint phase-space grid, exact
//! radial moments and density-matrix trace powers.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg;
use crate::quadrature::midpoint_box;
use crate::special::gauss_laguerre;
use crate::states::{FockState, StateSpec};
use crate::wigner::WignerField;

/// Largest Fock number handled with exact rational arithmetic.
pub const EXACT_RADIAL_MAX_N: usize = 6;

/// Square grid `[-L, L]^{2k}` with `points_per_axis` midpoint cells per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points_per_axis: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, points_per_axis: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidArgument(
                "grid half-width must be positive".into(),
            ));
        }
        if points_per_axis < 16 {
            return Err(Error::InvalidArgument(
                "grid needs >= 16 points per axis".into(),
            ));
        }
        Ok(Self {
            half_width,
            points_per_axis,
        })
    }

    /// L = 7 with 160 points for one mode, L = 6 with 64 points for two.
    pub fn default_for(modes: usize) -> Self {
        if modes == 1 {
            Self {
                half_width: 7.0,
                points_per_axis: 160,
            }
        } else {
            Self {
                half_width: 6.0,
                points_per_axis: 64,
            }
        }
    }
}

/// Midpoint-rule estimate of `int W^m` on a box centred at the origin.
pub fn riemann_moment(w: &WignerField, m: usize, grid: &GridSpec, exec: Execution) -> Result<f64> {
    let grid = GridSpec::new(grid.half_width, grid.points_per_axis)?;
    if w.modes() >= 2 && grid.points_per_axis > crate::moments::GRID_LIMIT_4D {
        return Err(Error::SizeLimit {
            what: "grid points per axis",
            requested: grid.points_per_axis,
            limit: crate::moments::GRID_LIMIT_4D,
        });
    }
    let mi = m as i32;
    let origin = vec![0.0; w.dim()];
    Ok(midpoint_box(
        exec,
        &origin,
        grid.half_width,
        grid.points_per_axis,
        |z| w.eval_slice(z).powi(mi),
    ))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Coefficients of `L_n(2u)` in powers of `u`.
fn laguerre_2u_coefficients(n: usize) -> Vec<BigRational> {
    (0..=n)
        .map(|k| {
            let num = binomial(n, k) * BigInt::from(-2).pow(k as u32);
            BigRational::new(num, factorial(k))
        })
        .collect()
}

fn poly_pow(p: &[BigRational], m: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for _ in 0..m {
        let mut next = vec![BigRational::zero(); out.len() + p.len() - 1];
        for (i, a) in out.iter().enumerate() {
            for (j, b) in p.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        out = next;
    }
    out
}

/// Exact rational `c` with `w_m(|n>) = c / pi^(m-1)`, for `n <= 6`.
pub fn fock_moment_rational(n: usize, m: usize) -> Result<BigRational> {
    if n > EXACT_RADIAL_MAX_N {
        return Err(Error::Unsupported(format!(
            "exact radial moments stop at n={EXACT_RADIAL_MAX_N}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("moment order must be >= 1".into()));
    }
    let poly = poly_pow(&laguerre_2u_coefficients(n), m);
    // int_0^inf u^j exp(-m u) du = j! / m^(j+1)
    let mut total = BigRational::zero();
    for (j, c) in poly.iter().enumerate() {
        let denom = BigInt::from(m).pow(j as u32 + 1);
        total += c * BigRational::new(factorial(j), denom);
    }
    if n % 2 == 1 && m % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// `w_m = pi^(1-m) int_0^inf [(-1)^n L_n(2u)]^m exp(-m u) du` for a Fock state.
fn fock_radial_moment(n: usize, m: usize) -> Result<f64> {
    let scale = PI.powi(1 - m as i32);
    if n <= EXACT_RADIAL_MAX_N {
        let c = fock_moment_rational(n, m)?;
        return Ok(c.to_f64().expect("finite rational") * scale);
    }
    // Gauss-Laguerre in t = m u is exact for the degree n*m polynomial.
    let (t, wt) = gauss_laguerre((n * m) / 2 + 2);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mf = m as f64;
    let s: f64 = t
        .iter()
        .zip(&wt)
        .map(|(&ti, &wi)| wi * (sign * crate::special::laguerre(n, 2.0 * ti / mf)).powi(m as i32))
        .sum();
    Ok(scale * s / mf)
}

/// `w_m` of `lambda |0><0| + (1 - lambda) |1><1|` by binomial expansion of
/// `[(2 lambda - 1) + 2 (1 - lambda) u]^m`.
pub fn mixed_radial_moment(lambda: f64, m: usize) -> f64 {
    let a = 2.0 * lambda - 1.0;
    let b = 2.0 * (1.0 - lambda);
    let mf = m as f64;
    let mut acc = 0.0;
    let mut binom = 1.0;
    let mut jfact = 1.0;
    for j in 0..=m {
        if j > 0 {
            binom *= (m - j + 1) as f64 / j as f64;
            jfact *= j as f64;
        }
        acc += binom * a.powi((m - j) as i32) * b.powi(j as i32) * jfact / mf.powi(j as i32 + 1);
    }
    acc * PI.powi(1 - m as i32)
}

/// Radial closed form of `w_m` for Fock states and the vacuum/single-photon mixture.
pub fn radial_closed_form_moment(spec: &StateSpec, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("moment order must be >= 1".into()));
    }
    spec.validate()?;
    match *spec {
        StateSpec::Fock { n } => fock_radial_moment(n, m),
        StateSpec::MixedFock01 { lambda } => Ok(mixed_radial_moment(lambda, m)),
        _ => Err(Error::Unsupported(format!(
            "no radial closed form for {spec}"
        ))),
    }
}

/// `Delta(lambda) = w_2^2 - w_3` of the mixture from the closed forms.
pub fn mixed_delta_closed_form(lambda: f64) -> f64 {
    let w2 = mixed_radial_moment(lambda, 2);
    w2 * w2 - mixed_radial_moment(lambda, 3)
}

/// Bisection on [`mixed_delta_closed_form`] over `[0, 0.5]`.
pub fn mixed_threshold_closed_form(tol: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 0.5);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mixed_delta_closed_form(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `Tr[rho^m]` by repeated multiplication.
pub fn trace_power(rho: &FockState, m: usize) -> f64 {
    assert!(m >= 1, "trace power needs m >= 1");
    let mut acc = rho.matrix().clone();
    for _ in 1..m {
        acc = &acc * rho.matrix();
    }
    linalg::trace(&acc).re
}
