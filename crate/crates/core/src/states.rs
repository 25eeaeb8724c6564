//! Phase-space primitives and the catalog of states.
//!
//! Convention throughout the crate: `hbar = 1`, `x = (a + a^dag)/sqrt(2)`,
//! `p = (a - a^dag)/(sqrt(2) i)`, Wigner prefactor `1/(2 pi)^k`, so the vacuum
//! Wigner function is `exp(-x^2 - p^2)/pi` and its covariance is `I/2`.
//! Phase-space coordinates are ordered `(x_1..x_k, p_1..p_k)`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Discarded Fock weight allowed by the truncation rule.
pub const TRUNCATION_TOL: f64 = 1e-8;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// A point `(x_1..x_k, p_1..p_k)` of `2k`-dimensional phase space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint(Vec<f64>);

impl PhasePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "phase point needs an even, nonzero number of coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "phase point has non-finite coordinate".into(),
            ));
        }
        Ok(Self(coords))
    }

    /// Single-mode point `(x, p)`.
    pub fn single(x: f64, p: f64) -> Self {
        Self(vec![x, p])
    }

    /// Two-mode point `(x_1, x_2, p_1, p_2)` from per-mode pairs.
    pub fn two_mode(x1: f64, p1: f64, x2: f64, p2: f64) -> Self {
        Self(vec![x1, x2, p1, p2])
    }

    pub fn modes(&self) -> usize {
        self.0.len() / 2
    }

    pub fn x(&self, mode: usize) -> f64 {
        self.0[mode]
    }

    pub fn p(&self, mode: usize) -> f64 {
        self.0[self.modes() + mode]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Density matrix of `modes` bosonic modes in a truncated Fock basis.
///
/// The basis is the tensor product of `|0>..|cutoff>` per mode with the first
/// mode most significant, i.e. `|n_1, n_2>` sits at index `n_1 (cutoff+1) + n_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    modes: usize,
    cutoff: usize,
    matrix: CMatrix,
}

impl FockState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(modes: usize, cutoff: usize, matrix: CMatrix) -> Result<Self> {
        let dim = fock_dim(modes, cutoff)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = linalg::trace(&matrix);
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        if !linalg::is_psd(&matrix, PSD_TOL) {
            return Err(Error::InvalidState(
                "matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(Self {
            modes,
            cutoff,
            matrix,
        })
    }

    /// Pure state `|psi><psi|` from an unnormalised ket.
    pub fn from_ket(modes: usize, cutoff: usize, ket: &[Complex64]) -> Result<Self> {
        let dim = fock_dim(modes, cutoff)?;
        if ket.len() != dim {
            return Err(Error::InvalidState(format!(
                "ket has length {}, expected {dim}",
                ket.len()
            )));
        }
        let norm2: f64 = ket.iter().map(|c| c.norm_sqr()).sum();
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(Error::InvalidState(
                "ket has zero or non-finite norm".into(),
            ));
        }
        let inv = 1.0 / norm2.sqrt();
        let v: Vec<Complex64> = ket.iter().map(|c| c * inv).collect();
        let matrix = CMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj());
        Ok(Self {
            modes,
            cutoff,
            matrix,
        })
    }

    /// Convex combination `sum_i w_i rho_i` of states on the same space.
    pub fn mixture(parts: &[(f64, FockState)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let (modes, cutoff) = (first.1.modes, first.1.cutoff);
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || !(total > 0.0) {
            return Err(Error::InvalidArgument(
                "mixture weights must be nonnegative".into(),
            ));
        }
        let dim = first.1.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (w, s) in parts {
            if s.modes != modes || s.cutoff != cutoff {
                return Err(Error::InvalidArgument(
                    "mixture components differ in shape".into(),
                ));
            }
            m += &s.matrix * Complex64::new(w / total, 0.0);
        }
        Ok(Self {
            modes,
            cutoff,
            matrix: m,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.matrix, &self.matrix).re
    }

    /// Splits a flat basis index into per-mode occupation numbers.
    pub fn occupations(&self, index: usize) -> Vec<usize> {
        let d = self.cutoff + 1;
        let mut out = vec![0; self.modes];
        let mut rest = index;
        for slot in out.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        out
    }

    /// Highest Fock level carrying a nonzero matrix element, per mode.
    pub fn occupied_levels(&self) -> Vec<usize> {
        let mut top = vec![0; self.modes];
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if self.matrix[(i, j)] != linalg::ZERO {
                    for (slot, (a, b)) in top
                        .iter_mut()
                        .zip(self.occupations(i).into_iter().zip(self.occupations(j)))
                    {
                        *slot = (*slot).max(a).max(b);
                    }
                }
            }
        }
        top
    }

    /// Reduced single-mode state of a two-mode state.
    pub fn reduced(&self, keep: usize) -> Result<FockState> {
        if self.modes != 2 || keep > 1 {
            return Err(Error::InvalidArgument(
                "reduced() needs a two-mode state and keep in {0,1}".into(),
            ));
        }
        let m = linalg::partial_trace_two_mode(&self.matrix, self.cutoff, keep);
        Ok(FockState {
            modes: 1,
            cutoff: self.cutoff,
            matrix: m,
        })
    }

    /// Tensor product `self (x) other`; both factors need the same cutoff.
    pub fn tensor(&self, other: &FockState) -> Result<FockState> {
        if self.cutoff != other.cutoff {
            return Err(Error::InvalidArgument(
                "tensor factors must share a cutoff".into(),
            ));
        }
        Ok(FockState {
            modes: self.modes + other.modes,
            cutoff: self.cutoff,
            matrix: linalg::kron(&self.matrix, &other.matrix),
        })
    }
}

fn fock_dim(modes: usize, cutoff: usize) -> Result<usize> {
    if modes == 0 || modes > 2 {
        return Err(Error::Unsupported(format!("{modes}-mode Fock states")));
    }
    Ok((cutoff + 1).pow(modes as u32))
}

/// Gaussian state given by mean and covariance in `(x_1..x_k, p_1..p_k)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    modes: usize,
    mean: Vec<f64>,
    covariance: DMatrix<f64>,
}

impl GaussianState {
    /// Checks symmetry and the uncertainty relation `sigma + i Omega / 2 >= 0`.
    pub fn new(mean: Vec<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let n = mean.len();
        if n == 0 || !n.is_multiple_of(2) || covariance.nrows() != n || covariance.ncols() != n {
            return Err(Error::InvalidState("covariance/mean shape mismatch".into()));
        }
        if mean.iter().chain(covariance.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite Gaussian parameters".into()));
        }
        let asym = (&covariance - covariance.transpose()).abs().max();
        if asym > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "covariance not symmetric ({asym:.3e})"
            )));
        }
        let k = n / 2;
        let omega = symplectic_form(k);
        let test = CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(covariance[(i, j)], 0.5 * omega[(i, j)])
        });
        let min_ev = linalg::hermitian_eigenvalues(&test)[0];
        if min_ev < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "covariance violates the uncertainty relation (min eigenvalue {min_ev:.3e})"
            )));
        }
        Ok(Self {
            modes: k,
            mean,
            covariance,
        })
    }

    pub fn vacuum(modes: usize) -> Self {
        let n = 2 * modes;
        Self {
            modes,
            mean: vec![0.0; n],
            covariance: DMatrix::identity(n, n) * 0.5,
        }
    }

    /// Coherent state with amplitude `alpha` (single mode).
    pub fn coherent(alpha: Complex64) -> Self {
        let mut g = Self::vacuum(1);
        g.mean = vec![2f64.sqrt() * alpha.re, 2f64.sqrt() * alpha.im];
        g
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn determinant(&self) -> f64 {
        self.covariance.determinant()
    }

    /// `Tr[rho^2] = 1 / (2^k sqrt(det sigma))`.
    pub fn purity(&self) -> f64 {
        1.0 / (2f64.powi(self.modes as i32) * self.determinant().sqrt())
    }
}

/// Standard symplectic form `[[0, I], [-I, 0]]` for `(x.., p..)` ordering.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let n = 2 * modes;
    DMatrix::from_fn(n, n, |i, j| {
        if j == i + modes && i < modes {
            1.0
        } else if i == j + modes && j < modes {
            -1.0
        } else {
            0.0
        }
    })
}

pub fn fock_state(n: usize, cutoff: usize) -> Result<FockState> {
    if n > cutoff {
        return Err(Error::InvalidArgument(format!(
            "Fock level {n} above cutoff {cutoff}"
        )));
    }
    let mut ket = vec![linalg::ZERO; cutoff + 1];
    ket[n] = linalg::ONE;
    FockState::from_ket(1, cutoff, &ket)
}

/// `(|N,0> + e^{i phi}|0,N>)/sqrt(2)`.
pub fn noon_state(n: usize, phi: f64, cutoff: usize) -> Result<FockState> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "NOON photon number must be >= 1".into(),
        ));
    }
    if n > cutoff {
        return Err(Error::InvalidArgument(format!(
            "NOON N={n} above cutoff {cutoff}"
        )));
    }
    let d = cutoff + 1;
    let mut ket = vec![linalg::ZERO; d * d];
    ket[n * d] = linalg::ONE;
    ket[n] = Complex64::from_polar(1.0, phi);
    FockState::from_ket(2, cutoff, &ket)
}

/// Smallest cutoff meeting the truncation rule for a two-mode squeezed vacuum.
pub fn tmsv_min_cutoff(r: f64) -> usize {
    let lam2 = r.tanh().powi(2);
    let mut c = 0;
    while lam2.powi(c as i32 + 1) > TRUNCATION_TOL {
        c += 1;
    }
    c
}

/// Two-mode squeezed vacuum `sqrt(1 - l^2) sum_n l^n |n,n>`, `l = tanh r`,
/// renormalised after truncation.
pub fn tmsv_state(r: f64, cutoff: usize) -> Result<FockState> {
    check_squeezing(r)?;
    let lam = r.tanh();
    let retained = 1.0 - lam.powi(2 * (cutoff as i32 + 1));
    if retained < 1.0 - TRUNCATION_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            retained,
            tolerance: TRUNCATION_TOL,
        });
    }
    let d = cutoff + 1;
    let mut ket = vec![linalg::ZERO; d * d];
    for n in 0..d {
        ket[n * d + n] = Complex64::new(lam.powi(n as i32), 0.0);
    }
    FockState::from_ket(2, cutoff, &ket)
}

/// Covariance of the two-mode squeezed vacuum whose Fock form is [`tmsv_state`].
///
/// `x_1 x_2` correlation `+sinh(2r)/2`, `p_1 p_2` correlation `-sinh(2r)/2`.
pub fn tmsv_gaussian(r: f64) -> Result<GaussianState> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "squeezing r={r} must be >= 0"
        )));
    }
    let c = 0.5 * (2.0 * r).cosh();
    let s = 0.5 * (2.0 * r).sinh();
    #[rustfmt::skip]
    let cov = DMatrix::from_row_slice(4, 4, &[
        c, s, 0.0, 0.0,
        s, c, 0.0, 0.0,
        0.0, 0.0, c, -s,
        0.0, 0.0, -s, c,
    ]);
    GaussianState::new(vec![0.0; 4], cov)
}

fn spssv_retained(lam: f64, cutoff: usize) -> f64 {
    // sum_{n>=1} n l^{2n} = l^2 / (1 - l^2)^2
    let l2 = lam * lam;
    let total = l2 / (1.0 - l2).powi(2);
    let kept: f64 = (1..=cutoff).map(|n| n as f64 * l2.powi(n as i32)).sum();
    kept / total
}

/// Smallest cutoff meeting the truncation rule for the photon-subtracted state.
pub fn spssv_min_cutoff(r: f64) -> usize {
    let lam = r.tanh();
    let mut c = 1;
    while spssv_retained(lam, c) < 1.0 - TRUNCATION_TOL {
        c += 1;
    }
    c
}

/// Single-photon-subtracted two-mode squeezed vacuum,
/// `~ sum_n l^n sqrt(n) (|n-1,n> + (-1)^parity |n,n-1>)`, normalised explicitly.
pub fn spssv_state(r: f64, parity: u8, cutoff: usize) -> Result<FockState> {
    check_squeezing(r)?;
    if parity > 1 {
        return Err(Error::InvalidArgument(format!(
            "parity must be 0 or 1, got {parity}"
        )));
    }
    let lam = r.tanh();
    let retained = spssv_retained(lam, cutoff);
    if retained < 1.0 - TRUNCATION_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            retained,
            tolerance: TRUNCATION_TOL,
        });
    }
    let sign = if parity == 0 { 1.0 } else { -1.0 };
    let d = cutoff + 1;
    let mut ket = vec![linalg::ZERO; d * d];
    for n in 1..=cutoff {
        let amp = lam.powi(n as i32) * (n as f64).sqrt();
        ket[(n - 1) * d + n] += Complex64::new(amp, 0.0);
        ket[n * d + n - 1] += Complex64::new(sign * amp, 0.0);
    }
    FockState::from_ket(2, cutoff, &ket)
}

/// `lambda |0><0| + (1 - lambda) |1><1|`.
pub fn mixed_fock01(lambda: f64, cutoff: usize) -> Result<FockState> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!(
            "lambda={lambda} outside [0, 1]"
        )));
    }
    if cutoff < 1 {
        return Err(Error::InvalidArgument(
            "mixed_fock01 needs cutoff >= 1".into(),
        ));
    }
    let d = cutoff + 1;
    let mut m = CMatrix::zeros(d, d);
    m[(0, 0)] = Complex64::new(lambda, 0.0);
    m[(1, 1)] = Complex64::new(1.0 - lambda, 0.0);
    Ok(FockState {
        modes: 1,
        cutoff,
        matrix: m,
    })
}

/// Coherent state `|alpha>` truncated and renormalised.
pub fn coherent_state(alpha: Complex64, cutoff: usize) -> Result<FockState> {
    let mut ket = Vec::with_capacity(cutoff + 1);
    let mut amp = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..=cutoff {
        if n > 0 {
            amp *= alpha / (n as f64).sqrt();
        }
        ket.push(amp);
    }
    FockState::from_ket(1, cutoff, &ket)
}

fn check_squeezing(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "squeezing r={r} must be > 0"
        )));
    }
    Ok(())
}

/// A state from the catalog, or a custom Gaussian/Fock state.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Fock { n: usize },
    Noon { n: usize, phi: f64 },
    Tmsv { r: f64 },
    Spssv { r: f64, parity: u8 },
    MixedFock01 { lambda: f64 },
    GaussianCustom(GaussianState),
    FockCustom(FockState),
}

impl StateSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StateSpec::Noon { n, phi } => {
                if n == 0 {
                    return Err(Error::InvalidArgument("NOON needs N >= 1".into()));
                }
                if !(0.0..2.0 * PI).contains(&phi) {
                    return Err(Error::InvalidArgument(format!(
                        "phi={phi} outside [0, 2 pi)"
                    )));
                }
            }
            StateSpec::Tmsv { r } => check_squeezing(r)?,
            StateSpec::Spssv { r, parity } => {
                check_squeezing(r)?;
                if parity > 1 {
                    return Err(Error::InvalidArgument("SPSSV parity must be 0 or 1".into()));
                }
            }
            StateSpec::MixedFock01 { lambda } if !(0.0..=1.0).contains(&lambda) => {
                return Err(Error::InvalidArgument(format!(
                    "lambda={lambda} outside [0, 1]"
                )));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        match self {
            StateSpec::Fock { .. } | StateSpec::MixedFock01 { .. } => 1,
            StateSpec::Noon { .. } | StateSpec::Tmsv { .. } | StateSpec::Spssv { .. } => 2,
            StateSpec::GaussianCustom(g) => g.modes(),
            StateSpec::FockCustom(f) => f.modes(),
        }
    }

    /// Cutoff large enough to represent the state under the truncation rule.
    pub fn natural_cutoff(&self) -> usize {
        match self {
            StateSpec::Fock { n } => *n,
            StateSpec::Noon { n, .. } => *n,
            StateSpec::Tmsv { r } => tmsv_min_cutoff(*r),
            StateSpec::Spssv { r, .. } => spssv_min_cutoff(*r),
            StateSpec::MixedFock01 { .. } => 1,
            StateSpec::GaussianCustom(_) => 0,
            StateSpec::FockCustom(f) => f.cutoff(),
        }
    }

    /// Fock-basis representation; `cutoff = None` picks [`Self::natural_cutoff`].
    pub fn to_fock(&self, cutoff: Option<usize>) -> Result<FockState> {
        self.validate()?;
        let c = cutoff.unwrap_or_else(|| self.natural_cutoff());
        match self {
            StateSpec::Fock { n } => fock_state(*n, c),
            StateSpec::Noon { n, phi } => noon_state(*n, *phi, c),
            StateSpec::Tmsv { r } => tmsv_state(*r, c),
            StateSpec::Spssv { r, parity } => spssv_state(*r, *parity, c),
            StateSpec::MixedFock01 { lambda } => mixed_fock01(*lambda, c.max(1)),
            StateSpec::GaussianCustom(_) => Err(Error::Unsupported(
                "Fock representation of a custom Gaussian state".into(),
            )),
            StateSpec::FockCustom(f) => {
                if cutoff.is_some_and(|c| c != f.cutoff()) {
                    return Err(Error::InvalidArgument(
                        "custom Fock state has a fixed cutoff".into(),
                    ));
                }
                Ok(f.clone())
            }
        }
    }

    /// Gaussian representation where one exists exactly.
    pub fn to_gaussian(&self) -> Option<GaussianState> {
        match self {
            StateSpec::Fock { n: 0 } => Some(GaussianState::vacuum(1)),
            StateSpec::MixedFock01 { lambda } if *lambda == 1.0 => Some(GaussianState::vacuum(1)),
            StateSpec::Tmsv { r } => tmsv_gaussian(*r).ok(),
            StateSpec::GaussianCustom(g) => Some(g.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Fock { n } => write!(f, "fock(n={n})"),
            StateSpec::Noon { n, phi } => write!(f, "noon(n={n},phi={phi})"),
            StateSpec::Tmsv { r } => write!(f, "tmsv(r={r})"),
            StateSpec::Spssv { r, parity } => write!(f, "spssv(r={r},parity={parity})"),
            StateSpec::MixedFock01 { lambda } => write!(f, "mixed_fock01(lambda={lambda})"),
            StateSpec::GaussianCustom(g) => write!(f, "gaussian(k={})", g.modes()),
            StateSpec::FockCustom(s) => {
                write!(f, "fock_custom(k={},cutoff={})", s.modes(), s.cutoff())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fock_projectors() {
        let s = fock_state(0, 5).unwrap();
        assert_eq!(s.matrix()[(0, 0)], c(1.0));
        assert_eq!(s.matrix().iter().filter(|v| **v != linalg::ZERO).count(), 1);
        let s = fock_state(1, 5).unwrap();
        assert_eq!(s.matrix()[(1, 1)], c(1.0));
        assert!((fock_state(3, 8).unwrap().purity() - 1.0).abs() < 1e-15);
        assert!(matches!(fock_state(6, 5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn noon_one_photon_phase_pi() {
        let s = noon_state(1, PI, 1).unwrap();
        let m = s.matrix();
        // |1,0> is index 2, |0,1> is index 1
        assert!((m[(2, 2)] - c(0.5)).norm() < 1e-15);
        assert!((m[(1, 1)] - c(0.5)).norm() < 1e-15);
        assert!((m[(2, 1)] - c(-0.5)).norm() < 1e-15);
        assert!((m[(1, 2)] - c(-0.5)).norm() < 1e-15);
        assert!((linalg::trace(noon_state(3, PI, 5).unwrap().matrix()) - c(1.0)).norm() < 1e-14);
        assert!(noon_state(4, PI, 3).is_err());
    }

    #[test]
    fn noon_reduced_state_is_diagonal() {
        let red = noon_state(2, 0.0, 4).unwrap().reduced(0).unwrap();
        let expect = [0.5, 0.0, 0.5, 0.0, 0.0];
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { expect[i] } else { 0.0 };
                assert!((red.matrix()[(i, j)] - c(e)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn tmsv_gaussian_limits() {
        let g = tmsv_gaussian(0.0).unwrap();
        assert!((g.covariance() - DMatrix::identity(4, 4) * 0.5).abs().max() < 1e-15);
        for r in [0.1, 0.5, 0.8, 1.2] {
            assert!((tmsv_gaussian(r).unwrap().determinant() - 1.0 / 16.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tmsv_truncation_rule() {
        let r = 0.5;
        let c = tmsv_min_cutoff(r);
        let s = tmsv_state(r, c).unwrap();
        assert!((s.purity() - 1.0).abs() < 1e-6);
        assert!(matches!(
            tmsv_state(r, c - 1),
            Err(Error::CutoffTooSmall { .. })
        ));
        assert!(tmsv_state(r, 30).is_ok());
    }

    #[test]
    fn spssv_is_normalised_and_pure() {
        let s = spssv_state(0.4, 0, 30).unwrap();
        assert!((linalg::trace(s.matrix()) - c(1.0)).norm() < 1e-14);
        assert!((s.purity() - 1.0).abs() < 1e-8);
        assert!(spssv_state(0.4, 2, 30).is_err());
        assert!(matches!(
            spssv_state(1.0, 0, 5),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn spssv_overlap_with_tmsv_vanishes() {
        // Photon subtraction changes the total photon number parity, so the
        // two kets are orthogonal term by term.
        let a = spssv_state(0.4, 0, 30).unwrap();
        let b = tmsv_state(0.4, 30).unwrap();
        let overlap = linalg::trace_product(a.matrix(), b.matrix()).re;
        assert!(overlap.abs() < 1e-15);
    }

    #[test]
    fn mixed_fock_limits() {
        let v = mixed_fock01(1.0, 3).unwrap();
        assert_eq!(v.matrix(), fock_state(0, 3).unwrap().matrix());
        let one = mixed_fock01(0.0, 3).unwrap();
        assert_eq!(one.matrix(), fock_state(1, 3).unwrap().matrix());
        assert!((mixed_fock01(0.5, 3).unwrap().purity() - 0.5).abs() < 1e-15);
        assert!(mixed_fock01(1.5, 3).is_err());
        assert!(mixed_fock01(-0.1, 3).is_err());
    }

    #[test]
    fn from_matrix_rejects_invalid() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.7);
        assert!(FockState::from_matrix(1, 1, m.clone()).is_err());
        m[(1, 1)] = c(0.3);
        assert!(FockState::from_matrix(1, 1, m.clone()).is_ok());
        m[(0, 1)] = Complex64::new(0.0, 0.1);
        assert!(FockState::from_matrix(1, 1, m.clone()).is_err());
        m[(1, 0)] = Complex64::new(0.0, -0.1);
        assert!(FockState::from_matrix(1, 1, m.clone()).is_ok());
        m[(0, 1)] = c(0.9);
        m[(1, 0)] = c(0.9);
        assert!(FockState::from_matrix(1, 1, m).is_err());
    }

    #[test]
    fn gaussian_uncertainty_is_enforced() {
        let bad = DMatrix::identity(2, 2) * 0.4;
        assert!(GaussianState::new(vec![0.0; 2], bad).is_err());
        let squeezed = DMatrix::from_row_slice(2, 2, &[0.25, 0.0, 0.0, 1.0]);
        assert!(GaussianState::new(vec![0.0; 2], squeezed).is_ok());
        assert!((GaussianState::vacuum(2).purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn catalog_constructors_pass_invariants() {
        let specs = [
            StateSpec::Fock { n: 3 },
            StateSpec::Noon { n: 2, phi: PI },
            StateSpec::Tmsv { r: 0.5 },
            StateSpec::Spssv { r: 0.5, parity: 1 },
            StateSpec::MixedFock01 { lambda: 0.3 },
        ];
        for s in specs {
            let f = s.to_fock(None).unwrap();
            let again = FockState::from_matrix(f.modes(), f.cutoff(), f.matrix().clone());
            assert!(again.is_ok(), "{s}: {again:?}");
        }
    }
}
