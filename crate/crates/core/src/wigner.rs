//! Wigner functions, marginals, Weyl symbols and phase-space expectation values.
//!
//! Every [`WignerField`] is stored as `W(z) = P(z) * exp(-(z - c)^T Q (z - c))`:
//! a prefactor `P` (a polynomial for all catalog states) times a Gaussian
//! [`Envelope`]. Quadrature code integrates against the envelope exactly and
//! only ever samples the prefactor.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{self, CMatrix};
use crate::quadrature::{Envelope, GaussHermiteGrid};
use crate::special::{gauss_hermite, hermite_functions, laguerre, wigner_kernel_table};
use crate::states::{FockState, GaussianState, PhasePoint, StateSpec};

/// Relative imaginary residue tolerated when summing complex kernel terms.
pub const REALNESS_TOL: f64 = 1e-10;

/// Largest power of any single coordinate in the prefactor. This is what
/// a tensor Gauss-Hermite rule has to integrate exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Finite(usize),
    Unbounded,
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::Unbounded => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::Unbounded => f.write_str("unbounded"),
        }
    }
}

type Prefactor = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type Radial = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which construction produced a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluatorPath {
    Analytic,
    Gaussian,
    FockSynthesis,
    Custom,
}

/// A real phase-space function with Gaussian envelope.
#[derive(Clone)]
pub struct WignerField {
    modes: usize,
    envelope: Envelope,
    prefactor: Prefactor,
    degree: Degree,
    // Prefactor as a function of u = x^2 + p^2 for rotationally symmetric
    // single-mode fields with isotropic envelope centred at the origin.
    radial: Option<Radial>,
    path: EvaluatorPath,
}

impl fmt::Debug for WignerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WignerField")
            .field("modes", &self.modes)
            .field("envelope", &self.envelope)
            .field("degree", &self.degree)
            .field("radial", &self.radial.is_some())
            .field("path", &self.path)
            .finish()
    }
}

impl WignerField {
    /// Field from an arbitrary prefactor and envelope.
    pub fn from_parts<F>(
        modes: usize,
        envelope: Envelope,
        degree: Degree,
        prefactor: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if envelope.dim() != 2 * modes {
            return Err(Error::InvalidArgument(
                "envelope dimension must be 2k".into(),
            ));
        }
        Ok(Self {
            modes,
            envelope,
            prefactor: Arc::new(prefactor),
            degree,
            radial: None,
            path: EvaluatorPath::Custom,
        })
    }

    fn radial_field<R>(degree: usize, path: EvaluatorPath, profile: R) -> Self
    where
        R: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let profile: Radial = Arc::new(profile);
        let p = profile.clone();
        Self {
            modes: 1,
            envelope: Envelope::isotropic(2),
            prefactor: Arc::new(move |z: &[f64]| p(z[0] * z[0] + z[1] * z[1])),
            degree: Degree::Finite(degree),
            radial: Some(profile),
            path,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        2 * self.modes
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn path(&self) -> EvaluatorPath {
        self.path
    }

    /// Prefactor `P(z) = W(z) / envelope(z)`.
    pub fn prefactor(&self, z: &[f64]) -> f64 {
        (self.prefactor)(z)
    }

    pub fn eval_slice(&self, z: &[f64]) -> f64 {
        (self.prefactor)(z) * self.envelope.value(z)
    }

    pub fn eval(&self, point: &PhasePoint) -> f64 {
        assert_eq!(
            point.modes(),
            self.modes,
            "phase point has the wrong mode count"
        );
        self.eval_slice(point.as_slice())
    }

    /// Radial prefactor `R(u)` with `W = R(x^2 + p^2) exp(-s (x^2 + p^2))`,
    /// together with the envelope scale `s`.
    pub fn radial_profile(&self) -> Option<(&(dyn Fn(f64) -> f64 + Send + Sync), f64)> {
        self.radial
            .as_ref()
            .map(|r| (r.as_ref(), self.envelope.form()[(0, 0)]))
    }

    /// `W'(z) = c^{2k} W(c z)`, a normalised field with the same moment ratios.
    pub fn dilate(&self, c: f64) -> WignerField {
        assert!(c > 0.0 && c.is_finite(), "dilation factor must be positive");
        let scale = c.powi(2 * self.modes as i32);
        let inner = self.prefactor.clone();
        let prefactor: Prefactor = Arc::new(move |z: &[f64]| {
            let zc: Vec<f64> = z.iter().map(|v| v * c).collect();
            scale * inner(&zc)
        });
        let radial = self.radial.as_ref().map(|r| {
            let r = r.clone();
            Arc::new(move |u: f64| scale * r(c * c * u)) as Radial
        });
        WignerField {
            modes: self.modes,
            envelope: self.envelope.dilated(c),
            prefactor,
            degree: self.degree,
            radial,
            path: self.path,
        }
    }
}

/// Two-mode exponent form shared by the squeezed-vacuum family:
/// `cosh(2r)|z|^2 - 2 sinh(2r)(x_1 x_2 - p_1 p_2)`.
fn squeezed_envelope(r: f64) -> Envelope {
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    #[rustfmt::skip]
    let form = DMatrix::from_row_slice(4, 4, &[
        c, -s, 0.0, 0.0,
        -s, c, 0.0, 0.0,
        0.0, 0.0, c, s,
        0.0, 0.0, s, c,
    ]);
    Envelope::new(vec![0.0; 4], form).expect("squeezed form is positive definite")
}

/// Closed-form Wigner function of a catalog state.
pub fn wigner_analytic(spec: &StateSpec) -> Result<WignerField> {
    spec.validate()?;
    let field = match *spec {
        StateSpec::Fock { n } => {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            WignerField::radial_field(2 * n, EvaluatorPath::Analytic, move |u| {
                sign / PI * laguerre(n, 2.0 * u)
            })
        }
        StateSpec::MixedFock01 { lambda } => {
            WignerField::radial_field(2, EvaluatorPath::Analytic, move |u| {
                (lambda + (1.0 - lambda) * (2.0 * u - 1.0)) / PI
            })
        }
        StateSpec::Tmsv { r } => WignerField {
            modes: 2,
            envelope: squeezed_envelope(r),
            prefactor: Arc::new(|_| 1.0 / (PI * PI)),
            degree: Degree::Finite(0),
            radial: None,
            path: EvaluatorPath::Analytic,
        },
        StateSpec::Spssv { r, parity } => {
            let c = (2.0 * r).cosh();
            let s = (2.0 * r).sinh();
            let eps = if parity == 0 { 1.0 } else { -1.0 };
            WignerField {
                modes: 2,
                envelope: squeezed_envelope(r),
                prefactor: Arc::new(move |z: &[f64]| {
                    let dx = z[0] + eps * z[1];
                    let dp = z[2] + eps * z[3];
                    let (x2, p2) = (dx * dx, dp * dp);
                    (eps * s * (p2 - x2) + c * (p2 + x2) - 1.0) / (PI * PI)
                }),
                degree: Degree::Finite(2),
                radial: None,
                path: EvaluatorPath::Analytic,
            }
        }
        StateSpec::Noon { n, phi } => {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let cross = 2f64.powi(n as i32) / (PI * PI) * (-crate::special::ln_factorial(n)).exp();
            let phase = Complex64::from_polar(1.0, -phi);
            WignerField {
                modes: 2,
                envelope: Envelope::isotropic(4),
                prefactor: Arc::new(move |z: &[f64]| {
                    let (x1, x2, p1, p2) = (z[0], z[1], z[2], z[3]);
                    let u1 = x1 * x1 + p1 * p1;
                    let u2 = x2 * x2 + p2 * p2;
                    let diag =
                        sign * (laguerre(n, 2.0 * u1) + laguerre(n, 2.0 * u2)) / (2.0 * PI * PI);
                    let a = Complex64::new(x1, -p1).powu(n as u32);
                    let b = Complex64::new(x2, p2).powu(n as u32);
                    diag + cross * (phase * a * b).re
                }),
                degree: Degree::Finite(2 * n),
                radial: None,
                path: EvaluatorPath::Analytic,
            }
        }
        StateSpec::GaussianCustom(_) | StateSpec::FockCustom(_) => {
            return Err(Error::Unsupported(format!(
                "no closed form for {spec}; use the Gaussian or Fock evaluator"
            )))
        }
    };
    Ok(field)
}

/// Normalised Gaussian Wigner function of a [`GaussianState`].
pub fn wigner_gaussian(g: &GaussianState) -> Result<WignerField> {
    let det = g.determinant();
    if !(det > 1e-300) {
        return Err(Error::DegenerateCovariance(det));
    }
    let inv = g
        .covariance()
        .clone()
        .try_inverse()
        .ok_or(Error::DegenerateCovariance(det))?;
    let form = (&inv + inv.transpose()) * 0.25;
    let envelope =
        Envelope::new(g.mean().to_vec(), form).map_err(|_| Error::DegenerateCovariance(det))?;
    let k = g.modes();
    let norm = 1.0 / ((2.0 * PI).powi(k as i32) * det.sqrt());
    Ok(WignerField {
        modes: k,
        envelope,
        prefactor: Arc::new(move |_| norm),
        degree: Degree::Finite(0),
        radial: None,
        path: EvaluatorPath::Gaussian,
    })
}

struct SparseDensity {
    // (row occupations, column occupations, rho_ij)
    entries: Vec<(Vec<usize>, Vec<usize>, Complex64)>,
    levels: Vec<usize>,
}

/// Wigner function of a density matrix by summing cross-Wigner kernels
/// `W = sum_{mn} rho_mn W_{|m><n|}`, mode by mode.
pub fn wigner_fock_synthesis(rho: &FockState) -> WignerField {
    let levels = rho.occupied_levels();
    let mut entries = Vec::new();
    let mut diagonal = true;
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            let v = rho.matrix()[(i, j)];
            if v != linalg::ZERO {
                if i != j {
                    diagonal = false;
                }
                entries.push((rho.occupations(i), rho.occupations(j), v));
            }
        }
    }
    let k = rho.modes();
    let degree = 2 * levels.iter().copied().max().unwrap_or(0);
    let dens = Arc::new(SparseDensity { entries, levels });

    if k == 1 && diagonal {
        let diag: Vec<(usize, f64)> = dens.entries.iter().map(|(m, _, v)| (m[0], v.re)).collect();
        return WignerField::radial_field(degree, EvaluatorPath::FockSynthesis, move |u| {
            diag.iter()
                .map(|&(n, w)| {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    w * sign * laguerre(n, 2.0 * u)
                })
                .sum::<f64>()
                / PI
        });
    }

    let prefactor: Prefactor = Arc::new(move |z: &[f64]| synthesis_prefactor(&dens, k, z));
    WignerField {
        modes: k,
        envelope: Envelope::isotropic(2 * k),
        prefactor,
        degree: Degree::Finite(degree),
        radial: None,
        path: EvaluatorPath::FockSynthesis,
    }
}

fn synthesis_prefactor(dens: &SparseDensity, k: usize, z: &[f64]) -> f64 {
    let tables: Vec<(usize, Vec<Complex64>)> = (0..k)
        .map(|mode| {
            let l = dens.levels[mode];
            (l + 1, wigner_kernel_table(l, z[mode], z[k + mode]))
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (rows, cols, v) in &dens.entries {
        let mut term = *v;
        for (mode, (d, table)) in tables.iter().enumerate() {
            term *= table[rows[mode] * d + cols[mode]];
        }
        scale += term.norm();
        acc += term;
    }
    assert!(
        acc.im.abs() <= REALNESS_TOL * scale.max(f64::MIN_POSITIVE),
        "Wigner synthesis produced an imaginary residue {:.3e} (scale {:.3e})",
        acc.im,
        scale
    );
    acc.re
}

/// Integral of `W` over every coordinate except `axis`, evaluated at `value`.
pub fn marginal(w: &WignerField, axis: usize, value: f64) -> f64 {
    let dim = w.dim();
    assert!(axis < dim, "axis out of range");
    let env = w.envelope();
    let q = env.form();
    let c = env.center();
    let others: Vec<usize> = (0..dim).filter(|&i| i != axis).collect();
    let qyy = DMatrix::from_fn(dim - 1, dim - 1, |a, b| q[(others[a], others[b])]);
    let qyj = nalgebra::DVector::from_fn(dim - 1, |a, _| q[(others[a], axis)]);
    let inv = qyy
        .clone()
        .try_inverse()
        .expect("sub-form of a positive definite form");
    let shift = &inv * &qyj * (value - c[axis]);
    let center: Vec<f64> = others
        .iter()
        .enumerate()
        .map(|(a, &i)| c[i] - shift[a])
        .collect();
    let cond = Envelope::new(center.clone(), qyy).expect("conditional envelope");
    let order = match w.degree() {
        Degree::Finite(d) => d / 2 + 4,
        Degree::Unbounded => 64,
    };
    let grid = GaussHermiteGrid::new(&cond, order).expect("order >= 1");
    grid.integrate(Execution::Parallel, |y| {
        let mut z = vec![0.0; dim];
        z[axis] = value;
        for (a, &i) in others.iter().enumerate() {
            z[i] = y[a];
        }
        let rem = env.exponent(&z) - cond.exponent(y);
        w.prefactor(&z) * (-rem).exp()
    })
}

/// Position density of `mode`, `int W dp (and all other modes)`.
pub fn marginal_x(w: &WignerField, mode: usize, x: f64) -> f64 {
    marginal(w, mode, x)
}

/// Momentum density of `mode`.
pub fn marginal_p(w: &WignerField, mode: usize, p: f64) -> f64 {
    marginal(w, w.modes() + mode, p)
}

/// Polynomial part `S` of a single-mode Weyl symbol, `A~(x,p) = 2 exp(-x^2-p^2) S(x,p)`.
///
/// With `y = 2t` the Weyl transform reads
/// `A~ = 2 int sum_mn A_mn psi_m(x+t) psi_n(x-t) exp(-2ipt) dt`; the
/// eigenfunctions carry `exp(-t^2)`, so Gauss-Hermite applies with the
/// weights rescaled by `exp(t_i^2)`. Eigenfunctions stay bounded on the real
/// axis, which keeps the absolute error at rounding level for large `p`.
fn weyl_poly_single(a: &CMatrix, x: f64, p: f64) -> Complex64 {
    let c = a.nrows() - 1;
    let rule = weyl_rule(c, p);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&t, &wt) in rule.nodes.iter().zip(&rule.scaled_weights) {
        let ha = hermite_functions(c, x + t);
        let hb = hermite_functions(c, x - t);
        let mut s = Complex64::new(0.0, 0.0);
        for m in 0..=c {
            let mut row = Complex64::new(0.0, 0.0);
            for n in 0..=c {
                let v = a[(m, n)];
                if v != linalg::ZERO {
                    row += v * hb[n];
                }
            }
            s += row * ha[m];
        }
        acc += s * Complex64::from_polar(wt, -2.0 * p * t);
    }
    acc * (x * x + p * p).exp()
}

struct WeylRule {
    nodes: Vec<f64>,
    scaled_weights: Vec<f64>,
}

/// Gauss-Hermite rule for the `t` integral: exact for the degree `2c`
/// polynomial part, with extra nodes to resolve `exp(-2ipt)`.
fn weyl_rule(cutoff: usize, p: f64) -> Arc<WeylRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<WeylRule>>>> = OnceLock::new();
    let extra = (2.0 * p * p).ceil() as usize;
    let order = (2 * cutoff + 16 + extra).div_ceil(8) * 8;
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("weyl rule cache").get(&order) {
        return rule.clone();
    }
    let (nodes, weights) = gauss_hermite(order);
    let scaled_weights = nodes
        .iter()
        .zip(&weights)
        .map(|(t, w)| w * (t * t).exp())
        .collect();
    let rule = Arc::new(WeylRule {
        nodes,
        scaled_weights,
    });
    cache
        .lock()
        .expect("weyl rule cache")
        .insert(order, rule.clone());
    rule
}

fn cutoff_of(dim: usize, modes: usize) -> Result<usize> {
    let c = (dim as f64).powf(1.0 / modes as f64).round() as usize;
    if c == 0 || c.pow(modes as u32) != dim {
        return Err(Error::InvalidArgument(format!(
            "operator side {dim} is not (cutoff+1)^{modes}"
        )));
    }
    Ok(c - 1)
}

/// Weyl symbol of a single-mode operator at `(x, p)`.
pub fn weyl_symbol_single(a: &CMatrix, x: f64, p: f64) -> Complex64 {
    weyl_poly_single(a, x, p) * (2.0 * (-(x * x + p * p)).exp())
}

/// Weyl symbol of a tensor product `A_1 (x) ... (x) A_k` at `z`.
pub fn weyl_symbol_product(factors: &[&CMatrix], z: &PhasePoint) -> Result<Complex64> {
    if factors.len() != z.modes() {
        return Err(Error::InvalidArgument(
            "one factor per mode required".into(),
        ));
    }
    Ok(factors
        .iter()
        .enumerate()
        .map(|(m, a)| weyl_symbol_single(a, z.x(m), z.p(m)))
        .product())
}

/// Weyl symbol of a linear combination of tensor-product operators.
pub fn weyl_symbol_terms(terms: &[(Complex64, Vec<CMatrix>)], z: &PhasePoint) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (coef, factors) in terms {
        let refs: Vec<&CMatrix> = factors.iter().collect();
        acc += coef * weyl_symbol_product(&refs, z)?;
    }
    Ok(acc)
}

/// Splits a two-mode operator into `A (x) B` when its operator-Schmidt rank is one.
pub fn factorize_two_mode(a: &CMatrix, cutoff: usize) -> Result<(CMatrix, CMatrix)> {
    let d = cutoff + 1;
    // Realignment: R[(i1 j1), (i2 j2)] = A[(i1 i2), (j1 j2)]
    let r = CMatrix::from_fn(d * d, d * d, |row, col| {
        let (i1, j1) = (row / d, row % d);
        let (i2, j2) = (col / d, col % d);
        a[(i1 * d + i2, j1 * d + j2)]
    });
    let svd = SVD::new(r, true, true);
    let s = &svd.singular_values;
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let top = s[idx[0]];
    let second = idx.get(1).map(|&i| s[i]).unwrap_or(0.0);
    if top == 0.0 {
        return Ok((CMatrix::zeros(d, d), CMatrix::zeros(d, d)));
    }
    if second > 1e-10 * top {
        return Err(Error::Unsupported(
            "Weyl symbol of a non-factorizable multimode operator".into(),
        ));
    }
    let u = svd.u.as_ref().expect("computed");
    let vt = svd.v_t.as_ref().expect("computed");
    let i = idx[0];
    let sq = Complex64::new(top.sqrt(), 0.0);
    let fa = CMatrix::from_fn(d, d, |i1, j1| u[(i1 * d + j1, i)] * sq);
    let fb = CMatrix::from_fn(d, d, |i2, j2| vt[(i, i2 * d + j2)] * sq);
    Ok((fa, fb))
}

/// Weyl symbol of `a` at `z`; multimode operators must be tensor products.
pub fn weyl_symbol(a: &CMatrix, z: &PhasePoint) -> Result<Complex64> {
    let k = z.modes();
    let cutoff = cutoff_of(a.nrows(), k)?;
    match k {
        1 => Ok(weyl_symbol_single(a, z.x(0), z.p(0))),
        2 => {
            let (fa, fb) = factorize_two_mode(a, cutoff)?;
            weyl_symbol_product(&[&fa, &fb], z)
        }
        _ => Err(Error::Unsupported(format!("{k}-mode Weyl symbols"))),
    }
}

/// `int W(z) A~(z) dz`, which equals `Tr[rho A]`. `a` must be Hermitian.
pub fn expectation_phase_space(w: &WignerField, a: &CMatrix) -> Result<f64> {
    if linalg::hermiticity_defect(a) > 1e-12 {
        return Err(Error::InvalidArgument(
            "expectation needs a Hermitian operator".into(),
        ));
    }
    let k = w.modes();
    let cutoff = cutoff_of(a.nrows(), k)?;
    let factors: Vec<CMatrix> = match k {
        1 => vec![a.clone()],
        2 => {
            let (fa, fb) = factorize_two_mode(a, cutoff)?;
            vec![fa, fb]
        }
        _ => return Err(Error::Unsupported(format!("{k}-mode expectation values"))),
    };
    let (env, shift) = w.envelope().product(&Envelope::isotropic(2 * k));
    let order = match w.degree() {
        Degree::Finite(d) => (d + 2 * cutoff) / 2 + 2,
        Degree::Unbounded => 64 + cutoff * k,
    };
    let grid = GaussHermiteGrid::new(&env, order)?;
    let scale = 2f64.powi(k as i32) * (-shift).exp();
    let v = grid.integrate_complex(Execution::Parallel, |z| {
        let mut s = Complex64::new(scale * w.prefactor(z), 0.0);
        for (m, f) in factors.iter().enumerate() {
            s *= weyl_poly_single(f, z[m], z[k + m]);
        }
        s
    });
    Ok(v.re)
}

/// Samples a single-mode field on the square `[-half_width, half_width]^2`,
/// `points` per axis, returned as `(x, p, w)` rows with `p` varying fastest.
pub fn sample_grid(
    w: &WignerField,
    half_width: f64,
    points: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    if w.modes() != 1 {
        return Err(Error::Unsupported("grid export is single-mode only".into()));
    }
    if points < 2 || !(half_width > 0.0) {
        return Err(Error::InvalidArgument(
            "grid needs >= 2 points and a positive half-width".into(),
        ));
    }
    let step = 2.0 * half_width / (points - 1) as f64;
    let mut out = Vec::with_capacity(points * points);
    for i in 0..points {
        let x = -half_width + i as f64 * step;
        for j in 0..points {
            let p = -half_width + j as f64 * step;
            out.push((x, p, w.eval_slice(&[x, p])));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{fock_state, mixed_fock01, noon_state};

    #[test]
    fn fock_values_at_origin() {
        let w0 = wigner_analytic(&StateSpec::Fock { n: 0 }).unwrap();
        assert!((w0.eval(&PhasePoint::single(0.0, 0.0)) - 1.0 / PI).abs() < 1e-15);
        let w1 = wigner_analytic(&StateSpec::Fock { n: 1 }).unwrap();
        assert!((w1.eval(&PhasePoint::single(0.0, 0.0)) + 1.0 / PI).abs() < 1e-15);
        assert_eq!(w1.degree(), Degree::Finite(2));
    }

    #[test]
    fn tmsv_value_at_origin() {
        let w = wigner_analytic(&StateSpec::Tmsv { r: 0.5 }).unwrap();
        let v = w.eval(&PhasePoint::two_mode(0.0, 0.0, 0.0, 0.0));
        assert!((v - 1.0 / (PI * PI)).abs() < 1e-15);
        assert_eq!(w.degree(), Degree::Finite(0));
    }

    #[test]
    fn custom_states_have_no_closed_form() {
        let spec = StateSpec::GaussianCustom(GaussianState::vacuum(1));
        assert!(matches!(wigner_analytic(&spec), Err(Error::Unsupported(_))));
    }

    #[test]
    fn gaussian_peak_value() {
        let w = wigner_gaussian(&GaussianState::vacuum(1)).unwrap();
        assert!((w.eval(&PhasePoint::single(0.0, 0.0)) - 1.0 / PI).abs() < 1e-15);
        let g = crate::states::tmsv_gaussian(0.7).unwrap();
        let w = wigner_gaussian(&g).unwrap();
        let peak = 1.0 / ((2.0 * PI).powi(2) * g.determinant().sqrt());
        assert!((w.eval_slice(&[0.0; 4]) - peak).abs() < 1e-14);
    }

    #[test]
    fn synthesis_of_mixture_is_linear() {
        let lam = 0.35;
        let w = wigner_fock_synthesis(&mixed_fock01(lam, 3).unwrap());
        let w0 = wigner_analytic(&StateSpec::Fock { n: 0 }).unwrap();
        let w1 = wigner_analytic(&StateSpec::Fock { n: 1 }).unwrap();
        for (x, p) in [(0.0, 0.0), (0.4, -1.1), (1.7, 0.2)] {
            let z = [x, p];
            let expect = lam * w0.eval_slice(&z) + (1.0 - lam) * w1.eval_slice(&z);
            assert!((w.eval_slice(&z) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn synthesis_of_noon_matches_closed_form_at_a_point() {
        let rho = noon_state(2, PI, 2).unwrap();
        let a = wigner_analytic(&StateSpec::Noon { n: 2, phi: PI }).unwrap();
        let s = wigner_fock_synthesis(&rho);
        let z = [0.3, 0.5, -0.2, 0.4];
        assert!((a.eval_slice(&z) - s.eval_slice(&z)).abs() < 1e-14);
        assert_eq!(s.degree(), Degree::Finite(4));
    }

    #[test]
    fn weyl_symbol_of_vacuum_projector() {
        let rho = fock_state(0, 4).unwrap();
        for (x, p) in [(0.0, 0.0), (0.5, -0.3), (1.2, 1.0)] {
            let v = weyl_symbol_single(rho.matrix(), x, p);
            assert!((v.re - 2.0 * (-(x * x + p * p)).exp()).abs() < 1e-14);
            assert!(v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn weyl_symbol_matches_cross_kernels() {
        let c = 5;
        let (x, p) = (0.4, -0.9);
        let table = wigner_kernel_table(c, x, p);
        let env = (-(x * x + p * p)).exp();
        for m in 0..=c {
            for n in 0..=c {
                let mut op = CMatrix::zeros(c + 1, c + 1);
                op[(m, n)] = linalg::ONE;
                let v = weyl_symbol_single(&op, x, p);
                let expect = table[m * (c + 1) + n] * (2.0 * PI * env);
                assert!((v - expect).norm() < 1e-13, "({m},{n}): {v} vs {expect}");
            }
        }
    }

    #[test]
    fn weyl_symbol_rejects_entangled_operator() {
        let rho = noon_state(1, PI, 1).unwrap();
        let z = PhasePoint::two_mode(0.1, 0.0, 0.2, 0.0);
        assert!(matches!(
            weyl_symbol(rho.matrix(), &z),
            Err(Error::Unsupported(_))
        ));
        let prod = fock_state(1, 1)
            .unwrap()
            .tensor(&fock_state(0, 1).unwrap())
            .unwrap();
        let v = weyl_symbol(prod.matrix(), &z).unwrap();
        let expect = weyl_symbol_single(fock_state(1, 1).unwrap().matrix(), 0.1, 0.0)
            * weyl_symbol_single(fock_state(0, 1).unwrap().matrix(), 0.2, 0.0);
        assert!((v - expect).norm() < 1e-12);
    }

    #[test]
    fn grid_export_shape() {
        let w = wigner_analytic(&StateSpec::Fock { n: 1 }).unwrap();
        let g = sample_grid(&w, 2.0, 5).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!((g[12].0, g[12].1), (0.0, 0.0));
        assert!((g[12].2 + 1.0 / PI).abs() < 1e-15);
        let two = wigner_analytic(&StateSpec::Tmsv { r: 0.3 }).unwrap();
        assert!(sample_grid(&two, 2.0, 5).is_err());
    }
}
