//! Multidimensional quadrature engines: Gaussian-weighted tensor Gauss-Hermite,
//! midpoint boxes, and adaptive Gauss-Kronrod on an interval.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution, KahanSum};
use crate::special::gauss_hermite;

/// Gaussian factor `exp(-(z - c)^T Q (z - c))` with `Q` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    center: Vec<f64>,
    form: DMatrix<f64>,
}

impl Envelope {
    pub fn new(center: Vec<f64>, form: DMatrix<f64>) -> Result<Self> {
        let n = center.len();
        if form.nrows() != n || form.ncols() != n {
            return Err(Error::InvalidArgument("envelope shape mismatch".into()));
        }
        if Cholesky::new(form.clone()).is_none() {
            return Err(Error::InvalidArgument(
                "envelope form is not positive definite".into(),
            ));
        }
        Ok(Self { center, form })
    }

    /// `exp(-|z|^2)` in `dim` dimensions.
    pub fn isotropic(dim: usize) -> Self {
        Self {
            center: vec![0.0; dim],
            form: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn form(&self) -> &DMatrix<f64> {
        &self.form
    }

    /// Quadratic form `(z - c)^T Q (z - c)`.
    pub fn exponent(&self, z: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            let di = z[i] - self.center[i];
            for j in 0..n {
                acc += di * self.form[(i, j)] * (z[j] - self.center[j]);
            }
        }
        acc
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        (-self.exponent(z)).exp()
    }

    /// Same centre, form multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            center: self.center.clone(),
            form: &self.form * s,
        }
    }

    /// Envelope with centre `c / s` and form `s^2 Q`, i.e. `env(s z)`.
    pub fn dilated(&self, s: f64) -> Self {
        Self {
            center: self.center.iter().map(|c| c / s).collect(),
            form: &self.form * (s * s),
        }
    }

    /// Combines two envelopes: `e1(z) e2(z) = exp(-shift) e(z)`.
    pub fn product(&self, other: &Envelope) -> (Envelope, f64) {
        let q = &self.form + &other.form;
        let c1 = DVector::from_column_slice(&self.center);
        let c2 = DVector::from_column_slice(&other.center);
        let rhs = &self.form * &c1 + &other.form * &c2;
        let chol = Cholesky::new(q.clone()).expect("sum of positive definite forms");
        let c = chol.solve(&rhs);
        let shift = c1.dot(&(&self.form * &c1)) + c2.dot(&(&other.form * &c2)) - c.dot(&(&q * &c));
        (
            Envelope {
                center: c.iter().copied().collect(),
                form: q,
            },
            shift,
        )
    }

    /// Per-axis standard deviations of the normalised density `~ env(z)`.
    pub fn widths(&self) -> Vec<f64> {
        let inv = self
            .form
            .clone()
            .try_inverse()
            .expect("positive definite envelope is invertible");
        (0..self.dim())
            .map(|i| (0.5 * inv[(i, i)]).sqrt())
            .collect()
    }
}

/// Tensor Gauss-Hermite rule mapped onto an envelope.
#[derive(Debug, Clone)]
pub struct GaussHermiteGrid {
    dim: usize,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    center: Vec<f64>,
    // z = c + M t with M = L^{-T}, Q = L L^T
    map: DMatrix<f64>,
    jacobian: f64,
}

impl GaussHermiteGrid {
    pub fn new(envelope: &Envelope, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument(
                "quadrature order must be >= 1".into(),
            ));
        }
        let chol = Cholesky::new(envelope.form.clone()).ok_or_else(|| {
            Error::InvalidArgument("envelope form is not positive definite".into())
        })?;
        let l = chol.l();
        let det_l: f64 = l.diagonal().iter().product();
        let map = l
            .transpose()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("singular envelope".into()))?;
        let (nodes, weights) = gauss_hermite(order);
        Ok(Self {
            dim: envelope.dim(),
            order,
            nodes,
            weights,
            center: envelope.center.clone(),
            map,
            jacobian: 1.0 / det_l,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn node_count(&self) -> usize {
        self.order.pow(self.dim as u32)
    }

    /// `int g(z) env(z) dz` for complex-valued `g`.
    pub fn integrate_complex<G>(&self, exec: Execution, g: G) -> Complex64
    where
        G: Fn(&[f64]) -> Complex64 + Sync + Send,
    {
        let [re, im] = self.integrate_many(exec, |z| {
            let v = g(z);
            [v.re, v.im]
        });
        Complex64::new(re, im)
    }

    /// Integrates `N` real integrands that share one evaluation per node.
    pub fn integrate_many<const N: usize, G>(&self, exec: Execution, g: G) -> [f64; N]
    where
        G: Fn(&[f64]) -> [f64; N] + Sync + Send,
    {
        let dim = self.dim;
        let n = self.order;
        // Chunk over the leading one or two axes.
        let lead = if dim >= 3 { 2 } else { 1 };
        let chunks = n.pow(lead as u32);
        let inner = n.pow((dim - lead) as u32);
        let partials = map_indexed(exec, chunks, |chunk| {
            let mut idx = vec![0usize; dim];
            let mut rest = chunk;
            for a in (0..lead).rev() {
                idx[a] = rest % n;
                rest /= n;
            }
            let mut acc = [KahanSum::new(); N];
            let mut t = vec![0.0; dim];
            let mut z = vec![0.0; dim];
            for flat in 0..inner {
                let mut rest = flat;
                for a in (lead..dim).rev() {
                    idx[a] = rest % n;
                    rest /= n;
                }
                let mut w = 1.0;
                for a in 0..dim {
                    t[a] = self.nodes[idx[a]];
                    w *= self.weights[idx[a]];
                }
                for i in 0..dim {
                    let mut acc = self.center[i];
                    for j in i..dim {
                        // L^{-T} is upper triangular
                        acc += self.map[(i, j)] * t[j];
                    }
                    z[i] = acc;
                }
                for (a, v) in acc.iter_mut().zip(g(&z)) {
                    a.add(v * w);
                }
            }
            acc.map(|a| a.value())
        });
        combine(partials, self.jacobian)
    }

    pub fn integrate<G>(&self, exec: Execution, g: G) -> f64
    where
        G: Fn(&[f64]) -> f64 + Sync + Send,
    {
        self.integrate_complex(exec, |z| Complex64::new(g(z), 0.0))
            .re
    }
}

/// Midpoint rule on the box `center +- half_width` with `points` nodes per axis.
pub fn midpoint_box<G>(exec: Execution, center: &[f64], half_width: f64, points: usize, g: G) -> f64
where
    G: Fn(&[f64]) -> f64 + Sync + Send,
{
    let [v] = midpoint_box_many(exec, center, half_width, points, |z| [g(z)]);
    v
}

/// [`midpoint_box`] for `N` integrands sharing one evaluation per cell.
pub fn midpoint_box_many<const N: usize, G>(
    exec: Execution,
    center: &[f64],
    half_width: f64,
    points: usize,
    g: G,
) -> [f64; N]
where
    G: Fn(&[f64]) -> [f64; N] + Sync + Send,
{
    let dim = center.len();
    let h = 2.0 * half_width / points as f64;
    let coord = |a: usize, i: usize| center[a] - half_width + (i as f64 + 0.5) * h;
    let lead = if dim >= 3 { 2 } else { 1 };
    let chunks = points.pow(lead as u32);
    let inner = points.pow((dim - lead) as u32);
    let partials = map_indexed(exec, chunks, |chunk| {
        let mut z = vec![0.0; dim];
        let mut rest = chunk;
        for a in (0..lead).rev() {
            z[a] = coord(a, rest % points);
            rest /= points;
        }
        let mut acc = [KahanSum::new(); N];
        for flat in 0..inner {
            let mut rest = flat;
            for a in (lead..dim).rev() {
                z[a] = coord(a, rest % points);
                rest /= points;
            }
            for (a, v) in acc.iter_mut().zip(g(&z)) {
                a.add(v);
            }
        }
        acc.map(|a| a.value())
    });
    combine(partials, h.powi(dim as i32))
}

fn combine<const N: usize>(partials: Vec<[f64; N]>, scale: f64) -> [f64; N] {
    let mut acc = [KahanSum::new(); N];
    for p in partials {
        for (a, v) in acc.iter_mut().zip(p) {
            a.add(v);
        }
    }
    acc.map(|a| a.value() * scale)
}

const GK15_XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK15_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G7_W: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = GK15_WK[7] * fc;
    let mut g = G7_W[3] * fc;
    for j in 0..7 {
        let dx = h * GK15_XK[j];
        let s = f(c - dx) + f(c + dx);
        k += GK15_WK[j] * s;
        if j % 2 == 1 {
            g += G7_W[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) on `[a, b]`; returns `(value, error estimate)`.
pub fn adaptive_gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let mut stack = vec![(a, b, 0usize)];
    let mut total = KahanSum::new();
    let mut err = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(&f, lo, hi);
        let local_tol = tol * (hi - lo) / (b - a);
        if e <= local_tol.max(1e-15 * v.abs()) || depth >= 40 {
            total.add(v);
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    (total.value(), err)
}
