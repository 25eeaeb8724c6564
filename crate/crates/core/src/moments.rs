//! W-moments `w_m = int W^m`, the `w_2^2 > w_3` negativity test, sweeps and
//! the Hölder-chain diagnostics.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quadrature::{
    adaptive_gauss_kronrod, midpoint_box, midpoint_box_many, GaussHermiteGrid,
};
use crate::states::{GaussianState, StateSpec};
use crate::wigner::{self, EvaluatorPath, WignerField};

/// Smallest margin `Delta` must exceed before negativity is certified.
pub const MIN_MARGIN: f64 = 1e-9;

/// Order used when a field has no finite polynomial degree.
pub const UNBOUNDED_ORDER: usize = 48;

/// Largest per-axis point count for uniform grids in four dimensions.
pub const GRID_LIMIT_4D: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    GaussHermiteTensor,
    AdaptiveRadial,
    UniformGrid,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::GaussHermiteTensor => "gauss_hermite_tensor",
            Scheme::AdaptiveRadial => "adaptive_radial",
            Scheme::UniformGrid => "uniform_grid",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss_hermite_tensor" | "gh" => Ok(Scheme::GaussHermiteTensor),
            "adaptive_radial" | "radial" => Ok(Scheme::AdaptiveRadial),
            "uniform_grid" | "grid" => Ok(Scheme::UniformGrid),
            _ => Err(Error::Parse(format!("unknown quadrature scheme '{s}'"))),
        }
    }
}

/// How a moment integral is discretised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Nodes per axis. `None` selects the exactness order (Gauss-Hermite),
    /// 64 or 160 points (grid); ignored by the radial scheme.
    pub order: Option<usize>,
    /// Square root of the factor applied to the envelope form before it is
    /// used as the Gauss-Hermite weight. `None` means `sqrt(m)`.
    pub envelope_scale: Option<f64>,
    /// Box half-width for the uniform grid.
    pub bounds: f64,
    pub exec: Execution,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::gauss_hermite()
    }
}

impl QuadratureSpec {
    pub fn gauss_hermite() -> Self {
        Self {
            scheme: Scheme::GaussHermiteTensor,
            order: None,
            envelope_scale: None,
            bounds: 7.0,
            exec: Execution::default(),
        }
    }

    pub fn radial() -> Self {
        Self {
            scheme: Scheme::AdaptiveRadial,
            ..Self::gauss_hermite()
        }
    }

    pub fn grid(half_width: f64, points: usize) -> Self {
        Self {
            scheme: Scheme::UniformGrid,
            order: Some(points),
            bounds: half_width,
            ..Self::gauss_hermite()
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = Some(order);
        self
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }
}

/// Gauss-Hermite order that integrates `P^m` exactly for a prefactor of degree `d`.
pub fn exactness_order(degree: usize, m: usize) -> usize {
    (m * degree).div_ceil(2) + 1
}

/// One moment with its discretisation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    pub value: f64,
    pub order: usize,
    pub est_error: f64,
    pub warnings: Vec<String>,
}

/// Total tensor nodes an automatically planned Gauss-Hermite rule may use.
pub const GH_NODE_BUDGET: usize = 1 << 22;

fn max_order_per_axis(dim: usize) -> usize {
    let mut n = 1;
    while (n + 1usize)
        .checked_pow(dim as u32)
        .is_some_and(|t| t <= GH_NODE_BUDGET)
    {
        n += 1;
    }
    n
}

fn planned_order(w: &WignerField, m: usize, q: &QuadratureSpec) -> (usize, Vec<String>) {
    let mut warnings = Vec::new();
    let order = match (q.scheme, q.order) {
        (Scheme::UniformGrid, Some(n)) => n,
        (Scheme::UniformGrid, None) => {
            if w.modes() == 1 {
                160
            } else {
                64
            }
        }
        (Scheme::AdaptiveRadial, _) => 15,
        (Scheme::GaussHermiteTensor, order) => {
            let need = w.degree().finite().map(|d| exactness_order(d, m));
            match (order, need) {
                (Some(n), Some(need)) => {
                    if n < need {
                        warnings.push(format!(
                            "order {n} is below the exactness order {need} for m={m}"
                        ));
                    }
                    n
                }
                (Some(n), None) => n,
                (None, Some(need)) => {
                    let cap = max_order_per_axis(w.dim());
                    if need > cap {
                        warnings.push(format!(
                            "exactness order {need} for m={m} exceeds the node budget, using {cap}"
                        ));
                    }
                    need.min(cap)
                }
                (None, None) => UNBOUNDED_ORDER,
            }
        }
    };
    (order, warnings)
}

fn gauss_hermite_power(w: &WignerField, m: usize, order: usize, q: &QuadratureSpec) -> Result<f64> {
    let s2 = q.envelope_scale.map(|s| s * s).unwrap_or(m as f64);
    let env = w.envelope();
    let grid = GaussHermiteGrid::new(&env.scaled(s2), order)?;
    let rest = m as f64 - s2;
    let mi = m as i32;
    Ok(grid.integrate(q.exec, |z| {
        let p = w.prefactor(z).powi(mi);
        if rest == 0.0 {
            p
        } else {
            p * (-rest * env.exponent(z)).exp()
        }
    }))
}

fn check_grid(w: &WignerField, points: usize) -> Result<()> {
    if points < 16 {
        return Err(Error::InvalidArgument(
            "uniform grid needs >= 16 points per axis".into(),
        ));
    }
    if w.modes() >= 2 && points > GRID_LIMIT_4D {
        return Err(Error::SizeLimit {
            what: "grid points per axis",
            requested: points,
            limit: GRID_LIMIT_4D,
        });
    }
    Ok(())
}

fn grid_power(
    w: &WignerField,
    m: usize,
    half_width: f64,
    points: usize,
    exec: Execution,
) -> Result<f64> {
    check_grid(w, points)?;
    if !(half_width > 0.0) {
        return Err(Error::InvalidArgument(
            "grid half-width must be positive".into(),
        ));
    }
    let mi = m as i32;
    Ok(midpoint_box(
        exec,
        w.envelope().center(),
        half_width,
        points,
        |z| w.eval_slice(z).powi(mi),
    ))
}

fn radial_extent(w: &WignerField, p: f64, s: f64) -> f64 {
    let d = w.degree().finite().unwrap_or(40) as f64;
    // u^(p d / 2) exp(-p s u) is below 1e-30 of its peak well before this.
    (p * d + 140.0) / (p * s)
}

/// `int |W|^p` (or `int W^m` with `signed`) for a radial field, in `u = x^2 + p^2`.
fn radial_power(w: &WignerField, p: f64, signed: bool) -> Result<(f64, f64)> {
    let (profile, s) = w.radial_profile().ok_or_else(|| {
        Error::Unsupported("adaptive_radial needs a rotationally symmetric field".into())
    })?;
    let upper = radial_extent(w, p, s);
    let (v, e) = adaptive_gauss_kronrod(
        |u| {
            let r = profile(u);
            let base = if signed {
                r.powi(p as i32)
            } else {
                r.abs().powf(p)
            };
            base * (-p * s * u).exp()
        },
        0.0,
        upper,
        1e-15,
    );
    Ok((PI * v, PI * e))
}

/// `w_m = int W^m` over all `2k` phase-space axes, with metadata.
pub fn moment_estimate(w: &WignerField, m: usize, q: &QuadratureSpec) -> Result<MomentEstimate> {
    if m == 0 {
        return Err(Error::InvalidArgument("moment order must be >= 1".into()));
    }
    let (order, warnings) = planned_order(w, m, q);
    let (value, est_error) = match q.scheme {
        Scheme::GaussHermiteTensor => {
            let a = gauss_hermite_power(w, m, order, q)?;
            // Past the node budget, compare against a coarser rule instead.
            let check = if 2 * order <= max_order_per_axis(w.dim()) {
                2 * order
            } else {
                (order - order / 4).max(1)
            };
            let b = gauss_hermite_power(w, m, check, q)?;
            (a, (a - b).abs())
        }
        Scheme::AdaptiveRadial => radial_power(w, m as f64, true)?,
        Scheme::UniformGrid => {
            let a = grid_power(w, m, q.bounds, order, q.exec)?;
            // Doubling a four-dimensional grid is too costly, compare with the
            // half-resolution grid instead (a more pessimistic estimate).
            let b = grid_power(w, m, q.bounds, (order / 2).max(16), q.exec)?;
            (a, (a - b).abs())
        }
    };
    Ok(MomentEstimate {
        value,
        order,
        est_error,
        warnings,
    })
}

/// `w_m = int W^m` at the planned order.
pub fn moment(w: &WignerField, m: usize, q: &QuadratureSpec) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("moment order must be >= 1".into()));
    }
    let (order, _) = planned_order(w, m, q);
    match q.scheme {
        Scheme::GaussHermiteTensor => gauss_hermite_power(w, m, order, q),
        Scheme::AdaptiveRadial => radial_power(w, m as f64, true).map(|(v, _)| v),
        Scheme::UniformGrid => grid_power(w, m, q.bounds, order, q.exec),
    }
}

/// `w_m = ((2 pi)^k sqrt(det sigma))^(1-m) m^(-k)` for a Gaussian state.
pub fn moment_gaussian_closed_form(g: &GaussianState, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("moment order must be >= 1".into()));
    }
    let det = g.determinant();
    if !(det > 1e-300) {
        return Err(Error::DegenerateCovariance(det));
    }
    let k = g.modes() as i32;
    let peak = (2.0 * PI).powi(k) * det.sqrt();
    Ok(peak.powf(1.0 - m as f64) / (m as f64).powi(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NegativityCertified,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NegativityCertified => "NegativityCertified",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "NegativityCertified" => Ok(Verdict::NegativityCertified),
            "Inconclusive" => Ok(Verdict::Inconclusive),
            _ => Err(Error::Parse(format!("unknown verdict '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Criterion {
    pub delta: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

/// `Delta = w_2^2 - w_3`, certified only when it exceeds `margin`
/// (never below [`MIN_MARGIN`]).
pub fn criterion_with_margin(w2: f64, w3: f64, margin: f64) -> Criterion {
    let margin = margin.max(MIN_MARGIN);
    let delta = w2 * w2 - w3;
    let verdict = if delta > margin {
        Verdict::NegativityCertified
    } else {
        Verdict::Inconclusive
    };
    Criterion {
        delta,
        margin,
        verdict,
    }
}

pub fn criterion(w2: f64, w3: f64) -> Criterion {
    criterion_with_margin(w2, w3, MIN_MARGIN)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSummary {
    pub scheme: Scheme,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub state: String,
    pub k: usize,
    pub cutoff: Option<usize>,
    pub path: EvaluatorPath,
    pub quadrature: QuadratureSummary,
    pub w: BTreeMap<usize, f64>,
    pub delta: f64,
    pub verdict: Verdict,
    /// Error budget of `delta` from order doubling.
    pub est_error: f64,
    pub margin: f64,
    pub warnings: Vec<String>,
}

impl MomentReport {
    pub fn moment(&self, m: usize) -> f64 {
        self.w[&m]
    }
}

/// Field for `spec` along the preferred path: analytic, then Gaussian, then
/// Fock synthesis at `cutoff` (or the natural cutoff).
pub fn field_for(spec: &StateSpec, cutoff: Option<usize>) -> Result<WignerField> {
    if cutoff.is_none() {
        match wigner::wigner_analytic(spec) {
            Ok(w) => return Ok(w),
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
        if let Some(g) = spec.to_gaussian() {
            return wigner::wigner_gaussian(&g);
        }
    }
    Ok(wigner::wigner_fock_synthesis(&spec.to_fock(cutoff)?))
}

/// Computes `w_1..w_max_m` and the verdict for a state.
///
/// With `cutoff = Some(c)` the state is synthesised from its Fock matrix at
/// that cutoff instead of using a closed form.
pub fn analyze(
    spec: &StateSpec,
    max_m: usize,
    q: &QuadratureSpec,
    cutoff: Option<usize>,
) -> Result<MomentReport> {
    if max_m < 3 {
        return Err(Error::InvalidArgument("analyze needs max_m >= 3".into()));
    }
    let w = field_for(spec, cutoff)?;
    let mut moments = BTreeMap::new();
    let mut errors = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut order = 0;
    for m in 1..=max_m {
        let est = moment_estimate(&w, m, q)?;
        order = order.max(est.order);
        moments.insert(m, est.value);
        errors.insert(m, est.est_error);
        warnings.extend(est.warnings);
    }
    let (w2, w3) = (moments[&2], moments[&3]);
    let est_error = 2.0 * w2.abs() * errors[&2] + errors[&3];
    let c = criterion_with_margin(w2, w3, 3.0 * est_error);
    let cutoff = match spec {
        StateSpec::GaussianCustom(_) => cutoff,
        _ => Some(cutoff.unwrap_or_else(|| spec.natural_cutoff())),
    };
    Ok(MomentReport {
        state: spec.to_string(),
        k: w.modes(),
        cutoff,
        path: w.path(),
        quadrature: QuadratureSummary {
            scheme: q.scheme,
            order,
        },
        w: moments,
        delta: c.delta,
        verdict: c.verdict,
        est_error,
        margin: c.margin,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Noon,
    Fock,
    MixedFock01,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noon" => Ok(Family::Noon),
            "fock" => Ok(Family::Fock),
            "mixed" | "mixed_fock01" => Ok(Family::MixedFock01),
            _ => Err(Error::Parse(format!("unknown sweep family '{s}'"))),
        }
    }
}

impl Family {
    pub fn spec(self, param: f64) -> Result<StateSpec> {
        let as_count = |p: f64| {
            if p >= 0.0 && p.fract() == 0.0 {
                Ok(p as usize)
            } else {
                Err(Error::InvalidArgument(format!(
                    "photon number {p} is not a nonnegative integer"
                )))
            }
        };
        let spec = match self {
            Family::Noon => StateSpec::Noon {
                n: as_count(param)?,
                phi: PI,
            },
            Family::Fock => StateSpec::Fock {
                n: as_count(param)?,
            },
            Family::MixedFock01 => StateSpec::MixedFock01 { lambda: param },
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub w2: f64,
    pub w3: f64,
    pub delta: f64,
    pub verdict: Verdict,
}

pub fn sweep(family: Family, params: &[f64], q: &QuadratureSpec) -> Result<Vec<SweepRow>> {
    params
        .iter()
        .map(|&param| {
            let r = analyze(&family.spec(param)?, 3, q, None)?;
            Ok(SweepRow {
                param,
                w2: r.moment(2),
                w3: r.moment(3),
                delta: r.delta,
                verdict: r.verdict,
            })
        })
        .collect()
}

/// `Delta(lambda)` for the vacuum/single-photon mixture.
pub fn mixed_delta(lambda: f64, q: &QuadratureSpec) -> Result<f64> {
    let w = wigner::wigner_analytic(&StateSpec::MixedFock01 { lambda })?;
    Ok(criterion(moment(&w, 2, q)?, moment(&w, 3, q)?).delta)
}

/// Bisection for the `lambda` at which `Delta` of the mixture changes sign.
pub fn mixed_threshold(q: &QuadratureSpec, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 0.5);
    let (dlo, dhi) = (mixed_delta(lo, q)?, mixed_delta(hi, q)?);
    if !(dlo > 0.0 && dhi < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Delta does not change sign on [0, 0.5] ({dlo:e}, {dhi:e})"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mixed_delta(mid, q)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Norms entering the Hölder chain of the negativity theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderDiagnostics {
    pub l1: f64,
    pub l3_2: f64,
    pub l2: f64,
    pub l3: f64,
    /// `||W W||_1 <= ||W||_3 ||W||_{3/2}`
    pub product_bound_holds: bool,
    /// `||W||_{3/2} <= ||W||_2^{2/3} ||W||_1^{1/3}`
    pub interpolation_holds: bool,
    /// `||W||_1 = 1` to 1e-6, i.e. no detectable negative part.
    pub nonnegative: bool,
}

/// Evaluates the Hölder chain on `|W|`.
///
/// Gauss-Hermite and grid schemes use one discrete positive measure for all
/// four norms, so both inequalities hold for the discrete sums themselves.
/// The radial scheme integrates each norm separately and allows a 1e-9
/// relative slack.
pub fn holder_chain_check(w: &WignerField, q: &QuadratureSpec) -> Result<HolderDiagnostics> {
    let powers = [1.0, 1.5, 2.0, 3.0];
    let (sums, slack): ([f64; 4], f64) = match q.scheme {
        Scheme::AdaptiveRadial => {
            let mut s = [0.0; 4];
            for (i, &p) in powers.iter().enumerate() {
                s[i] = radial_power(w, p, false)?.0;
            }
            (s, 1e-9)
        }
        Scheme::GaussHermiteTensor => {
            let order = q.order.unwrap_or(if w.modes() == 1 { 200 } else { 40 });
            let env = w.envelope();
            let grid = GaussHermiteGrid::new(env, order)?;
            let s = grid.integrate_many(q.exec, |z| {
                let a = w.prefactor(z).abs();
                let e = env.exponent(z);
                powers.map(|p| a.powf(p) * (-(p - 1.0) * e).exp())
            });
            (s, 1e-12)
        }
        Scheme::UniformGrid => {
            let points = q.order.unwrap_or(if w.modes() == 1 { 160 } else { 64 });
            check_grid(w, points)?;
            let s = midpoint_box_many(q.exec, w.envelope().center(), q.bounds, points, |z| {
                let a = w.eval_slice(z).abs();
                [a, a * a.sqrt(), a * a, a * a * a]
            });
            (s, 1e-12)
        }
    };
    let l1 = sums[0];
    let l3_2 = sums[1].powf(2.0 / 3.0);
    let l2 = sums[2].sqrt();
    let l3 = sums[3].cbrt();
    let lhs = sums[2];
    Ok(HolderDiagnostics {
        l1,
        l3_2,
        l2,
        l3,
        product_bound_holds: lhs <= l3 * l3_2 * (1.0 + slack),
        interpolation_holds: l3_2 <= l2.powf(2.0 / 3.0) * l1.cbrt() * (1.0 + slack),
        nonnegative: (l1 - 1.0).abs() <= 1e-6,
    })
}
