use std::f64::consts::PI;
use std::io::Read;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wigmom::moments::{
    self, analyze, holder_chain_check, mixed_threshold, moment, sweep, Family, QuadratureSpec,
    Scheme, SweepRow, Verdict,
};
use wigmom::multicopy::{self, TruncatedOperator};
use wigmom::oracle::trace_power;
use wigmom::wigner::{sample_grid, wigner_fock_synthesis};
use wigmom::{report, sampling, StateSpec};

use crate::config::Config;
use crate::error::CliError;
use crate::{Command, FigureKind, Format, OperatorKind, QuadArgs, RangeArgs, StateArgs, TableKind};

const DEFAULT_MEMORY_LIMIT_MB: usize = 1024;
const MAX_RANGE_POINTS: usize = 100_000;

pub fn execute(command: &Command, cfg: &Config) -> Result<String, CliError> {
    match command {
        Command::Analyze {
            state,
            quad,
            cutoff,
            max_m,
        } => {
            let spec = state_spec(state, cfg)?;
            let q = quadrature(quad, cfg)?;
            let cutoff = cfg.pick(*cutoff, "cutoff")?;
            let max_m = cfg.pick(*max_m, "max_m")?.unwrap_or(3);
            let r = analyze(&spec, max_m, &q, cutoff)?;
            Ok(report::report_to_json(&r) + "\n")
        }
        Command::Table {
            which,
            quad,
            format,
        } => {
            let q = quadrature(quad, cfg)?;
            let rows = match which {
                TableKind::Table1 => sweep(Family::Noon, &[1.0, 2.0, 3.0, 4.0, 5.0], &q)?,
                TableKind::Table2 => sweep(Family::Fock, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0], &q)?,
            };
            match output_format(*format, cfg)? {
                Format::Csv => Ok(report::table_csv(&rows)),
                Format::Json => json(&rows_json(&rows)),
            }
        }
        Command::Figure {
            which,
            quad,
            range,
            format,
        } => {
            let q = quadrature(quad, cfg)?;
            let (rows, threshold) = match which {
                FigureKind::Fig1 => (sweep(Family::Noon, &[1.0, 2.0, 3.0, 4.0, 5.0], &q)?, None),
                FigureKind::Fig2 => (
                    sweep(Family::Fock, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0], &q)?,
                    None,
                ),
                FigureKind::MixedSweep => {
                    let params = param_range(range, cfg, (Some(0.0), Some(0.5), 0.01))?;
                    let rows = sweep(Family::MixedFock01, &params, &q)?;
                    (rows, Some(mixed_threshold(&q, 1e-10)?))
                }
            };
            match output_format(*format, cfg)? {
                Format::Csv => Ok(report::figure_csv(&rows, threshold)),
                Format::Json => json(&FigureJson {
                    rows: rows_json(&rows),
                    threshold,
                }),
            }
        }
        Command::Sweep {
            family,
            range,
            quad,
            format,
        } => {
            let family: Family = cfg
                .pick(family.clone(), "family")?
                .ok_or_else(|| CliError::Usage("--family is required".into()))?
                .parse()?;
            let params = param_range(range, cfg, (None, None, 1.0))?;
            let rows = sweep(family, &params, &quadrature(quad, cfg)?)?;
            match output_format(*format, cfg)? {
                Format::Csv => Ok(report::sweep_csv(&rows)),
                Format::Json => json(&rows_json(&rows)),
            }
        }
        Command::Multicopy {
            state,
            cutoff,
            alpha_order,
            memory_limit_mb,
        } => {
            let spec = state_spec(state, cfg)?;
            let cutoff = cfg.pick(*cutoff, "cutoff")?;
            let alpha_order = cfg.pick(*alpha_order, "alpha_order")?;
            let limit = cfg
                .pick(*memory_limit_mb, "memory_limit_mb")?
                .unwrap_or(DEFAULT_MEMORY_LIMIT_MB);
            json(&multicopy_report(&spec, cutoff, alpha_order, limit)?)
        }
        Command::Grid {
            state,
            cutoff,
            half_width,
            points,
        } => {
            let spec = state_spec(state, cfg)?;
            let w = moments::field_for(&spec, cfg.pick(*cutoff, "cutoff")?)?;
            if w.modes() != 1 {
                return Err(CliError::Usage(
                    "grid export needs a single-mode state".into(),
                ));
            }
            let half_width = cfg.pick(*half_width, "half_width")?.unwrap_or(4.0);
            let points = cfg.pick(*points, "points")?.unwrap_or(81);
            Ok(report::grid_csv(&sample_grid(&w, half_width, points)?))
        }
        Command::DumpOperator {
            which,
            cutoff,
            alpha_order,
            alpha_re,
            alpha_im,
        } => {
            let cutoff = cfg.pick(*cutoff, "cutoff")?.unwrap_or(4);
            let alpha_order = cfg
                .pick(*alpha_order, "alpha_order")?
                .unwrap_or(multicopy::DEFAULT_ALPHA_ORDER);
            let op = match which {
                OperatorKind::Swap => multicopy::swap_operator(cutoff)?,
                OperatorKind::SwapExponential => multicopy::swap_operator_exponential(cutoff)?,
                OperatorKind::SwapQuadrature => multicopy::swap_quadrature_form(cutoff)?,
                OperatorKind::O2 => multicopy::multicopy_observable(2, cutoff, alpha_order)?,
                OperatorKind::O3 => multicopy::multicopy_observable(3, cutoff, alpha_order)?,
                OperatorKind::Parity => {
                    multicopy::displaced_parity(&[Complex64::new(*alpha_re, *alpha_im)], cutoff)?
                }
            };
            Ok(dump(&op))
        }
        Command::Property { seed, count } => {
            let seed = cfg.pick(*seed, "seed")?.unwrap_or(0);
            let count = cfg.pick(*count, "count")?.unwrap_or(200);
            property(seed, count)
        }
        Command::Inspect { input } => {
            let text = if input.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(input)?
            };
            Ok(report::report_to_json(&report::report_from_json(&text)?) + "\n")
        }
    }
}

fn required<T>(v: Option<T>, flag: &str, state: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --state {state}")))
}

pub fn state_spec(args: &StateArgs, cfg: &Config) -> Result<StateSpec, CliError> {
    let name: String = cfg
        .pick(args.state.clone(), "state")?
        .ok_or_else(|| CliError::Usage("--state is required".into()))?;
    let n = cfg.pick(args.n, "n")?;
    let r = cfg.pick(args.r, "r")?;
    let spec = match name.as_str() {
        "fock" => StateSpec::Fock {
            n: required(n, "n", &name)?,
        },
        "vacuum" => StateSpec::Fock { n: 0 },
        "noon" => StateSpec::Noon {
            n: required(n, "n", &name)?,
            phi: cfg.pick(args.phi, "phi")?.unwrap_or(PI),
        },
        "tmsv" => StateSpec::Tmsv {
            r: required(r, "r", &name)?,
        },
        "spssv" => StateSpec::Spssv {
            r: required(r, "r", &name)?,
            parity: cfg.pick(args.parity, "parity")?.unwrap_or(0),
        },
        "mixed" | "mixed_fock01" => StateSpec::MixedFock01 {
            lambda: required(cfg.pick(args.lambda, "lambda")?, "lambda", &name)?,
        },
        other => return Err(CliError::Usage(format!("unknown state '{other}'"))),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn quadrature(args: &QuadArgs, cfg: &Config) -> Result<QuadratureSpec, CliError> {
    let scheme: Scheme = match cfg.pick(args.scheme.clone(), "scheme")? {
        Some(s) => s.parse()?,
        None => Scheme::GaussHermiteTensor,
    };
    let mut q = match scheme {
        Scheme::GaussHermiteTensor => QuadratureSpec::gauss_hermite(),
        Scheme::AdaptiveRadial => QuadratureSpec::radial(),
        Scheme::UniformGrid => QuadratureSpec {
            scheme,
            ..QuadratureSpec::gauss_hermite()
        },
    };
    q.order = cfg.pick(args.order, "order")?;
    if let Some(b) = cfg.pick(args.bounds, "bounds")? {
        q.bounds = b;
    }
    Ok(q)
}

fn output_format(flag: Option<Format>, cfg: &Config) -> Result<Format, CliError> {
    Ok(cfg.pick(flag, "format")?.unwrap_or(Format::Csv))
}

/// `from, from + step, ..., to`.
fn param_range(
    args: &RangeArgs,
    cfg: &Config,
    defaults: (Option<f64>, Option<f64>, f64),
) -> Result<Vec<f64>, CliError> {
    let from = cfg
        .pick(args.from, "from")?
        .or(defaults.0)
        .ok_or_else(|| CliError::Usage("--from is required".into()))?;
    let to = cfg
        .pick(args.to, "to")?
        .or(defaults.1)
        .ok_or_else(|| CliError::Usage("--to is required".into()))?;
    let step = cfg.pick(args.step, "step")?.unwrap_or(defaults.2);
    if step.is_nan()
        || step <= 0.0
        || from.is_nan()
        || to.is_nan()
        || to < from
        || !to.is_finite()
        || !from.is_finite()
    {
        return Err(CliError::Usage(format!(
            "bad range {from}..{to} step {step}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    if count > MAX_RANGE_POINTS {
        return Err(CliError::Usage(format!(
            "range has {count} points, limit is {MAX_RANGE_POINTS}"
        )));
    }
    // Rounding to 12 decimals keeps 3 * 0.05 printing as 0.15.
    Ok((0..count)
        .map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Usage(format!("cannot serialise output: {e}")))
}

#[derive(Debug, Serialize)]
struct RowJson {
    param: f64,
    w2: f64,
    w3: f64,
    delta: f64,
    verdict: Verdict,
}

fn rows_json(rows: &[SweepRow]) -> Vec<RowJson> {
    rows.iter()
        .map(|r| RowJson {
            param: r.param,
            w2: r.w2,
            w3: r.w3,
            delta: r.delta,
            verdict: r.verdict,
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct FigureJson {
    rows: Vec<RowJson>,
    threshold: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ProtocolJson {
    forward_is_cycle: bool,
    backward_is_inverse_cycle: bool,
    trace_cube: f64,
    prescribed_trace: f64,
}

#[derive(Debug, Serialize)]
struct MulticopyJson {
    state: String,
    cutoff: usize,
    alpha_order: usize,
    w2_copies: f64,
    w2_quadrature: f64,
    w2_deviation: f64,
    w3_copies: f64,
    w3_quadrature: f64,
    w3_deviation: f64,
    trace_rho2: f64,
    trace_rho3: f64,
    protocol: Option<ProtocolJson>,
    warnings: Vec<String>,
}

fn multicopy_report(
    spec: &StateSpec,
    cutoff: Option<usize>,
    alpha_order: Option<usize>,
    memory_limit_mb: usize,
) -> Result<MulticopyJson, CliError> {
    let cutoff = cutoff.unwrap_or_else(|| spec.natural_cutoff()).max(1);
    let rho = spec.to_fock(Some(cutoff))?;
    let exact_order = 3 * cutoff + 1;
    let alpha_order = alpha_order.unwrap_or(multicopy::DEFAULT_ALPHA_ORDER.max(exact_order));
    let mut warnings = Vec::new();
    if alpha_order < exact_order {
        warnings.push(format!(
            "alpha order {alpha_order} is below {exact_order}, O_3 is not exact"
        ));
    }

    // O_3 is a dense (cutoff+1)^3 square complex matrix.
    let side = (cutoff + 1).pow(3);
    let max_side = ((memory_limit_mb * (1 << 20)) as f64 / 16.0).sqrt() as usize;
    if side > max_side {
        return Err(wigmom::Error::SizeLimit {
            what: "three-copy operator side",
            requested: side,
            limit: max_side,
        }
        .into());
    }
    let o2 = multicopy::multicopy_observable(2, cutoff, alpha_order)?;
    let o3 = multicopy::multicopy_observable(3, cutoff, alpha_order)?;
    let w2_copies = multicopy::multicopy_expectation(&rho, &o2)?;
    let w3_copies = multicopy::multicopy_expectation(&rho, &o3)?;

    let w = wigner_fock_synthesis(&rho);
    let q = QuadratureSpec::default();
    let w2_quadrature = moment(&w, 2, &q)?;
    let w3_quadrature = moment(&w, 3, &q)?;

    let protocol = if rho.modes() == 2 {
        let p = multicopy::forward_backward_protocol(&rho, multicopy::DEFAULT_SIDE_LIMIT)?;
        Some(ProtocolJson {
            forward_is_cycle: p.forward_is_cycle,
            backward_is_inverse_cycle: p.backward_is_inverse_cycle,
            trace_cube: p.trace_cube,
            prescribed_trace: p.prescribed_trace,
        })
    } else {
        None
    };

    Ok(MulticopyJson {
        state: spec.to_string(),
        cutoff,
        alpha_order,
        w2_copies,
        w2_quadrature,
        w2_deviation: (w2_copies - w2_quadrature).abs(),
        w3_copies,
        w3_quadrature,
        w3_deviation: (w3_copies - w3_quadrature).abs(),
        trace_rho2: trace_power(&rho, 2),
        trace_rho3: trace_power(&rho, 3),
        protocol,
        warnings,
    })
}

fn dump(op: &TruncatedOperator) -> String {
    format!(
        "# side={} cutoff={}\n{}",
        op.side(),
        op.cutoff(),
        report::operator_csv(op)
    )
}

#[derive(Debug, Serialize)]
struct PropertyJson {
    seed: u64,
    count: usize,
    certified: usize,
    holder_violations: usize,
    smallest_gap: f64,
}

/// Random Gaussian states and coherent mixtures: none may be certified and
/// every Hölder-chain inequality must hold.
fn property(seed: u64, count: usize) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = QuadratureSpec::default();
    let mut certified = 0;
    let mut holder_violations = 0;
    let mut smallest_gap = f64::INFINITY;
    for i in 0..count {
        let spec = if i % 2 == 0 {
            StateSpec::GaussianCustom(sampling::random_gaussian_state(&mut rng, 1 + (i / 2) % 2)?)
        } else {
            StateSpec::FockCustom(sampling::random_coherent_mixture(&mut rng, 20)?)
        };
        let r = analyze(&spec, 3, &q, None)?;
        if r.verdict == Verdict::NegativityCertified {
            certified += 1;
        }
        smallest_gap = smallest_gap.min(r.margin - r.delta);
        let w = moments::field_for(&spec, None)?;
        let grid = if w.modes() == 1 {
            QuadratureSpec::grid(9.0, 160)
        } else {
            QuadratureSpec::grid(7.0, 40)
        };
        let d = holder_chain_check(&w, &grid)?;
        if !(d.product_bound_holds && d.interpolation_holds) {
            holder_violations += 1;
        }
    }
    let summary = PropertyJson {
        seed,
        count,
        certified,
        holder_violations,
        smallest_gap,
    };
    let text = json(&summary)?;
    if certified > 0 || holder_violations > 0 {
        return Err(CliError::PropertyViolated(text));
    }
    Ok(text)
}
