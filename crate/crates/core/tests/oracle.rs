use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use wigmom::exec::Execution;
use wigmom::moments::{moment, QuadratureSpec};
use wigmom::oracle::{
    fock_moment_rational, mixed_delta_closed_form, mixed_radial_moment,
    mixed_threshold_closed_form, radial_closed_form_moment, riemann_moment, trace_power, GridSpec,
};
use wigmom::states::{mixed_fock01, noon_state, StateSpec};
use wigmom::wigner::wigner_analytic;
use wigmom::Error;

const EXEC: Execution = Execution::Parallel;

fn field(spec: StateSpec) -> wigmom::wigner::WignerField {
    wigner_analytic(&spec).unwrap()
}

#[test]
fn riemann_examples() {
    let g = GridSpec::new(6.0, 160).unwrap();
    let w2 = riemann_moment(&field(StateSpec::Fock { n: 0 }), 2, &g, EXEC).unwrap();
    assert!((w2 - 1.0 / (2.0 * PI)).abs() < 1e-5);

    let g1 = GridSpec::default_for(1);
    let w3 = riemann_moment(&field(StateSpec::Fock { n: 5 }), 3, &g1, EXEC).unwrap();
    assert!((w3 - 0.002222).abs() < 1e-5, "{w3}");

    let g2 = GridSpec::default_for(2);
    let noon = riemann_moment(&field(StateSpec::Noon { n: 1, phi: PI }), 3, &g2, EXEC).unwrap();
    assert!((noon - 1.26741e-4).abs() < 5e-8, "{noon}");
}

#[test]
fn grid_spec_validation() {
    assert!(GridSpec::new(0.0, 64).is_err());
    assert!(GridSpec::new(f64::INFINITY, 64).is_err());
    assert!(GridSpec::new(6.0, 15).is_err());
    let w = field(StateSpec::Tmsv { r: 0.3 });
    let big = GridSpec {
        half_width: 6.0,
        points_per_axis: 201,
    };
    assert!(matches!(
        riemann_moment(&w, 2, &big, EXEC),
        Err(Error::SizeLimit { .. })
    ));
}

#[test]
fn radial_closed_form_examples() {
    let vac = radial_closed_form_moment(&StateSpec::Fock { n: 0 }, 3).unwrap();
    assert!((vac - 1.0 / (3.0 * PI * PI)).abs() < 1e-16);
    assert!((vac - 0.033774).abs() < 1e-6);
    let one = radial_closed_form_moment(&StateSpec::Fock { n: 1 }, 3).unwrap();
    assert!((one - 0.003753).abs() < 1e-6);
    // int (2u - 1)^3 e^{-3u} du = 1/27
    let exact = fock_moment_rational(1, 3).unwrap();
    assert_eq!(exact, BigRational::new(1.into(), 27.into()));
    assert!((exact.to_f64().unwrap() / (PI * PI) - one).abs() < 1e-17);

    assert!(mixed_delta_closed_form(0.30) > 0.0);
    assert!(mixed_delta_closed_form(0.32) < 0.0);
    let star = mixed_threshold_closed_form(1e-12);
    assert!((star - 0.3092337).abs() < 1e-7);

    assert!(radial_closed_form_moment(&StateSpec::Tmsv { r: 0.3 }, 2).is_err());
    assert!(radial_closed_form_moment(&StateSpec::Fock { n: 0 }, 0).is_err());
    assert!(fock_moment_rational(7, 2).is_err());
}

#[test]
fn mixed_closed_form_endpoints() {
    for m in 1..=4 {
        let vac = radial_closed_form_moment(&StateSpec::Fock { n: 0 }, m).unwrap();
        let one = radial_closed_form_moment(&StateSpec::Fock { n: 1 }, m).unwrap();
        assert!((mixed_radial_moment(1.0, m) - vac).abs() < 1e-15);
        assert!((mixed_radial_moment(0.0, m) - one).abs() < 1e-15);
    }
}

#[test]
fn radial_closed_form_matches_numerical_paths() {
    let mut specs: Vec<StateSpec> = (0..=9).map(|n| StateSpec::Fock { n }).collect();
    specs.extend([0.0, 0.25, 0.5, 0.9].map(|lambda| StateSpec::MixedFock01 { lambda }));
    let grid = GridSpec::new(9.0, 400).unwrap();
    for spec in specs {
        let w = field(spec.clone());
        for m in 1..=3 {
            let exact = radial_closed_form_moment(&spec, m).unwrap();
            let gh = moment(&w, m, &QuadratureSpec::default()).unwrap();
            let radial = moment(&w, m, &QuadratureSpec::radial()).unwrap();
            assert!((exact - gh).abs() <= 1e-8, "{spec} m={m}: {exact} vs {gh}");
            assert!(
                (exact - radial).abs() <= 1e-8,
                "{spec} m={m}: {exact} vs {radial}"
            );
            let riemann = riemann_moment(&w, m, &grid, EXEC).unwrap();
            assert!(
                (exact - riemann).abs() <= 1e-8,
                "{spec} m={m}: {exact} vs {riemann}"
            );
        }
    }
}

#[test]
fn riemann_tracks_gauss_hermite() {
    let mut specs: Vec<StateSpec> = (0..=5).map(|n| StateSpec::Fock { n }).collect();
    specs.extend([0.0, 0.3, 1.0].map(|lambda| StateSpec::MixedFock01 { lambda }));
    specs.push(StateSpec::Noon { n: 2, phi: PI });
    specs.push(StateSpec::Tmsv { r: 0.5 });
    specs.push(StateSpec::Spssv { r: 0.4, parity: 1 });
    for spec in specs {
        let w = field(spec.clone());
        let grid = GridSpec::default_for(w.modes());
        for m in 1..=3 {
            let a = moment(&w, m, &QuadratureSpec::default()).unwrap();
            let b = riemann_moment(&w, m, &grid, EXEC).unwrap();
            assert!((a - b).abs() <= 1e-4 * a.abs(), "{spec} m={m}: {a} vs {b}");
        }
    }
}

#[test]
fn trace_power_examples() {
    let mixed = mixed_fock01(0.3, 3).unwrap();
    assert!((trace_power(&mixed, 2) - 0.58).abs() < 1e-15);
    assert!((trace_power(&mixed, 3) - 0.37).abs() < 1e-15);
    let noon = noon_state(3, 0.7, 4).unwrap();
    for m in 1..=4 {
        assert!((trace_power(&noon, m) - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trace_power_of_mixture(lambda in 0.0f64..=1.0, m in 1usize..6) {
        let rho = mixed_fock01(lambda, 2).unwrap();
        let want = lambda.powi(m as i32) + (1.0 - lambda).powi(m as i32);
        prop_assert!((trace_power(&rho, m) - want).abs() < 1e-14);
    }

    #[test]
    fn mixed_closed_form_matches_quadrature(lambda in 0.0f64..=1.0, m in 1usize..5) {
        let w = field(StateSpec::MixedFock01 { lambda });
        let gh = moment(&w, m, &QuadratureSpec::default()).unwrap();
        prop_assert!((mixed_radial_moment(lambda, m) - gh).abs() < 1e-12);
    }

    #[test]
    fn threshold_separates_signs(lambda in 0.0f64..0.5) {
        let star = mixed_threshold_closed_form(1e-12);
        prop_assume!((lambda - star).abs() > 1e-9);
        prop_assert_eq!(mixed_delta_closed_form(lambda) > 0.0, lambda < star);
    }
}
