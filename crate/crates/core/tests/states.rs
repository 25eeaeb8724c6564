use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use wigmom::linalg;
use wigmom::states::{
    fock_state, mixed_fock01, noon_state, spssv_min_cutoff, spssv_state, tmsv_gaussian,
    tmsv_min_cutoff, tmsv_state, FockState, GaussianState, PhasePoint, StateSpec,
};
use wigmom::Error;

fn assert_valid(rho: &FockState) {
    let m = rho.matrix();
    assert!(linalg::hermiticity_defect(m) <= 1e-12);
    assert!((linalg::trace(m) - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
    assert!(linalg::hermitian_eigenvalues(m)
        .iter()
        .all(|&e| e >= -1e-10));
}

#[test]
fn fock_projectors() {
    let f0 = fock_state(0, 5).unwrap();
    let f1 = fock_state(1, 5).unwrap();
    for (rho, n) in [(&f0, 0), (&f1, 1)] {
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == n && j == n { 1.0 } else { 0.0 };
                assert_eq!(rho.matrix()[(i, j)], Complex64::new(want, 0.0));
            }
        }
    }
    assert!((fock_state(3, 8).unwrap().purity() - 1.0).abs() < 1e-15);
    assert!(matches!(fock_state(4, 3), Err(Error::InvalidArgument(_))));
}

#[test]
fn noon_examples() {
    let rho = noon_state(1, PI, 1).unwrap();
    // basis index = n1 * 2 + n2; |1,0> -> 2, |0,1> -> 1
    let m = rho.matrix();
    assert!((m[(2, 2)].re - 0.5).abs() < 1e-15);
    assert!((m[(1, 1)].re - 0.5).abs() < 1e-15);
    assert!((m[(2, 1)].re + 0.5).abs() < 1e-15);
    assert!((m[(1, 2)].re + 0.5).abs() < 1e-15);

    let rho3 = noon_state(3, PI, 5).unwrap();
    assert!((linalg::trace(rho3.matrix()).re - 1.0).abs() < 1e-14);

    // partial trace over mode 2 by direct summation
    let rho2 = noon_state(2, 0.0, 4).unwrap();
    let d = 5;
    let mut reduced = DMatrix::<Complex64>::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                reduced[(i, j)] += rho2.matrix()[(i * d + k, j * d + k)];
            }
        }
    }
    let via_lib = rho2.reduced(0).unwrap();
    for i in 0..d {
        for j in 0..d {
            let want = if i == j && (i == 0 || i == 2) {
                0.5
            } else {
                0.0
            };
            assert!((reduced[(i, j)].re - want).abs() < 1e-15);
            assert!((via_lib.matrix()[(i, j)] - reduced[(i, j)]).norm() < 1e-15);
        }
    }
    assert!(noon_state(6, PI, 5).is_err());
}

#[test]
fn tmsv_gaussian_examples() {
    let g0 = tmsv_gaussian(0.0).unwrap();
    assert!(
        (g0.covariance() - DMatrix::identity(4, 4) * 0.5)
            .abs()
            .max()
            < 1e-15
    );
    for r in [0.1, 0.5, 1.0, 1.2] {
        let g = tmsv_gaussian(r).unwrap();
        assert!((g.determinant() - 1.0 / 16.0).abs() < 1e-12, "r={r}");
        assert!((g.purity() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn tmsv_truncation_rule() {
    for r in [0.2, 0.5, 0.8, 1.2] {
        let c = tmsv_min_cutoff(r);
        let rho = tmsv_state(r, c).unwrap();
        assert_valid(&rho);
        assert!((rho.purity() - 1.0).abs() <= 1e-6);
        assert!(matches!(
            tmsv_state(r, c - 1),
            Err(Error::CutoffTooSmall { .. })
        ));
    }
}

#[test]
fn spssv_examples() {
    let rho = spssv_state(0.4, 0, 30).unwrap();
    assert!((linalg::trace(rho.matrix()).re - 1.0).abs() < 1e-12);
    assert_valid(&rho);
    for parity in [0, 1] {
        let c = spssv_min_cutoff(0.8);
        let rho = spssv_state(0.8, parity, c).unwrap();
        assert!((rho.purity() - 1.0).abs() <= 1e-8);
    }
    assert!(spssv_state(0.4, 2, 30).is_err());
}

#[test]
fn spssv_tmsv_overlap() {
    // <tmsv|spssv> is zero: every spssv component has n1 != n2.
    let c = 30;
    let t = tmsv_state(0.4, c).unwrap();
    let s = spssv_state(0.4, 0, c).unwrap();
    let overlap = linalg::trace_product(t.matrix(), s.matrix()).re;
    assert!(overlap.abs() < 1e-15);
    // Fidelity with (a_1 + a_2)|tmsv>, normalised, built directly.
    let d = c + 1;
    let lam = 0.4f64.tanh();
    let mut ket = vec![Complex64::new(0.0, 0.0); d * d];
    for n in 1..d {
        let amp = lam.powi(n as i32) * (n as f64).sqrt();
        ket[(n - 1) * d + n] += Complex64::new(amp, 0.0);
        ket[n * d + (n - 1)] += Complex64::new(amp, 0.0);
    }
    let norm: f64 = ket.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let mut fid = Complex64::new(0.0, 0.0);
    for i in 0..d * d {
        for j in 0..d * d {
            fid += ket[i].conj() * s.matrix()[(i, j)] * ket[j];
        }
    }
    assert!((fid.re / (norm * norm) - 1.0).abs() < 1e-12);
}

#[test]
fn mixed_examples() {
    let vac = mixed_fock01(1.0, 3).unwrap();
    assert_eq!(vac, fock_state(0, 3).unwrap());
    let one = mixed_fock01(0.0, 3).unwrap();
    assert_eq!(one, fock_state(1, 3).unwrap());
    assert!((mixed_fock01(0.5, 2).unwrap().purity() - 0.5).abs() < 1e-15);
    assert!(mixed_fock01(1.5, 3).is_err());
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(PhasePoint::new(vec![0.0, 1.0, 2.0]).is_err());
    assert!(PhasePoint::new(vec![0.0, f64::NAN]).is_err());
    let bad = DMatrix::from_diagonal_element(2, 2, 0.1);
    assert!(GaussianState::new(vec![0.0, 0.0], bad).is_err());
    let asym = DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.0, 0.5]);
    assert!(GaussianState::new(vec![0.0, 0.0], asym).is_err());
    let not_psd = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(1.2, 0.0),
        Complex64::new(-0.2, 0.0),
    ]));
    assert!(FockState::from_matrix(1, 1, not_psd).is_err());
    assert!(StateSpec::Tmsv { r: -1.0 }.validate().is_err());
    assert!(StateSpec::Noon { n: 0, phi: 0.0 }.validate().is_err());
    assert!(StateSpec::Noon { n: 1, phi: 7.0 }.validate().is_err());
    assert!(StateSpec::MixedFock01 { lambda: -0.1 }.validate().is_err());
}

#[test]
fn vacuum_covariance_is_half_identity() {
    let g = GaussianState::vacuum(2);
    assert_eq!(g.covariance(), &(DMatrix::identity(4, 4) * 0.5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mixture_purity(lambda in 0.0f64..=1.0) {
        let rho = mixed_fock01(lambda, 3).unwrap();
        assert_valid(&rho);
        let want = lambda * lambda + (1.0 - lambda) * (1.0 - lambda);
        prop_assert!((rho.purity() - want).abs() < 1e-14);
    }

    #[test]
    fn noon_is_pure(n in 1usize..6, phi in 0.0f64..(2.0 * PI)) {
        let rho = noon_state(n, phi, n + 1).unwrap();
        assert_valid(&rho);
        prop_assert!((rho.purity() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn squeezed_constructors_are_valid(r in 0.05f64..1.0, parity in 0u8..2) {
        let t = tmsv_state(r, tmsv_min_cutoff(r)).unwrap();
        assert_valid(&t);
        let s = spssv_state(r, parity, spssv_min_cutoff(r)).unwrap();
        assert_valid(&s);
        prop_assert!((s.purity() - 1.0).abs() <= 1e-8);
        let g = tmsv_gaussian(r).unwrap();
        prop_assert!((g.determinant() - 1.0 / 16.0).abs() < 1e-10);
    }
}
