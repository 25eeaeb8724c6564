//! Special functions and one-dimensional Gauss rules.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

const LN_FACTORIAL_TABLE: usize = 512;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut acc = 0.0;
        t.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    let table = ln_factorial_table();
    if n < table.len() {
        return table[n];
    }
    let mut acc = table[table.len() - 1];
    for k in table.len()..=n {
        acc += (k as f64).ln();
    }
    acc
}

/// Laguerre polynomial `L_n(t)`.
pub fn laguerre(n: usize, t: f64) -> f64 {
    assoc_laguerre(n, 0, t)
}

/// Associated Laguerre polynomial `L_n^{(alpha)}(t)` by forward recurrence.
pub fn assoc_laguerre(n: usize, alpha: usize, t: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - t;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - t) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Nodes and weights of the `n`-point Gauss-Hermite rule for weight `exp(-t^2)`.
///
/// Newton iteration on the orthonormal Hermite recurrence; nodes are returned in
/// increasing order.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Hermite order must be at least 1");
    let pim4 = PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    x.reverse();
    w.reverse();
    (x, w)
}

/// Nodes and weights of the `n`-point Gauss-Laguerre rule for weight `exp(-t)` on `[0, inf)`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Laguerre order must be at least 1");
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - x[i - 2])
            }
        };
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..200 {
            let mut p1 = 1.0;
            p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            pp = (nf * p1 - nf * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        w[i] = -1.0 / (pp * nf * p2);
    }
    (x, w)
}

/// Eigenfunctions `psi_0..=psi_nmax` at real `x`, by the three-term recurrence
/// started from `psi_0 = pi^(-1/4) exp(-x^2/2)`.
pub fn hermite_functions(nmax: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(nmax + 1);
    h.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if nmax >= 1 {
        h.push(x * 2f64.sqrt() * h[0]);
    }
    for n in 1..nmax {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * h[n] - h[n - 1] * (nf / (nf + 1.0)).sqrt();
        h.push(next);
    }
    h
}

/// Harmonic-oscillator eigenfunction `psi_n(x)` for real `x`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n, x)[n]
}

/// Polynomial parts of the single-mode cross-Wigner kernels.
///
/// Returns a row-major `(nmax+1)^2` table whose `(m, n)` entry is
/// `K_mn(x, p)`, where the Wigner function of `|m><n|` is
/// `K_mn(x, p) exp(-(x^2 + p^2))`. For `m >= n`
///
/// `K_mn = (-1)^n / pi * sqrt(n!/m!) * (sqrt(2) (x - i p))^(m-n) * L_n^(m-n)(2 (x^2+p^2))`
///
/// and `K_nm = conj(K_mn)`.
pub fn wigner_kernel_table(nmax: usize, x: f64, p: f64) -> Vec<Complex64> {
    let dim = nmax + 1;
    let mut table = vec![Complex64::new(0.0, 0.0); dim * dim];
    let t = 2.0 * (x * x + p * p);
    let zbar = Complex64::new(x, -p) * 2f64.sqrt();
    let mut zpow = Complex64::new(1.0, 0.0);
    for d in 0..dim {
        let a = d as f64;
        // L_n^(d)(t) for n = 0..dim-d by recurrence in n.
        let mut prev = 0.0;
        let mut cur = 1.0;
        for n in 0..dim - d {
            if n == 1 {
                prev = cur;
                cur = 1.0 + a - t;
            } else if n > 1 {
                let kf = (n - 1) as f64;
                let next = ((2.0 * kf + 1.0 + a - t) * cur - (kf + a) * prev) / (kf + 1.0);
                prev = cur;
                cur = next;
            }
            let m = n + d;
            let norm = (0.5 * (ln_factorial(n) - ln_factorial(m))).exp();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let k = zpow * (sign * norm * cur / PI);
            table[m * dim + n] = k;
            table[n * dim + m] = k.conj();
        }
        zpow *= zbar;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_low_orders() {
        let t = 0.7;
        assert_eq!(laguerre(0, t), 1.0);
        assert!((laguerre(1, t) - (1.0 - t)).abs() < 1e-15);
        assert!((laguerre(2, t) - (t * t - 4.0 * t + 2.0) / 2.0).abs() < 1e-15);
        // L_2^(1)(t) = (t^2 - 6t + 6)/2
        assert!((assoc_laguerre(2, 1, t) - (t * t - 6.0 * t + 6.0) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_hermite_integrates_even_moments() {
        for n in [1usize, 2, 5, 10, 40, 120] {
            let (x, w) = gauss_hermite(n);
            let total: f64 = w.iter().sum();
            assert!((total - PI.sqrt()).abs() < 1e-12, "order {n}: {total}");
            if n >= 3 {
                // int t^4 e^{-t^2} = 3 sqrt(pi) / 4
                let m4: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(4)).sum();
                assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-12, "order {n}: {m4}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn gauss_laguerre_integrates_polynomials() {
        for n in [1usize, 3, 8, 30, 90] {
            let (x, w) = gauss_laguerre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "order {n}");
            let deg = (2 * n - 1).min(12) as i32;
            let mom: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(deg)).sum();
            let exact = (ln_factorial(deg as usize)).exp();
            assert!(
                (mom / exact - 1.0).abs() < 1e-11,
                "order {n}: {mom} vs {exact}"
            );
        }
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let (x, w) = gauss_hermite(40);
        for a in 0..6 {
            for b in 0..6 {
                let s: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(&t, &wt)| {
                        let h = hermite_functions(6, t);
                        wt * (t * t).exp() * h[a] * h[b]
                    })
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vacuum_and_single_photon_kernels() {
        let (x, p) = (0.3, -0.4);
        let t = wigner_kernel_table(2, x, p);
        assert!((t[0].re - 1.0 / PI).abs() < 1e-15);
        let r2 = x * x + p * p;
        assert!((t[4].re - (2.0 * r2 - 1.0) / PI).abs() < 1e-14);
        assert!(t[4].im.abs() < 1e-15);
        // K_10 = sqrt(2)(x - i p)/pi
        let k10 = Complex64::new(x, -p) * 2f64.sqrt() / PI;
        assert!((t[3] - k10).norm() < 1e-15);
        assert!((t[1] - k10.conj()).norm() < 1e-15);
    }
}
