//! Dense complex matrix helpers on top of nalgebra.

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Truncated annihilation operator on `|0>..|cutoff>`.
pub fn annihilation(cutoff: usize) -> CMatrix {
    let n = cutoff + 1;
    let mut a = CMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// Truncated number operator.
pub fn number(cutoff: usize) -> CMatrix {
    let n = cutoff + 1;
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            ZERO
        }
    })
}

/// Truncated position quadrature `(a + a^dag)/sqrt(2)`.
pub fn position(cutoff: usize) -> CMatrix {
    let a = annihilation(cutoff);
    (&a + a.adjoint()) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

/// Truncated momentum quadrature `(a - a^dag)/(sqrt(2) i)`.
pub fn momentum(cutoff: usize) -> CMatrix {
    let a = annihilation(cutoff);
    (&a - a.adjoint()) * Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, first factor most significant.
pub fn kron_all(factors: &[&CMatrix]) -> CMatrix {
    let mut out = CMatrix::from_element(1, 1, ONE);
    for f in factors {
        out = out.kronecker(*f);
    }
    out
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `Tr[A B]` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    assert_eq!(a.ncols(), b.nrows());
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Whether a Hermitian matrix has all eigenvalues `>= -tol`.
///
/// Decided by a real Cholesky factorisation of the embedding of `A + tol I`,
/// which exists exactly when the shifted matrix is positive definite.
pub fn is_psd(a: &CMatrix, tol: f64) -> bool {
    let n = a.nrows();
    let shifted = a + CMatrix::identity(n, n) * Complex64::new(tol, 0.0);
    Cholesky::new(real_embedding(&shifted)).is_some()
}

/// Real symmetric embedding `[[Re A, -Im A], [Im A, Re A]]` of a Hermitian
/// matrix. Every eigenvalue of `A` appears twice in the embedding.
fn real_embedding(a: &CMatrix) -> DMatrix<f64> {
    let n = a.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let v = a[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    })
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
/// nalgebra's implicit-QR solver returns NaN on some very sparse rank-one
/// density matrices, Jacobi does not.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        let diag: f64 = (0..n).map(|i| m[(i, i)] * m[(i, i)]).sum();
        if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[(i, i)]).collect(), v)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let (mut ev, _) = symmetric_eigen(&real_embedding(a));
    ev.sort_by(|x, y| x.total_cmp(y));
    ev.into_iter().step_by(2).collect()
}

/// `exp(i theta H)` for Hermitian `H`, as `cos(theta H) + i sin(theta H)`
/// evaluated on the real embedding.
pub fn expm_i_hermitian(h: &CMatrix, theta: f64) -> CMatrix {
    let n = h.nrows();
    let (vals, v) = symmetric_eigen(&real_embedding(h));
    let apply = |f: fn(f64) -> f64| {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            vals.len(),
            vals.iter().map(|&l| f(theta * l)),
        ));
        &v * d * v.transpose()
    };
    let c = apply(f64::cos);
    let s = apply(f64::sin);
    // f(H) = X + iY sits in the embedding as [[X, -Y], [Y, X]].
    CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(c[(i, j)] - s[(n + i, j)], c[(n + i, j)] + s[(i, j)])
    })
}

/// Reduced state of one mode of a two-mode operator on `(cutoff+1)^2`.
///
/// `keep = 0` traces out the second mode, `keep = 1` the first.
pub fn partial_trace_two_mode(rho: &CMatrix, cutoff: usize, keep: usize) -> CMatrix {
    let d = cutoff + 1;
    assert_eq!(rho.nrows(), d * d);
    let mut out = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = ZERO;
            for t in 0..d {
                let (r, c) = if keep == 0 {
                    (i * d + t, j * d + t)
                } else {
                    (t * d + i, t * d + j)
                };
                acc += rho[(r, c)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}
