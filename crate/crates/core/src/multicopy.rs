//! Multi-copy observables: the mode SWAP, displaced parity operators, the
//! copy observables `O_m` with `Tr[rho^{(x)m} O_m] = w_m`, and the
//! forward/backward adjacent-SWAP protocol on three copies.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, sum_indexed, Execution, KahanSum};
use crate::linalg::{self, CMatrix};
use crate::special::{gauss_hermite, wigner_kernel_table};
use crate::states::FockState;

/// Default Gauss-Hermite order per axis for the `alpha` integral.
pub const DEFAULT_ALPHA_ORDER: usize = 40;

/// Default ceiling on the side of a three-copy, two-mode operator.
pub const DEFAULT_SIDE_LIMIT: usize = 1 << 22;

/// Operator on `modes` truncated modes, each spanning `|0>..|cutoff>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    modes: usize,
    cutoff: usize,
    matrix: CMatrix,
}

impl TruncatedOperator {
    pub fn new(modes: usize, cutoff: usize, matrix: CMatrix) -> Result<Self> {
        let side = (cutoff + 1).pow(modes as u32);
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(Error::InvalidArgument(format!(
                "operator side {} does not match (cutoff+1)^modes = {side}",
                matrix.nrows()
            )));
        }
        Ok(Self {
            modes,
            cutoff,
            matrix,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn side(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Per-mode occupations of a basis index, first mode most significant.
    pub fn occupations(&self, index: usize) -> Vec<usize> {
        occupations(index, self.modes, self.cutoff + 1)
    }

    /// Basis indices whose total photon number is at most `max_total`.
    pub fn safe_indices(&self, max_total: usize) -> Vec<usize> {
        (0..self.side())
            .filter(|&i| self.occupations(i).iter().sum::<usize>() <= max_total)
            .collect()
    }

    /// `max |A_ij - B_ij|` over `i, j` in `indices`.
    pub fn restricted_diff(&self, other: &CMatrix, indices: &[usize]) -> f64 {
        let mut worst: f64 = 0.0;
        for &i in indices {
            for &j in indices {
                worst = worst.max((self.matrix[(i, j)] - other[(i, j)]).norm());
            }
        }
        worst
    }

    /// `max |(U^dag U - I)_ij|` restricted to `indices`.
    pub fn unitarity_defect(&self, indices: &[usize]) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let id = linalg::identity(self.side());
        let mut worst: f64 = 0.0;
        for &i in indices {
            for &j in indices {
                worst = worst.max((prod[(i, j)] - id[(i, j)]).norm());
            }
        }
        worst
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::new();
        for r in 0..self.side() {
            for c in 0..self.side() {
                let v = self.matrix[(r, c)];
                if v != linalg::ZERO {
                    out.push((r, c, v));
                }
            }
        }
        out
    }
}

fn occupations(mut index: usize, modes: usize, d: usize) -> Vec<usize> {
    let mut occ = vec![0; modes];
    for slot in occ.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    occ
}

fn flat_index(occ: &[usize], d: usize) -> usize {
    occ.iter().fold(0, |acc, &n| acc * d + n)
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("cutoff must be >= 1".into()));
    }
    Ok(())
}

/// Two-mode SWAP as the permutation `|m, n> -> |n, m>`.
pub fn swap_operator(cutoff: usize) -> Result<TruncatedOperator> {
    check_cutoff(cutoff)?;
    let d = cutoff + 1;
    let mut m = CMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            m[(b * d + a, a * d + b)] = linalg::ONE;
        }
    }
    TruncatedOperator::new(2, cutoff, m)
}

fn two_mode_ladders(cutoff: usize) -> (CMatrix, CMatrix) {
    let a = linalg::annihilation(cutoff);
    let id = linalg::identity(cutoff + 1);
    (linalg::kron(&a, &id), linalg::kron(&id, &a))
}

/// SWAP as `exp(i pi b^dag b)` with `b = (a_1 - a_2)/sqrt(2)`.
///
/// Exact on the block of total photon number `<= cutoff`, where the truncated
/// `b^dag b` coincides with the untruncated one.
pub fn swap_operator_exponential(cutoff: usize) -> Result<TruncatedOperator> {
    check_cutoff(cutoff)?;
    let (a1, a2) = two_mode_ladders(cutoff);
    let b = (&a1 - &a2) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let nb = b.adjoint() * &b;
    TruncatedOperator::new(2, cutoff, linalg::expm_i_hermitian(&nb, PI))
}

/// SWAP as `exp[(i pi / 4)((x_1 - x_2)^2 + (p_1 - p_2)^2 - 2)]` built from
/// truncated quadrature matrices.
pub fn swap_quadrature_form(cutoff: usize) -> Result<TruncatedOperator> {
    check_cutoff(cutoff)?;
    let x = linalg::position(cutoff);
    let p = linalg::momentum(cutoff);
    let id = linalg::identity(cutoff + 1);
    let dx = linalg::kron(&x, &id) - linalg::kron(&id, &x);
    let dp = linalg::kron(&p, &id) - linalg::kron(&id, &p);
    let side = dx.nrows();
    let h = &dx * &dx + &dp * &dp - linalg::identity(side) * Complex64::new(2.0, 0.0);
    // Symmetrise away rounding so the eigensolver sees an exactly Hermitian matrix.
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    TruncatedOperator::new(2, cutoff, linalg::expm_i_hermitian(&h, PI / 4.0))
}

/// Matrix of `D(alpha) Pi D(alpha)^dag` on one truncated mode, from the
/// cross-Wigner kernels: `Pi(alpha)_mn = pi K_nm(x, p) exp(-x^2 - p^2)` with
/// `(x, p) = sqrt(2) (Re alpha, Im alpha)`.
fn displaced_parity_single(alpha: Complex64, cutoff: usize) -> CMatrix {
    let (x, p) = (2f64.sqrt() * alpha.re, 2f64.sqrt() * alpha.im);
    let d = cutoff + 1;
    let table = wigner_kernel_table(cutoff, x, p);
    let env = PI * (-(x * x + p * p)).exp();
    CMatrix::from_fn(d, d, |m, n| table[n * d + m] * env)
}

/// Largest `|alpha|` accepted for a given cutoff.
pub fn alpha_bound(cutoff: usize) -> f64 {
    (cutoff as f64).sqrt() / 2.0
}

/// Displaced parity `(x)_j D(alpha_j) Pi D(alpha_j)^dag`, one amplitude per mode.
pub fn displaced_parity(alpha: &[Complex64], cutoff: usize) -> Result<TruncatedOperator> {
    if alpha.is_empty() {
        return Err(Error::InvalidArgument(
            "one amplitude per mode required".into(),
        ));
    }
    let bound = alpha_bound(cutoff);
    for a in alpha {
        if a.norm() > bound {
            return Err(Error::Truncation {
                alpha: a.norm(),
                bound,
                cutoff,
            });
        }
    }
    let factors: Vec<CMatrix> = alpha
        .iter()
        .map(|&a| displaced_parity_single(a, cutoff))
        .collect();
    let refs: Vec<&CMatrix> = factors.iter().collect();
    TruncatedOperator::new(alpha.len(), cutoff, linalg::kron_all(&refs))
}

/// `O_m = (2 / pi^m) int Pi(alpha)^{(x)m} d^2 alpha` on `m` single-mode copies.
///
/// In `(x, p)` the integrand is `prod_i K_{b_i a_i}(x, p) exp(-m (x^2 + p^2))`,
/// which Gauss-Hermite integrates exactly once `order >= m * cutoff + 1`.
/// Only entries with equal total photon number on both sides are nonzero.
pub fn multicopy_observable(
    m: usize,
    cutoff: usize,
    alpha_order: usize,
) -> Result<TruncatedOperator> {
    multicopy_observable_with(m, cutoff, alpha_order, Execution::default())
}

pub fn multicopy_observable_with(
    m: usize,
    cutoff: usize,
    alpha_order: usize,
    exec: Execution,
) -> Result<TruncatedOperator> {
    if !(2..=3).contains(&m) {
        return Err(Error::Unsupported(format!(
            "multi-copy observable for m={m}"
        )));
    }
    check_cutoff(cutoff)?;
    let d = cutoff + 1;
    let side = d.pow(m as u32);

    if alpha_order == 0 {
        return Err(Error::InvalidArgument(
            "alpha quadrature order must be >= 1".into(),
        ));
    }
    let (t, wt) = gauss_hermite(alpha_order);
    let s = 1.0 / (m as f64).sqrt();
    let mut tables = Vec::with_capacity(alpha_order * alpha_order);
    let mut weights = Vec::with_capacity(alpha_order * alpha_order);
    for i in 0..alpha_order {
        for j in 0..alpha_order {
            tables.push(wigner_kernel_table(cutoff, s * t[i], s * t[j]));
            weights.push(wt[i] * wt[j] * s * s);
        }
    }

    let mut by_total: Vec<Vec<usize>> = vec![Vec::new(); m * cutoff + 1];
    for idx in 0..side {
        let tot: usize = occupations(idx, m, d).iter().sum();
        by_total[tot].push(idx);
    }
    let pairs: Vec<(usize, usize)> = by_total
        .iter()
        .flat_map(|group| {
            group
                .iter()
                .flat_map(move |&r| group.iter().map(move |&c| (r, c)))
        })
        .collect();

    let values = map_indexed(exec, pairs.len(), |k| {
        let (r, c) = pairs[k];
        let ra = occupations(r, m, d);
        let cb = occupations(c, m, d);
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for (table, &w) in tables.iter().zip(&weights) {
            let mut v = Complex64::new(w, 0.0);
            for (a, b) in ra.iter().zip(&cb) {
                v *= table[b * d + a];
            }
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(re.value(), im.value())
    });
    let mut mat = CMatrix::zeros(side, side);
    for ((r, c), v) in pairs.into_iter().zip(values) {
        mat[(r, c)] = v;
    }
    TruncatedOperator::new(m, cutoff, mat)
}

/// `Tr[rho^{(x)m} O]` for an `m`-copy observable built on single modes.
///
/// Single-mode `rho` uses `O` directly; a two-mode `rho` uses `O (x) O`, one
/// factor per mode register, without forming the product.
pub fn multicopy_expectation(rho: &FockState, observable: &TruncatedOperator) -> Result<f64> {
    let m = observable.modes();
    let c = observable.cutoff();
    if rho.cutoff() != c {
        return Err(Error::InvalidArgument(format!(
            "state cutoff {} differs from observable cutoff {c}",
            rho.cutoff()
        )));
    }
    let d = c + 1;
    let entries: Vec<(Vec<usize>, Vec<usize>, Complex64)> = observable
        .nonzero_entries()
        .into_iter()
        .map(|(r, col, v)| (occupations(r, m, d), occupations(col, m, d), v))
        .collect();
    let rho_m = rho.matrix();
    let value = match rho.modes() {
        1 => {
            // Tr[rho^{(x)m} O] = sum_{a,b} prod_i rho_{a_i b_i} O_{b a}
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, a, v) in &entries {
                let mut t = *v;
                for i in 0..m {
                    t *= rho_m[(a[i], b[i])];
                }
                acc += t;
            }
            acc
        }
        2 => {
            let parts = map_indexed(Execution::default(), entries.len(), |ea| {
                let (b_a, a_a, va) = &entries[ea];
                let mut acc = Complex64::new(0.0, 0.0);
                for (b_b, a_b, vb) in &entries {
                    let mut t = va * vb;
                    for i in 0..m {
                        let row = a_a[i] * d + a_b[i];
                        let col = b_a[i] * d + b_b[i];
                        t *= rho_m[(row, col)];
                        if t == linalg::ZERO {
                            break;
                        }
                    }
                    acc += t;
                }
                acc
            });
            parts.into_iter().sum()
        }
        k => {
            return Err(Error::Unsupported(format!(
                "{k}-mode multi-copy expectation"
            )))
        }
    };
    Ok(value.re)
}

/// A permutation of basis states given as an index map, `P |j> = |map[j]>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisPermutation {
    map: Vec<usize>,
}

impl BasisPermutation {
    pub fn identity(side: usize) -> Self {
        Self {
            map: (0..side).collect(),
        }
    }

    pub fn image(&self, j: usize) -> usize {
        self.map[j]
    }

    pub fn side(&self) -> usize {
        self.map.len()
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &BasisPermutation) -> BasisPermutation {
        BasisPermutation {
            map: first.map.iter().map(|&j| self.map[j]).collect(),
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.side();
        let mut m = CMatrix::zeros(n, n);
        for (j, &i) in self.map.iter().enumerate() {
            m[(i, j)] = linalg::ONE;
        }
        m
    }
}

/// Permutes copy slots of a register holding `copies` single-mode copies:
/// slot `s` of the image holds the content of slot `source[s]`.
pub fn register_permutation(cutoff: usize, source: &[usize]) -> BasisPermutation {
    let d = cutoff + 1;
    let copies = source.len();
    let side = d.pow(copies as u32);
    let map = (0..side)
        .map(|j| {
            let occ = occupations(j, copies, d);
            let image: Vec<usize> = source.iter().map(|&s| occ[s]).collect();
            flat_index(&image, d)
        })
        .collect();
    BasisPermutation { map }
}

/// SWAP of copies `a` and `b` within a register.
pub fn adjacent_swap(cutoff: usize, copies: usize, a: usize, b: usize) -> BasisPermutation {
    let mut source: Vec<usize> = (0..copies).collect();
    source.swap(a, b);
    register_permutation(cutoff, &source)
}

/// Cyclic register permutation `|i_1, i_2, i_3> -> |i_2, i_3, i_1>`.
pub fn cyclic_permutation(cutoff: usize) -> BasisPermutation {
    register_permutation(cutoff, &[1, 2, 0])
}

/// Outcome of the three-copy forward/backward SWAP protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    /// Forward sequence on the first register (SWAP_12 then SWAP_23) equals the cycle.
    pub forward_is_cycle: bool,
    /// Backward sequence on the second register (SWAP_23 then SWAP_12) equals the inverse cycle.
    pub backward_is_inverse_cycle: bool,
    /// `Tr[rho^{(x)3} (P (x) P)]` with the cycle on both registers, i.e. `Tr[rho^3]`.
    pub trace_cube: f64,
    /// `Tr[rho^{(x)3} (P_fwd (x) P_bwd)]` for the sequences as prescribed. This is
    /// the third moment of the partial transpose, not `Tr[rho^3]`.
    pub prescribed_trace: f64,
}

fn three_copy_trace(
    rho: &FockState,
    first: &BasisPermutation,
    second: &BasisPermutation,
    exec: Execution,
) -> f64 {
    let d = rho.cutoff() + 1;
    let reg = d * d * d;
    let mat = rho.matrix();
    // Full index: copies outermost, within a copy (first mode, second mode).
    sum_indexed(exec, reg, |ja| {
        let occ_a = occupations(ja, 3, d);
        let img_a = occupations(first.image(ja), 3, d);
        let mut acc = KahanSum::new();
        for jb in 0..reg {
            let occ_b = occupations(jb, 3, d);
            let img_b = occupations(second.image(jb), 3, d);
            let mut t = Complex64::new(1.0, 0.0);
            for c in 0..3 {
                let row = occ_a[c] * d + occ_b[c];
                let col = img_a[c] * d + img_b[c];
                t *= mat[(row, col)];
                if t == linalg::ZERO {
                    break;
                }
            }
            acc.add(t.re);
        }
        acc.value()
    })
}

/// Runs the adjacent-SWAP protocol on three copies of a two-mode state.
///
/// Refuses states whose six-mode side `(cutoff+1)^6` exceeds `side_limit`.
pub fn forward_backward_protocol(rho: &FockState, side_limit: usize) -> Result<ProtocolReport> {
    if rho.modes() != 2 {
        return Err(Error::InvalidArgument(
            "the protocol acts on a two-mode state".into(),
        ));
    }
    let c = rho.cutoff();
    let side = (c + 1).checked_pow(6).unwrap_or(usize::MAX);
    if side > side_limit {
        return Err(Error::SizeLimit {
            what: "six-mode operator side",
            requested: side,
            limit: side_limit,
        });
    }
    let s12 = adjacent_swap(c, 3, 0, 1);
    let s23 = adjacent_swap(c, 3, 1, 2);
    let forward = s23.after(&s12);
    let backward = s12.after(&s23);
    let cycle = cyclic_permutation(c);
    let inverse = register_permutation(c, &[2, 0, 1]);
    let exec = Execution::default();
    Ok(ProtocolReport {
        forward_is_cycle: forward == cycle,
        backward_is_inverse_cycle: backward == inverse,
        trace_cube: three_copy_trace(rho, &forward, &forward, exec),
        prescribed_trace: three_copy_trace(rho, &forward, &backward, exec),
    })
}

/// Sum-of-products form `sum_{mn} |m><n| (x) |n><m|` of the two-mode SWAP,
/// the input expected by [`crate::wigner::weyl_symbol_terms`].
pub fn swap_terms(cutoff: usize) -> Vec<(Complex64, Vec<CMatrix>)> {
    let d = cutoff + 1;
    let mut out = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            let mut a = CMatrix::zeros(d, d);
            a[(m, n)] = linalg::ONE;
            let mut b = CMatrix::zeros(d, d);
            b[(n, m)] = linalg::ONE;
            out.push((linalg::ONE, vec![a, b]));
        }
    }
    out
}
