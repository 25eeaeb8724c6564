//! Wigner-function moments and a moment-based Wigner-negativity test for
//! one- and two-mode bosonic states.
//!
//! Conventions: `hbar = 1`, `x = (a + a^dag)/sqrt(2)`, phase-space points are
//! ordered `(x_1..x_k, p_1..p_k)` and the vacuum has covariance `I/2`.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod exec;
pub mod linalg;
pub mod moments;
pub mod multicopy;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod special;
pub mod states;
pub mod wigner;

pub use error::{Error, Result};
pub use exec::Execution;
pub use states::{FockState, GaussianState, PhasePoint, StateSpec};
pub use wigner::WignerField;
