//! Exact integer linear algebra: Smith and Hermite normal forms, integer
//! kernels, cokernels and lattice membership.
//!
//! All routines accept empty matrices (zero rows or zero columns) and follow
//! the usual algebraic conventions for them: the kernel of an `r×0` matrix is
//! the zero lattice, the cokernel of an `r×0` matrix is `ℤ^r`, and so on.

mod hermite;
mod matrix;
mod smith;

pub use hermite::{column_hermite, kernel_basis, rank, solve_columns, ColumnHermite};
pub use matrix::Matrix;
pub use smith::{
    cokernel, cokernel_with_stats, invariant_factors, invariant_factors_with_stats, snf,
    snf_certified, snf_with_stats, CertifiedSmith, Smith, SmithStats,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{context}: expected shape {expected:?}, found {found:?}")]
    DimensionMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix is {0}x{1}, expected a square matrix")]
    NotSquare(usize, usize),
    #[error("column {column} of the right-hand side is not in the integer column span")]
    NoIntegerSolution { column: usize },
}

use std::cmp::Ordering;

use crate::scalar::Scalar;

/// Quotient of `a / p` rounded to the nearest integer, so that the remainder
/// `a - q p` has absolute value at most `|p| / 2`.
pub(crate) fn nearest_quotient<T: Scalar>(a: &T, p: &T) -> T {
    let (q, r) = a.div_mod_floor(p);
    let twice = r.abs().add_exact(&r.abs());
    if twice > p.abs() {
        q.add_exact(&T::one())
    } else {
        q
    }
}

pub(crate) fn cmp_abs<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.bit_len()
        .cmp(&b.bit_len())
        .then_with(|| a.abs().cmp(&b.abs()))
}
