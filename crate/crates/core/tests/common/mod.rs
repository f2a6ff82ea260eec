#![allow(dead_code)]

use ample_homology::{BigInt, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

pub fn int_matrix(
    max_rows: usize,
    max_cols: usize,
    bound: i64,
) -> impl Strategy<Value = IntMatrix> {
    (0..=max_rows, 0..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

/// Determinant by cofactor expansion along the first row.
pub fn laplace_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][c] * laplace_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == size {
            out.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// Determinantal divisors `D_i = gcd of all i×i minors`, for `i = 1..`
/// while some minor is nonzero. Invariant factors are `D_i / D_{i-1}`.
pub fn invariant_factors_by_minors(a: &IntMatrix) -> Vec<BigInt> {
    let rows = a.to_rows();
    let mut divisors = vec![BigInt::one()];
    for size in 1..=a.rows().min(a.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets(a.rows(), size) {
            for cs in subsets(a.cols(), size) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| rows[r][c].clone()).collect())
                    .collect();
                g = g.gcd(&laplace_det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

/// A random unimodular matrix together with its inverse, as a product of
/// elementary operations.
pub fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> (IntMatrix, IntMatrix) {
    let mut g = IntMatrix::identity(n);
    let mut g_inv = IntMatrix::identity(n);
    if n < 2 {
        return (g, g_inv);
    }
    for &(i, j, q) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(q));
        let mut e_inv = IntMatrix::identity(n);
        e_inv.set(i, j, BigInt::from(-q));
        g = e.mul(&g);
        g_inv = g_inv.mul(&e_inv);
    }
    (g, g_inv)
}

/// Commuting family `S_i = Σ_j c_ij A^j`.
pub fn polynomial_family(a: &IntMatrix, coeffs: &[Vec<i64>]) -> Vec<IntMatrix> {
    let n = a.rows();
    let mut powers = vec![IntMatrix::identity(n)];
    let degree = coeffs.iter().map(Vec::len).max().unwrap_or(0);
    for _ in 1..degree {
        let next = powers.last().unwrap().mul(a);
        powers.push(next);
    }
    coeffs
        .iter()
        .map(|cs| {
            cs.iter()
                .zip(&powers)
                .fold(IntMatrix::zeros(n, n), |acc, (&c, p)| {
                    acc.add(&p.scale(&BigInt::from(c)))
                })
        })
        .collect()
}

pub fn commuting_family() -> impl Strategy<Value = Vec<IntMatrix>> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(m, k)| {
        (
            prop::collection::vec(-2i64..=2, m * m),
            prop::collection::vec(prop::collection::vec(-2i64..=2, 3), k),
        )
            .prop_map(move |(entries, coeffs)| {
                let a =
                    IntMatrix::new(m, m, entries.into_iter().map(BigInt::from).collect()).unwrap();
                polynomial_family(&a, &coeffs)
            })
    })
}

pub fn is_chain(d: &[BigInt]) -> bool {
    d.iter().all(|x| !x.is_negative()) && d.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
}
