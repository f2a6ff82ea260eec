mod common;

use ample_homology::linalg::{
    cokernel, invariant_factors, kernel_basis, rank, snf, snf_certified, solve_columns,
};
use ample_homology::{BigInt, FgAbGroup, IntMatrix};
use common::{int_matrix, invariant_factors_by_minors, is_chain, laplace_det, unimodular};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

#[test]
fn minors_oracle_on_documented_examples() {
    let cases: [(&[[i64; 2]], &[i64]); 3] = [
        (&[[2, 4], [6, 8]], &[2, 4]),
        (&[[1, 0], [0, 1]], &[1, 1]),
        (&[[-4, -2], [-2, -2]], &[2, 2]),
    ];
    for (rows, expected) in cases {
        let a = IntMatrix::from_i64_rows(rows);
        let expected: Vec<BigInt> = expected.iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(invariant_factors_by_minors(&a), expected);
        assert_eq!(snf(&a).d, expected);
    }
}

#[test]
fn cokernel_of_example_graph() {
    let g = cokernel(&IntMatrix::from_i64_rows(&[[-4, -2], [-2, -2]]));
    assert_eq!(g.to_string(), "Z_2 (+) Z_2");
    assert_eq!(
        cokernel(&IntMatrix::from_i64_rows(&[[-1]])),
        FgAbGroup::trivial()
    );
}

#[test]
fn kernel_of_documented_examples() {
    let k = kernel_basis(&IntMatrix::from_i64_rows(&[[-2, -4]]));
    assert_eq!(k.cols(), 1);
    assert_eq!(k.get(0, 0), &(k.get(1, 0) * BigInt::from(-2)));
    assert_eq!(
        kernel_basis(&IntMatrix::from_i64_rows(&[[-4, -2], [-2, -2]])).cols(),
        0
    );
    assert_eq!(kernel_basis(&IntMatrix::zeros(2, 2)).cols(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_certificate(a in int_matrix(8, 8, 30)) {
        let c = snf_certified(&a);
        let s = &c.smith;
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.diagonal_matrix());
        prop_assert!(s.u.mul(&c.u_inv).is_identity());
        prop_assert!(s.v.mul(&c.v_inv).is_identity());
        prop_assert!(is_chain(s.invariant_factors()));
        prop_assert!(s.d[s.rank..].iter().all(Zero::is_zero));
    }

    #[test]
    fn snf_matches_minor_oracle(a in int_matrix(4, 4, 12)) {
        prop_assert_eq!(snf(&a).invariant_factors().to_vec(), invariant_factors_by_minors(&a));
    }

    #[test]
    fn transforms_have_unit_determinant(a in int_matrix(5, 5, 20)) {
        let s = snf(&a);
        prop_assert!(laplace_det(&s.u.to_rows()).abs().is_one());
        prop_assert!(laplace_det(&s.v.to_rows()).abs().is_one());
    }

    #[test]
    fn kernel_basis_is_a_primitive_basis(a in int_matrix(6, 8, 10)) {
        let k = kernel_basis(&a);
        prop_assert!(a.mul(&k).is_zero());
        prop_assert_eq!(k.cols() + rank(&a), a.cols());
        prop_assert_eq!(rank(&k), k.cols());
        // saturated lattice: every invariant factor of the basis is 1
        prop_assert!(invariant_factors(&k).iter().all(One::is_one));
    }

    #[test]
    fn cokernel_invariant_under_unimodular_change(
        a in int_matrix(6, 6, 15),
        row_ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..10),
        col_ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..10),
    ) {
        let (p, _) = unimodular(a.rows(), &row_ops);
        let (q, _) = unimodular(a.cols(), &col_ops);
        prop_assert_eq!(cokernel(&p.mul(&a).mul(&q)), cokernel(&a));
    }

    #[test]
    fn solve_recovers_a_preimage(a in int_matrix(6, 6, 10), seed in prop::collection::vec(-5i64..=5, 36)) {
        let y0 = IntMatrix::new(a.cols(), 2, seed.into_iter().take(a.cols() * 2).map(BigInt::from).collect());
        let y0 = match y0 {
            Ok(m) => m,
            Err(_) => return Ok(()),
        };
        let b = a.mul(&y0);
        let y = solve_columns(&a, &b).expect("b is in the span by construction");
        prop_assert_eq!(a.mul(&y), b);
    }

    #[test]
    fn fixed_width_agrees_with_bigint(a in int_matrix(6, 6, 9)) {
        let narrow = ample_homology::IntMatrix64::new(
            a.rows(), a.cols(),
            a.entries().iter().map(|x| i64::try_from(x).unwrap()).collect(),
        ).unwrap();
        let d: Vec<BigInt> = invariant_factors(&narrow).into_iter().map(BigInt::from).collect();
        prop_assert_eq!(d, invariant_factors(&a));
    }
}
