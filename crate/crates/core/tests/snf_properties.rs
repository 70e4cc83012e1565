use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use npi_core::homology::{smith_normal_form, IntMatrix};

mod support;
use support::minors::{det, minor_gcd, to_i128};

fn matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i64..=9, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_factorization_and_minors((r, c, entries) in matrix()) {
        let m = IntMatrix::from_rows(r, c, &entries);
        let s = smith_normal_form(&m);
        prop_assert!(s.u.mul(&m).mul(&s.v) == s.d);
        prop_assert_eq!(s.u.determinant().abs(), BigInt::from(1));
        prop_assert_eq!(s.v.determinant().abs(), BigInt::from(1));
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        let plain = to_i128(&m);
        let mut prod = BigInt::from(1);
        for k in 1..=r.min(c) {
            prod *= &diag[k - 1];
            prop_assert_eq!(BigInt::from(minor_gcd(&plain, k)), prod.clone());
        }
    }
}

#[test]
fn det_oracle_sanity() {
    assert_eq!(det(vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), 6);
    assert_eq!(det(vec![vec![0, 1], vec![1, 0]]), -1);
}
