use kuforge::groupring::rn_group;
use kuforge::milnor::{kfrak_dim, lfrak_dim, MilnorDims};
use kuforge::polyalg::{binomial, sym_dim};
use kuforge::ss::dual_lfrak_one;
use kuforge::{p_dim, smith_normal_form, IntMatrix};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lfrak_is_a_quotient_of_kfrak(r in 1usize..5, a in 1usize..5, b in 0usize..6) {
        prop_assume!(a <= r);
        prop_assert!(lfrak_dim(r, a, b) <= kfrak_dim(r, a, b));
        prop_assert!(kfrak_dim(r, a, b) <= binomial(r, a - 1) as usize * sym_dim(r, b + 1));
    }

    #[test]
    fn l_inside_ltilde_inside_k(r in 1usize..4, n in 0usize..14) {
        let d = MilnorDims::compute(r, n);
        prop_assert!(d.l[n] <= d.ltilde[n]);
        prop_assert!(d.ltilde[n] <= d.k[n]);
    }

    #[test]
    fn rn_order(r in 1usize..4, n in 1usize..5) {
        let g = rn_group(r, n).unwrap();
        let want: u64 = (1..=n).map(|m| p_dim(r, m) as u64).sum();
        prop_assert_eq!(g.log2_torsion_order(), Some(want));
        prop_assert_eq!(g.free_rank, 0);
    }

    #[test]
    fn dual_lfrak_one_sits_in_odd_degrees(r in 2usize..5, lo in -12i64..0, len in 0i64..20) {
        let g = dual_lfrak_one(r, lo, lo + len);
        for (n, d) in g.iter() {
            prop_assert!(n % 2 != 0);
            prop_assert!(d >= r);
        }
    }

    #[test]
    fn snf_preserves_determinant_up_to_sign(entries in proptest::collection::vec(-6i64..7, 9)) {
        let m = IntMatrix::from_rows(&[entries[0..3].to_vec(), entries[3..6].to_vec(), entries[6..9].to_vec()]);
        let e = &entries;
        let det = e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6])
            + e[2] * (e[3] * e[7] - e[4] * e[6]);
        let snf = smith_normal_form(&m);
        let diag = snf.diagonal();
        if diag.len() < 3 {
            prop_assert_eq!(det, 0);
        } else {
            let prod: i64 = diag.iter().map(|x| i64::try_from(x.clone()).unwrap()).product();
            prop_assert_eq!(prod.abs(), det.abs());
        }
    }
}
