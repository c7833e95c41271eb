mod common;

use common::*;
use heisenberg_core::arith::{
    cross, format_gaussian, half_plane_sign, parse_gaussian, perp, rat, same_line, Gaussian,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

proptest! {
    #[test]
    fn ring_operations_match_complex_oracle(x in gaussian_strategy(), y in gaussian_strategy(), z in gaussian_strategy()) {
        prop_assert_eq!(cx(&(&x + &y)), cx(&x) + cx(&y));
        prop_assert_eq!(cx(&(&x - &y)), cx(&x) - cx(&y));
        prop_assert_eq!(cx(&(&x * &y)), cx(&x) * cx(&y));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &(-&x), Gaussian::zero());
    }

    #[test]
    fn cross_is_antisymmetric_and_bilinear(x in gaussian_strategy(), y in gaussian_strategy(), z in gaussian_strategy()) {
        prop_assert_eq!(cross(&x, &y), -cross(&y, &x));
        prop_assert!(cross(&x, &x).is_zero());
        prop_assert_eq!(cross(&x, &(&y + &z)), cross(&x, &y) + cross(&x, &z));
        // Im(conj(x)·y) is the same signed area.
        prop_assert_eq!(cross(&x, &y), (cx(&x).conj() * cx(&y)).im);
    }

    #[test]
    fn same_line_matches_real_multiples(x in gaussian_strategy(), y in gaussian_strategy(), k in -6i64..=6) {
        let multiple = x.scale(&rat(k));
        prop_assert!(same_line(&x, &multiple));
        prop_assert_eq!(same_line(&x, &y), same_line(&y, &x));
        prop_assert!(same_line(&x, &Gaussian::zero()));
        if !x.is_zero() {
            prop_assert!(!same_line(&x, &perp(&x)));
        }
    }

    #[test]
    fn literals_round_trip(x in gaussian_strategy()) {
        let text = format_gaussian(&x);
        prop_assert_eq!(parse_gaussian(&text).unwrap(), x.clone());
        prop_assert_eq!(format_gaussian(&parse_gaussian(&text).unwrap()), text);
    }

    #[test]
    fn half_plane_sign_follows_perp_projection(l in gaussian_strategy(), v in gaussian_strategy()) {
        prop_assume!(!v.is_zero());
        let p = perp(&v);
        let dot = &l.re * &p.re + &l.im * &p.im;
        let expected = if dot.is_zero() { 0 } else if dot.is_positive() { 1 } else { -1 };
        prop_assert_eq!(half_plane_sign(&l, &v).unwrap(), expected);
        prop_assert_eq!(half_plane_sign(&p, &v).unwrap(), 1);
        prop_assert_eq!(half_plane_sign(&v, &v).unwrap(), 0);
    }
}

#[test]
fn zero_direction_has_no_half_planes() {
    assert!(half_plane_sign(&Gaussian::one(), &Gaussian::zero()).is_err());
}
