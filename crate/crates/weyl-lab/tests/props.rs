//! Property tests for the exact-reduction and discrepancy kernels.

use proptest::prelude::*;
use weyl_lab::disc::{disc_exact, disc_oracle};
use weyl_lab::modone::{frac, frac_mul_u128};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Against direct f64 multiplication while it is still exact: for
    /// x with at most 20 significant bits and K < 2^30 the product has at
    /// most 50 bits and f64 arithmetic commits no rounding at all.
    #[test]
    fn frac_mul_matches_exact_f64_products(m in 0u32..(1 << 20), k in 1u128..(1 << 30)) {
        let x = m as f64 / (1u64 << 20) as f64;
        let direct = frac(x * k as f64);
        prop_assert_eq!(frac_mul_u128(x, k), direct);
    }

    /// Splitting the multiplier preserves the reduction modulo 1.
    #[test]
    fn frac_mul_additive_in_k(m in 0u32..(1 << 20), a in 1u128..(1 << 40), b in 1u128..(1 << 40)) {
        let x = m as f64 / (1u64 << 20) as f64;
        let joint = frac_mul_u128(x, a + b);
        let split = frac(frac_mul_u128(x, a) + frac_mul_u128(x, b));
        let d = (joint - split).abs();
        prop_assert!(d.min(1.0 - d) < 1e-12, "joint {joint} split {split}");
    }

    /// The O(N log N) discrepancy equals the quadratic endpoint oracle.
    #[test]
    fn disc_matches_oracle(pts in prop::collection::vec(0.0f64..1.0, 1..60)) {
        let fast = disc_exact(&pts).unwrap().value;
        let slow = disc_oracle(&pts).unwrap();
        prop_assert!((fast - slow).abs() < 1e-9, "fast {fast} slow {slow}");
    }

    /// Discrepancy is permutation-invariant and bounded by N.
    #[test]
    fn disc_bounds(mut pts in prop::collection::vec(0.0f64..1.0, 1..60)) {
        let forward = disc_exact(&pts).unwrap().value;
        pts.reverse();
        let backward = disc_exact(&pts).unwrap().value;
        prop_assert_eq!(forward, backward);
        prop_assert!(forward >= 1.0 - 1e-12 && forward <= pts.len() as f64 + 1e-12);
    }
}
