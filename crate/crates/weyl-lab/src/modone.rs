//! Mod-1 arithmetic helpers.
//!
//! The phases `x * n^d` overflow the significand of an `f64` long before the
//! sums themselves become uninteresting (`n^d` reaches `1e20` in the major-arc
//! panels), so fractional parts are computed through an exact limb
//! decomposition instead of a naive product.

/// Fractional part in `[0, 1)`.
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    // x slightly below an integer can round the difference up to 1.0.
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Exact product of two `f64`s as a head/tail pair (`a * b == hi + lo`).
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    (hi, lo)
}

/// `frac(x * k)` for `x` in `[0, 1)` and an unsigned 128-bit integer `k`,
/// accurate to a few ulp.
///
/// Splits `k` into base-2^32 limbs. The running values
/// `u_j = frac(x * 2^(32 j))` are exact because scaling by a power of two and
/// subtracting the integer part are both exact operations; each limb
/// contribution is then formed with an exact product split.
pub fn frac_mul_u128(x: f64, k: u128) -> f64 {
    debug_assert!((0.0..1.0).contains(&x));
    if k == 0 || x == 0.0 {
        return 0.0;
    }
    let mut u = x;
    let mut rem = k;
    let mut acc = 0.0f64;
    let mut acc_lo = 0.0f64;
    while rem != 0 {
        let limb = (rem & 0xffff_ffff) as u32;
        rem >>= 32;
        if limb != 0 {
            let (hi, lo) = two_prod(u, limb as f64);
            acc += frac(hi);
            acc_lo += lo;
            if acc >= 1.0 {
                acc -= 1.0;
            }
        }
        // Advance to frac(x * 2^(32 (j+1))); exact at every step.
        u = frac(u * 4294967296.0);
    }
    frac(acc + acc_lo)
}

/// `frac(x * k)` for a signed 128-bit integer `k`.
pub fn frac_mul_i128(x: f64, k: i128) -> f64 {
    if k >= 0 {
        frac_mul_u128(x, k as u128)
    } else {
        let f = frac_mul_u128(x, k.unsigned_abs());
        if f == 0.0 {
            0.0
        } else {
            1.0 - f
        }
    }
}

/// `frac(delta * t)` for real `delta` and a real `t` that may be integral.
///
/// When `t` is an exactly-representable integer the reduction is done with
/// the limb method on `delta`, so e.g. `delta = 1` with integer `t` gives an
/// exact zero. Otherwise an ordinary product is used.
pub fn frac_mul_real(delta: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if t.fract() == 0.0 && t.abs() < 1.5e38 {
        let d = frac(delta);
        return frac_mul_i128(d, t as i128);
    }
    frac(delta * t)
}

/// `n^d` with overflow detection in `u128`.
pub fn checked_pow_u128(n: u64, d: u32) -> Option<u128> {
    (n as u128).checked_pow(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_basics() {
        assert_eq!(frac(2.5), 0.5);
        assert_eq!(frac(-0.25), 0.75);
        assert_eq!(frac(3.0), 0.0);
    }

    #[test]
    fn frac_mul_small_matches_direct() {
        let x = 0.141592653589793_f64;
        for k in [1u128, 2, 17, 1000, 123456] {
            let direct = frac(x * k as f64);
            let exact = frac_mul_u128(x, k);
            assert!((direct - exact).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn frac_mul_huge_is_consistent() {
        // frac(x * (a+b)) == frac(frac(x*a) + frac(x*b)) for exact arithmetic.
        let x = 0.7236067977499789_f64;
        let a: u128 = 98_765_432_109_876_543_210;
        let b: u128 = 12_345_678_901_234_567_890;
        let lhs = frac_mul_u128(x, a + b);
        let rhs = frac(frac_mul_u128(x, a) + frac_mul_u128(x, b));
        let d = (lhs - rhs).abs();
        assert!(d < 1e-12 || (1.0 - d) < 1e-12);
    }

    #[test]
    fn frac_mul_rational_is_exact() {
        // x = 1/4 exactly representable: frac(k/4) must be exact.
        let x = 0.25_f64;
        assert_eq!(frac_mul_u128(x, 4), 0.0);
        assert_eq!(frac_mul_u128(x, 6), 0.5);
        assert_eq!(frac_mul_u128(x, (1u128 << 100) + 3), 0.75);
    }

    #[test]
    fn frac_mul_real_integer_delta_one() {
        assert_eq!(frac_mul_real(1.0, 12345.0), 0.0);
        assert_eq!(frac_mul_real(1.0, -7.0), 0.0);
    }
}
