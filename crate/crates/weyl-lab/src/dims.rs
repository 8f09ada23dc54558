//! Closed-form dimension and exponent calculators.

use crate::error::{LabError, Result};

/// `theta_i = i / (2(1 - alpha)) - 1`.
pub fn theta(i: u32, alpha: f64) -> Result<f64> {
    if !(alpha < 1.0) {
        return Err(LabError::validation("theta requires alpha < 1"));
    }
    Ok(i as f64 / (2.0 * (1.0 - alpha)) - 1.0)
}

/// `s(d, alpha) = min_j (d + 1 + j theta_j - sum_{i<=j} theta_i) / (1 + theta_j)`.
///
/// Defined for `alpha in [1/2, 1)` under the applicability condition
/// `sum theta_i >= 1`; the limit value 0 is returned at `alpha = 1`.
pub fn s_dim(d: u32, alpha: f64) -> Result<f64> {
    if d < 2 {
        return Err(LabError::validation("s_dim requires d >= 2"));
    }
    if alpha == 1.0 {
        return Ok(0.0);
    }
    if !(0.5..1.0).contains(&alpha) {
        return Err(LabError::validation("s_dim requires alpha in [1/2, 1]"));
    }
    let thetas: Vec<f64> = (1..=d).map(|i| theta(i, alpha)).collect::<Result<_>>()?;
    let total: f64 = thetas.iter().sum();
    if total < 1.0 {
        return Err(LabError::validation(format!(
            "applicability condition sum theta_i >= 1 fails (sum = {total})"
        )));
    }
    let mut best = f64::INFINITY;
    let mut partial = 0.0;
    for j in 1..=d as usize {
        let tj = thetas[j - 1];
        partial += tj;
        let v = (d as f64 + 1.0 + j as f64 * tj - partial) / (1.0 + tj);
        best = best.min(v);
    }
    Ok(best)
}

/// `u(d, alpha) = min_{k=0..d-1} ((2d^2 + 4d)(1 - alpha) + k(k+1)) / (4 - 2 alpha + 2k)`.
pub fn u_dim(d: u32, alpha: f64) -> Result<f64> {
    if d < 2 {
        return Err(LabError::validation("u_dim requires d >= 2"));
    }
    if !(0.5..=1.0).contains(&alpha) {
        return Err(LabError::validation("u_dim requires alpha in [1/2, 1]"));
    }
    let df = d as f64;
    let mut best = f64::INFINITY;
    for k in 0..d {
        let kf = k as f64;
        let v = ((2.0 * df * df + 4.0 * df) * (1.0 - alpha) + kf * (kf + 1.0))
            / (4.0 - 2.0 * alpha + 2.0 * kf);
        best = best.min(v);
    }
    Ok(best)
}

/// `s(d, 1/2) = min_{1<=j<=d} (2(d+1) + j^2 - j) / (2j)`.
pub fn s_half(d: u32) -> Result<f64> {
    if d < 2 {
        return Err(LabError::validation("s_half requires d >= 2"));
    }
    let mut best = f64::INFINITY;
    for j in 1..=d as u64 {
        let v = (2.0 * (d as f64 + 1.0) + (j * j - j) as f64) / (2.0 * j as f64);
        best = best.min(v);
    }
    Ok(best)
}

/// Conjectured monomial dimension `4(1 - alpha) / d`.
pub fn monomial_conj_dim(d: u32, alpha: f64) -> Result<f64> {
    if d < 2 {
        return Err(LabError::validation("monomial_conj_dim requires d >= 2"));
    }
    if !(0.5..=1.0).contains(&alpha) {
        return Err(LabError::validation("alpha must lie in [1/2, 1]"));
    }
    Ok(4.0 * (1.0 - alpha) / d as f64)
}

/// Jarnik-Besicovitch dimension `2 / kappa` for `kappa >= 2`.
pub fn jb_dim(kappa: f64) -> Result<f64> {
    if kappa < 2.0 {
        return Err(LabError::validation("jb_dim requires kappa >= 2"));
    }
    Ok(2.0 / kappa)
}

/// Dimension lower bounds `1 - 1/(2 gamma)` (gamma > 2) and `1 - 1/gamma`
/// (gamma > 1), each present only when its hypothesis holds.
pub fn theorem_bounds(gamma: f64) -> (Option<f64>, Option<f64>) {
    let a = (gamma > 2.0).then(|| 1.0 - 1.0 / (2.0 * gamma));
    let b = (gamma > 1.0).then(|| 1.0 - 1.0 / gamma);
    (a, b)
}

/// Mean value exponent `s(d) = d(d+1)/2`.
pub fn mean_value_exponent(d: u32) -> u64 {
    (d as u64) * (d as u64 + 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_values() {
        assert_eq!(theta(1, 0.5).unwrap(), 0.0);
        assert_eq!(theta(3, 0.5).unwrap(), 2.0);
        assert_eq!(theta(1, 0.75).unwrap(), 1.0);
        assert!(theta(1, 1.0).is_err());
    }

    #[test]
    fn known_corner_values() {
        assert!((s_dim(2, 0.5).unwrap() - 2.0).abs() < 1e-12);
        assert!((u_dim(2, 0.5).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(s_dim(2, 1.0).unwrap(), 0.0);
        assert_eq!(u_dim(2, 1.0).unwrap(), 0.0);
        assert!((s_dim(2, 0.6).unwrap() - 1.7).abs() < 1e-12);
        assert!((u_dim(2, 0.6).unwrap() - 1.75).abs() < 1e-12);
    }

    #[test]
    fn d2_piecewise_forms() {
        let mut a = 0.5f64;
        while a < 0.999 {
            let s = s_dim(2, a).unwrap();
            let s_closed = if a <= 5.0 / 6.0 {
                (7.0 - 6.0 * a) / 2.0
            } else {
                6.0 * (1.0 - a)
            };
            assert!((s - s_closed).abs() < 1e-12, "alpha = {a}");
            let u = u_dim(2, a).unwrap();
            let u_closed = if a <= 6.0 / 7.0 {
                (9.0 - 8.0 * a) / (3.0 - a)
            } else {
                8.0 * (1.0 - a) / (2.0 - a)
            };
            assert!((u - u_closed).abs() < 1e-12, "alpha = {a}");
            a += 0.01;
        }
    }

    #[test]
    fn breakpoint_continuity() {
        let a: f64 = 5.0 / 6.0;
        assert!(((7.0 - 6.0 * a) / 2.0 - 6.0 * (1.0 - a)).abs() < 1e-12);
        assert!((s_dim(2, a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn s_strictly_below_u_for_d2() {
        let mut a = 0.51f64;
        while a < 0.995 {
            assert!(s_dim(2, a).unwrap() < u_dim(2, a).unwrap(), "alpha = {a}");
            a += 0.01;
        }
    }

    #[test]
    fn u_at_half_is_d() {
        for d in 2..=12 {
            assert!((u_dim(d, 0.5).unwrap() - d as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn s_half_values_and_asymptotics() {
        assert!((s_half(2).unwrap() - 2.0).abs() < 1e-12);
        assert!((s_half(3).unwrap() - 7.0 / 3.0).abs() < 1e-12);
        let big = s_half(10_000).unwrap();
        let r = big / (2.0f64 * 10_000.0).sqrt();
        assert!((0.98..=1.05).contains(&r), "ratio = {r}");
    }

    #[test]
    fn monotone_in_alpha() {
        for d in [2u32, 3, 5] {
            let mut prev_s = f64::INFINITY;
            let mut prev_u = f64::INFINITY;
            let mut a = 0.51f64;
            while a < 0.995 {
                let s = s_dim(d, a).unwrap();
                let u = u_dim(d, a).unwrap();
                assert!(s <= prev_s + 1e-12);
                assert!(u <= prev_u + 1e-12);
                prev_s = s;
                prev_u = u;
                a += 0.01;
            }
        }
    }

    #[test]
    fn misc_formulas() {
        assert_eq!(jb_dim(2.0).unwrap(), 1.0);
        assert_eq!(jb_dim(4.0).unwrap(), 0.5);
        assert!(jb_dim(1.9).is_err());
        // kappa from the major-arc heuristic recovers the monomial
        // conjecture as eps -> 0.
        let (d, alpha) = (4u32, 0.75f64);
        let kappa = d as f64 / (2.0 * (1.0 - alpha));
        assert!((jb_dim(kappa).unwrap() - monomial_conj_dim(d, alpha).unwrap()).abs() < 1e-12);
        assert_eq!(monomial_conj_dim(2, 0.5).unwrap(), 1.0);
        assert_eq!(monomial_conj_dim(4, 0.75).unwrap(), 0.25);
        let (a, b) = theorem_bounds(3.0);
        assert!((a.unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert!((b.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let (a, b) = theorem_bounds(1.5);
        assert!(a.is_none());
        assert!((b.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let (a, b) = theorem_bounds(2.0);
        assert!(a.is_none());
        assert_eq!(b, Some(0.5));
        assert_eq!(mean_value_exponent(2), 3);
        assert_eq!(mean_value_exponent(3), 6);
        assert_eq!(mean_value_exponent(10), 55);
    }
}
