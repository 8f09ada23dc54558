//! Phase families: polynomial, monomial, and the general `f(n)` phases of the
//! large-value machinery.

use crate::error::{LabError, Result};
use crate::modone::{checked_pow_u128, frac, frac_mul_u128};

/// Coefficient vector `x = (x_1, ..., x_d)`; the coefficient of `n^i` is
/// `x_i`. All coefficients lie in `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseVector {
    coeffs: Vec<f64>,
}

impl PhaseVector {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(LabError::validation("phase vector must have degree >= 1"));
        }
        for (i, &c) in coeffs.iter().enumerate() {
            if !(0.0..1.0).contains(&c) || !c.is_finite() {
                return Err(LabError::validation(format!(
                    "coefficient x_{} = {} outside [0,1)",
                    i + 1,
                    c
                )));
            }
        }
        Ok(PhaseVector { coeffs })
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The leading (degree-d) coefficient.
    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }
}

/// Monomial phase `x * n^d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonomialPhase {
    pub x: f64,
    pub degree: u32,
}

impl MonomialPhase {
    pub fn new(x: f64, degree: u32) -> Result<Self> {
        if !(0.0..1.0).contains(&x) || !x.is_finite() {
            return Err(LabError::validation(format!("x = {x} outside [0,1)")));
        }
        if degree < 1 {
            return Err(LabError::validation("degree must be >= 1"));
        }
        Ok(MonomialPhase { x, degree })
    }
}

/// General phase: polynomial, `x * t^gamma` for real `gamma > 1`, or the
/// Hardy-Littlewood flat phase `xi * n * log n + x * n`.
#[derive(Clone, Debug)]
pub enum GeneralPhase {
    Polynomial(PhaseVector),
    MonomialPower { x: f64, gamma: f64 },
    NLogN { xi: f64, x: f64 },
}

impl GeneralPhase {
    pub fn monomial_power(x: f64, gamma: f64) -> Result<Self> {
        if gamma <= 1.0 || !gamma.is_finite() {
            return Err(LabError::validation("gamma must exceed 1"));
        }
        if !(0.0..1.0).contains(&x) {
            return Err(LabError::validation(format!("x = {x} outside [0,1)")));
        }
        Ok(GeneralPhase::MonomialPower { x, gamma })
    }
}

/// Exact power `n^d` with a range error past `u128`.
pub fn pow_checked(n: u64, d: u32) -> Result<u128> {
    checked_pow_u128(n, d).ok_or_else(|| {
        LabError::range(format!("n^d = {n}^{d} exceeds the exactly-reducible integer range"))
    })
}

/// Anything that can evaluate its phase modulo one at integer arguments.
pub trait Phase {
    fn eval_mod1(&self, n: u64) -> Result<f64>;
}

impl Phase for PhaseVector {
    fn eval_mod1(&self, n: u64) -> Result<f64> {
        debug_assert!(n >= 1);
        let mut acc = 0.0;
        let mut p: u128 = 1;
        for (i, &c) in self.coeffs.iter().enumerate() {
            p = if i == 0 {
                n as u128
            } else {
                p.checked_mul(n as u128).ok_or_else(|| {
                    LabError::range(format!(
                        "n^{} = {n}^{} exceeds the exactly-reducible integer range",
                        i + 1,
                        i + 1
                    ))
                })?
            };
            if c != 0.0 {
                acc += frac_mul_u128(c, p);
                if acc >= 1.0 {
                    acc -= 1.0;
                }
            }
        }
        Ok(frac(acc))
    }
}

impl Phase for MonomialPhase {
    fn eval_mod1(&self, n: u64) -> Result<f64> {
        let p = pow_checked(n, self.degree)?;
        Ok(frac_mul_u128(self.x, p))
    }
}

impl Phase for GeneralPhase {
    fn eval_mod1(&self, n: u64) -> Result<f64> {
        match self {
            GeneralPhase::Polynomial(pv) => pv.eval_mod1(n),
            GeneralPhase::MonomialPower { x, gamma } => {
                if gamma.fract() == 0.0 && *gamma <= 127.0 {
                    let p = pow_checked(n, *gamma as u32)?;
                    Ok(frac_mul_u128(*x, p))
                } else {
                    // Non-integer exponents admit no exact reduction; the
                    // f64 product is adequate at laboratory scales.
                    Ok(frac(x * (n as f64).powf(*gamma)))
                }
            }
            GeneralPhase::NLogN { xi, x } => {
                let nf = n as f64;
                let linear = frac_mul_u128(frac(*x), n as u128);
                Ok(frac(xi * nf * nf.ln() + linear))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_phase() {
        let p = PhaseVector::new(vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.eval_mod1(17).unwrap(), 0.0);
    }

    #[test]
    fn direct_arithmetic() {
        // (0.25, 0.5), n=2 -> frac(0.5 + 2.0) = 0.5
        let p = PhaseVector::new(vec![0.25, 0.5]).unwrap();
        assert!((p.eval_mod1(2).unwrap() - 0.5).abs() < 1e-15);
        // monomial x=1/3, d=3, n=2 -> frac(8/3) = 2/3
        let m = MonomialPhase::new(1.0 / 3.0, 3).unwrap();
        assert!((m.eval_mod1(2).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn huge_power_is_accepted() {
        // d=5, n=10^4: n^d = 1e20 fits u128 and must reduce without error.
        let m = MonomialPhase::new(0.123456789, 5).unwrap();
        let v = m.eval_mod1(10_000).unwrap();
        assert!((0.0..1.0).contains(&v));
    }

    #[test]
    fn overflow_is_a_range_error() {
        let m = MonomialPhase::new(0.5, 120).unwrap();
        assert!(matches!(m.eval_mod1(1 << 20), Err(LabError::Range(_))));
    }

    #[test]
    fn coefficient_validation() {
        assert!(PhaseVector::new(vec![]).is_err());
        assert!(PhaseVector::new(vec![1.0]).is_err());
        assert!(PhaseVector::new(vec![-0.1]).is_err());
        assert!(MonomialPhase::new(0.3, 0).is_err());
    }

    #[test]
    fn general_polynomial_matches_vector() {
        let pv = PhaseVector::new(vec![0.1, 0.2, 0.3]).unwrap();
        let g = GeneralPhase::Polynomial(pv.clone());
        for n in [1u64, 5, 999] {
            assert_eq!(pv.eval_mod1(n).unwrap(), g.eval_mod1(n).unwrap());
        }
    }

    #[test]
    fn integer_gamma_matches_monomial() {
        let g = GeneralPhase::monomial_power(0.37, 3.0).unwrap();
        let m = MonomialPhase::new(0.37, 3).unwrap();
        for n in [1u64, 7, 1234] {
            assert_eq!(g.eval_mod1(n).unwrap(), m.eval_mod1(n).unwrap());
        }
    }
}
