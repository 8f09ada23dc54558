//! Unimodular weight sequences `a_n`.

use crate::error::Result;
use crate::phase::{Phase, PhaseVector};
use crate::rng;
use crate::{e, Complex64};

/// Weight sequence generator. All modes produce `|a_n| = 1` and are
/// random-access: `a_n` depends only on the mode (plus seed) and `n`.
#[derive(Clone, Debug)]
pub enum WeightSeq {
    /// `a_n = 1`.
    Ones,
    /// `a_n = e(u_n)` with `u_n` a counter-based uniform variate.
    RandomPhase { seed: u64 },
    /// Reduction weights `b_n = e(x_1 n + ... + x_{d-1} n^{d-1})`.
    Reduction(PhaseVector),
}

impl WeightSeq {
    pub fn weight(&self, n: u64) -> Result<Complex64> {
        match self {
            WeightSeq::Ones => Ok(Complex64::new(1.0, 0.0)),
            WeightSeq::RandomPhase { seed } => Ok(e(rng::u01(*seed, n))),
            WeightSeq::Reduction(pv) => Ok(e(pv.eval_mod1(n)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unimodular() {
        let modes = [
            WeightSeq::Ones,
            WeightSeq::RandomPhase { seed: 99 },
            WeightSeq::Reduction(PhaseVector::new(vec![0.3, 0.41]).unwrap()),
        ];
        for m in &modes {
            for n in 1..200 {
                let w = m.weight(n).unwrap();
                assert!((w.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reproducible() {
        let a = WeightSeq::RandomPhase { seed: 5 };
        let b = WeightSeq::RandomPhase { seed: 5 };
        for n in 1..50 {
            assert_eq!(a.weight(n).unwrap(), b.weight(n).unwrap());
        }
        let c = WeightSeq::RandomPhase { seed: 6 };
        assert_ne!(a.weight(1).unwrap(), c.weight(1).unwrap());
    }
}
