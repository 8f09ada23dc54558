//! Weighted exponential sum evaluation: direct, prefix-maximum, and
//! difference-table batch kernels.

use crate::error::{LabError, Result};
use crate::modone::{frac, frac_mul_u128};
use crate::phase::{pow_checked, Phase, PhaseVector};
use crate::weights::WeightSeq;
use crate::{e, Complex64};

/// Renormalization period for rotating difference-table states.
const RENORM_PERIOD: u32 = 1 << 14;

/// Block length after which difference tables are re-seeded from exact
/// phases. Multiplicative drift grows roughly linearly in the step count,
/// so short blocks keep the accumulated phase error well under 1e-9 per
/// term even for degree-5 tables.
const RESEED_PERIOD: u64 = 512;

/// A evaluated sum together with its length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumValue {
    pub value: Complex64,
    pub n_terms: u64,
}

/// `sum_{n0 < n <= n1} a_n e(phase(n))` by direct per-term evaluation.
pub fn weyl_sum_range<P: Phase>(
    phase: &P,
    weights: &WeightSeq,
    n0: u64,
    n1: u64,
) -> Result<SumValue> {
    let mut s = Complex64::new(0.0, 0.0);
    for n in (n0 + 1)..=n1 {
        s += weights.weight(n)? * e(phase.eval_mod1(n)?);
    }
    Ok(SumValue {
        value: s,
        n_terms: n1.saturating_sub(n0),
    })
}

/// `sum_{n=1}^N a_n e(phase(n))`.
pub fn weyl_sum<P: Phase>(phase: &P, weights: &WeightSeq, n: u64) -> Result<SumValue> {
    weyl_sum_range(phase, weights, 0, n)
}

/// One-pass `max_{1<=M<=N} |sum_{n<=M} a_n e(phase(n))|` with the smallest
/// attaining `M`.
pub fn prefix_max<P: Phase>(phase: &P, weights: &WeightSeq, n: u64) -> Result<(f64, u64)> {
    if n < 1 {
        return Err(LabError::validation("prefix_max requires N >= 1"));
    }
    let mut s = Complex64::new(0.0, 0.0);
    let mut best = f64::NEG_INFINITY;
    let mut best_m = 0u64;
    for m in 1..=n {
        s += weights.weight(m)? * e(phase.eval_mod1(m)?);
        let mag = s.norm();
        if mag > best {
            best = mag;
            best_m = m;
        }
    }
    Ok((best, best_m))
}

/// Rotating difference table: advances `e(P(n))` for a degree-d polynomial
/// `P` by `d` complex multiplications per step, with periodic
/// renormalization to pin the states to the unit circle.
pub struct DiffTable {
    states: Vec<Complex64>,
    steps: u32,
}

impl DiffTable {
    /// Builds the table from the exact phases `P(n0), ..., P(n0+d)` (mod 1).
    /// The first call to `step` returns `e(P(n0))`.
    pub fn new(phases: &[f64]) -> DiffTable {
        let d = phases.len() - 1;
        let mut rows: Vec<f64> = phases.to_vec();
        let mut states = Vec::with_capacity(d + 1);
        for j in 0..=d {
            states.push(e(frac(rows[0])));
            for i in 0..(d - j) {
                rows[i] = rows[i + 1] - rows[i];
            }
            let _ = j;
        }
        DiffTable { states, steps: 0 }
    }

    /// Returns `e(P(n))` for the current `n`, then advances to `n + 1`.
    pub fn step(&mut self) -> Complex64 {
        let out = self.states[0];
        let d = self.states.len() - 1;
        for j in 0..d {
            let next = self.states[j + 1];
            self.states[j] *= next;
        }
        self.steps += 1;
        if self.steps >= RENORM_PERIOD {
            self.steps = 0;
            for z in &mut self.states {
                let m = z.norm();
                if m > 0.0 {
                    *z /= m;
                }
            }
        }
        out
    }
}

/// Batch evaluation of `weyl_sum` over a grid of phase vectors using the
/// difference-table kernel; agrees with the direct path to 1e-9 relative
/// magnitude for `N <= 1e5`.
pub fn batch_eval(
    grid: &[PhaseVector],
    weights: &WeightSeq,
    n: u64,
) -> Result<Vec<SumValue>> {
    let mut out = Vec::with_capacity(grid.len());
    for pv in grid {
        let d = pv.degree() as u64;
        let mut s = Complex64::new(0.0, 0.0);
        let mut m = 1u64;
        while m <= n {
            let block_end = (m + RESEED_PERIOD - 1).min(n);
            let mut phases = Vec::with_capacity(d as usize + 1);
            for t in m..=(m + d) {
                phases.push(pv.eval_mod1(t)?);
            }
            let mut table = DiffTable::new(&phases);
            for mm in m..=block_end {
                s += weights.weight(mm)? * table.step();
            }
            m = block_end + 1;
        }
        out.push(SumValue {
            value: s,
            n_terms: n,
        });
    }
    Ok(out)
}

/// A monomial coefficient split as `hi + lo` so that grid offsets below one
/// ulp of `hi` remain representable. Both parts lie in `[0, 1)`.
#[derive(Clone, Copy, Debug)]
pub struct SplitCoeff {
    pub hi: f64,
    pub lo: f64,
}

impl SplitCoeff {
    pub fn new(hi: f64, lo: f64) -> SplitCoeff {
        SplitCoeff { hi, lo }
    }

    /// `frac((hi + lo) * n^d)`, each part reduced exactly.
    pub fn eval_mod1(&self, n: u64, d: u32) -> Result<f64> {
        let p = pow_checked(n, d)?;
        let a = frac_mul_u128(frac(self.hi), p);
        let b = if self.lo == 0.0 {
            0.0
        } else {
            frac_mul_u128(frac(self.lo), p)
        };
        Ok(frac(a + b))
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// `max_{M in (N/2, N]} |sum_{N/2 < n <= M} a_n e(x n^d)|` via the
/// difference-table kernel: the dyadic-range profile of the large-value
/// machinery.
pub fn dyadic_prefix_max(x: SplitCoeff, d: u32, n: u64, weights: &WeightSeq) -> Result<f64> {
    let half = n / 2;
    if half >= n {
        return Err(LabError::validation("dyadic range requires N >= 2"));
    }
    let mut s = Complex64::new(0.0, 0.0);
    let mut best = 0.0f64;
    let mut m = half + 1;
    while m <= n {
        let block_end = (m + RESEED_PERIOD - 1).min(n);
        let mut phases = Vec::with_capacity(d as usize + 1);
        for t in m..=(m + d as u64) {
            phases.push(x.eval_mod1(t, d)?);
        }
        let mut table = DiffTable::new(&phases);
        for mm in m..=block_end {
            s += weights.weight(mm)? * table.step();
            let mag = s.norm();
            if mag > best {
                best = mag;
            }
        }
        m = block_end + 1;
    }
    Ok(best)
}

/// Hardy-Littlewood flat-sum demo: grid maximum over `x` of
/// `|sum_{n<=N} e(xi n log n + x n)| / sqrt(N)`.
pub fn flat_sum_demo(xi: f64, n: u64, grid_resolution: u64) -> Result<f64> {
    if xi == 0.0 {
        return Err(LabError::validation(
            "xi = 0 degenerates to a geometric sum with sup = N",
        ));
    }
    if n < 1 {
        return Err(LabError::validation("N must be >= 1"));
    }
    if grid_resolution < 4 * n {
        return Err(LabError::validation(
            "grid resolution must be >= 4N to resolve the 1-periodic sup",
        ));
    }
    // Fixed twist factors e(xi n log n).
    let c: Vec<Complex64> = (1..=n)
        .map(|m| {
            let mf = m as f64;
            e(frac(xi * mf * mf.ln()))
        })
        .collect();
    let mut best = 0.0f64;
    for j in 0..grid_resolution {
        let x = j as f64 / grid_resolution as f64;
        let w = e(x);
        let mut rot = Complex64::new(1.0, 0.0);
        let mut s = Complex64::new(0.0, 0.0);
        for (i, cn) in c.iter().enumerate() {
            rot *= w;
            if (i as u32) % RENORM_PERIOD == RENORM_PERIOD - 1 {
                rot /= rot.norm();
            }
            s += cn * rot;
        }
        let mag = s.norm();
        if mag > best {
            best = mag;
        }
    }
    Ok(best / (n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::MonomialPhase;
    use crate::rng;

    #[test]
    fn ones_linear_zero_phase() {
        let p = PhaseVector::new(vec![0.0]).unwrap();
        let s = weyl_sum(&p, &WeightSeq::Ones, 100).unwrap();
        assert!((s.value.re - 100.0).abs() < 1e-9 && s.value.im.abs() < 1e-9);
    }

    #[test]
    fn alternating_quadratic() {
        // x = (0, 1/2): sum of (-1)^(n^2) = sum of (-1)^n = 0 for even N.
        let p = PhaseVector::new(vec![0.0, 0.5]).unwrap();
        let s = weyl_sum(&p, &WeightSeq::Ones, 10).unwrap();
        assert!(s.value.norm() < 1e-12);
    }

    #[test]
    fn gauss_sum_magnitude() {
        // Complete quadratic Gauss sum mod 7 has magnitude sqrt(7).
        let p = PhaseVector::new(vec![0.0, 1.0 / 7.0]).unwrap();
        let s = weyl_sum(&p, &WeightSeq::Ones, 7).unwrap();
        assert!((s.value.norm() - 7f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn triangle_inequality() {
        let p = PhaseVector::new(vec![0.31, 0.77]).unwrap();
        for n in [1u64, 13, 200] {
            let s = weyl_sum(&p, &WeightSeq::RandomPhase { seed: 3 }, n).unwrap();
            assert!(s.value.norm() <= n as f64 + 1e-9);
        }
    }

    #[test]
    fn prefix_max_basics() {
        let zero = PhaseVector::new(vec![0.0]).unwrap();
        assert_eq!(prefix_max(&zero, &WeightSeq::Ones, 50).unwrap().1, 50);
        let half = PhaseVector::new(vec![0.5]).unwrap();
        let (m, at) = prefix_max(&half, &WeightSeq::Ones, 10).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
        assert_eq!(at, 1);
    }

    #[test]
    fn prefix_max_dominates_full_sum() {
        let p = PhaseVector::new(vec![0.0, 1.0 / 7.0]).unwrap();
        let (m, _) = prefix_max(&p, &WeightSeq::Ones, 7).unwrap();
        let s = weyl_sum(&p, &WeightSeq::Ones, 7).unwrap();
        assert!(m >= s.value.norm() - 1e-12);
        assert!(m >= 7f64.sqrt() - 1e-9);
    }

    #[test]
    fn batch_matches_direct_random_grid() {
        // 64 random cubic phase points, N = 1e4, 1e-9 relative.
        let n = 10_000u64;
        let grid: Vec<PhaseVector> = (0..64)
            .map(|i| {
                PhaseVector::new(vec![
                    rng::u01(11, 3 * i),
                    rng::u01(11, 3 * i + 1),
                    rng::u01(11, 3 * i + 2),
                ])
                .unwrap()
            })
            .collect();
        let w = WeightSeq::Ones;
        let batch = batch_eval(&grid, &w, n).unwrap();
        for (pv, b) in grid.iter().zip(&batch) {
            let direct = weyl_sum(pv, &w, n).unwrap();
            let diff = (b.value - direct.value).norm();
            assert!(diff <= 1e-9 * n as f64, "diff = {diff}");
        }
    }

    #[test]
    fn batch_deterministic_for_identical_points() {
        let p = PhaseVector::new(vec![0.2, 0.4, 0.6]).unwrap();
        let out = batch_eval(&[p.clone(), p], &WeightSeq::Ones, 500).unwrap();
        assert_eq!(out[0].value, out[1].value);
    }

    #[test]
    fn weight_reduction_identity() {
        // S_{a,d}(x; N) = sigma_{b,d}(x_d; N) with
        // b_n = a_n e(x_1 n + ... + x_{d-1} n^{d-1}).
        let x = [0.21f64, 0.52, 0.83];
        let full = PhaseVector::new(x.to_vec()).unwrap();
        let lhs = weyl_sum(&full, &WeightSeq::Ones, 300).unwrap();
        let reduction = WeightSeq::Reduction(PhaseVector::new(x[..2].to_vec()).unwrap());
        let mono = MonomialPhase::new(x[2], 3).unwrap();
        let rhs = weyl_sum(&mono, &reduction, 300).unwrap();
        assert!((lhs.value - rhs.value).norm() < 1e-9);
    }

    #[test]
    fn translation_covariance() {
        // sigma_{a,d}(x + alpha; N) = sigma_{a',d}(x; N) with
        // a'_n = a_n e(alpha n^d).
        // x and alpha chosen so that x + alpha is exactly representable.
        let (x, alpha, d, n) = (0.3125f64, 0.25f64, 3u32, 200u64);
        let lhs = weyl_sum(&MonomialPhase::new(x + alpha, d).unwrap(), &WeightSeq::Ones, n)
            .unwrap();
        let twist = WeightSeq::Reduction(PhaseVector::new(vec![0.0, 0.0, alpha]).unwrap());
        let rhs = weyl_sum(&MonomialPhase::new(x, d).unwrap(), &twist, n).unwrap();
        assert!((lhs.value - rhs.value).norm() < 1e-9);
    }

    #[test]
    fn split_coeff_matches_plain() {
        let x = SplitCoeff::new(0.123456, 0.0);
        let m = MonomialPhase::new(0.123456, 3).unwrap();
        for n in [1u64, 10, 12345] {
            assert_eq!(x.eval_mod1(n, 3).unwrap(), m.eval_mod1(n).unwrap());
        }
    }

    #[test]
    fn split_coeff_sub_ulp_offset_matters() {
        // An offset of 1e-18 is invisible in hi + lo as a single f64 but
        // shifts the phase of n^3 at n ~ 3e6 by ~ 2.7e1 * 1e-18 * 1e19.
        let base = 0.2f64;
        let eps = 1e-18f64;
        let a = SplitCoeff::new(base, 0.0);
        let b = SplitCoeff::new(base, eps);
        let n = 3_000_000u64;
        let pa = a.eval_mod1(n, 3).unwrap();
        let pb = b.eval_mod1(n, 3).unwrap();
        let expect = frac(pa + eps * (n as f64).powi(3));
        let d = (pb - expect).abs();
        assert!(d.min(1.0 - d) < 1e-9, "d = {d}");
        assert!(pa != pb);
    }

    #[test]
    fn dyadic_prefix_max_matches_direct() {
        let x = SplitCoeff::new(0.2137, 0.0);
        let n = 512u64;
        let fast = dyadic_prefix_max(x, 3, n, &WeightSeq::Ones).unwrap();
        // Direct recomputation per M.
        let m0 = n / 2;
        let mono = MonomialPhase::new(0.2137, 3).unwrap();
        let mut best = 0.0f64;
        for m in (m0 + 1)..=n {
            let s = weyl_sum_range(&mono, &WeightSeq::Ones, m0, m).unwrap();
            best = best.max(s.value.norm());
        }
        assert!((fast - best).abs() < 1e-9 * n as f64);
    }

    #[test]
    fn flat_sum_validation() {
        assert!(flat_sum_demo(0.0, 64, 1024).is_err());
        assert!(flat_sum_demo(0.7, 64, 64).is_err());
    }

    #[test]
    fn flat_sum_is_flat() {
        // Hardy-Littlewood flatness: the normalized sup stays O(1).
        let r = flat_sum_demo(0.7, 256, 1024).unwrap();
        assert!(r <= 5.0, "ratio = {r}");
        assert!(r >= 0.5);
    }
}
