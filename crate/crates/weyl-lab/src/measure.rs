//! Empirical probes of the full-measure theorems: indicator fractions,
//! ladder statistics, the Lemma 3.1 predictor, and the counterexample set.

use crate::error::{LabError, Result};
use crate::modone::frac;
use crate::phase::{Phase, PhaseVector};
use crate::rng;
use crate::weights::WeightSeq;
use crate::{e, Complex64};

/// Thresholds for the large-value window `[c sqrt(N), C sqrt(N)]` together
/// with the moment constants of Lemma 3.1.
#[derive(Clone, Copy, Debug)]
pub struct ScanThresholds {
    pub c: f64,
    pub big_c: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

/// `eps0 = (alpha1 - c^2 - alpha2 / C^2) / C^2`; may be <= 0 (reported).
pub fn epsilon0(t: ScanThresholds) -> f64 {
    let c2 = t.big_c * t.big_c;
    (t.alpha1 - t.c * t.c - t.alpha2 / c2) / c2
}

/// Fraction of grid points `x` in the region whose monomial sum magnitude
/// lies in `[c sqrt(N), C sqrt(N)]`. The grid is equispaced with a seeded
/// random offset to avoid aligning with rational points.
pub fn indicator_fraction(
    d: u32,
    weights: &WeightSeq,
    region_start: f64,
    region_len: f64,
    n: u64,
    c: f64,
    big_c: f64,
    grid: u64,
    seed: u64,
) -> Result<f64> {
    if grid < 1000 {
        return Err(LabError::validation("grid must have at least 1000 points"));
    }
    let sqn = (n as f64).sqrt();
    let off = rng::u01(seed, 0);
    let mut hits = 0u64;
    for j in 0..grid {
        let x = frac(region_start + (j as f64 + off) / grid as f64 * region_len);
        let mag = monomial_sum_mag(x, d, weights, n)?;
        if mag >= c * sqn && mag <= big_c * sqn {
            hits += 1;
        }
    }
    Ok(hits as f64 / grid as f64)
}

fn monomial_sum_mag(x: f64, d: u32, weights: &WeightSeq, n: u64) -> Result<f64> {
    let mut full = vec![0.0; d as usize];
    full[d as usize - 1] = x;
    let pv = PhaseVector::new(full)?;
    let mut s = Complex64::new(0.0, 0.0);
    for m in 1..=n {
        s += weights.weight(m)? * e(pv.eval_mod1(m)?);
    }
    Ok(s.norm())
}

/// Hit statistics over an increasing ladder of sum lengths: the finite
/// proxy for "infinitely many N".
#[derive(Clone, Debug)]
pub struct LadderReport {
    pub ns: Vec<u64>,
    /// Per-N fraction of grid points hitting the window.
    pub per_n_fraction: Vec<f64>,
    /// Fraction of grid points hitting at some N in the ladder.
    pub union_fraction: f64,
    /// Fraction hitting at some N >= ladder[m], for each tail start m.
    pub tail_union: Vec<f64>,
}

pub fn ladder_stats(
    d: u32,
    weights: &WeightSeq,
    region_start: f64,
    region_len: f64,
    ns: &[u64],
    c: f64,
    big_c: f64,
    grid: u64,
    seed: u64,
) -> Result<LadderReport> {
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LabError::validation("ladder must be strictly increasing"));
    }
    let nmax = *ns.last().unwrap();
    let off = rng::u01(seed, 0);
    let mut hit_masks: Vec<Vec<bool>> = Vec::with_capacity(grid as usize);
    let mut per_n_hits = vec![0u64; ns.len()];
    for j in 0..grid {
        let x = frac(region_start + (j as f64 + off) / grid as f64 * region_len);
        let mut full = vec![0.0; d as usize];
        full[d as usize - 1] = x;
        let pv = PhaseVector::new(full)?;
        // One incremental pass records the magnitude at every ladder stop.
        let mut s = Complex64::new(0.0, 0.0);
        let mut mask = vec![false; ns.len()];
        let mut next = 0usize;
        for m in 1..=nmax {
            s += weights.weight(m)? * e(pv.eval_mod1(m)?);
            while next < ns.len() && ns[next] == m {
                let sqn = (m as f64).sqrt();
                let mag = s.norm();
                if mag >= c * sqn && mag <= big_c * sqn {
                    mask[next] = true;
                    per_n_hits[next] += 1;
                }
                next += 1;
            }
        }
        hit_masks.push(mask);
    }
    let gf = grid as f64;
    let per_n_fraction = per_n_hits.iter().map(|&h| h as f64 / gf).collect();
    let mut tail_union = Vec::with_capacity(ns.len());
    for m in 0..ns.len() {
        let hits = hit_masks
            .iter()
            .filter(|mask| mask[m..].iter().any(|&b| b))
            .count();
        tail_union.push(hits as f64 / gf);
    }
    Ok(LadderReport {
        ns: ns.to_vec(),
        per_n_fraction,
        union_fraction: tail_union[0],
        tail_union,
    })
}

/// Output of the counterexample-set demo.
#[derive(Clone, Copy, Debug)]
pub struct CexAReport {
    /// Upper bound on the measure of A: truncated series plus tail bound.
    pub measure_bound: f64,
    /// `lambda(A cap J) / lambda(J)` over the generations examined.
    pub density: f64,
    /// The generation picked by the bracketing of the probe length.
    pub generation: u32,
}

/// The Section 2 counterexample set `A`: for each generation n, intervals
/// of radius `3^(-n-2) n^(-2)` around the fractions `a / 3^n`.
///
/// Returns the series upper bound on `lambda(A)` truncated at `n_max`
/// (plus an integral tail bound) and the local density of the union of
/// generations up to the bracketing generation inside the probe interval.
pub fn counterexample_a(n_max: u32, probe_start: f64, probe_len: f64) -> Result<CexAReport> {
    if n_max < 2 {
        return Err(LabError::validation("n_max must be >= 2"));
    }
    if !(probe_len > 0.0) || probe_len > 1.0 {
        return Err(LabError::validation("probe length must lie in (0, 1]"));
    }
    // lambda(A) <= (2/9) sum n^-2; tail sum_{n > m} n^-2 < 1/m.
    let mut series = 0.0;
    for n in 1..=n_max as u64 {
        series += 1.0 / (n * n) as f64;
    }
    let measure_bound = 2.0 / 9.0 * (series + 1.0 / n_max as f64);

    // Bracketing 3^-n n^3 <= delta < 3^(-n+1) (n-1)^3: smallest n >= 3 in
    // the decreasing range of 3^-n n^3.
    let delta = probe_len;
    let mut gen = 3u32;
    while gen < 70 && 3f64.powi(-(gen as i32)) * (gen as f64).powi(3) > delta {
        gen += 1;
    }

    // Union of the generation intervals intersected with the probe, over
    // all generations up to `gen` (deeper generations only refine the
    // estimate; up to `gen` the interval count stays ~ gen^3).
    let (x0, x1) = (probe_start, probe_start + probe_len);
    // Generations beyond the bracketing one keep refining the union; take
    // as many as fit an interval-count cap.
    let mut gen_hi = gen;
    let mut count_est = 0.0f64;
    while gen_hi < 70 {
        count_est += delta * 3f64.powi(gen_hi as i32 + 1) + 2.0;
        if count_est > 300_000.0 {
            break;
        }
        gen_hi += 1;
    }
    let mut segs: Vec<(f64, f64)> = Vec::new();
    for n in 1..=gen_hi {
        let q = 3f64.powi(n as i32);
        let r = 3f64.powi(-(n as i32 + 2)) / (n as f64 * n as f64);
        // a = 0 is the torus alias of a = 3^n, so both endpoints of [0,1]
        // carry intervals.
        let lo = ((x0 - r) * q).ceil().max(0.0) as i64;
        let hi = ((x1 + r) * q).floor().min(q) as i64;
        for a in lo..=hi {
            let center = a as f64 / q;
            let s = (center - r).max(x0);
            let t = (center + r).min(x1);
            if t > s {
                segs.push((s, t));
            }
        }
    }
    segs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let mut covered = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (s, t) in segs {
        match cur {
            Some((cs, ct)) if s <= ct => cur = Some((cs, ct.max(t))),
            Some((cs, ct)) => {
                covered += ct - cs;
                cur = Some((s, t));
                let _ = cs;
            }
            None => cur = Some((s, t)),
        }
    }
    if let Some((cs, ct)) = cur {
        covered += ct - cs;
    }
    Ok(CexAReport {
        measure_bound,
        density: covered / delta,
        generation: gen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon0_values() {
        let t = ScanThresholds {
            c: 0.5,
            big_c: 8f64.sqrt(),
            alpha1: 1.0,
            alpha2: 2.0,
        };
        assert!((epsilon0(t) - 0.0625).abs() < 1e-12);
        // Theorem 2.4's choice: C^2 = 4/((1-c^2) lambda), c = 0, lambda = 1
        // gives eps0 = 1/8.
        let t2 = ScanThresholds {
            c: 0.0,
            big_c: 2.0,
            alpha1: 1.0,
            alpha2: 2.0,
        };
        assert!((epsilon0(t2) - 0.125).abs() < 1e-12);
        // Window too thin: eps0 <= 0 is reported, not an error.
        let t3 = ScanThresholds {
            c: 0.0,
            big_c: 1.0,
            alpha1: 1.0,
            alpha2: 2.0,
        };
        assert!(epsilon0(t3) <= 0.0);
    }

    #[test]
    fn indicator_trivial_window() {
        // c = 0, C = sqrt(N): |S| <= N always, fraction 1.
        let f = indicator_fraction(
            2,
            &WeightSeq::Ones,
            0.0,
            1.0,
            64,
            0.0,
            8.0,
            1000,
            3,
        )
        .unwrap();
        assert_eq!(f, 1.0);
    }

    #[test]
    fn indicator_monotone_in_window() {
        let narrow =
            indicator_fraction(3, &WeightSeq::Ones, 0.0, 1.0, 128, 0.5, 2.0, 1000, 3).unwrap();
        let wide =
            indicator_fraction(3, &WeightSeq::Ones, 0.0, 1.0, 128, 0.25, 4.0, 1000, 3).unwrap();
        assert!(wide >= narrow);
    }

    #[test]
    fn ladder_consistency_and_monotone_tails() {
        let ns = [64u64, 128, 256];
        let r = ladder_stats(3, &WeightSeq::Ones, 0.0, 1.0, &ns, 0.3, 4.0, 1000, 9).unwrap();
        assert_eq!(r.tail_union[0], r.union_fraction);
        for w in r.tail_union.windows(2) {
            assert!(w[0] >= w[1] - 1e-12);
        }
        // Singleton ladder matches indicator_fraction.
        let single = ladder_stats(3, &WeightSeq::Ones, 0.0, 1.0, &[128], 0.3, 4.0, 1000, 9)
            .unwrap();
        let ind =
            indicator_fraction(3, &WeightSeq::Ones, 0.0, 1.0, 128, 0.3, 4.0, 1000, 9).unwrap();
        assert!((single.union_fraction - ind).abs() < 1e-12);
        // Determinism.
        let again = ladder_stats(3, &WeightSeq::Ones, 0.0, 1.0, &ns, 0.3, 4.0, 1000, 9).unwrap();
        assert_eq!(r.union_fraction, again.union_fraction);
    }

    #[test]
    fn cex_a_measure_bound() {
        let r = counterexample_a(1000, 0.0, 1.0).unwrap();
        let limit = 2.0 * std::f64::consts::PI.powi(2) / 54.0;
        assert!((r.measure_bound - limit).abs() < 1e-3);
        assert!(r.measure_bound < 1.0);
        // Full-torus probe: density consistent with the (truncated) measure.
        assert!(r.density <= r.measure_bound + 1e-9);
        assert!(r.density > 0.25);
    }

    #[test]
    fn cex_a_local_density_scaling() {
        // Probe of length 3^-8 * 8^3 brackets to generation 8; density
        // should be of order (log 1/delta)^-2, far above delta itself.
        let delta = 3f64.powi(-8) * 512.0;
        let r = counterexample_a(100, 0.123, delta).unwrap();
        assert_eq!(r.generation, 8);
        let logterm = (1.0 / delta).ln().powi(-2);
        assert!(r.density >= 0.1 * logterm, "density {}", r.density);
    }
}
