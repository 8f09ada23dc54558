//! Exact extreme discrepancy of finite point sets modulo one, and the
//! Koksma-type comparison against Weyl sums.

use crate::error::{LabError, Result};
use crate::phase::{Phase, PhaseVector};
use crate::sums;
use crate::weights::WeightSeq;

/// Unnormalized discrepancy `sup_{0<=a<b<=1} |#{x in (a,b)} - (b-a) N|`
/// with a closed interval pair attaining the supremum in the limit.
#[derive(Clone, Copy, Debug)]
pub struct DiscrepancyResult {
    pub value: f64,
    pub argmax: (f64, f64),
}

/// Distinct sorted values with cumulative counts. `cum[k]` is the number of
/// points with value `<= vals[k]`.
fn compress(points: &[f64]) -> Result<(Vec<f64>, Vec<u64>)> {
    let mut sorted = points.to_vec();
    for &p in points {
        if !(0.0..1.0).contains(&p) {
            return Err(LabError::validation(format!("point {p} outside [0,1)")));
        }
    }
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let mut vals = Vec::new();
    let mut cum = Vec::new();
    let mut seen = 0u64;
    for &v in &sorted {
        seen += 1;
        match vals.last() {
            Some(&last) if last == v => *cum.last_mut().unwrap() = seen,
            _ => {
                vals.push(v);
                cum.push(seen);
            }
        }
    }
    Ok((vals, cum))
}

/// Exact supremum over open intervals, O(N log N): the surplus side scans
/// intervals pinched just outside runs of points, the deficiency side scans
/// gaps between candidate boundaries {0} + points + {1}.
pub fn disc_exact(points: &[f64]) -> Result<DiscrepancyResult> {
    if points.is_empty() {
        return Err(LabError::validation("need at least one point"));
    }
    let n = points.len() as f64;
    let (vals, cum) = compress(points)?;
    let m = vals.len();
    let below = |k: usize| if k == 0 { 0 } else { cum[k - 1] }; // # points < vals[k]

    let mut best = f64::NEG_INFINITY;
    let mut arg = (0.0, 1.0);

    // Surplus: intervals (vals[i]-eps, vals[j]+eps) for vals[i] > 0 capture
    // cum[j] - below(i) points over length vals[j] - vals[i].
    {
        let mut run = f64::NEG_INFINITY;
        let mut run_at = 0usize;
        for j in 0..m {
            if vals[j] > 0.0 {
                let cand = vals[j] * n - below(j) as f64;
                if cand > run {
                    run = cand;
                    run_at = j;
                }
            }
            if run > f64::NEG_INFINITY {
                let v = (cum[j] as f64 - vals[j] * n) + run;
                if v > best {
                    best = v;
                    arg = (vals[run_at], vals[j]);
                }
            }
        }
    }

    // Deficiency: boundaries a in {0} + vals (excluding points <= a) and
    // b in vals + {1} (counting points < b); the open interval (a, b)
    // holds #(<b) - #(<=a) points. Both lists are sorted by position, so a
    // single merge keeps the best left boundary seen strictly before b.
    {
        let le_zero = if vals.first() == Some(&0.0) { cum[0] } else { 0 };
        let lefts: Vec<(f64, u64)> = std::iter::once((0.0, le_zero))
            .chain((0..m).map(|k| (vals[k], cum[k])))
            .collect();
        let rights: Vec<(f64, u64)> = (0..m)
            .map(|k| (vals[k], below(k)))
            .chain(std::iter::once((1.0, points.len() as u64)))
            .collect();
        let mut run = f64::NEG_INFINITY;
        let mut run_at = 0.0f64;
        let mut li = 0usize;
        for &(b, lt_b) in &rights {
            while li < lefts.len() && lefts[li].0 < b {
                let (a, le_a) = lefts[li];
                let cand = le_a as f64 - a * n;
                if cand > run {
                    run = cand;
                    run_at = a;
                }
                li += 1;
            }
            if run > f64::NEG_INFINITY {
                let v = (b * n - lt_b as f64) + run;
                if v > best {
                    best = v;
                    arg = (run_at, b);
                }
            }
        }
    }

    Ok(DiscrepancyResult {
        value: best.max(0.0),
        argmax: arg,
    })
}

/// O(N^2) oracle: literal double loop over all candidate boundary pairs.
pub fn disc_oracle(points: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(LabError::validation("need at least one point"));
    }
    let n = points.len() as f64;
    let (vals, cum) = compress(points)?;
    let m = vals.len();
    let below = |k: usize| if k == 0 { 0 } else { cum[k - 1] };
    let mut best = 0.0f64;
    // Surplus: [vals[i], vals[j]] pinched from outside, vals[i] > 0.
    for i in 0..m {
        if vals[i] == 0.0 {
            continue;
        }
        for j in i..m {
            let v = (cum[j] - below(i)) as f64 - (vals[j] - vals[i]) * n;
            best = best.max(v);
        }
    }
    // Deficiency: open gaps between boundaries {0} + vals and vals + {1}.
    let le_zero = if vals.first() == Some(&0.0) { cum[0] } else { 0 };
    let lefts: Vec<(f64, u64)> = std::iter::once((0.0, le_zero))
        .chain((0..m).map(|k| (vals[k], cum[k])))
        .collect();
    let rights: Vec<(f64, u64)> = (0..m)
        .map(|k| (vals[k], below(k)))
        .chain(std::iter::once((1.0, points.len() as u64)))
        .collect();
    for &(a, le_a) in &lefts {
        for &(b, lt_b) in &rights {
            if b <= a {
                continue;
            }
            let v = (b - a) * n - (lt_b - le_a) as f64;
            best = best.max(v);
        }
    }
    Ok(best)
}

/// Discrepancy of the polynomial sequence `x1 n + ... + xd n^d` mod 1.
pub fn disc_for_phase(x: &PhaseVector, n: u64) -> Result<DiscrepancyResult> {
    let points: Vec<f64> = (1..=n)
        .map(|m| x.eval_mod1(m))
        .collect::<Result<_>>()?;
    disc_exact(&points)
}

/// Koksma-type ratio `|S_d(x; N)| / D_d(x; N)`.
pub fn koksma_probe(x: &PhaseVector, n: u64) -> Result<f64> {
    let d = disc_for_phase(x, n)?;
    if d.value <= 0.0 {
        return Err(LabError::validation("discrepancy vanished unexpectedly"));
    }
    let s = sums::weyl_sum(x, &WeightSeq::Ones, n)?;
    Ok(s.value.norm() / d.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn single_point() {
        let r = disc_exact(&[0.5]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_spread_points() {
        let r = disc_exact(&[0.0, 0.5]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_points_at_zero() {
        // Points at 0 lie in no open interval; the near-full empty
        // interval gives deficiency N.
        let r = disc_exact(&[0.0; 7]).unwrap();
        assert!((r.value - 7.0).abs() < 1e-12);
    }

    #[test]
    fn matches_oracle_random() {
        for seed in 0..32u64 {
            let n = 20 + (rng::bits(seed, 0) % 280) as usize;
            let pts: Vec<f64> = (0..n).map(|i| rng::u01(seed + 1000, i as u64)).collect();
            let fast = disc_exact(&pts).unwrap().value;
            let slow = disc_oracle(&pts).unwrap();
            assert!(
                (fast - slow).abs() < 1e-9,
                "seed {seed}: fast {fast} slow {slow}"
            );
        }
    }

    #[test]
    fn matches_oracle_with_duplicates() {
        let pts = [0.25, 0.25, 0.25, 0.8, 0.8, 0.1, 0.0];
        let fast = disc_exact(&pts).unwrap().value;
        let slow = disc_oracle(&pts).unwrap();
        assert!((fast - slow).abs() < 1e-12);
    }

    #[test]
    fn permutation_invariance_and_scaling() {
        let pts = [0.9, 0.1, 0.4, 0.35, 0.77];
        let mut rev = pts;
        rev.reverse();
        let a = disc_exact(&pts).unwrap().value;
        let b = disc_exact(&rev).unwrap().value;
        assert_eq!(a, b);
        // Duplicating every point doubles the value.
        let mut doubled = pts.to_vec();
        doubled.extend_from_slice(&pts);
        let c = disc_exact(&doubled).unwrap().value;
        assert!((c - 2.0 * a).abs() < 1e-12);
    }

    #[test]
    fn phase_sequences() {
        let zero = PhaseVector::new(vec![0.0, 0.0]).unwrap();
        assert!((disc_for_phase(&zero, 40).unwrap().value - 40.0).abs() < 1e-12);
        // d=1, x=0.5: points alternate 0.5, 0 -> value 5 at N=10.
        let half = PhaseVector::new(vec![0.5]).unwrap();
        assert!((disc_for_phase(&half, 10).unwrap().value - 5.0).abs() < 1e-12);
        // Equidistributed quadratic phase: value well below N.
        let gold = PhaseVector::new(vec![0.2, 0.6180339887498949]).unwrap();
        let r = disc_for_phase(&gold, 1000).unwrap();
        assert!(r.value <= 100.0, "value = {}", r.value);
    }

    #[test]
    fn koksma_trivial_cases() {
        let zero = PhaseVector::new(vec![0.0]).unwrap();
        assert!((koksma_probe(&zero, 30).unwrap() - 1.0).abs() < 1e-12);
        let half = PhaseVector::new(vec![0.5]).unwrap();
        assert!(koksma_probe(&half, 10).unwrap() < 1e-12);
    }
}
