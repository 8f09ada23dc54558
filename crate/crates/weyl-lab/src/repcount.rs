//! Counting representations by sums and differences of d-th powers and by
//! the paired linear/quadratic system, via sorted pair-spectra.

use crate::error::{LabError, Result};
use crate::rng;
use crate::{check_budget, Result as LabResult};

/// Query for `R_d(k, N) = #{(n1..n4) in [1,N]^4 : n1^d + n2^d - n3^d - n4^d = k}`.
#[derive(Clone, Copy, Debug)]
pub struct RepQuery {
    pub d: u32,
    pub k: i128,
    pub n: u64,
}

/// Count with its diagonal / non-diagonal breakdown. A quadruple is diagonal
/// when `{n1, n2} = {n3, n4}` as multisets (only possible when k = 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepCount {
    pub total: u128,
    pub diagonal: u128,
    pub nondiagonal: u128,
}

/// Query for `Q(k, m, N)`: quadruples with `n1+n2-n3-n4 = k` and
/// `n1^2+n2^2-n3^2-n4^2 = m`.
#[derive(Clone, Copy, Debug)]
pub struct PairSystemQuery {
    pub k: i128,
    pub m: i128,
    pub n: u64,
}

fn pow_i128(n: u64, d: u32) -> Result<i128> {
    (n as i128)
        .checked_pow(d)
        .ok_or_else(|| LabError::range(format!("{n}^{d} exceeds the 128-bit power range")))
}

/// Sorted spectrum of ordered pair sums `n1^d + n2^d` as
/// `(value, multiplicity)`.
fn pair_spectrum(d: u32, n: u64) -> Result<Vec<(i128, u64)>> {
    check_budget((n as u128).pow(2))?;
    let powers: Vec<i128> = (1..=n).map(|m| pow_i128(m, d)).collect::<Result<_>>()?;
    let mut vals = Vec::with_capacity((n as usize) * (n as usize + 1) / 2);
    for i in 0..powers.len() {
        for j in i..powers.len() {
            // Ordered multiplicity: (i,j) and (j,i) when distinct.
            vals.push((powers[i] + powers[j], if i == j { 1u64 } else { 2 }));
        }
    }
    vals.sort_unstable();
    let mut out: Vec<(i128, u64)> = Vec::new();
    for (v, m) in vals {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += m,
            _ => out.push((v, m)),
        }
    }
    Ok(out)
}

/// Offset self-join `sum_s P(s) P(s - k)` over a sorted spectrum.
fn offset_join(spec: &[(i128, u64)], k: i128) -> u128 {
    let mut total: u128 = 0;
    let mut j = 0usize;
    for &(s, m) in spec {
        let target = match s.checked_sub(k) {
            Some(t) => t,
            None => continue,
        };
        while j < spec.len() && spec[j].0 < target {
            j += 1;
        }
        if j == spec.len() {
            // Restart scan for any later (larger) s: pointer already past end.
            break;
        }
        if spec[j].0 == target {
            total += m as u128 * spec[j].1 as u128;
        }
    }
    total
}

/// Diagonal quadruple count `2N^2 - N`.
pub fn diagonal_count(n: u64) -> u128 {
    2 * (n as u128) * (n as u128) - n as u128
}

/// `R_d(k, N)` with diagonal breakdown.
pub fn r_count(q: RepQuery) -> LabResult<RepCount> {
    if q.d < 2 {
        return Err(LabError::validation("r_count requires d >= 2"));
    }
    if q.n < 1 {
        return Err(LabError::validation("r_count requires N >= 1"));
    }
    let spec = pair_spectrum(q.d, q.n)?;
    let total = offset_join(&spec, q.k);
    let diagonal = if q.k == 0 { diagonal_count(q.n) } else { 0 };
    Ok(RepCount {
        total,
        diagonal,
        nondiagonal: total - diagonal,
    })
}

/// Two-dimensional spectrum of `(n1+n2, n1^2+n2^2)` pairs.
fn pair_spectrum_2d(n: u64) -> Result<Vec<((i128, i128), u64)>> {
    check_budget((n as u128).pow(2))?;
    let mut vals = Vec::with_capacity((n as usize) * (n as usize + 1) / 2);
    for i in 1..=n as i128 {
        for j in i..=n as i128 {
            vals.push(((i + j, i * i + j * j), if i == j { 1u64 } else { 2 }));
        }
    }
    vals.sort_unstable();
    let mut out: Vec<((i128, i128), u64)> = Vec::new();
    for (v, m) in vals {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += m,
            _ => out.push((v, m)),
        }
    }
    Ok(out)
}

/// `Q(k, m, N)` via the two-dimensional pair-spectrum join.
pub fn q_count(q: PairSystemQuery) -> LabResult<RepCount> {
    if q.n < 1 {
        return Err(LabError::validation("q_count requires N >= 1"));
    }
    let spec = pair_spectrum_2d(q.n)?;
    let mut total: u128 = 0;
    let mut j = 0usize;
    for &((s1, s2), m) in &spec {
        let target = (s1 - q.k, s2 - q.m);
        while j < spec.len() && spec[j].0 < target {
            j += 1;
        }
        if j == spec.len() {
            break;
        }
        if spec[j].0 == target {
            total += m as u128 * spec[j].1 as u128;
        }
    }
    // Sum and sum-of-squares determine the pair multiset, so diagonal
    // quadruples occur exactly at (k, m) = (0, 0).
    let diagonal = if q.k == 0 && q.m == 0 {
        diagonal_count(q.n)
    } else {
        0
    };
    Ok(RepCount {
        total,
        diagonal,
        nondiagonal: total - diagonal,
    })
}

/// All `(m, n) in [1,N]^2` with `m^d = n^d + k` for `k != 0`, found by
/// iterating divisors `e = m - n` of `|k|`.
pub fn power_pair_count(d: u32, k: i128, n: u64) -> LabResult<Vec<(u64, u64)>> {
    if k == 0 {
        return Err(LabError::validation("power_pair_count requires k != 0"));
    }
    if d < 2 {
        return Err(LabError::validation("power_pair_count requires d >= 2"));
    }
    // m^d - n^d = k has m > n iff k > 0; reduce k < 0 by swapping roles.
    let (ka, swap) = if k > 0 { (k as u128, false) } else { (k.unsigned_abs(), true) };
    let mut divisors: Vec<u128> = Vec::new();
    let mut e = 1u128;
    while e * e <= ka {
        if ka % e == 0 {
            divisors.push(e);
            if e != ka / e {
                divisors.push(ka / e);
            }
        }
        e += 1;
    }
    let mut pairs = Vec::new();
    for &e in &divisors {
        if e as u64 as u128 != e || e as u64 >= n {
            continue;
        }
        let e64 = e as u64;
        // Binary search the unique n0 (if any) with (n0+e)^d - n0^d = ka.
        let (mut lo, mut hi) = (1u64, n - e64);
        while lo <= hi {
            let mid = lo + (hi - lo) / 2;
            let diff = pow_i128(mid + e64, d)? - pow_i128(mid, d)?;
            match (diff as u128).cmp(&ka) {
                std::cmp::Ordering::Equal => {
                    pairs.push(if swap { (mid, mid + e64) } else { (mid + e64, mid) });
                    break;
                }
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => {
                    if mid == 1 {
                        break;
                    }
                    hi = mid - 1;
                }
            }
        }
    }
    pairs.sort_unstable();
    Ok(pairs)
}

/// Per-k table of `R_d(k, N)` over a sample of nonzero shifts, with the
/// observed exponent `log(max) / log N`.
pub struct NondiagProfile {
    pub rows: Vec<(i128, u128)>,
    pub max: u128,
    pub exponent: f64,
}

pub fn nondiag_profile(d: u32, n: u64, ks: &[i128]) -> LabResult<NondiagProfile> {
    let spec = pair_spectrum(d, n)?;
    let mut rows = Vec::with_capacity(ks.len());
    let mut max = 0u128;
    for &k in ks {
        if k == 0 {
            return Err(LabError::validation("nondiag_profile samples must be nonzero"));
        }
        let t = offset_join(&spec, k);
        max = max.max(t);
        rows.push((k, t));
    }
    let exponent = if max > 0 {
        (max as f64).ln() / (n as f64).ln()
    } else {
        f64::NEG_INFINITY
    };
    Ok(NondiagProfile { rows, max, exponent })
}

/// Stratified log-uniform sample of nonzero shifts `k` with `|k| <= kmax`.
pub fn sample_k_log_uniform(kmax: i128, count: usize, seed: u64) -> Vec<i128> {
    assert!(kmax >= 1);
    let top = (kmax as f64).ln();
    let mut out = Vec::with_capacity(count);
    for i in 0..count as u64 {
        // Stratify the magnitude exponent across the sample.
        let stratum = (i as f64 + rng::u01(seed, 2 * i)) / count as f64;
        let mag = (stratum * top).exp();
        let mut k = mag.round() as i128;
        k = k.clamp(1, kmax);
        if rng::bits(seed, 2 * i + 1) & 1 == 1 {
            k = -k;
        }
        out.push(k);
    }
    out
}

/// Count of solutions of `x1^4 - x2^4 = x3^4 - x4^4 + k`; equal to
/// `R_4(k, N)` after moving `x4^4` and `x2^4` across the equation.
pub fn quartic_shift_count(k: i128, n: u64) -> LabResult<u128> {
    Ok(r_count(RepQuery { d: 4, k, n })?.total)
}
