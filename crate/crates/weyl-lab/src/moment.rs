//! Exact and Monte Carlo moment integrals of weighted exponential sums over
//! sub-intervals, via the M + E spectral decomposition.

use crate::error::{LabError, Result};
use crate::modone::frac_mul_real;
use crate::phase::PhaseVector;
use crate::rng;
use crate::weights::WeightSeq;
use crate::{check_budget, e, sums, Complex64};

/// A real interval `[start, start + length]`.
#[derive(Clone, Copy, Debug)]
pub struct Interval {
    pub start: f64,
    pub length: f64,
}

impl Interval {
    pub fn new(start: f64, length: f64) -> Result<Interval> {
        if !(length > 0.0) || !length.is_finite() || !start.is_finite() {
            return Err(LabError::validation("interval length must be positive"));
        }
        Ok(Interval { start, length })
    }
}

/// Axis-aligned box: one interval per coordinate.
#[derive(Clone, Debug)]
pub struct Box_ {
    pub sides: Vec<Interval>,
}

impl Box_ {
    pub fn new(sides: Vec<Interval>) -> Result<Box_> {
        if sides.is_empty() {
            return Err(LabError::validation("box must have at least one side"));
        }
        Ok(Box_ { sides })
    }

    pub fn volume(&self) -> f64 {
        self.sides.iter().map(|i| i.length).product()
    }
}

/// Exact moment integral split into its diagonal term `M` and off-diagonal
/// term `E`.
#[derive(Clone, Copy, Debug)]
pub struct MomentResult {
    pub total: f64,
    pub diagonal_m: f64,
    pub offdiag_e: Complex64,
    pub nu: u32,
    pub n: u64,
}

/// Monte Carlo estimate of the Lemma 6.3 variance integral.
#[derive(Clone, Copy, Debug)]
pub struct VarianceResult {
    pub value: f64,
    pub stderr: f64,
    pub eps0: f64,
    pub eps1: f64,
}

/// `int_0^delta e(z t) dz = (e(delta t) - 1) / (2 pi i t)`, with a series
/// branch near `t = 0` to avoid catastrophic cancellation, and exact mod-1
/// reduction of `delta * t` for integer `t` so that full-period
/// orthogonality is exact.
fn interval_kernel(delta: f64, t: f64) -> Complex64 {
    let dt = delta * t;
    if dt.abs() < 1e-6 {
        // (e(dt) - 1)/(2 pi i t) = delta (1 + i pi dt - (2/3)(pi dt)^2 + ...)
        let p = std::f64::consts::PI * dt;
        return delta * Complex64::new(1.0 - 2.0 / 3.0 * p * p, p);
    }
    let mut u = frac_mul_real(delta, t);
    if u > 0.5 {
        u -= 1.0;
    }
    // e(u) - 1 = 2 i sin(pi u) e(u/2)
    let s = (std::f64::consts::PI * u).sin();
    (s / (std::f64::consts::PI * t)) * e(u / 2.0)
}

/// Collapses a spectrum to groups of equal frequency, summing coefficients
/// within a group. The tolerance is relative to each value (a few thousand
/// ulps), so it absorbs f64 rounding of non-integer frequency sums without
/// ever merging genuinely distinct integer frequencies.
fn collapse(mut spec: Vec<(f64, Complex64)>) -> Vec<(f64, Complex64)> {
    spec.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut out: Vec<(f64, Complex64)> = Vec::new();
    for (y, b) in spec {
        let tol = 1e-12 * y.abs().max(1.0);
        match out.last_mut() {
            Some(last) if (y - last.0).abs() <= tol => last.1 += b,
            _ => out.push((y, b)),
        }
    }
    out
}

/// `int over I of |sum_k beta_k e(z y_k)|^(2 nu) dz`, exact.
///
/// The interval start is absorbed by pre-rotating the coefficients; for
/// `nu = 2` the pair-spectrum `{(y_i + y_j, beta_i beta_j)}` is built first
/// and the problem reduces to `nu = 1`.
pub fn exact_moment(
    frequencies: &[f64],
    coefficients: &[Complex64],
    interval: Interval,
    nu: u32,
) -> Result<MomentResult> {
    let k = frequencies.len();
    if k == 0 || coefficients.len() != k {
        return Err(LabError::validation(
            "frequencies and coefficients must be nonempty lists of equal length",
        ));
    }
    if nu != 1 && nu != 2 {
        return Err(LabError::validation("nu must be 1 or 2"));
    }
    // Absorb the interval start: beta_k <- beta_k e(alpha y_k).
    let alpha = interval.start;
    let delta = interval.length;
    let rotated: Vec<(f64, Complex64)> = frequencies
        .iter()
        .zip(coefficients)
        .map(|(&y, &b)| (y, b * e(frac_mul_real(alpha, y))))
        .collect();

    let spec = if nu == 1 {
        collapse(rotated)
    } else {
        check_budget((k as u128).pow(2))?;
        let mut pairs = Vec::with_capacity(k * k);
        for (yi, bi) in &rotated {
            for (yj, bj) in &rotated {
                pairs.push((yi + yj, bi * bj));
            }
        }
        collapse(pairs)
    };

    let g = spec.len() as u128;
    check_budget(g * g)?;

    let mut diag = 0.0f64;
    for (_, b) in &spec {
        diag += b.norm_sqr();
    }
    diag *= delta;

    let mut e_half = Complex64::new(0.0, 0.0);
    for gi in 0..spec.len() {
        let (yg, bg) = spec[gi];
        for &(yh, bh) in &spec[gi + 1..] {
            let t = yg - yh;
            e_half += bg * bh.conj() * interval_kernel(delta, t);
        }
    }
    // The (h, g) term is the conjugate of the (g, h) term.
    let offdiag = Complex64::new(2.0 * e_half.re, 0.0);
    let total = diag + offdiag.re;
    Ok(MomentResult {
        total,
        diagonal_m: diag,
        offdiag_e: offdiag,
        nu,
        n: k as u64,
    })
}

/// Phase family for the moment operations: either the monomial `x n^d` or a
/// general power `x t^gamma`.
#[derive(Clone, Copy, Debug)]
pub enum FreqFamily {
    Monomial { d: u32 },
    Power { gamma: f64 },
}

impl FreqFamily {
    /// Frequency `f(n)` as an f64; integer families stay exact below 2^53.
    pub fn freq(&self, n: u64) -> f64 {
        match self {
            FreqFamily::Monomial { d } => (n as f64).powi(*d as i32),
            FreqFamily::Power { gamma } => {
                if gamma.fract() == 0.0 {
                    (n as f64).powi(*gamma as i32)
                } else {
                    (n as f64).powf(*gamma)
                }
            }
        }
    }
}

fn family_spectrum(
    family: FreqFamily,
    weights: &WeightSeq,
    n0: u64,
    n1: u64,
) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let mut freqs = Vec::with_capacity((n1 - n0) as usize);
    let mut coeffs = Vec::with_capacity((n1 - n0) as usize);
    for m in (n0 + 1)..=n1 {
        freqs.push(family.freq(m));
        coeffs.push(weights.weight(m)?);
    }
    Ok((freqs, coeffs))
}

/// Exact second moment `int over I |sum_{n0 < n <= n1} a_n e(x f(n))|^2 dx`,
/// returned with the normalized ratio `total / (delta * #terms)`.
pub fn second_moment_interval(
    family: FreqFamily,
    weights: &WeightSeq,
    interval: Interval,
    n0: u64,
    n1: u64,
) -> Result<(MomentResult, f64)> {
    if n1 <= n0 {
        return Err(LabError::validation("empty summation range"));
    }
    let (freqs, coeffs) = family_spectrum(family, weights, n0, n1)?;
    let r = exact_moment(&freqs, &coeffs, interval, 1)?;
    let ratio = r.total / (interval.length * (n1 - n0) as f64);
    Ok((r, ratio))
}

/// Exact fourth moment over an interval with ratio `total / (2 delta N^2)`.
pub fn fourth_moment_interval(
    d: u32,
    weights: &WeightSeq,
    interval: Interval,
    n: u64,
) -> Result<(MomentResult, f64)> {
    let (freqs, coeffs) = family_spectrum(FreqFamily::Monomial { d }, weights, 0, n)?;
    let r = exact_moment(&freqs, &coeffs, interval, 2)?;
    let ratio = r.total / (2.0 * interval.length * (n as f64).powi(2));
    Ok((r, ratio))
}

/// Exact `int_{I1} int_{I2} |sum a_n e(x1 n + x2 n^2)|^4 dx1 dx2` via the
/// two-dimensional pair-spectrum and the separable product kernel.
pub fn quadratic_pair_moment(
    i1: Interval,
    i2: Interval,
    weights: &WeightSeq,
    n: u64,
) -> Result<MomentResult> {
    if n < 1 {
        return Err(LabError::validation("N must be >= 1"));
    }
    check_budget((n as u128).pow(2))?;
    // Pair-spectrum {(n1+n2, n1^2+n2^2)} with coefficients a_{n1} a_{n2},
    // rotated by the interval starts in both coordinates.
    let mut spec: Vec<((i64, i64), Complex64)> = Vec::with_capacity((n * n) as usize / 2);
    let w: Vec<Complex64> = (1..=n).map(|m| weights.weight(m)).collect::<Result<_>>()?;
    for a in 1..=n {
        for b in a..=n {
            let s1 = (a + b) as i64;
            let s2 = (a * a + b * b) as i64;
            let rot = e(frac_mul_real(i1.start, s1 as f64))
                * e(frac_mul_real(i2.start, s2 as f64));
            let coeff = w[(a - 1) as usize] * w[(b - 1) as usize] * rot;
            let mult = if a == b { 1.0 } else { 2.0 };
            spec.push(((s1, s2), mult * coeff));
        }
    }
    spec.sort_unstable_by_key(|&(k, _)| k);
    let mut groups: Vec<((i64, i64), Complex64)> = Vec::new();
    for (kk, c) in spec {
        match groups.last_mut() {
            Some(last) if last.0 == kk => last.1 += c,
            _ => groups.push((kk, c)),
        }
    }
    let g = groups.len() as u128;
    check_budget(g * g)?;

    let (d1, d2) = (i1.length, i2.length);
    let mut diag = 0.0f64;
    for (_, b) in &groups {
        diag += b.norm_sqr();
    }
    diag *= d1 * d2;
    let mut e_half = Complex64::new(0.0, 0.0);
    for gi in 0..groups.len() {
        let ((s1, s2), bg) = groups[gi];
        for &((t1, t2), bh) in &groups[gi + 1..] {
            let k1 = interval_kernel(d1, (s1 - t1) as f64);
            let k2 = interval_kernel(d2, (s2 - t2) as f64);
            e_half += bg * bh.conj() * k1 * k2;
        }
    }
    let offdiag = Complex64::new(2.0 * e_half.re, 0.0);
    Ok(MomentResult {
        total: diag + offdiag.re,
        diagonal_m: diag,
        offdiag_e: offdiag,
        nu: 2,
        n,
    })
}

/// Monte Carlo moment over an interval (d = 1 box on the leading
/// coefficient) or a full box of phase coefficients.
pub fn mc_moment(
    d: u32,
    weights: &WeightSeq,
    region: &Box_,
    n: u64,
    nu: u32,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples < 16 {
        return Err(LabError::validation("need at least 16 samples"));
    }
    if region.sides.len() != 1 && region.sides.len() != d as usize {
        return Err(LabError::validation(
            "region must have one side (monomial) or d sides (full phase)",
        ));
    }
    let monomial = region.sides.len() == 1;
    let vol = region.volume();
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    let dims = region.sides.len() as u64;
    for i in 0..samples {
        let mut coords = Vec::with_capacity(region.sides.len());
        for (j, side) in region.sides.iter().enumerate() {
            let u = rng::u01(seed, i * dims + j as u64);
            coords.push(crate::modone::frac(side.start + u * side.length));
        }
        let s = if monomial {
            let mut full = vec![0.0; d as usize];
            full[d as usize - 1] = coords[0];
            let pv = PhaseVector::new(full)?;
            sums::weyl_sum(&pv, weights, n)?
        } else {
            let pv = PhaseVector::new(coords)?;
            sums::weyl_sum(&pv, weights, n)?
        };
        let v = s.value.norm_sqr().powi(nu as i32);
        sum += v;
        sumsq += v * v;
    }
    let mean = sum / samples as f64;
    let var = (sumsq / samples as f64 - mean * mean).max(0.0);
    let est = mean * vol;
    let stderr = (var / samples as f64).sqrt() * vol;
    Ok((est, stderr))
}

/// Lemma 6.3 variance integral: Monte Carlo over the outer window
/// `[x1, x1 + eps1]` of the squared deviation of the inner exact second
/// moment over `[x0, x0 + eps0]` (dyadic range `{N/2+1 .. N}`) from
/// `eps0 * (N - N/2)`.
pub fn variance_integral(
    gamma: f64,
    weights: &WeightSeq,
    x1: f64,
    eps1: f64,
    eps0: f64,
    n: u64,
    samples: u64,
    seed: u64,
) -> Result<VarianceResult> {
    if gamma <= 2.0 {
        return Err(LabError::validation("gamma must exceed 2"));
    }
    if !(eps0 > 0.0 && eps0 < 1.0) || !(eps1 > 0.0 && eps1 < 1.0) {
        return Err(LabError::validation("eps0 and eps1 must lie in (0, 1)"));
    }
    if n < 8 {
        return Err(LabError::validation("N must be >= 8"));
    }
    let m = n / 2;
    let (freqs, coeffs) = family_spectrum(FreqFamily::Power { gamma }, weights, m, n)?;
    check_budget((freqs.len() as u128).pow(2) * samples as u128)?;
    let expectation = eps0 * (n - m) as f64;
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    for i in 0..samples {
        let x0 = x1 + rng::u01(seed, i) * eps1;
        let inner = exact_moment(&freqs, &coeffs, Interval::new(x0, eps0)?, 1)?;
        let dev = inner.total - expectation;
        let v = dev * dev;
        sum += v;
        sumsq += v * v;
    }
    let mean = sum / samples as f64;
    let var = (sumsq / samples as f64 - mean * mean).max(0.0);
    Ok(VarianceResult {
        value: mean * eps1,
        stderr: (var / samples as f64).sqrt() * eps1,
        eps0,
        eps1,
    })
}
