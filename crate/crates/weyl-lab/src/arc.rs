//! Major-arc machinery: continued-fraction approximation, oscillatory
//! integrals, and the Vaughan/Baker approximate formulas.

use crate::error::{LabError, Result};
use crate::modone::{frac, frac_mul_u128};
use crate::phase::pow_checked;
use crate::{e, Complex64};

/// Rational approximation `x = a/q + xi` from a continued-fraction
/// convergent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RationalApprox {
    pub a: i64,
    pub q: u64,
    pub xi: f64,
}

/// Multivariate rational data for the Baker formula.
#[derive(Clone, Debug)]
pub struct BakerApprox {
    pub avec: Vec<i64>,
    pub q: u64,
    pub xivec: Vec<f64>,
    pub d_gcd: u64,
}

impl BakerApprox {
    pub fn new(avec: Vec<i64>, q: u64, xivec: Vec<f64>) -> Result<BakerApprox> {
        if q == 0 {
            return Err(LabError::validation("q must be positive"));
        }
        if avec.is_empty() || avec.len() != xivec.len() {
            return Err(LabError::validation(
                "avec and xivec must be nonempty and of equal length",
            ));
        }
        // D = gcd(a_2, ..., a_d, q).
        let mut g = q;
        for &a in &avec[1..] {
            g = gcd(g, a.unsigned_abs());
        }
        Ok(BakerApprox {
            avec,
            q,
            xivec,
            d_gcd: g,
        })
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Best continued-fraction convergent `a/q` of `x` with `q <= qmax`.
pub fn cf_approx(x: f64, qmax: u64) -> Result<RationalApprox> {
    if !(0.0..1.0).contains(&x) {
        return Err(LabError::validation("x must lie in [0,1)"));
    }
    if qmax < 1 {
        return Err(LabError::validation("Qmax must be >= 1"));
    }
    let (mut h2, mut h1) = (0i64, 1i64); // h_{-2}, h_{-1}
    let (mut k2, mut k1) = (1u64, 0u64); // k_{-2}, k_{-1}
    let mut best = (0i64, 1u64);
    let mut t = x;
    for _ in 0..64 {
        let a = t.floor();
        if a >= 1e18 {
            break;
        }
        let ai = a as i64;
        let h = ai
            .checked_mul(h1)
            .and_then(|v| v.checked_add(h2));
        let k = (ai as u64)
            .checked_mul(k1)
            .and_then(|v| v.checked_add(k2));
        let (h, k) = match (h, k) {
            (Some(h), Some(k)) => (h, k),
            _ => break,
        };
        if k > qmax {
            break;
        }
        best = (h, k);
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = k;
        let fracpart = t - a;
        if fracpart < 1e-15 {
            break; // x is (numerically) rational; xi = 0.
        }
        t = 1.0 / fracpart;
    }
    let (a, q) = best;
    Ok(RationalApprox {
        a,
        q,
        xi: x - a as f64 / q as f64,
    })
}

/// `int_0^N e(xi_1 g + ... + xi_d g^d) dg` by composite Simpson with an
/// oscillation-resolved step.
pub fn oscillatory_integral(xivec: &[f64], n: u64) -> Result<Complex64> {
    if n < 1 {
        return Err(LabError::validation("N must be >= 1"));
    }
    if xivec.is_empty() {
        return Err(LabError::validation("need at least one coefficient"));
    }
    let nf = n as f64;
    // Bound on |phase'| over [0, N] in cycles per unit length.
    let mut dmax = 0.0f64;
    for (i, &xi) in xivec.iter().enumerate() {
        dmax += (i as f64 + 1.0) * xi.abs() * nf.powi(i as i32);
    }
    let h = (1.0 / (50.0 * (1.0 + dmax))).min(1.0);
    let steps = (nf / h).ceil() as u64;
    let steps = steps + steps % 2; // Simpson needs an even count.
    if steps > 200_000_000 {
        return Err(LabError::validation(
            "oscillation too violent for the quadrature budget",
        ));
    }
    let h = nf / steps as f64;
    let phase = |g: f64| -> f64 {
        let mut p = 0.0;
        let mut gp = 1.0;
        for &xi in xivec {
            gp *= g;
            p += xi * gp;
        }
        frac(p)
    };
    let mut acc = e(phase(0.0)) + e(phase(nf));
    for s in 1..steps {
        let w = if s % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * e(phase(s as f64 * h));
    }
    Ok(acc * (h / 3.0))
}

/// Complete rational sum `sum_{n=1}^q e((a1 n + ... + ad n^d) / q)` with
/// exact modular arithmetic.
pub fn complete_sum(avec: &[i64], q: u64) -> Complex64 {
    let qi = q as i128;
    let mut s = Complex64::new(0.0, 0.0);
    for n in 1..=q {
        let mut num: i128 = 0;
        let mut p: i128 = 1;
        for &a in avec {
            p = (p * n as i128) % qi;
            num = (num + a as i128 * p) % qi;
        }
        let num = ((num % qi) + qi) % qi;
        s += e(num as f64 / q as f64);
    }
    s
}

/// `sigma_d(a/q + xi; N)` evaluated exactly: the rational part is reduced
/// with integer arithmetic, the offset part with the limb reduction. This
/// stays accurate where a plain f64 abscissa has long lost the phase.
pub fn rational_weyl_sum(a: i64, q: u64, xi: f64, d: u32, n: u64) -> Result<Complex64> {
    let qi = q as i128;
    let mut s = Complex64::new(0.0, 0.0);
    let axi = xi.abs();
    if axi >= 1.0 {
        return Err(LabError::validation("|xi| must be below 1"));
    }
    for m in 1..=n {
        let p = pow_checked(m, d)?;
        let pr = ((a as i128 * ((p % qi as u128) as i128)) % qi + qi) % qi;
        let off = if xi == 0.0 {
            0.0
        } else if xi > 0.0 {
            frac_mul_u128(axi, p)
        } else {
            let f = frac_mul_u128(axi, p);
            if f == 0.0 {
                0.0
            } else {
                1.0 - f
            }
        };
        s += e(frac(pr as f64 / q as f64 + off));
    }
    Ok(s)
}

/// Vaughan approximate formula: `main = (1/q) sigma_d(a/q; q) int_0^N
/// e(xi g^d) dg`, with error budget `q^{1/2} (1 + |xi| N^d)^{1/2}`.
pub fn vaughan_approx(r: RationalApprox, d: u32, n: u64) -> Result<(Complex64, f64)> {
    if r.q < 1 {
        return Err(LabError::validation("q must be >= 1"));
    }
    let mut avec = vec![0i64; d as usize];
    avec[d as usize - 1] = r.a;
    let sigma = complete_sum(&avec, r.q);
    let mut xivec = vec![0.0; d as usize];
    xivec[d as usize - 1] = r.xi;
    let integral = oscillatory_integral(&xivec, n)?;
    let main = sigma * integral / r.q as f64;
    let budget = (r.q as f64).sqrt()
        * (1.0 + r.xi.abs() * (n as f64).powi(d as i32)).sqrt();
    Ok((main, budget))
}

/// Baker approximate formula: `main = (1/q) S_d(avec/q; q) int_0^N
/// e(xi_d g^d + ... + xi_1 g) dg`; validity flag per the arc condition
/// `|xi_i| <= 1/(2 d^2 q N^(i-1))`; error budget `q^(1-1/d) D^(1/d)`.
pub fn baker_approx(b: &BakerApprox, d: u32, n: u64) -> Result<(Complex64, bool, f64)> {
    if b.avec.len() != d as usize {
        return Err(LabError::validation("avec length must equal d"));
    }
    let s = complete_sum(&b.avec, b.q);
    let integral = oscillatory_integral(&b.xivec, n)?;
    let main = s * integral / b.q as f64;
    let df = d as f64;
    let mut valid = true;
    for (i, &xi) in b.xivec.iter().enumerate() {
        let cutoff = 1.0 / (2.0 * df * df * b.q as f64 * (n as f64).powi(i as i32));
        if xi.abs() > cutoff {
            valid = false;
        }
    }
    let budget = (b.q as f64).powf(1.0 - 1.0 / df) * (b.d_gcd as f64).powf(1.0 / df);
    Ok((main, valid, budget))
}

/// One row of a major-arc scan.
#[derive(Clone, Copy, Debug)]
pub struct ScanRow {
    pub x: f64,
    pub approx: RationalApprox,
    pub is_major: bool,
    pub direct_mag: f64,
    /// `|main|`, computed only on major points (the approximate formula is
    /// not meaningful — and its integral may be unaffordable — on minors).
    pub main_mag: Option<f64>,
    /// `|direct - main| / error_budget`, for major points.
    pub residual_ratio: Option<f64>,
}

/// Classifies grid points as major/minor for the monomial sum of degree d
/// and measures the Vaughan residual on the majors.
pub fn major_arc_scan(d: u32, n: u64, q_limit: u64, grid: &[f64]) -> Result<Vec<ScanRow>> {
    if q_limit < 2 {
        return Err(LabError::validation("q_limit must be >= 2"));
    }
    let cutoff = q_limit as f64 / (n as f64).powi(d as i32);
    let mut rows = Vec::with_capacity(grid.len());
    for &x in grid {
        let r = cf_approx(x, q_limit)?;
        let is_major = r.q <= q_limit && r.xi.abs() <= cutoff;
        let direct = rational_weyl_sum(r.a, r.q, r.xi, d, n)?;
        let (main_mag, residual_ratio) = if is_major {
            let (main, budget) = vaughan_approx(r, d, n)?;
            (Some(main.norm()), Some((direct - main).norm() / budget))
        } else {
            (None, None)
        };
        rows.push(ScanRow {
            x,
            approx: r,
            is_major,
            direct_mag: direct.norm(),
            main_mag,
            residual_ratio,
        });
    }
    Ok(rows)
}
