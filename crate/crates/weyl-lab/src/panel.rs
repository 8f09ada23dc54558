//! The regression panel: one runner per acceptance criterion, shared by the
//! CLI `panel` subcommand and the acceptance test suite.

use std::time::Instant;

use crate::arc::{self, RationalApprox};
use crate::cantor::{
    cantor_build, cantor_dim_estimate, pattern_validate, synthetic_schedule, GrowthSpec, Member,
    Pattern, Pos,
};
use crate::dims;
use crate::disc::{disc_exact, disc_oracle, koksma_probe};
use crate::measure::{counterexample_a, ladder_stats};
use crate::moment::{
    exact_moment, fourth_moment_interval, second_moment_interval, variance_integral, FreqFamily,
    Interval,
};
use crate::phase::{MonomialPhase, PhaseVector};
use crate::repcount::{
    diagonal_count, nondiag_profile, q_count, r_count, sample_k_log_uniform, PairSystemQuery,
    RepQuery,
};
use crate::rng;
use crate::sums::prefix_max;
use crate::weights::WeightSeq;
use crate::{e, Complex64, Result};

/// Outcome of one panel criterion.
#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
    pub wall_ms: f64,
}

struct Check {
    pass: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Check {
        Check {
            pass: true,
            details: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.pass = false;
            self.details.push(format!("FAILED: {what}"));
        } else {
            self.details.push(what);
        }
    }
}

fn ones(k: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0); k]
}

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn monomial_freqs(d: u32, n: u64) -> Vec<f64> {
    (1..=n).map(|m| (m as f64).powi(d as i32)).collect()
}

// ---- criterion bodies ---------------------------------------------------

fn c1_orthogonality(c: &mut Check) -> Result<()> {
    for d in [2u32, 3, 5] {
        for n in [10u64, 100, 1000] {
            let freqs = monomial_freqs(d, n);
            let r = exact_moment(&freqs, &ones(n as usize), unit(), 1)?;
            let rel = (r.total - n as f64).abs() / n as f64;
            c.require(
                rel <= 1e-9,
                format!("nu=1 d={d} N={n}: total={} rel err {rel:.2e}", r.total),
            );
        }
    }
    for d in [2u32, 3, 4, 5] {
        for n in [10u64, 37, 60] {
            let freqs = monomial_freqs(d, n);
            let r = exact_moment(&freqs, &ones(n as usize), unit(), 2)?;
            let expect = r_count(RepQuery { d, k: 0, n })?.total as f64;
            let rel = (r.total - expect).abs() / expect;
            c.require(
                rel <= 1e-9,
                format!("nu=2 d={d} N={n}: total={} R={expect} rel err {rel:.2e}", r.total),
            );
        }
    }
    Ok(())
}

fn c2_counting(c: &mut Check) -> Result<()> {
    let brute = |d: u32, k: i128, n: u64| -> u128 {
        let p: Vec<i128> = (1..=n).map(|m| (m as i128).pow(d)).collect();
        let mut cnt = 0u128;
        for a in 0..n as usize {
            for b in 0..n as usize {
                for x in 0..n as usize {
                    for y in 0..n as usize {
                        if p[a] + p[b] - p[x] - p[y] == k {
                            cnt += 1;
                        }
                    }
                }
            }
        }
        cnt
    };
    for &k in &[0i128, 1, -1, 7, -7, 1728, 1729, 1730] {
        for n in [25u64, 60] {
            let fast = r_count(RepQuery { d: 3, k, n })?.total;
            let slow = brute(3, k, n);
            c.require(fast == slow, format!("R_3({k},{n}) = {fast} (brute {slow})"));
        }
    }
    let taxi = r_count(RepQuery { d: 3, k: 0, n: 12 })?;
    c.require(
        taxi.total == 284 && taxi.nondiagonal == 8,
        format!("R_3(0,12) = {} nondiag {}", taxi.total, taxi.nondiagonal),
    );
    for n in [1u64, 2, 10, 100, 500] {
        let q = q_count(PairSystemQuery { k: 0, m: 0, n })?;
        c.require(
            q.total == diagonal_count(n),
            format!("Q(0,0,{n}) = {} = 2N^2-N", q.total),
        );
    }
    Ok(())
}

fn c3_fourth_moment(c: &mut Check) -> Result<()> {
    let iv = Interval::new(0.3, 0.2)?;
    let mut prev_dev = f64::INFINITY;
    for n in [80u64, 120, 160] {
        let (_, ratio) = fourth_moment_interval(5, &WeightSeq::Ones, iv, n)?;
        let dev = (ratio - 1.0).abs();
        c.require(
            (0.8..=1.2).contains(&ratio),
            format!("d=5 N={n}: ratio = {ratio:.6}"),
        );
        c.require(
            dev <= prev_dev + 1e-12,
            format!("N={n}: |ratio-1| = {dev:.6} (prev {prev_dev:.6})"),
        );
        prev_dev = dev;
    }
    Ok(())
}

fn c4_second_moment(c: &mut Check) -> Result<()> {
    let n = 2000u64;
    for i in 0..5u64 {
        let start = rng::u01(41, 2 * i) * 0.9;
        let len = 0.05 + rng::u01(41, 2 * i + 1) * 0.05;
        let iv = Interval::new(start, len)?;
        let (_, ratio) =
            second_moment_interval(FreqFamily::Monomial { d: 3 }, &WeightSeq::Ones, iv, 0, n)?;
        c.require(
            (0.95..=1.05).contains(&ratio),
            format!("I=[{start:.4},+{len:.4}]: ratio = {ratio:.6}"),
        );
    }
    Ok(())
}

fn c5_profiles(c: &mut Check) -> Result<()> {
    let cases: [(u32, u64, f64); 2] = [
        (5, 200, 1.0 + 2.0 / 5f64.sqrt() + 0.3),
        (3, 500, 11.0 / 6.0 + 0.3),
    ];
    for (d, n, bound) in cases {
        let kmax = 2 * (n as i128).pow(d);
        let ks = sample_k_log_uniform(kmax, 200, 97);
        let p = nondiag_profile(d, n, &ks)?;
        c.require(
            p.exponent <= bound,
            format!("d={d} N={n}: observed exponent {:.4} <= {bound:.4}", p.exponent),
        );
    }
    Ok(())
}

fn c6_major_arcs(c: &mut Check) -> Result<()> {
    let n = 10_000u64;
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    };
    let mut worst = 0.0f64;
    for i in 0..50u64 {
        let d = [2u32, 3, 5][(i % 3) as usize];
        let q = 2 + rng::bits(53, 3 * i) % 49;
        let mut a = 1 + rng::bits(53, 3 * i + 1) % q;
        while gcd(a, q) != 1 {
            a = a % q + 1;
        }
        let xi = (rng::u01(53, 3 * i + 2) - 0.5) * (n as f64).powi(-(d as i32));
        let r = RationalApprox {
            a: a as i64,
            q,
            xi,
        };
        let direct = arc::rational_weyl_sum(r.a, r.q, r.xi, d, n)?;
        let (main, budget) = arc::vaughan_approx(r, d, n)?;
        let ratio = (direct - main).norm() / budget;
        worst = worst.max(ratio);
        if ratio > 20.0 {
            c.require(
                false,
                format!("d={d} a/q={a}/{q} xi={xi:.2e}: residual/budget = {ratio:.3}"),
            );
        }
    }
    c.require(worst <= 20.0, format!("50-point panel worst residual/budget = {worst:.3}"));
    use std::f64::consts::TAU;
    let mut worst_osc = 0.0f64;
    let nn = 100u64;
    for i in 0..100u64 {
        let t = 2.0 * rng::u01(59, i) - 1.0;
        if t.abs() < 1e-9 {
            continue;
        }
        let quad = arc::oscillatory_integral(&[t], nn)?;
        let closed = (e(crate::modone::frac(t * nn as f64)) - Complex64::new(1.0, 0.0))
            / Complex64::new(0.0, TAU * t);
        worst_osc = worst_osc.max((quad - closed).norm());
    }
    c.require(
        worst_osc <= 1e-6 * nn as f64,
        format!("d=1 closed form: worst quadrature error {worst_osc:.2e}"),
    );
    Ok(())
}

fn c7_dims(c: &mut Check) -> Result<()> {
    c.require(
        dims::s_dim(2, 0.5)? == 2.0 && dims::u_dim(2, 0.5)? == 2.0,
        "s(2,1/2) = u(2,1/2) = 2",
    );
    c.require(
        dims::s_dim(2, 1.0)? == 0.0 && dims::u_dim(2, 1.0)? == 0.0,
        "s(2,1) = u(2,1) = 0",
    );
    let mut worst = 0.0f64;
    let mut strict = true;
    let mut a = 0.5f64;
    while a < 0.9999 {
        let s = dims::s_dim(2, a)?;
        let u = dims::u_dim(2, a)?;
        let s_closed = if a <= 5.0 / 6.0 {
            (7.0 - 6.0 * a) / 2.0
        } else {
            6.0 * (1.0 - a)
        };
        let u_closed = if a <= 6.0 / 7.0 {
            (9.0 - 8.0 * a) / (3.0 - a)
        } else {
            8.0 * (1.0 - a) / (2.0 - a)
        };
        worst = worst.max((s - s_closed).abs()).max((u - u_closed).abs());
        if a > 0.5 && s >= u {
            strict = false;
        }
        a += 0.01;
    }
    c.require(worst <= 1e-12, format!("piecewise closed forms: worst dev {worst:.2e}"));
    c.require(strict, "s(2,a) < u(2,a) on (1/2,1)");
    let mut all_d = true;
    for d in 2..=12u32 {
        if (dims::u_dim(d, 0.5)? - d as f64).abs() > 1e-12 {
            all_d = false;
        }
    }
    c.require(all_d, "u(d,1/2) = d for d <= 12");
    let ratio = dims::s_half(10_000)? / (2.0f64 * 10_000.0).sqrt();
    c.require(
        (0.98..=1.05).contains(&ratio),
        format!("s(10^4,1/2)/sqrt(2*10^4) = {ratio:.4}"),
    );
    Ok(())
}

fn c8_discrepancy(c: &mut Check) -> Result<()> {
    let mut worst = 0.0f64;
    for i in 0..32u64 {
        let n = 10 + (rng::bits(67, 100 + i) % 291) as usize;
        let pts: Vec<f64> = (0..n).map(|j| rng::u01(67, 1000 * i + j as u64)).collect();
        let fast = disc_exact(&pts)?.value;
        let slow = disc_oracle(&pts)?;
        worst = worst.max((fast - slow).abs());
    }
    c.require(worst <= 1e-9, format!("32 oracle runs: worst |exact-oracle| = {worst:.2e}"));
    let mut kworst = 0.0f64;
    for i in 0..50u64 {
        let pv = PhaseVector::new(vec![
            rng::u01(71, 3 * i),
            rng::u01(71, 3 * i + 1),
            rng::u01(71, 3 * i + 2),
        ])?;
        kworst = kworst.max(koksma_probe(&pv, 10_000)?);
    }
    c.require(kworst <= 10.0, format!("50-point Koksma panel: max ratio {kworst:.3}"));
    Ok(())
}

/// The Figure 7.1 I(8,6,delta) configuration.
fn figure_pattern() -> Pattern {
    let delta = 0.05;
    let parent = Member::plain(0.0, 1.0);
    let members = [0u64, 1, 3, 4, 6, 7]
        .iter()
        .map(|&cell| Member::plain(cell as f64 / 8.0 + 0.03, delta))
        .collect();
    Pattern {
        parent,
        n: 8,
        delta,
        members,
    }
}

fn c9_cantor(c: &mut Check) -> Result<()> {
    c.require(
        pattern_validate(&figure_pattern()).is_empty(),
        "figure I(8,6,delta)-pattern validates",
    );
    let mut p = figure_pattern();
    p.members[2].len = 2.0 * p.delta;
    c.require(!pattern_validate(&p).is_empty(), "clause-1 mutation rejected");
    let mut p = figure_pattern();
    p.members[0].start = Pos::new(1.0 / 8.0 - 0.02);
    c.require(!pattern_validate(&p).is_empty(), "clause-2 mutation rejected");
    let mut p = figure_pattern();
    p.members[1].start = Pos::new(0.06);
    c.require(!pattern_validate(&p).is_empty(), "clause-3 mutation rejected");

    let thirds: Vec<(f64, f64)> = (1..=6).map(|k| (2.0, 3f64.powi(-k))).collect();
    let est = cantor_dim_estimate(&thirds)?;
    let target = 2f64.ln() / 3f64.ln();
    c.require(
        (est - target).abs() <= 1e-9,
        format!("middle thirds estimate {est:.12} vs log2/log3"),
    );
    let (gamma, tau) = (3.0, 0.1);
    let sched = synthetic_schedule(gamma, tau, 32.0, 4, 4.0);
    let est = cantor_dim_estimate(&sched)?;
    let target = (gamma - 0.5 - tau) / (gamma + tau);
    c.require(
        (est - target).abs() <= 0.1,
        format!("synthetic schedule estimate {est:.4} vs target {target:.4}"),
    );

    let g = GrowthSpec::new(3.0, 0.1, 256)?;
    let b = cantor_build(&g, &WeightSeq::Ones, Member::plain(0.0, 1.0), 2, 0.25)?;
    c.require(
        b.truncation.is_none() && b.levels.len() == 2,
        format!(
            "depth-2 build: {} levels, truncation {:?}",
            b.levels.len(),
            b.truncation
        ),
    );
    if let Some(l1) = b.levels.first() {
        let mut min_pm = f64::INFINITY;
        for m in &l1.intervals {
            let center = m.start.value() + m.len / 2.0;
            let (pm, _) = prefix_max(
                &MonomialPhase::new(crate::modone::frac(center), 3)?,
                &WeightSeq::Ones,
                256,
            )?;
            min_pm = min_pm.min(pm);
        }
        let need = 0.25 * 256f64.sqrt();
        c.require(
            min_pm >= need,
            format!("level-1 member centers: min prefix_max {min_pm:.3} >= {need}"),
        );
    }
    Ok(())
}

fn c10_measure(c: &mut Check) -> Result<()> {
    let ns: Vec<u64> = (8..=13).map(|k| 1u64 << k).collect();
    let r = ladder_stats(3, &WeightSeq::Ones, 0.0, 1.0, &ns, 0.3, 4.0, 2048, 13)?;
    c.require(
        r.union_fraction >= 0.9,
        format!("ladder union fraction = {:.4}", r.union_fraction),
    );
    let a = counterexample_a(1000, 0.0, 1.0)?;
    let limit = 2.0 * std::f64::consts::PI.powi(2) / 54.0;
    c.require(
        (a.measure_bound - limit).abs() <= 1e-3,
        format!("counterexample measure bound {:.6} vs 2pi^2/54 = {limit:.6}", a.measure_bound),
    );
    Ok(())
}

fn c11_variance(c: &mut Check) -> Result<()> {
    let mut prev = f64::INFINITY;
    for n in [256u64, 512] {
        let eps0 = (n as f64).powf(-3.0 + 0.5 + 0.1);
        let v = variance_integral(3.0, &WeightSeq::Ones, 0.2, 0.01, eps0, n, 24, 5)?;
        let bound = 10.0 * (n as f64).powf(-3.0 + 0.2) * (0.01 + 1.0 / n as f64);
        c.require(
            v.value <= bound,
            format!("N={n}: variance {:.3e} <= bound {bound:.3e}", v.value),
        );
        c.require(
            v.value <= prev,
            format!("N={n}: variance {:.3e} decreasing (prev {prev:.3e})", v.value),
        );
        prev = v.value;
    }
    Ok(())
}

// ---- runner -------------------------------------------------------------

type Body = fn(&mut Check) -> Result<()>;

const CRITERIA: [(u32, &str, Body); 11] = [
    (1, "orthogonality", c1_orthogonality),
    (2, "counting", c2_counting),
    (3, "moment4", c3_fourth_moment),
    (4, "moment2", c4_second_moment),
    (5, "profiles", c5_profiles),
    (6, "arcs", c6_major_arcs),
    (7, "dims", c7_dims),
    (8, "discrepancy", c8_discrepancy),
    (9, "cantor", c9_cantor),
    (10, "measure", c10_measure),
    (11, "variance", c11_variance),
];

/// Runs the acceptance criteria, optionally filtered by a substring of the
/// criterion name; operational errors count as failures, not panics.
pub fn run_panel(only: Option<&str>) -> Vec<CriterionOutcome> {
    let mut out = Vec::new();
    for (id, name, body) in CRITERIA {
        if let Some(f) = only {
            if !name.contains(f) {
                continue;
            }
        }
        let start = Instant::now();
        let mut check = Check::new();
        if let Err(err) = body(&mut check) {
            check.pass = false;
            check.details.push(format!("FAILED: error: {err}"));
        }
        out.push(CriterionOutcome {
            id,
            name,
            pass: check.pass,
            details: check.details.join("; "),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    out
}
