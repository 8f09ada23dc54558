//! Constructive large-value machinery: separated interval selection,
//! I(N,M,delta)-patterns, finite Cantor hierarchies, and the dimension
//! estimate from the counting formula.

use crate::error::{LabError, Result};
use crate::modone::frac;
use crate::sums::{dyadic_prefix_max, SplitCoeff};
use crate::weights::WeightSeq;
use crate::{e, Complex64};

/// A position on the line held as `hi + lo`. Deep Cantor levels need
/// sub-ulp offsets relative to their parent, so absolute positions are
/// carried as a head/tail pair.
#[derive(Clone, Copy, Debug)]
pub struct Pos {
    pub hi: f64,
    pub lo: f64,
}

impl Pos {
    pub fn new(hi: f64) -> Pos {
        Pos { hi, lo: 0.0 }
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }

    /// Exact-to-f64 difference `self - other`, meaningful when both share
    /// the same `hi` scale.
    pub fn sub(&self, other: &Pos) -> f64 {
        (self.hi - other.hi) + (self.lo - other.lo)
    }

    pub fn offset(&self, off: f64) -> Pos {
        Pos {
            hi: self.hi,
            lo: self.lo + off,
        }
    }
}

/// An interval `[start, start + len]` with a split-position start.
#[derive(Clone, Copy, Debug)]
pub struct Member {
    pub start: Pos,
    pub len: f64,
}

impl Member {
    pub fn plain(start: f64, len: f64) -> Member {
        Member {
            start: Pos::new(start),
            len,
        }
    }
}

/// An I(N, M, delta)-pattern: M members of length delta, each wholly inside
/// one cell of the N-cell equipartition of the parent, no cell repeated.
#[derive(Clone, Debug)]
pub struct Pattern {
    pub parent: Member,
    pub n: u64,
    pub delta: f64,
    pub members: Vec<Member>,
}

impl Pattern {
    pub fn m(&self) -> u64 {
        self.members.len() as u64
    }
}

/// Checks the three clauses of the pattern definition; returns the list of
/// violations (empty means valid).
pub fn pattern_validate(p: &Pattern) -> Vec<String> {
    let mut bad = Vec::new();
    if p.n < 2 {
        bad.push("N must be >= 2".into());
    }
    if p.members.is_empty() || p.members.len() as u64 > p.n {
        bad.push(format!(
            "member count {} outside 1..=N={}",
            p.members.len(),
            p.n
        ));
    }
    let w = p.parent.len / p.n as f64;
    let mut used = std::collections::BTreeSet::new();
    for (i, m) in p.members.iter().enumerate() {
        if (m.len - p.delta).abs() > 1e-12 * p.delta.max(1.0) {
            bad.push(format!(
                "clause 1: member {i} has length {} != delta = {}",
                m.len, p.delta
            ));
        }
        let rel = m.start.sub(&p.parent.start);
        let tol = 1e-12 * p.parent.len;
        if rel < -tol || rel + m.len > p.parent.len + tol {
            bad.push(format!("member {i} leaves the parent interval"));
            continue;
        }
        let cell = ((rel / w).floor() as i64).clamp(0, p.n as i64 - 1) as u64;
        let cell_start = cell as f64 * w;
        if rel < cell_start - tol || rel + m.len > cell_start + w + tol {
            bad.push(format!(
                "clause 2: member {i} is not wholly inside subinterval {cell}"
            ));
        }
        if !used.insert(cell) {
            bad.push(format!(
                "clause 3: subinterval {cell} holds more than one member"
            ));
        }
    }
    bad
}

/// Growth parameters of the Cantor pipeline.
#[derive(Clone, Copy, Debug)]
pub struct GrowthSpec {
    pub gamma: f64,
    pub tau: f64,
    /// First-level scale L_1; later levels follow L_{k+1} = L_k^2, raised
    /// when needed so the selection hypothesis |I| >= N^(2-gamma) holds.
    pub l1: u64,
}

impl GrowthSpec {
    pub fn new(gamma: f64, tau: f64, l1: u64) -> Result<GrowthSpec> {
        if gamma <= 2.0 {
            return Err(LabError::validation("gamma must exceed 2"));
        }
        if !(tau > 0.0) || tau >= (gamma - 2.0) / 2.0 {
            return Err(LabError::validation(
                "tau must satisfy 0 < tau < (gamma - 2)/2",
            ));
        }
        if l1 < 4 {
            return Err(LabError::validation("L1 must be >= 4"));
        }
        Ok(GrowthSpec { gamma, tau, l1 })
    }
}

/// Greedy left-to-right selection of grid offsets (within `[0, span]`,
/// step `grid_step`) whose profile value reaches `threshold`, consecutive
/// selections at least `spacing` apart. Stops early after
/// `max_selections` hits or `max_evals` profile evaluations.
pub fn select_separated(
    profile: &mut dyn FnMut(f64) -> Result<f64>,
    span: f64,
    grid_step: f64,
    spacing: f64,
    threshold: f64,
    max_selections: usize,
    max_evals: usize,
) -> Result<Vec<f64>> {
    if !(grid_step > 0.0) || !(spacing > 0.0) {
        return Err(LabError::validation("grid step and spacing must be positive"));
    }
    let mut out = Vec::new();
    let mut offset = 0.0f64;
    let mut evals = 0usize;
    let mut last = f64::NEG_INFINITY;
    while offset <= span && out.len() < max_selections && evals < max_evals {
        if offset - last >= spacing || last == f64::NEG_INFINITY {
            let v = profile(offset)?;
            evals += 1;
            if v >= threshold {
                out.push(offset);
                last = offset;
            }
        }
        offset += grid_step;
    }
    Ok(out)
}

/// Selects pairwise-separated large-value intervals of the dyadic-range
/// sum `sum_{N/2 < n <= N} a_n e(x n^gamma)` inside the parent, and wraps
/// them as a pattern with members shrunk to `member_len` and snapped into
/// their equipartition cells.
pub fn large_value_intervals(
    g: &GrowthSpec,
    weights: &WeightSeq,
    parent: Member,
    n: u64,
    c0: f64,
    member_len: f64,
    max_m: usize,
) -> Result<Pattern> {
    let nf = n as f64;
    let hypothesis = nf.powf(2.0 - g.gamma);
    if parent.len < hypothesis * (1.0 - 1e-9) {
        return Err(LabError::validation(format!(
            "selection hypothesis fails: |I| = {} < N^(2-gamma) = {}",
            parent.len, hypothesis
        )));
    }
    let separation = nf.powf(-g.gamma + 0.5 + g.tau);
    let grid_step = separation / 4.0;
    let threshold = c0 * nf.sqrt();
    let n_split = (nf.powf(g.gamma - 0.5 - g.tau) * parent.len).ceil() as u64 + 1;
    let w = parent.len / n_split as f64;
    if member_len > w {
        return Err(LabError::validation(
            "member length exceeds the equipartition cell width",
        ));
    }

    let integral_gamma = g.gamma.fract() == 0.0 && g.gamma <= 127.0;
    let d = g.gamma as u32;
    let mut profile = |off: f64| -> Result<f64> {
        if integral_gamma {
            let x = SplitCoeff::new(frac(parent.start.hi), parent.start.lo + off);
            dyadic_prefix_max(x, d, n, weights)
        } else {
            // Direct evaluation for non-integer gamma (small N only).
            let x = parent.start.value() + off;
            let mut s = Complex64::new(0.0, 0.0);
            let mut best = 0.0f64;
            for m in (n / 2 + 1)..=n {
                s += weights.weight(m)? * e(frac(x * (m as f64).powf(g.gamma)));
                best = best.max(s.norm());
            }
            Ok(best)
        }
    };

    let centers = select_separated(
        &mut profile,
        parent.len,
        grid_step,
        separation,
        threshold,
        max_m,
        4096,
    )?;

    let mut members = Vec::with_capacity(centers.len());
    for c in centers {
        // Snap the shrunken member into the cell containing its center.
        let cell = ((c / w).floor() as u64).min(n_split - 1);
        let cell_start = cell as f64 * w;
        let rel = (c - member_len / 2.0)
            .max(cell_start)
            .min(cell_start + w - member_len);
        members.push(Member {
            start: parent.start.offset(rel),
            len: member_len,
        });
    }
    Ok(Pattern {
        parent,
        n: n_split,
        delta: member_len,
        members,
    })
}

/// One level of a built hierarchy.
#[derive(Clone, Debug)]
pub struct CantorLevel {
    pub k: u32,
    /// Equipartition cell count of the level's patterns.
    pub n_k: u64,
    /// Per-parent member count (uniform across parents).
    pub m_k: u64,
    pub delta_k: f64,
    pub intervals: Vec<Member>,
}

/// Result of a hierarchy build.
#[derive(Clone, Debug)]
pub struct CantorBuild {
    pub levels: Vec<CantorLevel>,
    /// Set when the build stopped early (no qualifying members).
    pub truncation: Option<String>,
    pub c0: f64,
}

/// Work caps: siblings recursed per level and members kept per parent.
/// Deeper exploration adds cost multiplicatively without adding test value.
const RECURSE_CAP: usize = 4;
const MAX_M: usize = 8;

/// Iterates `large_value_intervals` down a hierarchy. Level k scans with
/// scale `N = L_k`, members shrunk to `delta_k = L_k^(-gamma-tau)`; the
/// growth rule `L_{k+1} = L_k^2` is raised to `delta_k^(-1/(gamma-2))`
/// whenever needed so the next level's selection hypothesis holds.
pub fn cantor_build(
    g: &GrowthSpec,
    weights: &WeightSeq,
    root: Member,
    depth: u32,
    c0: f64,
) -> Result<CantorBuild> {
    if depth > 4 {
        return Err(LabError::Budget {
            needed: depth as u128,
            budget: 4,
        });
    }
    let mut build = CantorBuild {
        levels: Vec::new(),
        truncation: None,
        c0,
    };
    let mut scale = g.l1 as f64;
    let mut prev_delta = root.len;
    for k in 1..=depth {
        let n = scale as u64;
        let delta = scale.powf(-g.gamma - g.tau);
        let parents: Vec<Member> = match build.levels.last() {
            None => vec![root],
            Some(level) => level.intervals.iter().take(RECURSE_CAP).copied().collect(),
        };
        let mut patterns = Vec::with_capacity(parents.len());
        for p in &parents {
            patterns.push(large_value_intervals(g, weights, *p, n, c0, delta, MAX_M)?);
        }
        let m = patterns.iter().map(|p| p.m()).min().unwrap_or(0);
        if m == 0 {
            build.truncation = Some(format!(
                "level {k}: no members reached the threshold c0 sqrt(N) = {}",
                c0 * scale.sqrt()
            ));
            return Ok(build);
        }
        let n_split = patterns[0].n;
        // delta_k <= delta_{k-1} / N_k must hold by construction.
        debug_assert!(delta <= prev_delta / n_split as f64 * (1.0 + 1e-9));
        let mut intervals = Vec::new();
        for p in &patterns {
            intervals.extend(p.members.iter().take(m as usize).copied());
        }
        build.levels.push(CantorLevel {
            k,
            n_k: n_split,
            m_k: m,
            delta_k: delta,
            intervals,
        });
        prev_delta = delta;
        // Next scale: squaring rule, raised to keep |I| >= N^(2 - gamma).
        let needed = delta.powf(-1.0 / (g.gamma - 2.0));
        scale = (scale * scale).max(needed.ceil());
    }
    Ok(build)
}

/// `min_k log(prod_{i<=k} M_i) / log(1 / delta_k)`: the finite-truncation
/// proxy for the liminf dimension formula.
pub fn cantor_dim_estimate(levels: &[(f64, f64)]) -> Result<f64> {
    if levels.is_empty() {
        return Err(LabError::validation("need at least one level"));
    }
    let mut prev = 1.0f64;
    for &(m, d) in levels {
        if !(d > 0.0) || d >= 1.0 {
            return Err(LabError::validation("delta_k must lie in (0, 1)"));
        }
        if d >= prev {
            return Err(LabError::validation("delta_k must be strictly decreasing"));
        }
        if !(m >= 1.0) {
            return Err(LabError::validation("M_k must be >= 1"));
        }
        prev = d;
    }
    let mut log_count = 0.0f64;
    let mut best = f64::INFINITY;
    for &(m, d) in levels {
        log_count += m.ln();
        best = best.min(log_count / (1.0 / d).ln());
    }
    Ok(best)
}

/// The synthetic level schedule of the construction: `delta_k =
/// L_k^(-gamma-tau)`, `M_k = floor(delta_{k-1} L_k^(gamma-1/2-tau))`,
/// `L_{k+1} = L_k^rule_exp`.
pub fn synthetic_schedule(
    gamma: f64,
    tau: f64,
    l1: f64,
    levels: u32,
    rule_exp: f64,
) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(levels as usize);
    let mut l = l1;
    let mut prev_delta = 1.0f64;
    for _ in 0..levels {
        let delta = l.powf(-gamma - tau);
        let m = (prev_delta * l.powf(gamma - 0.5 - tau)).floor();
        out.push((m, delta));
        prev_delta = delta;
        l = l.powf(rule_exp);
    }
    out
}

/// Deepest-level intervals of the depth-k middle-thirds Cantor set.
pub fn middle_thirds(depth: u32) -> Vec<(f64, f64)> {
    let mut cur = vec![0.0f64];
    for i in 0..depth {
        let len = 3f64.powi(-(i as i32 + 1));
        let mut next = Vec::with_capacity(cur.len() * 2);
        for s in cur {
            next.push(s);
            next.push(s + 2.0 * len);
        }
        cur = next;
    }
    let len = 3f64.powi(-(depth as i32));
    cur.into_iter().map(|s| (s, len)).collect()
}

/// Mass-distribution probe: equal mass on the deepest intervals; for each
/// radius the maximal ball mass over balls centered at interval centers,
/// reported as `mu(B(r)) / r^t`.
pub fn mass_check(deepest: &[(f64, f64)], t: f64, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    if deepest.is_empty() {
        return Err(LabError::validation("need at least one interval"));
    }
    if t < 0.0 {
        return Err(LabError::validation("t must be nonnegative"));
    }
    let mass = 1.0 / deepest.len() as f64;
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > 0.0) {
            return Err(LabError::validation("radii must be positive"));
        }
        let mut worst = 0.0f64;
        for &(c0, l0) in deepest {
            let center = c0 + l0 / 2.0;
            let (lo, hi) = (center - r, center + r);
            let mut mu = 0.0;
            for &(s, l) in deepest {
                if s + l >= lo && s <= hi {
                    mu += mass;
                }
            }
            worst = worst.max(mu / r.powf(t));
        }
        rows.push((r, worst));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The figure's I(8, 6, delta)-pattern: six members spread over six of
    /// the eight cells.
    fn figure_pattern() -> Pattern {
        let delta = 0.05;
        let parent = Member::plain(0.0, 1.0);
        let cells = [0u64, 1, 3, 4, 6, 7];
        let members = cells
            .iter()
            .map(|&c| Member::plain(c as f64 / 8.0 + 0.03, delta))
            .collect();
        Pattern {
            parent,
            n: 8,
            delta,
            members,
        }
    }

    #[test]
    fn figure_pattern_validates() {
        assert!(pattern_validate(&figure_pattern()).is_empty());
    }

    #[test]
    fn pattern_single_clause_mutations_rejected() {
        // Clause 1: one member stretched to 2 delta.
        let mut p = figure_pattern();
        p.members[2].len = 2.0 * p.delta;
        let v = pattern_validate(&p);
        assert!(v.iter().any(|s| s.contains("clause 1")), "{v:?}");

        // Clause 2: member straddles a cell boundary.
        let mut p = figure_pattern();
        p.members[0].start = Pos::new(1.0 / 8.0 - 0.02);
        let v = pattern_validate(&p);
        assert!(v.iter().any(|s| s.contains("clause 2")), "{v:?}");

        // Clause 3: two members in one cell.
        let mut p = figure_pattern();
        p.members[1].start = Pos::new(0.06);
        let v = pattern_validate(&p);
        assert!(v.iter().any(|s| s.contains("clause 3")), "{v:?}");
    }

    #[test]
    fn select_uniform_profile() {
        let mut profile = |_: f64| Ok(1.0);
        let sel = select_separated(&mut profile, 1.0, 0.025, 0.1, 0.5, 100, 10_000).unwrap();
        assert!(sel.len() >= 9 && sel.len() <= 11, "{}", sel.len());
        for w in sel.windows(2) {
            assert!(w[1] - w[0] >= 0.1 - 1e-12);
        }
        // Threshold above the profile: empty.
        let mut profile = |_: f64| Ok(1.0);
        let sel = select_separated(&mut profile, 1.0, 0.025, 0.1, 2.0, 100, 10_000).unwrap();
        assert!(sel.is_empty());
    }

    #[test]
    fn large_value_intervals_hypothesis() {
        let g = GrowthSpec::new(3.0, 0.1, 256).unwrap();
        let tiny = Member::plain(0.2, 1e-9);
        assert!(
            large_value_intervals(&g, &WeightSeq::Ones, tiny, 256, 0.25, 1e-12, 8).is_err()
        );
    }

    #[test]
    fn large_value_intervals_produces_valid_pattern() {
        let g = GrowthSpec::new(3.0, 0.1, 256).unwrap();
        let parent = Member::plain(0.2, 0.05);
        let delta = 256f64.powf(-3.1);
        let p =
            large_value_intervals(&g, &WeightSeq::Ones, parent, 256, 0.25, delta, 8).unwrap();
        assert!(p.m() >= 1);
        assert!(pattern_validate(&p).is_empty());
        // Unreachable threshold: empty member list.
        let p2 =
            large_value_intervals(&g, &WeightSeq::Ones, parent, 256, 10.0, delta, 8).unwrap();
        assert_eq!(p2.m(), 0);
    }

    #[test]
    fn dim_estimate_classical_sets() {
        // Middle thirds: M_k = 2, delta_k = 3^-k.
        let levels: Vec<(f64, f64)> = (1..=6).map(|k| (2.0, 3f64.powi(-k))).collect();
        let d = cantor_dim_estimate(&levels).unwrap();
        assert!((d - 2f64.ln() / 3f64.ln()).abs() < 1e-9);
        // Full interval: M_k = N_k = 4.
        let levels: Vec<(f64, f64)> = (1..=6).map(|k| (4.0, 4f64.powi(-k))).collect();
        assert!((cantor_dim_estimate(&levels).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dim_estimate_validation() {
        assert!(cantor_dim_estimate(&[]).is_err());
        assert!(cantor_dim_estimate(&[(2.0, 1.5)]).is_err());
        assert!(cantor_dim_estimate(&[(2.0, 0.5), (2.0, 0.5)]).is_err());
    }

    #[test]
    fn dim_estimate_synthetic_schedule() {
        let (gamma, tau) = (3.0, 0.1);
        let levels = synthetic_schedule(gamma, tau, 32.0, 4, 4.0);
        let d = cantor_dim_estimate(&levels).unwrap();
        let target = (gamma - 0.5 - tau) / (gamma + tau);
        assert!((d - target).abs() <= 0.1, "estimate {d} target {target}");
    }

    #[test]
    fn dim_estimate_scale_invariance() {
        let levels = synthetic_schedule(3.0, 0.1, 32.0, 4, 2.0);
        let d1 = cantor_dim_estimate(&levels).unwrap();
        // Raising every (M_k, delta_k) to a common power rescales both
        // logarithms identically.
        let scaled: Vec<(f64, f64)> = levels
            .iter()
            .map(|&(m, d)| (m.powf(1.5), d.powf(1.5)))
            .collect();
        let d2 = cantor_dim_estimate(&scaled).unwrap();
        assert!((d1 - d2).abs() < 1e-9);
    }

    #[test]
    fn build_depth_zero_and_budget() {
        let g = GrowthSpec::new(3.0, 0.1, 64).unwrap();
        let b = cantor_build(&g, &WeightSeq::Ones, Member::plain(0.0, 1.0), 0, 0.25).unwrap();
        assert!(b.levels.is_empty());
        assert!(matches!(
            cantor_build(&g, &WeightSeq::Ones, Member::plain(0.0, 1.0), 5, 0.25),
            Err(LabError::Budget { .. })
        ));
    }

    #[test]
    fn build_truncates_on_absurd_threshold() {
        let g = GrowthSpec::new(3.0, 0.1, 64).unwrap();
        let b = cantor_build(&g, &WeightSeq::Ones, Member::plain(0.0, 1.0), 1, 10.0).unwrap();
        assert!(b.truncation.is_some());
        assert!(b.levels.is_empty());
    }

    #[test]
    fn build_one_level() {
        let g = GrowthSpec::new(3.0, 0.1, 256).unwrap();
        let b = cantor_build(&g, &WeightSeq::Ones, Member::plain(0.0, 1.0), 1, 0.25).unwrap();
        assert!(b.truncation.is_none());
        let l1 = &b.levels[0];
        assert!(l1.m_k >= 1);
        assert!((l1.delta_k - 256f64.powf(-3.1)).abs() < 1e-20);
    }

    #[test]
    fn middle_thirds_mass_bound() {
        let deepest = middle_thirds(6);
        assert_eq!(deepest.len(), 64);
        let radii: Vec<f64> = (2..=6).map(|k| 3f64.powi(-k)).collect();
        let rows = mass_check(&deepest, 0.6, &radii).unwrap();
        for (r, ratio) in rows {
            assert!(ratio <= 4.0, "r = {r}: ratio = {ratio}");
        }
        // t = 0: the ratio is the ball mass itself, at most 1.
        let rows = mass_check(&deepest, 0.0, &[0.1]).unwrap();
        assert!(rows[0].1 <= 1.0 + 1e-12);
    }
}
