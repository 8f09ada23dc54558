//! `weyl`: command-line front end of the laboratory. Every subcommand
//! prints a versioned JSON result record; tables can additionally be
//! written as CSV. Flags override config-file values, which override
//! defaults.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use weyl_lab::arc::{self, BakerApprox, RationalApprox};
use weyl_lab::cantor::{
    cantor_build, cantor_dim_estimate, mass_check, middle_thirds, pattern_validate,
    synthetic_schedule, GrowthSpec, Member, Pattern,
};
use weyl_lab::disc::{disc_exact, disc_for_phase, koksma_probe};
use weyl_lab::measure::{
    counterexample_a, epsilon0, indicator_fraction, ladder_stats, ScanThresholds,
};
use weyl_lab::moment::{
    fourth_moment_interval, quadratic_pair_moment, second_moment_interval, variance_integral,
    FreqFamily, Interval,
};
use weyl_lab::phase::PhaseVector;
use weyl_lab::record::{csv_row, fmt_real, ResultRecord};
use weyl_lab::repcount::{
    nondiag_profile, power_pair_count, q_count, r_count, sample_k_log_uniform, PairSystemQuery,
    RepQuery,
};
use weyl_lab::sums::{batch_eval, flat_sum_demo, weyl_sum_range};
use weyl_lab::weights::WeightSeq;
use weyl_lab::{dims, panel, rng, LabError};

#[derive(Parser)]
#[command(
    name = "weyl",
    version,
    about = "Numerical laboratory for weighted exponential (Weyl) sums"
)]
struct Cli {
    /// Flat key=value config file; flags take precedence over its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON result record to this path as well as stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the subcommand's table (when it has one) as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Worker parallelism degree (advisory; outputs are independent of it).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags shared by subcommands that evaluate weighted sums.
#[derive(Args, Clone, Default)]
struct WeightArgs {
    /// Weight sequence: ones | random | reduction.
    #[arg(long)]
    weights: Option<String>,
    /// Seed for the random-phase weights.
    #[arg(long)]
    seed: Option<u64>,
    /// Lower-degree coefficients x1,..,x_{d-1} for reduction weights.
    #[arg(long)]
    twist: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate S_d(x; N) for a full phase vector.
    Eval(EvalArgs),
    /// Difference-table batch evaluation over a grid of phase vectors.
    Batch(BatchArgs),
    /// Hardy-Littlewood flat-sum demo sup_x |S(xi, x; N)| / sqrt(N).
    Flat(FlatArgs),
    /// Exact second moment over an interval.
    Moment2(Moment2Args),
    /// Exact fourth moment over an interval.
    Moment4(Moment4Args),
    /// Exact quadratic pair moment over a 2D box.
    Momentq(MomentqArgs),
    /// Lemma 6.3 variance integral (Monte Carlo outer, exact inner).
    Variance(VarianceArgs),
    /// Representation count R_d(k, N).
    Repcount(RepcountArgs),
    /// Pair-system count Q(k, m, N).
    Qcount(QcountArgs),
    /// Pairs (m, n) in [1,N]^2 with m^d = n^d + k.
    Powerpairs(PowerpairsArgs),
    /// Non-diagonal R_d(k, N) profile over a sampled range of k.
    Profile(ProfileArgs),
    /// Best continued-fraction convergent with bounded denominator.
    Cf(CfArgs),
    /// Oscillatory integral of a polynomial phase.
    Osc(OscArgs),
    /// Vaughan approximate formula and its residual.
    Vaughan(VaughanArgs),
    /// Baker multivariate approximate formula.
    Baker(BakerArgs),
    /// Major/minor arc classification scan over a grid.
    Arcs(ArcsArgs),
    /// Closed-form dimension and exponent calculators.
    Dims(DimsArgs),
    /// Exact extreme discrepancy of the polynomial sequence (or raw points).
    Disc(DiscArgs),
    /// Koksma ratio |S(x;N)| / D(x;N).
    Koksma(KoksmaArgs),
    /// Validate an I(N, M, delta)-pattern.
    Pattern(PatternArgs),
    /// Build a finite Cantor hierarchy of large-value intervals.
    Cantor(CantorArgs),
    /// Dimension estimate from an (M_k, delta_k) schedule.
    Dimest(DimestArgs),
    /// Mass-distribution probe on middle-thirds intervals.
    Mass(MassArgs),
    /// Window constant eps0 of Lemma 3.1.
    Eps0(Eps0Args),
    /// Fraction of a region whose sum magnitude hits [c sqrt(N), C sqrt(N)].
    Frac(FracArgs),
    /// Hit statistics over an increasing ladder of N.
    Ladder(LadderArgs),
    /// Counterexample-set measure bound and local density.
    CexA(CexAArgs),
    /// Run the acceptance regression panel.
    Panel(PanelArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Phase coefficients x1,..,xd (comma separated).
    #[arg(long)]
    x: Option<String>,
    /// Degree; must match the coefficient count when both are given.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    n: Option<u64>,
    /// Sum over (n0, n] instead of [1, n].
    #[arg(long)]
    n0: Option<u64>,
    #[command(flatten)]
    w: WeightArgs,
}

#[derive(Args)]
struct BatchArgs {
    /// Semicolon-separated phase vectors, e.g. "0.1,0.2;0.3,0.4".
    #[arg(long)]
    xs: Option<String>,
    /// Alternatively: number of random phase vectors of degree --d.
    #[arg(long)]
    count: Option<u64>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    w: WeightArgs,
}

#[derive(Args)]
struct FlatArgs {
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    grid: Option<u64>,
}

#[derive(Args)]
struct Moment2Args {
    /// Monomial degree (exclusive with --gamma).
    #[arg(long)]
    d: Option<u32>,
    /// Real power-phase exponent.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    n0: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    w: WeightArgs,
}

#[derive(Args)]
struct Moment4Args {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    w: WeightArgs,
}

#[derive(Args)]
struct MomentqArgs {
    #[arg(long)]
    start1: Option<f64>,
    #[arg(long)]
    len1: Option<f64>,
    #[arg(long)]
    start2: Option<f64>,
    #[arg(long)]
    len2: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    w: WeightArgs,
}

#[derive(Args)]
struct VarianceArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    x1: Option<f64>,
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    eps0: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[command(flatten)]
    w: WeightArgs,
}

#[derive(Args)]
struct RepcountArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    k: Option<i128>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args)]
struct QcountArgs {
    #[arg(long)]
    k: Option<i128>,
    #[arg(long)]
    m: Option<i128>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args)]
struct PowerpairsArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    k: Option<i128>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    n: Option<u64>,
    /// Sample shifts |k| <= kmax (log-uniform, both signs).
    #[arg(long)]
    kmax: Option<i128>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CfArgs {
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    qmax: Option<u64>,
}

#[derive(Args)]
struct OscArgs {
    /// Coefficients xi1,..,xid of the polynomial phase.
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args)]
struct VaughanArgs {
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args)]
struct BakerArgs {
    /// Numerators a1,..,ad.
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    /// Offsets xi1,..,xid.
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args)]
struct ArcsArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    qlimit: Option<u64>,
    /// Explicit comma-separated abscissas; overrides the random grid.
    #[arg(long)]
    points: Option<String>,
    /// Random-grid size when --points is absent.
    #[arg(long)]
    count: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Also report the Jarnik-Besicovitch dimension 2/kappa.
    #[arg(long)]
    kappa: Option<f64>,
    /// Also report the two dimension lower bounds for this gamma.
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Args)]
struct DiscArgs {
    /// Phase coefficients; points are x1 n + .. + xd n^d mod 1.
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    /// Raw points in [0,1) (overrides --x/--n).
    #[arg(long)]
    points: Option<String>,
}

#[derive(Args)]
struct KoksmaArgs {
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args)]
struct PatternArgs {
    /// Cell count N of the equipartition.
    #[arg(long)]
    cells: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Member start positions (comma separated).
    #[arg(long)]
    members: Option<String>,
    #[arg(long)]
    parent_start: Option<f64>,
    #[arg(long)]
    parent_len: Option<f64>,
}

#[derive(Args)]
struct CantorArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    l1: Option<u64>,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    root_start: Option<f64>,
    #[arg(long)]
    root_len: Option<f64>,
    #[command(flatten)]
    w: WeightArgs,
}

#[derive(Args)]
struct DimestArgs {
    /// Explicit schedule "M:delta;M:delta;..".
    #[arg(long)]
    levels: Option<String>,
    /// Synthetic schedule parameters (used when --levels is absent).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    l1: Option<f64>,
    #[arg(long)]
    count: Option<u32>,
    #[arg(long)]
    rule_exp: Option<f64>,
}

#[derive(Args)]
struct MassArgs {
    /// Middle-thirds depth.
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    t: Option<f64>,
    /// Probe radii (comma separated).
    #[arg(long)]
    radii: Option<String>,
}

#[derive(Args)]
struct Eps0Args {
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    bigc: Option<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
}

#[derive(Args)]
struct FracArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    bigc: Option<f64>,
    #[arg(long)]
    grid: Option<u64>,
    #[command(flatten)]
    w: WeightArgs,
}

#[derive(Args)]
struct LadderArgs {
    #[arg(long)]
    d: Option<u32>,
    /// Ladder of sum lengths (comma separated, strictly increasing).
    #[arg(long)]
    ns: Option<String>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    bigc: Option<f64>,
    #[arg(long)]
    grid: Option<u64>,
    #[command(flatten)]
    w: WeightArgs,
}

#[derive(Args)]
struct CexAArgs {
    #[arg(long)]
    nmax: Option<u32>,
    #[arg(long)]
    probe_start: Option<f64>,
    #[arg(long)]
    probe_len: Option<f64>,
}

#[derive(Args)]
struct PanelArgs {
    /// Run only criteria whose name contains this substring.
    #[arg(long)]
    only: Option<String>,
}

// ---- config-file / default resolution -----------------------------------

struct FileCfg(HashMap<String, String>);

impl FileCfg {
    fn load(path: Option<&PathBuf>) -> Result<FileCfg, LabError> {
        let mut map = HashMap::new();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| LabError::validation(format!("cannot read config {p:?}: {e}")))?;
            for (ln, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    LabError::validation(format!("config line {}: expected key=value", ln + 1))
                })?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(FileCfg(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, LabError>
    where
        T::Err: Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                LabError::validation(format!("config key {key} = {raw:?}: {e}"))
            }),
        }
    }

    fn raw(&self, key: &str) -> Option<String> {
        self.0.get(key).cloned()
    }
}

/// Flags > config file > defaults.
fn pick<T>(flag: Option<T>, file: Option<T>, default: Option<T>, name: &str) -> Result<T, LabError> {
    flag.or(file)
        .or(default)
        .ok_or_else(|| LabError::validation(format!("missing required parameter --{name}")))
}

fn f64_list(s: &str, name: &str) -> Result<Vec<f64>, LabError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| LabError::validation(format!("--{name}: {p:?}: {e}")))
        })
        .collect()
}

fn u64_list(s: &str, name: &str) -> Result<Vec<u64>, LabError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|e| LabError::validation(format!("--{name}: {p:?}: {e}")))
        })
        .collect()
}

fn i64_list(s: &str, name: &str) -> Result<Vec<i64>, LabError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|e| LabError::validation(format!("--{name}: {p:?}: {e}")))
        })
        .collect()
}

fn resolve_weights(w: &WeightArgs, cfg: &FileCfg) -> Result<(WeightSeq, Value), LabError> {
    let mode = pick(
        w.weights.clone(),
        cfg.raw("weights"),
        Some("ones".to_string()),
        "weights",
    )?;
    let seed = pick(w.seed, cfg.get("seed")?, Some(1u64), "seed")?;
    match mode.as_str() {
        "ones" => Ok((WeightSeq::Ones, json!({"weights": "ones"}))),
        "random" => Ok((
            WeightSeq::RandomPhase { seed },
            json!({"weights": "random", "seed": seed}),
        )),
        "reduction" => {
            let twist = pick(w.twist.clone(), cfg.raw("twist"), None, "twist")?;
            let coeffs = f64_list(&twist, "twist")?;
            let pv = PhaseVector::new(coeffs.clone())?;
            Ok((
                WeightSeq::Reduction(pv),
                json!({"weights": "reduction", "twist": coeffs}),
            ))
        }
        other => Err(LabError::validation(format!(
            "unknown weights mode {other:?} (expected ones|random|reduction)"
        ))),
    }
}

fn complex_json(z: weyl_lab::Complex64) -> Value {
    json!({"re": z.re, "im": z.im, "magnitude": z.norm()})
}

struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

// ---- subcommand bodies --------------------------------------------------

fn run(cmd: &Cmd, cfg: &FileCfg) -> Result<(&'static str, Value, Value, Option<CsvTable>), LabError> {
    match cmd {
        Cmd::Eval(a) => {
            let xs = pick(a.x.clone(), cfg.raw("x"), None, "x")?;
            let coeffs = f64_list(&xs, "x")?;
            if let Some(d) = pick(a.d, cfg.get("d")?, Some(coeffs.len() as u32), "d").ok() {
                if d as usize != coeffs.len() {
                    return Err(LabError::validation(format!(
                        "--d = {d} does not match {} coefficients",
                        coeffs.len()
                    )));
                }
            }
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let n0 = pick(a.n0, cfg.get("n0")?, Some(0u64), "n0")?;
            let (w, wj) = resolve_weights(&a.w, cfg)?;
            let pv = PhaseVector::new(coeffs.clone())?;
            let s = weyl_sum_range(&pv, &w, n0, n)?;
            Ok((
                "eval",
                json!({"x": coeffs, "n0": n0, "n": n, "w": wj}),
                json!({"value": complex_json(s.value), "n_terms": s.n_terms}),
                None,
            ))
        }
        Cmd::Batch(a) => {
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let (w, wj) = resolve_weights(&a.w, cfg)?;
            let grid: Vec<PhaseVector> = match pick(a.xs.clone(), cfg.raw("xs"), None, "xs") {
                Ok(xs) => xs
                    .split(';')
                    .map(|v| f64_list(v, "xs").and_then(|c| PhaseVector::new(c)))
                    .collect::<Result<_, _>>()?,
                Err(_) => {
                    let count = pick(a.count, cfg.get("count")?, None, "count")?;
                    let d = pick(a.d, cfg.get("d")?, None, "d")?;
                    let seed = pick(a.seed, cfg.get("seed")?, Some(1u64), "seed")?;
                    (0..count)
                        .map(|i| {
                            let c: Vec<f64> = (0..d as u64)
                                .map(|j| rng::u01(seed, i * d as u64 + j))
                                .collect();
                            PhaseVector::new(c)
                        })
                        .collect::<Result<_, _>>()?
                }
            };
            let out = batch_eval(&grid, &w, n)?;
            let rows: Vec<Value> = grid
                .iter()
                .zip(&out)
                .map(|(pv, s)| {
                    json!({"x": pv.coeffs(), "value": complex_json(s.value)})
                })
                .collect();
            let table = CsvTable {
                header: vec!["x".into(), "re".into(), "im".into(), "magnitude".into()],
                rows: grid
                    .iter()
                    .zip(&out)
                    .map(|(pv, s)| {
                        vec![
                            pv.coeffs()
                                .iter()
                                .map(|c| fmt_real(*c))
                                .collect::<Vec<_>>()
                                .join(";"),
                            fmt_real(s.value.re),
                            fmt_real(s.value.im),
                            fmt_real(s.value.norm()),
                        ]
                    })
                    .collect(),
            };
            Ok((
                "batch",
                json!({"points": grid.len(), "n": n, "w": wj}),
                json!({"rows": rows}),
                Some(table),
            ))
        }
        Cmd::Flat(a) => {
            let xi = pick(a.xi, cfg.get("xi")?, None, "xi")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let grid = pick(a.grid, cfg.get("grid")?, Some(4 * n), "grid")?;
            let r = flat_sum_demo(xi, n, grid)?;
            Ok((
                "flat",
                json!({"xi": xi, "n": n, "grid": grid}),
                json!({"sup_ratio": r}),
                None,
            ))
        }
        Cmd::Moment2(a) => {
            let family = match (pick(a.d, cfg.get("d")?, None, "d"), a.gamma.or(cfg.get("gamma")?)) {
                (_, Some(g)) => FreqFamily::Power { gamma: g },
                (Ok(d), None) => FreqFamily::Monomial { d },
                (Err(e), None) => return Err(e),
            };
            let start = pick(a.start, cfg.get("start")?, Some(0.0), "start")?;
            let length = pick(a.length, cfg.get("length")?, Some(1.0), "length")?;
            let n0 = pick(a.n0, cfg.get("n0")?, Some(0u64), "n0")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let (w, wj) = resolve_weights(&a.w, cfg)?;
            let (r, ratio) =
                second_moment_interval(family, &w, Interval::new(start, length)?, n0, n)?;
            Ok((
                "moment2",
                json!({"family": format!("{family:?}"), "start": start, "length": length,
                       "n0": n0, "n": n, "w": wj}),
                json!({"total": r.total, "diagonal": r.diagonal_m,
                       "offdiag": complex_json(r.offdiag_e), "ratio": ratio}),
                None,
            ))
        }
        Cmd::Moment4(a) => {
            let d = pick(a.d, cfg.get("d")?, None, "d")?;
            let start = pick(a.start, cfg.get("start")?, Some(0.0), "start")?;
            let length = pick(a.length, cfg.get("length")?, Some(1.0), "length")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let (w, wj) = resolve_weights(&a.w, cfg)?;
            let (r, ratio) = fourth_moment_interval(d, &w, Interval::new(start, length)?, n)?;
            Ok((
                "moment4",
                json!({"d": d, "start": start, "length": length, "n": n, "w": wj}),
                json!({"total": r.total, "diagonal": r.diagonal_m,
                       "offdiag": complex_json(r.offdiag_e), "ratio": ratio}),
                None,
            ))
        }
        Cmd::Momentq(a) => {
            let s1 = pick(a.start1, cfg.get("start1")?, Some(0.0), "start1")?;
            let l1 = pick(a.len1, cfg.get("len1")?, Some(1.0), "len1")?;
            let s2 = pick(a.start2, cfg.get("start2")?, Some(0.0), "start2")?;
            let l2 = pick(a.len2, cfg.get("len2")?, Some(1.0), "len2")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let (w, wj) = resolve_weights(&a.w, cfg)?;
            let r =
                quadratic_pair_moment(Interval::new(s1, l1)?, Interval::new(s2, l2)?, &w, n)?;
            Ok((
                "momentq",
                json!({"i1": [s1, l1], "i2": [s2, l2], "n": n, "w": wj}),
                json!({"total": r.total, "diagonal": r.diagonal_m,
                       "offdiag": complex_json(r.offdiag_e)}),
                None,
            ))
        }
        Cmd::Variance(a) => {
            let gamma = pick(a.gamma, cfg.get("gamma")?, None, "gamma")?;
            let x1 = pick(a.x1, cfg.get("x1")?, None, "x1")?;
            let eps1 = pick(a.eps1, cfg.get("eps1")?, None, "eps1")?;
            let eps0 = pick(a.eps0, cfg.get("eps0")?, None, "eps0")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let samples = pick(a.samples, cfg.get("samples")?, Some(32u64), "samples")?;
            let seed = pick(a.w.seed, cfg.get("seed")?, Some(1u64), "seed")?;
            let (w, wj) = resolve_weights(&a.w, cfg)?;
            let v = variance_integral(gamma, &w, x1, eps1, eps0, n, samples, seed)?;
            Ok((
                "variance",
                json!({"gamma": gamma, "x1": x1, "eps1": eps1, "eps0": eps0,
                       "n": n, "samples": samples, "seed": seed, "w": wj}),
                json!({"value": v.value, "stderr": v.stderr}),
                None,
            ))
        }
        Cmd::Repcount(a) => {
            let d = pick(a.d, cfg.get("d")?, None, "d")?;
            let k = pick(a.k, cfg.get("k")?, Some(0i128), "k")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let r = r_count(RepQuery { d, k, n })?;
            Ok((
                "repcount",
                json!({"d": d, "k": k.to_string(), "n": n}),
                json!({"total": r.total as u64, "diagonal": r.diagonal as u64,
                       "nondiagonal": r.nondiagonal as u64}),
                None,
            ))
        }
        Cmd::Qcount(a) => {
            let k = pick(a.k, cfg.get("k")?, Some(0i128), "k")?;
            let m = pick(a.m, cfg.get("m")?, Some(0i128), "m")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let r = q_count(PairSystemQuery { k, m, n })?;
            Ok((
                "qcount",
                json!({"k": k.to_string(), "m": m.to_string(), "n": n}),
                json!({"total": r.total as u64, "diagonal": r.diagonal as u64,
                       "nondiagonal": r.nondiagonal as u64}),
                None,
            ))
        }
        Cmd::Powerpairs(a) => {
            let d = pick(a.d, cfg.get("d")?, None, "d")?;
            let k = pick(a.k, cfg.get("k")?, None, "k")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let pairs = power_pair_count(d, k, n)?;
            let rows: Vec<Value> = pairs.iter().map(|&(x, y)| json!([x, y])).collect();
            let table = CsvTable {
                header: vec!["n1".into(), "n2".into()],
                rows: pairs
                    .iter()
                    .map(|&(x, y)| vec![x.to_string(), y.to_string()])
                    .collect(),
            };
            Ok((
                "powerpairs",
                json!({"d": d, "k": k.to_string(), "n": n}),
                json!({"count": pairs.len(), "pairs": rows}),
                Some(table),
            ))
        }
        Cmd::Profile(a) => {
            let d = pick(a.d, cfg.get("d")?, None, "d")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let kmax = pick(a.kmax, cfg.get("kmax")?, Some(2 * (n as i128).pow(d)), "kmax")?;
            let count = pick(a.count, cfg.get("count")?, Some(100usize), "count")?;
            let seed = pick(a.seed, cfg.get("seed")?, Some(1u64), "seed")?;
            let ks = sample_k_log_uniform(kmax, count, seed);
            let p = nondiag_profile(d, n, &ks)?;
            let rows: Vec<Value> = p
                .rows
                .iter()
                .map(|&(k, c)| json!({"k": k.to_string(), "count": c as u64}))
                .collect();
            let table = CsvTable {
                header: vec!["k".into(), "count".into()],
                rows: p
                    .rows
                    .iter()
                    .map(|&(k, c)| vec![k.to_string(), c.to_string()])
                    .collect(),
            };
            Ok((
                "profile",
                json!({"d": d, "n": n, "kmax": kmax.to_string(), "count": count, "seed": seed}),
                json!({"rows": rows, "max": p.max as u64, "exponent": p.exponent}),
                Some(table),
            ))
        }
        Cmd::Cf(a) => {
            let x = pick(a.x, cfg.get("x")?, None, "x")?;
            let qmax = pick(a.qmax, cfg.get("qmax")?, None, "qmax")?;
            let r = arc::cf_approx(x, qmax)?;
            Ok((
                "cf",
                json!({"x": x, "qmax": qmax}),
                json!({"a": r.a, "q": r.q, "xi": r.xi}),
                None,
            ))
        }
        Cmd::Osc(a) => {
            let xi = f64_list(&pick(a.xi.clone(), cfg.raw("xi"), None, "xi")?, "xi")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let v = arc::oscillatory_integral(&xi, n)?;
            Ok((
                "osc",
                json!({"xi": xi, "n": n}),
                json!({"value": complex_json(v)}),
                None,
            ))
        }
        Cmd::Vaughan(a) => {
            let aa = pick(a.a, cfg.get("a")?, None, "a")?;
            let q = pick(a.q, cfg.get("q")?, None, "q")?;
            let xi = pick(a.xi, cfg.get("xi")?, Some(0.0), "xi")?;
            let d = pick(a.d, cfg.get("d")?, None, "d")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let r = RationalApprox { a: aa, q, xi };
            let direct = arc::rational_weyl_sum(aa, q, xi, d, n)?;
            let (main, budget) = arc::vaughan_approx(r, d, n)?;
            let residual = (direct - main).norm();
            Ok((
                "vaughan",
                json!({"a": aa, "q": q, "xi": xi, "d": d, "n": n}),
                json!({"main": complex_json(main), "direct": complex_json(direct),
                       "budget": budget, "residual": residual,
                       "residual_ratio": residual / budget}),
                None,
            ))
        }
        Cmd::Baker(a) => {
            let avec = i64_list(&pick(a.a.clone(), cfg.raw("a"), None, "a")?, "a")?;
            let q = pick(a.q, cfg.get("q")?, None, "q")?;
            let xivec = f64_list(&pick(a.xi.clone(), cfg.raw("xi"), None, "xi")?, "xi")?;
            let d = pick(a.d, cfg.get("d")?, Some(avec.len() as u32), "d")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let b = BakerApprox::new(avec.clone(), q, xivec.clone())?;
            let (main, valid, budget) = arc::baker_approx(&b, d, n)?;
            Ok((
                "baker",
                json!({"a": avec, "q": q, "xi": xivec, "d": d, "n": n}),
                json!({"main": complex_json(main), "arc_condition": valid,
                       "budget": budget, "gcd_d": b.d_gcd}),
                None,
            ))
        }
        Cmd::Arcs(a) => {
            let d = pick(a.d, cfg.get("d")?, None, "d")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let qlimit = pick(a.qlimit, cfg.get("qlimit")?, Some(50u64), "qlimit")?;
            let grid: Vec<f64> = match pick(a.points.clone(), cfg.raw("points"), None, "points") {
                Ok(p) => f64_list(&p, "points")?,
                Err(_) => {
                    let count = pick(a.count, cfg.get("count")?, Some(20u64), "count")?;
                    let seed = pick(a.seed, cfg.get("seed")?, Some(1u64), "seed")?;
                    (0..count).map(|i| rng::u01(seed, i)).collect()
                }
            };
            let rows = arc::major_arc_scan(d, n, qlimit, &grid)?;
            let jrows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({"x": r.x, "a": r.approx.a, "q": r.approx.q, "xi": r.approx.xi,
                           "is_major": r.is_major, "direct_mag": r.direct_mag,
                           "main_mag": r.main_mag, "residual_ratio": r.residual_ratio})
                })
                .collect();
            let table = CsvTable {
                header: vec![
                    "x".into(),
                    "a".into(),
                    "q".into(),
                    "xi".into(),
                    "is_major".into(),
                    "direct_mag".into(),
                    "main_mag".into(),
                    "residual_ratio".into(),
                ],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            fmt_real(r.x),
                            r.approx.a.to_string(),
                            r.approx.q.to_string(),
                            fmt_real(r.approx.xi),
                            r.is_major.to_string(),
                            fmt_real(r.direct_mag),
                            r.main_mag.map(fmt_real).unwrap_or_default(),
                            r.residual_ratio.map(fmt_real).unwrap_or_default(),
                        ]
                    })
                    .collect(),
            };
            let majors = rows.iter().filter(|r| r.is_major).count();
            Ok((
                "arcs",
                json!({"d": d, "n": n, "qlimit": qlimit, "points": grid.len()}),
                json!({"rows": jrows, "major_count": majors}),
                Some(table),
            ))
        }
        Cmd::Dims(a) => {
            let mut out = serde_json::Map::new();
            let d = pick(a.d, cfg.get("d")?, None, "d");
            let alpha = a.alpha.or(cfg.get("alpha")?);
            if let (Ok(d), Some(alpha)) = (&d, alpha) {
                out.insert("s".into(), json!(dims::s_dim(*d, alpha)?));
                out.insert("u".into(), json!(dims::u_dim(*d, alpha)?));
                out.insert(
                    "monomial_conjecture".into(),
                    json!(dims::monomial_conj_dim(*d, alpha)?),
                );
            }
            if let Ok(d) = &d {
                out.insert("s_half".into(), json!(dims::s_half(*d)?));
                out.insert(
                    "mean_value_exponent".into(),
                    json!(dims::mean_value_exponent(*d)),
                );
            }
            if let Some(kappa) = a.kappa.or(cfg.get("kappa")?) {
                out.insert("jb_dim".into(), json!(dims::jb_dim(kappa)?));
            }
            if let Some(gamma) = a.gamma.or(cfg.get("gamma")?) {
                let (b1, b2) = dims::theorem_bounds(gamma);
                out.insert("bound_half_gamma".into(), json!(b1));
                out.insert("bound_gamma".into(), json!(b2));
            }
            if out.is_empty() {
                return Err(LabError::validation(
                    "dims needs --d (with optional --alpha), --kappa, or --gamma",
                ));
            }
            Ok((
                "dims",
                json!({"d": d.ok(), "alpha": alpha, "kappa": a.kappa, "gamma": a.gamma}),
                Value::Object(out),
                None,
            ))
        }
        Cmd::Disc(a) => {
            let (config, r) = match pick(a.points.clone(), cfg.raw("points"), None, "points") {
                Ok(p) => {
                    let pts = f64_list(&p, "points")?;
                    (json!({"points": pts.len()}), disc_exact(&pts)?)
                }
                Err(_) => {
                    let xs = f64_list(&pick(a.x.clone(), cfg.raw("x"), None, "x")?, "x")?;
                    let n = pick(a.n, cfg.get("n")?, None, "n")?;
                    let pv = PhaseVector::new(xs.clone())?;
                    (json!({"x": xs, "n": n}), disc_for_phase(&pv, n)?)
                }
            };
            Ok((
                "disc",
                config,
                json!({"value": r.value, "argmax": r.argmax}),
                None,
            ))
        }
        Cmd::Koksma(a) => {
            let xs = f64_list(&pick(a.x.clone(), cfg.raw("x"), None, "x")?, "x")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let pv = PhaseVector::new(xs.clone())?;
            let r = koksma_probe(&pv, n)?;
            Ok((
                "koksma",
                json!({"x": xs, "n": n}),
                json!({"ratio": r}),
                None,
            ))
        }
        Cmd::Pattern(a) => {
            let cells = pick(a.cells, cfg.get("cells")?, None, "cells")?;
            let delta = pick(a.delta, cfg.get("delta")?, None, "delta")?;
            let starts =
                f64_list(&pick(a.members.clone(), cfg.raw("members"), None, "members")?, "members")?;
            let ps = pick(a.parent_start, cfg.get("parent_start")?, Some(0.0), "parent_start")?;
            let pl = pick(a.parent_len, cfg.get("parent_len")?, Some(1.0), "parent_len")?;
            let p = Pattern {
                parent: Member::plain(ps, pl),
                n: cells,
                delta,
                members: starts.iter().map(|&s| Member::plain(s, delta)).collect(),
            };
            let violations = pattern_validate(&p);
            Ok((
                "pattern",
                json!({"cells": cells, "delta": delta, "members": starts,
                       "parent": [ps, pl]}),
                json!({"valid": violations.is_empty(), "violations": violations}),
                None,
            ))
        }
        Cmd::Cantor(a) => {
            let gamma = pick(a.gamma, cfg.get("gamma")?, Some(3.0), "gamma")?;
            let tau = pick(a.tau, cfg.get("tau")?, Some(0.1), "tau")?;
            let l1 = pick(a.l1, cfg.get("l1")?, Some(256u64), "l1")?;
            let depth = pick(a.depth, cfg.get("depth")?, Some(1u32), "depth")?;
            let c0 = pick(a.c0, cfg.get("c0")?, Some(0.25), "c0")?;
            let rs = pick(a.root_start, cfg.get("root_start")?, Some(0.0), "root_start")?;
            let rl = pick(a.root_len, cfg.get("root_len")?, Some(1.0), "root_len")?;
            let (w, wj) = resolve_weights(&a.w, cfg)?;
            let g = GrowthSpec::new(gamma, tau, l1)?;
            let b = cantor_build(&g, &w, Member::plain(rs, rl), depth, c0)?;
            let levels: Vec<Value> = b
                .levels
                .iter()
                .map(|l| {
                    json!({"k": l.k, "n_k": l.n_k, "m_k": l.m_k, "delta_k": l.delta_k,
                           "intervals": l.intervals.len(),
                           "starts": l.intervals.iter()
                               .map(|m| m.start.value()).collect::<Vec<_>>()})
                })
                .collect();
            Ok((
                "cantor",
                json!({"gamma": gamma, "tau": tau, "l1": l1, "depth": depth, "c0": c0,
                       "root": [rs, rl], "w": wj}),
                json!({"levels": levels, "truncation": b.truncation}),
                None,
            ))
        }
        Cmd::Dimest(a) => {
            let (config, levels) =
                match pick(a.levels.clone(), cfg.raw("levels"), None, "levels") {
                    Ok(spec) => {
                        let levels = spec
                            .split(';')
                            .map(|p| {
                                let (m, d) = p.split_once(':').ok_or_else(|| {
                                    LabError::validation("--levels entries must be M:delta")
                                })?;
                                let m: f64 = m.trim().parse().map_err(|e| {
                                    LabError::validation(format!("--levels M {m:?}: {e}"))
                                })?;
                                let d: f64 = d.trim().parse().map_err(|e| {
                                    LabError::validation(format!("--levels delta {d:?}: {e}"))
                                })?;
                                Ok((m, d))
                            })
                            .collect::<Result<Vec<_>, LabError>>()?;
                        (json!({"levels": spec}), levels)
                    }
                    Err(_) => {
                        let gamma = pick(a.gamma, cfg.get("gamma")?, Some(3.0), "gamma")?;
                        let tau = pick(a.tau, cfg.get("tau")?, Some(0.1), "tau")?;
                        let l1 = pick(a.l1, cfg.get("l1")?, Some(32.0), "l1")?;
                        let count = pick(a.count, cfg.get("count")?, Some(4u32), "count")?;
                        let rule = pick(a.rule_exp, cfg.get("rule_exp")?, Some(4.0), "rule_exp")?;
                        (
                            json!({"gamma": gamma, "tau": tau, "l1": l1,
                                   "count": count, "rule_exp": rule}),
                            synthetic_schedule(gamma, tau, l1, count, rule),
                        )
                    }
                };
            let est = cantor_dim_estimate(&levels)?;
            Ok((
                "dimest",
                config,
                json!({"estimate": est,
                       "levels": levels.iter()
                           .map(|&(m, d)| json!({"m": m, "delta": d})).collect::<Vec<_>>()}),
                None,
            ))
        }
        Cmd::Mass(a) => {
            let depth = pick(a.depth, cfg.get("depth")?, Some(6u32), "depth")?;
            let t = pick(a.t, cfg.get("t")?, None, "t")?;
            let radii =
                f64_list(&pick(a.radii.clone(), cfg.raw("radii"), None, "radii")?, "radii")?;
            let deepest = middle_thirds(depth);
            let rows = mass_check(&deepest, t, &radii)?;
            let jrows: Vec<Value> = rows
                .iter()
                .map(|&(r, ratio)| json!({"r": r, "max_ratio": ratio}))
                .collect();
            let table = CsvTable {
                header: vec!["r".into(), "max_ratio".into()],
                rows: rows
                    .iter()
                    .map(|&(r, ratio)| vec![fmt_real(r), fmt_real(ratio)])
                    .collect(),
            };
            Ok((
                "mass",
                json!({"depth": depth, "t": t, "radii": radii}),
                json!({"rows": jrows}),
                Some(table),
            ))
        }
        Cmd::Eps0(a) => {
            let t = ScanThresholds {
                c: pick(a.c, cfg.get("c")?, None, "c")?,
                big_c: pick(a.bigc, cfg.get("bigc")?, None, "bigc")?,
                alpha1: pick(a.alpha1, cfg.get("alpha1")?, None, "alpha1")?,
                alpha2: pick(a.alpha2, cfg.get("alpha2")?, None, "alpha2")?,
            };
            Ok((
                "eps0",
                json!({"c": t.c, "bigc": t.big_c, "alpha1": t.alpha1, "alpha2": t.alpha2}),
                json!({"eps0": epsilon0(t)}),
                None,
            ))
        }
        Cmd::Frac(a) => {
            let d = pick(a.d, cfg.get("d")?, None, "d")?;
            let start = pick(a.start, cfg.get("start")?, Some(0.0), "start")?;
            let length = pick(a.length, cfg.get("length")?, Some(1.0), "length")?;
            let n = pick(a.n, cfg.get("n")?, None, "n")?;
            let c = pick(a.c, cfg.get("c")?, None, "c")?;
            let bigc = pick(a.bigc, cfg.get("bigc")?, None, "bigc")?;
            let grid = pick(a.grid, cfg.get("grid")?, Some(1000u64), "grid")?;
            let seed = pick(a.w.seed, cfg.get("seed")?, Some(1u64), "seed")?;
            let (w, wj) = resolve_weights(&a.w, cfg)?;
            let f = indicator_fraction(d, &w, start, length, n, c, bigc, grid, seed)?;
            Ok((
                "frac",
                json!({"d": d, "start": start, "length": length, "n": n,
                       "c": c, "bigc": bigc, "grid": grid, "seed": seed, "w": wj}),
                json!({"fraction": f}),
                None,
            ))
        }
        Cmd::Ladder(a) => {
            let d = pick(a.d, cfg.get("d")?, None, "d")?;
            let ns = u64_list(&pick(a.ns.clone(), cfg.raw("ns"), None, "ns")?, "ns")?;
            let start = pick(a.start, cfg.get("start")?, Some(0.0), "start")?;
            let length = pick(a.length, cfg.get("length")?, Some(1.0), "length")?;
            let c = pick(a.c, cfg.get("c")?, None, "c")?;
            let bigc = pick(a.bigc, cfg.get("bigc")?, None, "bigc")?;
            let grid = pick(a.grid, cfg.get("grid")?, Some(1000u64), "grid")?;
            let seed = pick(a.w.seed, cfg.get("seed")?, Some(1u64), "seed")?;
            let (w, wj) = resolve_weights(&a.w, cfg)?;
            let r = ladder_stats(d, &w, start, length, &ns, c, bigc, grid, seed)?;
            let table = CsvTable {
                header: vec!["n".into(), "fraction".into(), "tail_union".into()],
                rows: r
                    .ns
                    .iter()
                    .zip(r.per_n_fraction.iter().zip(&r.tail_union))
                    .map(|(&n, (&f, &t))| vec![n.to_string(), fmt_real(f), fmt_real(t)])
                    .collect(),
            };
            Ok((
                "ladder",
                json!({"d": d, "ns": ns, "start": start, "length": length,
                       "c": c, "bigc": bigc, "grid": grid, "seed": seed, "w": wj}),
                json!({"per_n_fraction": r.per_n_fraction, "union_fraction": r.union_fraction,
                       "tail_union": r.tail_union}),
                Some(table),
            ))
        }
        Cmd::CexA(a) => {
            let nmax = pick(a.nmax, cfg.get("nmax")?, Some(1000u32), "nmax")?;
            let ps = pick(a.probe_start, cfg.get("probe_start")?, Some(0.0), "probe_start")?;
            let pl = pick(a.probe_len, cfg.get("probe_len")?, Some(1.0), "probe_len")?;
            let r = counterexample_a(nmax, ps, pl)?;
            Ok((
                "cexA",
                json!({"nmax": nmax, "probe_start": ps, "probe_len": pl}),
                json!({"measure_bound": r.measure_bound, "density": r.density,
                       "generation": r.generation}),
                None,
            ))
        }
        Cmd::Panel(a) => {
            let only = a.only.clone().or(cfg.raw("only"));
            let outcomes = panel::run_panel(only.as_deref());
            if outcomes.is_empty() {
                return Err(LabError::validation(format!(
                    "--only {:?} matches no criterion",
                    only.unwrap_or_default()
                )));
            }
            let all_pass = outcomes.iter().all(|o| o.pass);
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({"id": o.id, "name": o.name, "pass": o.pass,
                           "wall_ms": o.wall_ms, "details": o.details})
                })
                .collect();
            let table = CsvTable {
                header: vec!["id".into(), "name".into(), "pass".into(), "wall_ms".into()],
                rows: outcomes
                    .iter()
                    .map(|o| {
                        vec![
                            o.id.to_string(),
                            o.name.to_string(),
                            o.pass.to_string(),
                            fmt_real(o.wall_ms),
                        ]
                    })
                    .collect(),
            };
            if !all_pass {
                // Emit the record before failing so the measured values land
                // in the output, then signal via the validation exit path.
                let rec = ResultRecord::new(
                    "panel",
                    json!({"only": only}),
                    json!({"pass": false, "criteria": rows}),
                    0.0,
                );
                println!("{}", rec.emit());
                return Err(LabError::validation("panel criteria failed"));
            }
            Ok((
                "panel",
                json!({"only": only}),
                json!({"pass": all_pass, "criteria": rows}),
                Some(table),
            ))
        }
    }
}

fn emit(
    cli: &Cli,
    subcommand: &str,
    config: Value,
    outputs: Value,
    wall_ms: f64,
    table: Option<CsvTable>,
) -> Result<(), LabError> {
    let rec = ResultRecord::new(subcommand, config, outputs, wall_ms);
    let text = rec.emit();
    println!("{text}");
    if let Some(path) = &cli.out {
        std::fs::write(path, &text)
            .map_err(|e| LabError::validation(format!("cannot write {path:?}: {e}")))?;
    }
    if let Some(path) = &cli.csv {
        match table {
            Some(t) => {
                let mut lines = vec![csv_row(&t.header)];
                lines.extend(t.rows.iter().map(|r| csv_row(r)));
                lines.push(String::new());
                std::fs::write(path, lines.join("\n"))
                    .map_err(|e| LabError::validation(format!("cannot write {path:?}: {e}")))?;
            }
            None => {
                return Err(LabError::validation(format!(
                    "subcommand {subcommand} has no CSV table"
                )))
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            if matches!(err.kind(), ErrorKind::InvalidSubcommand) {
                eprintln!("{err}");
                return ExitCode::from(1);
            }
            eprintln!("{err}");
            return ExitCode::from(2);
        }
    };
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let cfg = match FileCfg::load(cli.config.as_ref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli.cmd, &cfg) {
        Ok((name, config, outputs, table)) => {
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            match emit(&cli, name, config, outputs, wall_ms, table) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
