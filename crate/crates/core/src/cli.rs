//! Command-line front end.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 solver failure, 4 semantic
//! misuse, 5 internal invariant violation.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::error::Error;
use crate::hardy::{
    check_prop17, hardy_infimum_with_epsilon, hardy_mesh, near_optimizer_quotient, RadialModel,
    DEFAULT_EPSILON,
};
use crate::numerics::Interval;
use crate::special::{
    check_lemma21, check_lemma23, first_zero, lambda_mu, BesselOrder, DimensionParam,
};
use crate::surface::{
    check_scan, estimate_all, geometric_grid, h_bounds, scan, Family, Method, Profile,
    ProfileConfig, Quantity, ScanRow, SolverOptions, DEFAULT_CUTOFFS, MIN_SAMPLES,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_MISUSE: i32 = 4;
pub const EXIT_INVARIANT: i32 = 5;

/// Caps the worker pool of parallel scans.
pub const THREADS_ENV: &str = "SPECTRAL_TYPE_THREADS";

/// Column names of the scan CSV.
pub const SCAN_HEADER: [&str; 6] = [
    "r",
    "lambda1",
    "r2lambda1",
    "dprs_bound",
    "vol_ball",
    "vol_complement",
];

/// `r²λ` above this at the window end, and still growing, is reported as
/// diverging.
const DIVERGENCE_THRESHOLD: f64 = 1e3;

#[derive(Debug, Parser)]
#[command(
    name = "spectral-type",
    version,
    about = "First Dirichlet eigenvalues, Bessel constants, Hardy constants and type of radial models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// First zero of J_nu, or (mu, j, lambda_mu) for --mu.
    Bessel(BesselArgs),
    /// CSV of first ball eigenvalues, bounds and volumes over a radius grid.
    Scan(ScanArgs),
    /// Finite-window estimates of the asymptotic constants.
    Asymptotics(AsymptoticsArgs),
    /// Parabolic or hyperbolic verdict from the tails of h.
    Type(TypeArgs),
    /// Discrete Hardy infimum against the sharp constant.
    Hardy(HardyArgs),
    /// Residuals of the Bessel-profile integral identities.
    Identities(IdentitiesArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("which").required(true).args(["mu", "nu"])))]
#[command(allow_negative_numbers = true)]
struct BesselArgs {
    /// Dimension parameter mu; prints j_{mu/2-1} and lambda_mu.
    #[arg(long)]
    mu: Option<f64>,
    /// Bessel order nu in (-1, 120].
    #[arg(long)]
    nu: Option<f64>,
}

#[derive(Debug, Args, Default)]
struct ProfileArgs {
    /// key=value profile file; flags override its entries.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// power_law, exp_decay, dprs, staircase, slowly_varying or tabulated.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// log_power, power or loglog.
    #[arg(long)]
    mu_choice: Option<String>,
    /// CSV of (t, eta') samples for tabulated profiles.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
#[command(allow_negative_numbers = true)]
struct RunArgs {
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    /// Ratio of the geometric radius grid.
    #[arg(long)]
    ratio: Option<f64>,
    /// Finite elements per ball before adaptive refinement.
    #[arg(long)]
    cells: Option<usize>,
    /// fem or shoot.
    #[arg(long)]
    method: Option<String>,
    /// Omit the comment lines describing the run.
    #[arg(long)]
    no_banner: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Explicit radii, replacing the geometric grid.
    #[arg(long = "r", value_delimiter = ',')]
    radii: Vec<f64>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AsymptoticsArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Sample radii per window.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Args)]
struct TypeArgs {
    #[command(flatten)]
    profile: ProfileArgs,
}

#[derive(Debug, Args)]
struct HardyArgs {
    /// Euclidean radial model of this dimension.
    #[arg(long)]
    euclidean: Option<u32>,
    #[command(flatten)]
    profile: ProfileArgs,
    /// Outer end R of the support: (0, R) or (-R, R) on a surface.
    #[arg(long, default_value_t = 10.0)]
    support_max: f64,
    #[arg(long, default_value_t = 8000)]
    cells: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Compare lambda_1(B(0, r)) r^2 with lambda_n instead.
    #[arg(long, requires_all = ["n", "r"])]
    check_prop17: bool,
    #[arg(long = "n")]
    n: Option<u32>,
    #[arg(long = "r")]
    r: Option<f64>,
}

#[derive(Debug, Args)]
struct IdentitiesArgs {
    /// Largest residual accepted.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

/// Exit code for an error raised by the numerical layer.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::OutOfSupportedRange(_) => EXIT_USAGE,
        Error::MeaninglessConstant { .. } | Error::Precondition(_) | Error::InconclusiveTail(_) => {
            EXIT_MISUSE
        }
        Error::InvariantViolation(_) => EXIT_INVARIANT,
        _ => EXIT_SOLVER,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("i/o error: {e}"))
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Where a setting came from, in decreasing precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Flag,
    Config,
    Default,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Flag => "flag",
            Source::Config => "config",
            Source::Default => "default",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Setting {
    pub key: String,
    pub value: String,
    pub source: Source,
}

/// Fully resolved, validated settings of a `scan` or `asymptotics` run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub profile: Profile,
    /// Every setting in effect with its origin, in resolution order.
    pub settings: Vec<Setting>,
    /// Radius window; equals the extent of `radii` when those are given.
    pub r_min: f64,
    pub r_max: f64,
    pub ratio: f64,
    pub samples: usize,
    /// Explicit radii; empty means the geometric grid over the window.
    pub radii: Vec<f64>,
    pub opts: SolverOptions,
    pub out: Option<PathBuf>,
    pub banner: bool,
}

/// Window used when the run does not name one.
pub fn default_window(p: &Profile) -> (f64, f64) {
    match p.family() {
        Family::PowerLaw { .. } => (10.0, 200.0),
        Family::ExponentialDecay { alpha } => (8.0 / alpha, 24.0 / alpha),
        Family::Dprs => (4.0, 64.0),
        Family::Staircase => (16.0, 256.0),
        Family::SlowlyVarying(_) => (25.0, 1000.0),
        Family::Tabulated => {
            let (lo, hi) = p.table_range().unwrap_or((-1.0, 1.0));
            let reach = lo.abs().min(hi.abs());
            (reach / 8.0, reach)
        }
    }
}

struct Resolver {
    cfg: ProfileConfig,
    settings: Vec<Setting>,
}

impl Resolver {
    fn new(args: &ProfileArgs) -> std::result::Result<Self, Failure> {
        let mut settings = Vec::new();
        let mut cfg = match &args.profile {
            Some(path) => {
                let cfg = ProfileConfig::from_file(path)?;
                settings.extend(cfg.entries().map(|(k, v)| Setting {
                    key: k.into(),
                    value: v.into(),
                    source: Source::Config,
                }));
                cfg
            }
            None => ProfileConfig::default(),
        };
        let flags = [
            ("family", args.family.clone()),
            ("alpha", args.alpha.map(|v| v.to_string())),
            ("beta", args.beta.map(|v| v.to_string())),
            ("gamma", args.gamma.map(|v| v.to_string())),
            ("mu_choice", args.mu_choice.clone()),
            (
                "table",
                args.table.as_ref().map(|p| p.display().to_string()),
            ),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, &v)?;
                settings.retain(|s: &Setting| s.key != k);
                settings.push(Setting {
                    key: k.into(),
                    value: v,
                    source: Source::Flag,
                });
            }
        }
        Ok(Self { cfg, settings })
    }

    fn profile(&self) -> std::result::Result<Profile, Failure> {
        self.cfg.to_profile().map_err(Failure::from)
    }

    /// Flag, then config entry, then default; records the winner.
    fn pick(&mut self, key: &str, flag: Option<String>, default: String) -> String {
        let (value, source) = match (flag, self.cfg.get(key)) {
            (Some(v), _) => (v, Source::Flag),
            (None, Some(v)) => (v.to_string(), Source::Config),
            (None, None) => (default, Source::Default),
        };
        self.settings.retain(|s| s.key != key);
        self.settings.push(Setting {
            key: key.into(),
            value: value.clone(),
            source,
        });
        value
    }
}

fn parse<T: std::str::FromStr>(key: &str, raw: &str) -> std::result::Result<T, Failure> {
    raw.parse()
        .map_err(|_| Failure::usage(format!("invalid value for {key}: {raw}")))
}

impl RunConfig {
    fn resolve(
        command: &'static str,
        profile: &ProfileArgs,
        run: &RunArgs,
        samples: Option<usize>,
        radii: &[f64],
        out: Option<PathBuf>,
    ) -> std::result::Result<Self, Failure> {
        let mut res = Resolver::new(profile)?;
        let p = res.profile()?;
        let (lo, hi) = default_window(&p);
        let s = |v: Option<f64>| v.map(|x| x.to_string());
        let (r_min, r_max, ratio) = if radii.is_empty() {
            (
                parse::<f64>("r_min", &res.pick("r_min", s(run.r_min), lo.to_string()))?,
                parse::<f64>("r_max", &res.pick("r_max", s(run.r_max), hi.to_string()))?,
                parse::<f64>("ratio", &res.pick("ratio", s(run.ratio), "1.25".into()))?,
            )
        } else {
            let list: Vec<String> = radii.iter().map(|r| r.to_string()).collect();
            res.pick("r", Some(list.join(",")), String::new());
            let lo = radii.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi, 2.0)
        };
        let samples = if command == "asymptotics" {
            parse::<usize>(
                "samples",
                &res.pick("samples", samples.map(|v| v.to_string()), "12".into()),
            )?
        } else {
            0
        };
        let cells = parse::<usize>(
            "cells",
            &res.pick("cells", run.cells.map(|v| v.to_string()), "2000".into()),
        )?;
        let method = match res
            .pick("method", run.method.clone(), "fem".into())
            .as_str()
        {
            "fem" => Method::Fem,
            "shoot" => Method::Shoot,
            other => {
                return Err(Failure::usage(format!(
                    "method must be fem or shoot, got {other}"
                )))
            }
        };

        if !(r_min > 0.0) || !r_min.is_finite() || !(r_max >= r_min) || !r_max.is_finite() {
            return Err(Failure::usage(format!(
                "radii must satisfy 0 < r_min <= r_max < inf, got {r_min}, {r_max}"
            )));
        }
        if radii.is_empty() && !(ratio > 1.0 && ratio.is_finite()) {
            return Err(Failure::usage(format!("ratio must exceed 1, got {ratio}")));
        }
        if command == "asymptotics" && (samples < MIN_SAMPLES || !(r_max > r_min)) {
            return Err(Failure::usage(format!(
                "asymptotics needs r_min < r_max and at least {MIN_SAMPLES} samples"
            )));
        }
        if cells < 16 {
            return Err(Failure::usage(format!("cells must be >= 16, got {cells}")));
        }
        let mut radii = radii.to_vec();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        Ok(Self {
            command,
            profile: p,
            settings: res.settings,
            r_min,
            r_max,
            ratio,
            samples,
            radii,
            opts: SolverOptions { cells, method },
            out,
            banner: !run.no_banner,
        })
    }

    /// Comment lines echoing the run; only the first carries a timestamp.
    pub fn banner_lines(&self) -> Vec<String> {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut lines = vec![
            format!(
                "# spectral-type {} {}, unix time {stamp}",
                env!("CARGO_PKG_VERSION"),
                self.command
            ),
            format!("# profile: {}", self.profile.describe()),
            "# precedence: flag > config > default".to_string(),
        ];
        lines.extend(
            self.settings
                .iter()
                .map(|s| format!("# {}={} ({})", s.key, s.value, s.source)),
        );
        lines
    }

    fn grid(&self) -> std::result::Result<Vec<f64>, Failure> {
        if !self.radii.is_empty() {
            return Ok(self.radii.clone());
        }
        Ok(geometric_grid(self.r_min, self.r_max, self.ratio)?)
    }
}

/// 12 significant digits, positional when the exponent is moderate.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..=11).contains(&e) {
        format!("{:.*}", (11 - e) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

fn csv_number(x: f64) -> String {
    format!("{x:.11e}")
}

/// CSV body of a scan: header and one row per radius.
pub fn scan_csv(rows: &[ScanRow]) -> std::result::Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::usage(format!("csv error: {e}"));
    w.write_record(SCAN_HEADER).map_err(io)?;
    for row in rows {
        w.write_record([
            csv_number(row.r),
            csv_number(row.lambda1),
            csv_number(row.r2lambda1),
            csv_number(row.dprs_bound),
            csv_number(row.vol_ball),
            csv_number(row.vol_complement),
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::usage(format!("csv error: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

fn cmd_bessel(a: &BesselArgs, out: &mut dyn Write) -> CmdResult {
    if let Some(mu) = a.mu {
        let e = lambda_mu(DimensionParam::new(mu)?)?;
        writeln!(
            out,
            "mu={} j={} lambda_mu={}",
            mu,
            sig12(e.j),
            sig12(e.lambda)
        )?;
    } else if let Some(nu) = a.nu {
        let j = first_zero(BesselOrder::new(nu)?)?;
        writeln!(out, "nu={} j={}", nu, sig12(j))?;
    }
    Ok(())
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = RunConfig::resolve("scan", &a.profile, &a.run, None, &a.radii, a.out.clone())?;
    let rows = scan(&cfg.profile, &cfg.grid()?, cfg.opts).map_err(|f| Failure {
        code: match exit_code(&f.error) {
            EXIT_USAGE => EXIT_USAGE,
            _ => EXIT_SOLVER,
        },
        message: f.to_string(),
    })?;
    // Self-check before anything is emitted.
    check_scan(&rows)?;
    let mut text = String::new();
    if cfg.banner {
        for line in cfg.banner_lines() {
            text.push_str(&line);
            text.push('\n');
        }
    }
    text.push_str(&scan_csv(&rows)?);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_asymptotics(a: &AsymptoticsArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = RunConfig::resolve("asymptotics", &a.profile, &a.run, a.samples, &[], None)?;
    let window = Interval::new(cfg.r_min, cfg.r_max)?;
    let estimates = estimate_all(&cfg.profile, window, cfg.samples, cfg.opts)?;
    if cfg.banner {
        for line in cfg.banner_lines() {
            writeln!(out, "{line}")?;
        }
    }
    writeln!(
        out,
        "# finite-window heuristics: each value estimates a limit r -> inf from the window shown"
    )?;
    writeln!(
        out,
        "{:<18} {:>20} {:>29} {:>7} {:>20}  note",
        "quantity", "value", "window", "samples", "at_window_end"
    )?;
    for (q, est) in &estimates {
        let e = match est {
            Ok(e) => e,
            Err(err) => {
                writeln!(
                    out,
                    "{:<18} {:>20} {:>29} {:>7} {:>20}  undefined: {err}",
                    q.name(),
                    "n/a",
                    "-",
                    "-",
                    "-"
                )?;
                continue;
            }
        };
        let window = format!("[{}, {}]", sig12(e.window.lo()), sig12(e.window.hi()));
        let diverging = matches!(e.quantity, Quantity::LambdaStar | Quantity::LambdaStarUpper)
            && e.endpoint > DIVERGENCE_THRESHOLD
            && e.endpoint >= e.value;
        let note = if diverging {
            "heuristic; diverging, consistent with Lambda_*=+inf"
        } else {
            "heuristic"
        };
        writeln!(
            out,
            "{:<18} {:>20} {:>29} {:>7} {:>20}  {note}",
            e.quantity.name(),
            sig12(e.value),
            window,
            e.samples,
            sig12(e.endpoint)
        )?;
    }
    let find = |q: Quantity| {
        estimates
            .iter()
            .find(|(k, _)| *k == q)
            .and_then(|(_, e)| e.as_ref().ok())
            .map(|e| e.value)
    };
    if let (Some(t), Some(a)) = (find(Quantity::LambdaTilde), find(Quantity::AlphaStar)) {
        if t.is_finite() && a.is_finite() {
            writeln!(
                out,
                "gap |Lambda_tilde - alpha_star| = {}",
                sig12((t - a).abs())
            )?;
        }
    }
    Ok(())
}

fn cmd_type(a: &TypeArgs, out: &mut dyn Write) -> CmdResult {
    let p = Resolver::new(&a.profile)?.profile()?;
    let v = h_bounds(&p, &DEFAULT_CUTOFFS)?;
    writeln!(out, "profile: {}", p.describe())?;
    writeln!(
        out,
        "verdict: {:?}{}",
        v.verdict,
        if v.heuristic {
            " (heuristic tail test)"
        } else {
            ""
        }
    )?;
    writeln!(out, "sup h: {}", sig12(v.h_sup))?;
    writeln!(out, "inf h: {}", sig12(v.h_inf))?;
    writeln!(out, "{:>8} {:>20} {:>20}", "T", "h(T)", "h(-T)")?;
    for e in &v.evidence {
        writeln!(
            out,
            "{:>8} {:>20} {:>20}",
            e.cutoff,
            sig12(e.h_plus),
            sig12(e.h_minus)
        )?;
    }
    Ok(())
}

fn cmd_hardy(a: &HardyArgs, out: &mut dyn Write) -> CmdResult {
    if a.check_prop17 {
        let (n, r) = (a.n.unwrap_or(0), a.r.unwrap_or(0.0));
        let rep = check_prop17(n, r)?;
        writeln!(
            out,
            "prop17 n={} r={} lambda1={} predicted={} rel_err={:.3e} {}",
            n,
            r,
            sig12(rep.lambda1),
            sig12(rep.predicted),
            rep.relative_error,
            if rep.pass { "PASS" } else { "FAIL" }
        )?;
        if !rep.pass {
            return Err(Failure {
                code: EXIT_INVARIANT,
                message: format!("relative error {:.3e} above 0.5%", rep.relative_error),
            });
        }
        return Ok(());
    }
    let (model, support) = match a.euclidean {
        Some(n) => (
            RadialModel::euclidean(n)?,
            Interval::new(0.0, a.support_max)?,
        ),
        None => {
            if a.profile.family.is_none() && a.profile.profile.is_none() {
                return Err(Failure::usage(
                    "hardy needs --euclidean N, a profile, or --check-prop17",
                ));
            }
            let p = Resolver::new(&a.profile)?.profile()?;
            (
                RadialModel::warped(p),
                Interval::new(-a.support_max, a.support_max)?,
            )
        }
    };
    let mesh = hardy_mesh(&model, support, a.cells, a.epsilon)?;
    let rep = hardy_infimum_with_epsilon(&model, &mesh, support, a.epsilon)?;
    writeln!(out, "mu_effective: {}", sig12(rep.mu_effective))?;
    writeln!(out, "sharp_constant: {}", sig12(rep.sharp_constant))?;
    writeln!(out, "discrete_infimum: {}", sig12(rep.discrete_infimum))?;
    writeln!(out, "excess: {}", sig12(rep.excess()))?;
    writeln!(
        out,
        "support: ({}, {}) cells: {} epsilon: {}",
        support.lo(),
        support.hi(),
        mesh.cells(),
        rep.epsilon
    )?;
    if a.euclidean.is_some() {
        let q = near_optimizer_quotient(&model, 1e-6, 1e6)?;
        writeln!(out, "near_optimizer_quotient(1e-6, 1e6): {}", sig12(q))?;
    }
    if !rep.within_tolerance() {
        return Err(Failure {
            code: EXIT_INVARIANT,
            message: "discrete infimum below the sharp constant beyond tolerance".into(),
        });
    }
    Ok(())
}

type IdentityGrid = (Vec<(f64, f64, f64)>, Vec<(f64, f64)>);

/// Configurations of the identity suite: `(μ, a, b)` and `(μ, x)`.
pub fn identity_grid() -> IdentityGrid {
    let mus21 = [1.0, 2.0, 2.5, 3.0, 4.0, 6.0, 10.0];
    let spans = [(0.0, 0.5), (0.2, 0.9), (0.5, 1.0)];
    let mus23 = [2.5, 3.0, 4.0, 6.0, 10.0];
    let xs = [0.25, 0.5, 1.0];
    let l21 = mus21
        .iter()
        .flat_map(|&m| spans.iter().map(move |&(a, b)| (m, a, b)))
        .collect();
    let l23 = mus23
        .iter()
        .flat_map(|&m| xs.iter().map(move |&x| (m, x)))
        .collect();
    (l21, l23)
}

fn cmd_identities(a: &IdentitiesArgs, out: &mut dyn Write) -> CmdResult {
    let (l21, l23) = identity_grid();
    let mut worst: f64 = 0.0;
    writeln!(
        out,
        "{:<8} {:>6} {:>6} {:>6} {:>12}",
        "identity", "mu", "a|x", "b", "residual"
    )?;
    for (mu, lo, hi) in l21 {
        let r = check_lemma21(DimensionParam::new(mu)?, lo, hi)?;
        worst = worst.max(r);
        writeln!(
            out,
            "{:<8} {:>6} {:>6} {:>6} {:>12.3e}",
            "energy", mu, lo, hi, r
        )?;
    }
    for (mu, x) in l23 {
        let r = check_lemma23(DimensionParam::new(mu)?, x)?;
        worst = worst.max(r);
        writeln!(
            out,
            "{:<8} {:>6} {:>6} {:>6} {:>12.3e}",
            "hardy", mu, x, "-", r
        )?;
    }
    let pass = worst < a.tol;
    writeln!(
        out,
        "max residual {worst:.3e} {}",
        if pass { "PASS" } else { "FAIL" }
    )?;
    if !pass {
        return Err(Failure {
            code: EXIT_INVARIANT,
            message: format!("identity residual {worst:.3e} exceeds {:.1e}", a.tol),
        });
    }
    Ok(())
}

fn configure_threads() -> CmdResult {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("{THREADS_ENV} must be a positive integer")))?;
    // A pool built earlier in this process stays in place.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = configure_threads().and_then(|_| match &cli.command {
        Command::Bessel(a) => cmd_bessel(a, out),
        Command::Scan(a) => cmd_scan(a, out),
        Command::Asymptotics(a) => cmd_asymptotics(a, out),
        Command::Type(a) => cmd_type(a, out),
        Command::Hardy(a) => cmd_hardy(a, out),
        Command::Identities(a) => cmd_identities(a, out),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}
