//! Rotationally symmetric surfaces `ℝ × S¹` with metric `dt² + η'(t)² dθ²`.
//!
//! Balls are `B_r = {|t| < r}`, with `|B_r| = 2π(η(r) - η(-r))`. Their first
//! Dirichlet eigenvalue is computed from the θ-independent quotient
//! `∫ φ'² η' / ∫ φ² η'` on `(-r, r)`: angular modes only add
//! `k² η'^{-2} ≥ 0` to the quotient, so the minimizer is radial.

mod asymptotics;
mod bridge;
mod config;
mod slowly;
mod staircase;
mod tabulated;

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

pub use asymptotics::{
    check_scan, estimate, estimate_all, estimate_from_rows, geometric_grid, grid_radius_cap, scan,
    staircase_checks, AsymptoticEstimate, Quantity, ScanFailure, ScanRow, StaircaseReport,
    StaircaseRow, MIN_SAMPLES,
};
pub use config::{parse_profile_config, ProfileConfig};
pub use slowly::SlowlyVarying;
pub use staircase::MAX_T as STAIRCASE_MAX_T;

use crate::error::{Error, Result};
use crate::numerics::{integrate, Interval, Tolerance};
use crate::sturm::{
    first_eigen_fem, first_eigen_shoot, BoundaryConditions, EigenSolution, Mesh, WeightedProblem,
};
use bridge::Bridge;
use slowly::Rate;
use staircase::Staircase;
use tabulated::{Table, Tail};

/// Family tag and parameters of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `η = (-t)^(-α)` for `t < -1`, `2 t^α` for `t > 1`.
    PowerLaw {
        alpha: f64,
    },
    /// `η' = e^(-α|t|)`.
    ExponentialDecay {
        alpha: f64,
    },
    /// `η = e^t`.
    Dprs,
    Staircase,
    /// `η = e^(-I(-t))` for `t < -1`, `2 e^(I(t))` for `t > 1`, with
    /// `I(t) = ∫_1^t μ`.
    SlowlyVarying(SlowlyVarying),
    Tabulated,
}

#[derive(Debug)]
enum Data {
    PowerLaw { alpha: f64, bridge: Bridge },
    Exponential { alpha: f64 },
    Dprs,
    Staircase(Staircase),
    Slowly { rate: Rate, bridge: Bridge, c: f64 },
    Tabulated(Table),
}

/// A warping profile `η` with `η' > 0`; cheap to clone and shareable
/// across threads.
#[derive(Debug, Clone)]
pub struct Profile {
    data: Arc<Data>,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidInput(format!(
            "{name} must be positive, got {v}"
        )));
    }
    Ok(())
}

fn quad_tol() -> Tolerance {
    Tolerance::new(0.0, 1e-12, 60).expect("valid tolerance")
}

impl Profile {
    pub fn power_law(alpha: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        let bridge = Bridge::new(1.0, 1.0, [alpha.ln(), (2.0 * alpha).ln()])?;
        Ok(Self::wrap(Data::PowerLaw { alpha, bridge }))
    }

    pub fn exponential_decay(alpha: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        Ok(Self::wrap(Data::Exponential { alpha }))
    }

    pub fn dprs() -> Self {
        Self::wrap(Data::Dprs)
    }

    pub fn staircase() -> Self {
        Self::wrap(Data::Staircase(Staircase::new()))
    }

    pub fn slowly_varying(choice: SlowlyVarying) -> Result<Self> {
        let rate = Rate::new(choice)?;
        let m1 = rate.mu(1.0);
        let bridge = Bridge::new(1.0, 1.0, [m1.ln(), (2.0 * m1).ln()])?;
        let c = rate.monotonicity_constant();
        Ok(Self::wrap(Data::Slowly { rate, bridge, c }))
    }

    /// Piecewise-linear `η'` through `(t, eta_prime)` samples.
    pub fn tabulated(t: Vec<f64>, eta_prime: Vec<f64>) -> Result<Self> {
        Ok(Self::wrap(Data::Tabulated(Table::new(t, eta_prime)?)))
    }

    /// Tabulated profile from a two-column CSV file.
    pub fn tabulated_csv(path: &Path) -> Result<Self> {
        Ok(Self::wrap(Data::Tabulated(Table::from_csv(path)?)))
    }

    fn wrap(data: Data) -> Self {
        Self {
            data: Arc::new(data),
        }
    }

    pub fn family(&self) -> Family {
        match &*self.data {
            Data::PowerLaw { alpha, .. } => Family::PowerLaw { alpha: *alpha },
            Data::Exponential { alpha } => Family::ExponentialDecay { alpha: *alpha },
            Data::Dprs => Family::Dprs,
            Data::Staircase(_) => Family::Staircase,
            Data::Slowly { rate, .. } => Family::SlowlyVarying(rate.choice()),
            Data::Tabulated(_) => Family::Tabulated,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self.family() {
            Family::PowerLaw { alpha } => format!("power_law alpha={alpha}"),
            Family::ExponentialDecay { alpha } => format!("exp_decay alpha={alpha}"),
            Family::Dprs => "dprs".into(),
            Family::Staircase => "staircase".into(),
            Family::SlowlyVarying(SlowlyVarying::Power { alpha }) => {
                format!("slowly_varying mu_choice=power alpha={alpha}")
            }
            Family::SlowlyVarying(SlowlyVarying::LogPower { beta }) => {
                format!("slowly_varying mu_choice=log_power beta={beta}")
            }
            Family::SlowlyVarying(SlowlyVarying::LogLog { gamma }) => {
                format!("slowly_varying mu_choice=loglog gamma={gamma}")
            }
            Family::Tabulated => "tabulated".into(),
        }
    }

    /// The rate `μ(t)` of a slowly varying profile, for `t ≥ 1`.
    /// Sampled `t` range of a tabulated profile.
    pub fn table_range(&self) -> Option<(f64, f64)> {
        match &*self.data {
            Data::Tabulated(tab) => Some(tab.range()),
            _ => None,
        }
    }

    pub fn rate(&self, t: f64) -> Option<f64> {
        match &*self.data {
            Data::Slowly { rate, .. } => Some(rate.mu(t)),
            _ => None,
        }
    }

    /// Point beyond which `t μ(t)` increases (slowly varying profiles).
    pub fn monotonicity_constant(&self) -> Option<f64> {
        match &*self.data {
            Data::Slowly { c, .. } => Some(*c),
            _ => None,
        }
    }

    pub fn eta(&self, t: f64) -> f64 {
        match &*self.data {
            Data::PowerLaw { alpha, bridge } => {
                if t < -1.0 {
                    (-t).powf(-alpha)
                } else if t > 1.0 {
                    2.0 * t.powf(*alpha)
                } else {
                    bridge.eta(t)
                }
            }
            Data::Exponential { alpha } => {
                if t < 0.0 {
                    (alpha * t).exp() / alpha
                } else {
                    (2.0 - (-alpha * t).exp()) / alpha
                }
            }
            Data::Dprs => t.exp(),
            Data::Staircase(s) => s.eta(t),
            Data::Slowly { rate, bridge, .. } => {
                if t < -1.0 {
                    (-rate.integral(-t)).exp()
                } else if t > 1.0 {
                    2.0 * rate.integral(t).exp()
                } else {
                    bridge.eta(t)
                }
            }
            Data::Tabulated(tab) => tab.eta(t),
        }
    }

    pub fn eta_prime(&self, t: f64) -> f64 {
        match &*self.data {
            Data::PowerLaw { alpha, bridge } => {
                if t < -1.0 {
                    alpha * (-t).powf(-alpha - 1.0)
                } else if t > 1.0 {
                    2.0 * alpha * t.powf(alpha - 1.0)
                } else {
                    bridge.eta_prime(t)
                }
            }
            Data::Exponential { alpha } => (-alpha * t.abs()).exp(),
            Data::Dprs => t.exp(),
            Data::Staircase(s) => s.eta_prime(t),
            Data::Slowly { rate, bridge, .. } => {
                if t < -1.0 {
                    rate.mu(-t) * (-rate.integral(-t)).exp()
                } else if t > 1.0 {
                    2.0 * rate.mu(t) * rate.integral(t).exp()
                } else {
                    bridge.eta_prime(t)
                }
            }
            Data::Tabulated(tab) => tab.eta_prime(t),
        }
    }

    /// Points where `η'` changes its analytic form.
    fn breakpoints(&self) -> Vec<f64> {
        match &*self.data {
            Data::PowerLaw { .. } | Data::Slowly { .. } => vec![-1.0, 1.0],
            Data::Exponential { .. } => vec![0.0],
            Data::Dprs => Vec::new(),
            Data::Staircase(s) => s.breakpoints(),
            Data::Tabulated(tab) => tab.nodes().to_vec(),
        }
    }

    /// `[a, b]` cut at breakpoints and into pieces of length at most 4.
    fn pieces(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mut cuts = vec![a];
        cuts.extend(self.breakpoints().into_iter().filter(|&x| x > a && x < b));
        cuts.push(b);
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let n = ((w[1] - w[0]) / 4.0).ceil().max(1.0) as usize;
            for k in 0..n {
                let lo = w[0] + (w[1] - w[0]) * k as f64 / n as f64;
                let hi = if k + 1 == n {
                    w[1]
                } else {
                    w[0] + (w[1] - w[0]) * (k + 1) as f64 / n as f64
                };
                out.push((lo, hi));
            }
        }
        out
    }

    /// `∫_a^b f η'` by piecewise adaptive quadrature.
    fn weighted_integral(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
        if a >= b {
            return Ok(0.0);
        }
        self.pieces(a, b)
            .into_iter()
            .map(|(lo, hi)| {
                integrate(
                    |t| f(t) * self.eta_prime(t),
                    Interval::new(lo, hi)?,
                    quad_tol(),
                )
            })
            .sum()
    }

    /// `∫_a^b η'`, from `η` when that loses no accuracy.
    fn mass(&self, a: f64, b: f64) -> Result<f64> {
        if a >= b {
            return Ok(0.0);
        }
        let (ea, eb) = (self.eta(a), self.eta(b));
        if ea.is_finite() && eb.is_finite() && ea.abs() <= 0.5 * eb.abs() {
            return Ok(eb - ea);
        }
        self.weighted_integral(a, b, |_| 1.0)
    }

    /// `h(t) = ∫_0^t ds / η'(s)`.
    pub fn h(&self, t: f64) -> Result<f64> {
        match &*self.data {
            Data::Dprs => Ok(-(-t).exp_m1()),
            Data::Exponential { alpha } => Ok(t.signum() * (alpha * t.abs()).exp_m1() / alpha),
            Data::Tabulated(tab) => Ok(tab.inverse_integral(0.0, t)),
            _ => {
                let (a, b, sign) = if t >= 0.0 {
                    (0.0, t, 1.0)
                } else {
                    (t, 0.0, -1.0)
                };
                if a == b {
                    return Ok(0.0);
                }
                let mut total = 0.0;
                for (lo, hi) in self.pieces(a, b) {
                    total += integrate(
                        |s| 1.0 / self.eta_prime(s),
                        Interval::new(lo, hi)?,
                        quad_tol(),
                    )?;
                }
                Ok(sign * total)
            }
        }
    }
}

/// `|B_r| = 2π ∫_{-r}^{r} η'`; zero for `r ≤ 0`.
pub fn volume_ball(p: &Profile, r: f64) -> f64 {
    if !(r > 0.0) {
        return 0.0;
    }
    let inner = match &*p.data {
        Data::Dprs => 2.0 * r.sinh(),
        Data::Exponential { alpha } => -2.0 * (-alpha * r).exp_m1() / alpha,
        Data::Staircase(_) if r <= 3.0 => 2.0 * r.sinh(),
        Data::PowerLaw { .. } | Data::Slowly { .. } if r > 1.0 => p.eta(r) - p.eta(-r),
        Data::Staircase(_) | Data::Tabulated(_) => p.eta(r) - p.eta(-r),
        _ => p.weighted_integral(-r, r, |_| 1.0).unwrap_or(f64::NAN),
    };
    2.0 * PI * inner
}

/// `|M \ B_r|`, `+∞` unless both tails of `η'` are integrable in closed
/// form. Tabulated profiles are treated as having infinite tails.
pub fn volume_complement(p: &Profile, r: f64) -> f64 {
    match &*p.data {
        Data::Exponential { alpha } => {
            let r = r.max(0.0);
            4.0 * PI * (-alpha * r).exp() / alpha
        }
        _ => f64::INFINITY,
    }
}

/// Parabolic or hyperbolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Parabolic,
    Hyperbolic,
}

/// `h(±T)` at one cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HEvidence {
    pub cutoff: f64,
    pub h_plus: f64,
    pub h_minus: f64,
}

/// Type classification by the extent of `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeVerdict {
    pub verdict: Verdict,
    pub h_sup: f64,
    pub h_inf: f64,
    pub evidence: Vec<HEvidence>,
    /// True when the tails were ruled by the sampled-data heuristic rather
    /// than by closed-form knowledge.
    pub heuristic: bool,
}

/// Default cutoffs at which `h(±T)` is reported.
pub const DEFAULT_CUTOFFS: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];

fn slowly_h_tail(rate: &Rate) -> Result<f64> {
    // ∫_1^∞ e^{-I(t)} / (2 μ(t)) dt in u = ln t, chunk by chunk.
    let g = |u: f64| {
        let t = u.exp();
        t * (-rate.integral(t)).exp() / (2.0 * rate.mu(t))
    };
    let mut total = 0.0;
    let mut u = 0.0;
    while u < 700.0 {
        let piece = integrate(g, Interval::new(u, u + 1.0)?, quad_tol())?;
        total += piece;
        u += 1.0;
        if piece <= 1e-17 * total && g(u) <= g(u - 0.5) {
            return Ok(total);
        }
    }
    Ok(f64::INFINITY)
}

/// Classifies the profile: hyperbolic iff `inf h > -∞` or `sup h < +∞`.
///
/// The built-in families are ruled by their closed-form tails; tabulated
/// profiles by a ratio heuristic on geometric blocks of the sampled range.
pub fn h_bounds(p: &Profile, cutoffs: &[f64]) -> Result<TypeVerdict> {
    let mut evidence = Vec::with_capacity(cutoffs.len());
    for &c in cutoffs {
        let c = match &*p.data {
            Data::Staircase(_) => c.min(staircase::MAX_T),
            _ => c,
        };
        evidence.push(HEvidence {
            cutoff: c,
            h_plus: p.h(c)?,
            h_minus: p.h(-c)?,
        });
    }
    let inf = f64::INFINITY;
    let (h_sup, h_inf, heuristic) = match &*p.data {
        Data::PowerLaw { alpha, .. } => {
            let tail = if *alpha > 2.0 {
                1.0 / (2.0 * alpha * (alpha - 2.0))
            } else {
                inf
            };
            (p.h(1.0)? + tail, -inf, false)
        }
        Data::Exponential { .. } => (inf, -inf, false),
        Data::Dprs => (1.0, -inf, false),
        Data::Staircase(s) => {
            let built = p.h(s.built_end().min(staircase::MAX_T))?;
            (built + Staircase::tail_inverse_integral(), -inf, false)
        }
        Data::Slowly { rate, .. } => (p.h(1.0)? + slowly_h_tail(rate)?, -inf, false),
        Data::Tabulated(tab) => {
            let side = |sign: f64| match tab.tail(sign) {
                Tail::Converges(v) => Ok(sign * v),
                Tail::Diverges => Ok(sign * inf),
                Tail::Inconclusive => Err(()),
            };
            match (side(1.0), side(-1.0)) {
                (Ok(s), Ok(i)) => (s, i, true),
                (Ok(s), Err(())) if s.is_finite() => (s, f64::NAN, true),
                (Err(()), Ok(i)) if i.is_finite() => (f64::NAN, i, true),
                _ => {
                    return Err(Error::InconclusiveTail(
                        "sampled range too short to rule on the tails of 1/eta'".into(),
                    ))
                }
            }
        }
    };
    let hyperbolic = h_sup.is_finite() || h_inf.is_finite();
    Ok(TypeVerdict {
        verdict: if hyperbolic {
            Verdict::Hyperbolic
        } else {
            Verdict::Parabolic
        },
        h_sup,
        h_inf,
        evidence,
        heuristic,
    })
}

/// Number of sample points used when the bound has no closed form.
const BOUND_SAMPLES: usize = 4096;

fn sampled_min_log_derivative(p: &Profile, a: f64, b: f64) -> f64 {
    let mut pts: Vec<f64> = (0..=BOUND_SAMPLES)
        .map(|i| a + (b - a) * i as f64 / BOUND_SAMPLES as f64)
        .collect();
    pts.extend(p.breakpoints().into_iter().filter(|&x| x >= a && x <= b));
    pts.iter()
        .map(|&t| p.eta_prime(t) / p.eta(t))
        .filter(|v| !v.is_nan())
        .fold(f64::INFINITY, f64::min)
}

/// Lower bound `λ₁(B_r) ≥ ¼ inf_{|t|≤r} (η'/η)²`.
pub fn dprs_bound(p: &Profile, r: f64) -> f64 {
    let m = match &*p.data {
        Data::Dprs => 1.0,
        Data::Exponential { alpha } => {
            let e = (-alpha * r).exp();
            alpha * e / (2.0 - e)
        }
        Data::PowerLaw { alpha, bridge } => {
            if r <= 1.0 {
                bridge.min_log_derivative(-r, r)
            } else {
                (alpha / r).min(bridge.min_log_derivative(-1.0, 1.0))
            }
        }
        Data::Slowly { rate, bridge, .. } => {
            if r <= 1.0 {
                bridge.min_log_derivative(-r, r)
            } else {
                let sampled = (0..=BOUND_SAMPLES)
                    .map(|i| rate.mu(1.0 + (r - 1.0) * i as f64 / BOUND_SAMPLES as f64))
                    .fold(f64::INFINITY, f64::min);
                sampled.min(bridge.min_log_derivative(-1.0, 1.0))
            }
        }
        Data::Staircase(_) | Data::Tabulated(_) => sampled_min_log_derivative(p, -r, r),
    };
    0.25 * m * m
}

/// Eigen-solver selection for [`lambda1_ball`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fem,
    Shoot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub cells: usize,
    pub method: Method,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            cells: 2000,
            method: Method::Fem,
        }
    }
}

/// The 1-D problem with weight `η'` on `(-r, r)`, Dirichlet at both ends.
pub fn ball_problem(p: &Profile, r: f64) -> Result<WeightedProblem> {
    check_positive("r", r)?;
    let prof = p.clone();
    Ok(WeightedProblem::new(
        Interval::new(-r, r)?,
        move |t| prof.eta_prime(t),
        BoundaryConditions::dirichlet(),
    ))
}

/// Largest change of `ln η'` allowed across half a cell of the ball mesh.
const LOG_STEP: f64 = 0.05;
const MAX_REFINE_DEPTH: u32 = 30;

fn refine(p: &Profile, a: f64, b: f64, depth: u32, out: &mut Vec<f64>) {
    let m = 0.5 * (a + b);
    let (la, lm, lb) = (
        p.eta_prime(a).ln(),
        p.eta_prime(m).ln(),
        p.eta_prime(b).ln(),
    );
    if depth < MAX_REFINE_DEPTH && ((lm - la).abs() > LOG_STEP || (lb - lm).abs() > LOG_STEP) {
        refine(p, a, m, depth + 1, out);
        refine(p, m, b, depth + 1, out);
    } else {
        out.push(b);
    }
}

/// Widest base cell of [`ball_mesh`]; plateaus and wells of unit width
/// stay resolved at any radius.
pub const MAX_BASE_WIDTH: f64 = 0.05;

/// Uniform mesh on `(-r, r)` with at least `cells` cells of width at most
/// [`MAX_BASE_WIDTH`], the profile's breakpoints inserted, and cells bisected
/// until `ln η'` varies by at most [`LOG_STEP`] over each half cell. Steep
/// transitions then get resolved rather than averaged.
pub fn ball_mesh(p: &Profile, r: f64, cells: usize) -> Result<Mesh> {
    check_positive("r", r)?;
    let cells = cells.max((2.0 * r / MAX_BASE_WIDTH).ceil() as usize);
    let base = Mesh::uniform(Interval::new(-r, r)?, cells)?;
    let mut coarse: Vec<f64> = base.nodes().to_vec();
    coarse.extend(p.breakpoints().into_iter().filter(|&x| x > -r && x < r));
    coarse.sort_by(f64::total_cmp);
    coarse.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * r);
    let mut nodes = vec![coarse[0]];
    for w in coarse.windows(2) {
        refine(p, w[0], w[1], 0, &mut nodes);
    }
    Mesh::from_nodes(nodes)
}

fn bisect_cells(m: &Mesh) -> Result<Mesh> {
    let mut nodes = Vec::with_capacity(2 * m.nodes().len());
    for w in m.nodes().windows(2) {
        nodes.push(w[0]);
        nodes.push(0.5 * (w[0] + w[1]));
    }
    nodes.push(m.nodes()[m.nodes().len() - 1]);
    Mesh::from_nodes(nodes)
}

fn check_staircase_radius(p: &Profile, r: f64) -> Result<()> {
    if let Data::Staircase(_) = &*p.data {
        if r > staircase::MAX_T {
            return Err(Error::OutOfSupportedRange(format!(
                "staircase radius {r} exceeds {}",
                staircase::MAX_T
            )));
        }
    }
    Ok(())
}

/// `λ₁(B_r)` with its radial eigenfunction. For the FEM solver
/// `opts.cells` is the base cell count of [`ball_mesh`].
pub fn lambda1_ball(p: &Profile, r: f64, opts: SolverOptions) -> Result<EigenSolution> {
    check_staircase_radius(p, r)?;
    let problem = ball_problem(p, r)?;
    match opts.method {
        Method::Fem => first_eigen_fem(&problem, &ball_mesh(p, r, opts.cells)?),
        Method::Shoot => first_eigen_shoot(&problem, Tolerance::new(1e-300, SHOOT_REL, 100)?),
    }
}

const SHOOT_REL: f64 = 1e-13;

/// [`lambda1_ball`] on a finer discretization together with an error
/// estimate for it. FEM: the ball mesh and its bisection, with the
/// Richardson estimate `|λ_h - λ_{h/2}| / 3` of the second-order scheme.
/// Shooting: integrator tolerances `1e-11` and `1e-13`.
pub fn lambda1_ball_with_error(
    p: &Profile,
    r: f64,
    opts: SolverOptions,
) -> Result<(EigenSolution, f64)> {
    check_staircase_radius(p, r)?;
    let problem = ball_problem(p, r)?;
    match opts.method {
        Method::Fem => {
            let mesh = ball_mesh(p, r, opts.cells)?;
            let coarse = first_eigen_fem(&problem, &mesh)?;
            let fine = first_eigen_fem(&problem, &bisect_cells(&mesh)?)?;
            let err = (coarse.lambda - fine.lambda).abs() / 3.0;
            Ok((fine, err))
        }
        Method::Shoot => {
            let loose = first_eigen_shoot(&problem, Tolerance::new(1e-300, 1e-11, 100)?)?;
            let tight = first_eigen_shoot(&problem, Tolerance::new(1e-300, SHOOT_REL, 100)?)?;
            let err = (loose.lambda - tight.lambda).abs();
            Ok((tight, err))
        }
    }
}

/// Quotient `∫ φ'² η' / ∫ φ² η'` of the trapezoid on `[a, b]` rising
/// linearly over `[a, a + δ]` and falling over `[b - δ, b]`.
pub fn trapezoid_quotient(p: &Profile, a: f64, b: f64, delta: f64) -> Result<f64> {
    if !(b > a) || !(delta > 0.0) || 2.0 * delta > (b - a) * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "trapezoid needs 0 < delta <= (b - a)/2, got a={a}, b={b}, delta={delta}"
        )));
    }
    let delta = delta.min(0.5 * (b - a));
    let (l1, r1) = (a + delta, b - delta);
    let num = (p.mass(a, l1)? + p.mass(r1, b)?) / (delta * delta);
    let up = p.weighted_integral(a, l1, |t| ((t - a) / delta).powi(2))?;
    let down = p.weighted_integral(r1, b, |t| ((b - t) / delta).powi(2))?;
    let den = up + p.mass(l1, r1)? + down;
    Ok(num / den)
}

/// Quotient of `φ = e^{-γ(t-c)} sin(π(t-a)/(b-a))`, `c` the midpoint.
///
/// With `γ = 1/2` and `η' = e^t` this is the exact first eigenfunction.
pub fn damped_sine_quotient(p: &Profile, a: f64, b: f64, gamma: f64) -> Result<f64> {
    if !(b > a) || !gamma.is_finite() {
        return Err(Error::InvalidInput(format!(
            "damped sine needs a < b and finite gamma, got a={a}, b={b}, gamma={gamma}"
        )));
    }
    let (k, c) = (PI / (b - a), 0.5 * (a + b));
    // Work with e^{-2γ(t-c)} η'(t) / e^{shift}, shift its sampled maximum,
    // so neither factor leaves the double range on its own.
    let log_weight = |t: f64| -2.0 * gamma * (t - c) + p.eta_prime(t).ln();
    let shift = (0..=256)
        .map(|i| log_weight(a + (b - a) * i as f64 / 256.0))
        .fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::NonFinite(gamma));
    }
    let integral = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
        p.pieces(a, b)
            .into_iter()
            .map(|(lo, hi)| {
                integrate(
                    |t| (log_weight(t) - shift).exp() * g(t),
                    Interval::new(lo, hi)?,
                    Tolerance::new(1e-300, 1e-12, 60)?,
                )
            })
            .sum()
    };
    let num = integral(&|t| {
        let (sn, cs) = (k * (t - a)).sin_cos();
        (k * cs - gamma * sn).powi(2)
    })?;
    let den = integral(&|t| (k * (t - a)).sin().powi(2))?;
    let q = num / den;
    if q.is_finite() {
        Ok(q)
    } else {
        Err(Error::NonFinite(gamma))
    }
}

/// Damping rates tried by [`test_function_upper_bound`].
const DAMPING: [f64; 9] = [-1.0, -0.5, -0.25, -0.125, 0.0, 0.125, 0.25, 0.5, 1.0];

/// Upper bound for `λ₁(B_r)`: the smallest quotient over trapezoids on
/// `(-r, r)`, `(0, r)`, `(-r, 0)` with several ramp widths, and over damped
/// sines on `(-r, r)` and `(0, r)`. Damped sines whose integrals leave the
/// double range are skipped; the trapezoids always count.
pub fn test_function_upper_bound(p: &Profile, r: f64) -> Result<f64> {
    check_positive("r", r)?;
    let mut best = f64::INFINITY;
    for (a, b) in [(-r, r), (0.0, r), (-r, 0.0)] {
        let len = b - a;
        for delta in [0.5, 1.0, 2.0, 4.0, len / 8.0, len / 4.0, len / 2.0] {
            if delta > 0.5 * len || delta <= 0.0 {
                continue;
            }
            best = best.min(trapezoid_quotient(p, a, b, delta)?);
        }
    }
    for (a, b) in [(-r, r), (0.0, r)] {
        for gamma in DAMPING {
            if let Ok(q) = damped_sine_quotient(p, a, b, gamma) {
                best = best.min(q);
            }
        }
    }
    Ok(best)
}
