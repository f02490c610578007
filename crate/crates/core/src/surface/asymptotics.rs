//! Radius scans of `λ₁(B_r)` and finite-window proxies for its asymptotic
//! constants.
//!
//! A liminf (limsup) proxy is the minimum (maximum) over the trailing half of
//! the window; rate constants are least-squares slopes. All of them are
//! heuristics on a finite window and carry that window with them.

use std::fmt;

use rayon::prelude::*;

use super::{
    dprs_bound, h_bounds, lambda1_ball, lambda1_ball_with_error, test_function_upper_bound,
    volume_ball, volume_complement, Data, Profile, SolverOptions, Verdict, DEFAULT_CUTOFFS,
};
use crate::error::{Error, Result};
use crate::numerics::{fit_linear, fit_log_slope, Interval};

/// One radius of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub r: f64,
    pub lambda1: f64,
    /// Estimated discretization error of `lambda1`.
    pub lambda1_err: f64,
    pub r2lambda1: f64,
    pub dprs_bound: f64,
    /// Smallest test-function quotient.
    pub upper_bound: f64,
    pub vol_ball: f64,
    pub vol_complement: f64,
}

/// A scan stopped at radius `r`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("solver failed at r = {r}: {error}")]
pub struct ScanFailure {
    pub r: f64,
    pub error: Error,
}

/// Relative slack on top of the estimated discretization error in the
/// sandwich and monotonicity checks (roundoff only).
const CHECK_SLACK: f64 = 1e-9;

/// Geometric grid `lo, lo q, lo q², …` closed with `hi`.
pub fn geometric_grid(lo: f64, hi: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() || !(ratio > 1.0) {
        return Err(Error::InvalidInput(format!(
            "grid needs 0 < lo <= hi and ratio > 1, got lo={lo}, hi={hi}, ratio={ratio}"
        )));
    }
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let r = lo * ratio.powi(k);
        if r >= hi * (1.0 - 1e-12) {
            break;
        }
        out.push(r);
        k += 1;
    }
    out.push(hi);
    Ok(out)
}

/// `n` geometrically spaced points spanning the window.
fn window_points(window: Interval, n: usize) -> Vec<f64> {
    let (lo, hi) = (window.lo(), window.hi());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo * (hi / lo).powf(i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Largest radius used in scan grids: exponentially decaying profiles stop
/// at `25/α` so the weight ratio stays far inside double precision.
pub fn grid_radius_cap(p: &Profile) -> f64 {
    match &*p.data {
        Data::Exponential { alpha } => 25.0 / alpha,
        _ => f64::INFINITY,
    }
}

fn scan_row(p: &Profile, r: f64, opts: SolverOptions) -> Result<ScanRow> {
    let (sol, lambda1_err) = lambda1_ball_with_error(p, r, opts)?;
    let lambda1 = sol.lambda;
    Ok(ScanRow {
        r,
        lambda1,
        lambda1_err,
        r2lambda1: r * r * lambda1,
        dprs_bound: dprs_bound(p, r),
        upper_bound: test_function_upper_bound(p, r)?,
        vol_ball: volume_ball(p, r),
        vol_complement: volume_complement(p, r),
    })
}

/// Evaluates every radius, in parallel; rows come back sorted by `r`.
pub fn scan(
    p: &Profile,
    radii: &[f64],
    opts: SolverOptions,
) -> std::result::Result<Vec<ScanRow>, ScanFailure> {
    let mut rows = radii
        .par_iter()
        .map(|&r| scan_row(p, r, opts).map_err(|error| ScanFailure { r, error }))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| a.r.total_cmp(&b.r));
    Ok(rows)
}

/// Checks `dprs_bound ≤ λ ≤ upper` on every row and that `λ` does not
/// increase with `r`, each up to the rows' estimated discretization errors.
pub fn check_scan(rows: &[ScanRow]) -> Result<()> {
    for row in rows {
        let (lo, hi) = (row.lambda1 - row.lambda1_err, row.lambda1 + row.lambda1_err);
        if !(row.dprs_bound <= hi * (1.0 + CHECK_SLACK)) {
            return Err(Error::InvariantViolation(format!(
                "lower bound {:e} exceeds lambda1 {:e} at r = {}",
                row.dprs_bound, row.lambda1, row.r
            )));
        }
        if !(lo <= row.upper_bound * (1.0 + CHECK_SLACK)) {
            return Err(Error::InvariantViolation(format!(
                "lambda1 {:e} exceeds test-function bound {:e} at r = {}",
                row.lambda1, row.upper_bound, row.r
            )));
        }
    }
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.lambda1 - b.lambda1_err > (a.lambda1 + a.lambda1_err) * (1.0 + CHECK_SLACK) {
            return Err(Error::InvariantViolation(format!(
                "lambda1 increases from r = {} to r = {}",
                a.r, b.r
            )));
        }
    }
    Ok(())
}

/// Asymptotic quantity estimated on a finite window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// `liminf r² λ₁(B_r)`.
    LambdaStar,
    /// `limsup r² λ₁(B_r)`.
    LambdaStarUpper,
    /// `liminf -log λ₁(B_r) / r`.
    LambdaTilde,
    /// `liminf log |B_r| / log r`.
    NuStar,
    /// `liminf -log |M \ B_r| / r`.
    AlphaStar,
    /// `limsup -log |M \ B_r| / r`.
    AlphaStarUpper,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::LambdaStar,
        Quantity::LambdaStarUpper,
        Quantity::LambdaTilde,
        Quantity::NuStar,
        Quantity::AlphaStar,
        Quantity::AlphaStarUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::LambdaStar => "Lambda_star",
            Quantity::LambdaStarUpper => "Lambda_star_upper",
            Quantity::LambdaTilde => "Lambda_tilde",
            Quantity::NuStar => "nu_star",
            Quantity::AlphaStar => "alpha_star",
            Quantity::AlphaStarUpper => "alpha_star_upper",
        }
    }

    fn needs_eigenvalues(self) -> bool {
        matches!(
            self,
            Quantity::LambdaStar | Quantity::LambdaStarUpper | Quantity::LambdaTilde
        )
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite-window estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    pub quantity: Quantity,
    pub value: f64,
    pub window: Interval,
    pub samples: usize,
    /// The underlying sequence (`r²λ`, `-log λ / r`, …) at the largest
    /// radius; shows the trend when the proxy is still moving.
    pub endpoint: f64,
}

/// Fewest radii accepted by [`estimate`].
pub const MIN_SAMPLES: usize = 6;

fn trailing_half<T: Copy>(v: &[T]) -> &[T] {
    &v[v.len() / 2..]
}

fn from_series(quantity: Quantity, rs: &[f64], ys: &[f64]) -> Result<AsymptoticEstimate> {
    if rs.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: rs.len(),
        });
    }
    let window = Interval::new(rs[0], rs[rs.len() - 1])?;
    let last = rs.len() - 1;
    let neg_log = |y: f64| -> Result<f64> {
        if y > 0.0 && y.is_finite() {
            Ok(-y.ln())
        } else {
            Err(Error::Precondition(format!(
                "{quantity} needs finite positive samples, got {y}"
            )))
        }
    };
    let (value, endpoint) = match quantity {
        Quantity::LambdaStar | Quantity::LambdaStarUpper => {
            let seq: Vec<f64> = rs.iter().zip(ys).map(|(r, y)| r * r * y).collect();
            let tail = trailing_half(&seq).iter().copied();
            let v = if quantity == Quantity::LambdaStar {
                tail.fold(f64::INFINITY, f64::min)
            } else {
                tail.fold(f64::NEG_INFINITY, f64::max)
            };
            (v, seq[last])
        }
        Quantity::NuStar => {
            let pts: Vec<(f64, f64)> = rs.iter().copied().zip(ys.iter().copied()).collect();
            let fit = fit_log_slope(&pts)?;
            (fit.slope, ys[last].ln() / rs[last].ln())
        }
        Quantity::LambdaTilde | Quantity::AlphaStar => {
            let pts = rs
                .iter()
                .zip(ys)
                .map(|(&r, &y)| Ok((r, neg_log(y)?)))
                .collect::<Result<Vec<_>>>()?;
            let fit = fit_linear(&pts)?;
            (fit.slope, pts[last].1 / rs[last])
        }
        Quantity::AlphaStarUpper => {
            let logs = ys.iter().map(|&y| neg_log(y)).collect::<Result<Vec<_>>>()?;
            let start = rs.len() / 2;
            let v = (start.max(1)..rs.len())
                .map(|i| (logs[i] - logs[i - 1]) / (rs[i] - rs[i - 1]))
                .fold(f64::NEG_INFINITY, f64::max);
            (v, logs[last] / rs[last])
        }
    };
    Ok(AsymptoticEstimate {
        quantity,
        value,
        window,
        samples: rs.len(),
        endpoint,
    })
}

/// Estimates `quantity` from `samples` geometrically spaced radii in
/// `window`. For eigenvalue quantities the window is clipped to
/// [`grid_radius_cap`]; the estimate reports the window actually used.
fn check_window(window: Interval, samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: samples,
        });
    }
    if !(window.lo() > 0.0) {
        return Err(Error::InvalidInput("window must lie in r > 0".into()));
    }
    Ok(())
}

/// The window clipped to [`grid_radius_cap`].
fn eigen_window(p: &Profile, window: Interval) -> Result<Interval> {
    let cap = grid_radius_cap(p);
    if window.lo() >= cap {
        return Err(Error::OutOfSupportedRange(format!(
            "window starts beyond the radius cap {cap}"
        )));
    }
    Interval::new(window.lo(), window.hi().min(cap))
}

fn eigenvalues(p: &Profile, rs: &[f64], opts: SolverOptions) -> Result<Vec<f64>> {
    rs.par_iter()
        .map(|&r| lambda1_ball(p, r, opts).map(|s| s.lambda))
        .collect()
}

pub fn estimate(
    p: &Profile,
    quantity: Quantity,
    window: Interval,
    samples: usize,
    opts: SolverOptions,
) -> Result<AsymptoticEstimate> {
    check_window(window, samples)?;
    let window = if quantity.needs_eigenvalues() {
        eigen_window(p, window)?
    } else {
        window
    };
    let rs = window_points(window, samples);
    let ys: Vec<f64> = match quantity {
        Quantity::NuStar => rs.iter().map(|&r| volume_ball(p, r)).collect(),
        Quantity::AlphaStar | Quantity::AlphaStarUpper => {
            rs.iter().map(|&r| volume_complement(p, r)).collect()
        }
        _ => eigenvalues(p, &rs, opts)?,
    };
    from_series(quantity, &rs, &ys)
}

/// Every [`Quantity`] over one window, in [`Quantity::ALL`] order, with each
/// eigenvalue solved once. Quantities undefined for the profile (such as
/// `α_*` with infinite complements) come back as individual errors.
pub fn estimate_all(
    p: &Profile,
    window: Interval,
    samples: usize,
    opts: SolverOptions,
) -> Result<Vec<(Quantity, Result<AsymptoticEstimate>)>> {
    check_window(window, samples)?;
    let rs_eig = window_points(eigen_window(p, window)?, samples);
    let lambdas = eigenvalues(p, &rs_eig, opts)?;
    let rs = window_points(window, samples);
    let ball: Vec<f64> = rs.iter().map(|&r| volume_ball(p, r)).collect();
    let complement: Vec<f64> = rs.iter().map(|&r| volume_complement(p, r)).collect();
    Ok(Quantity::ALL
        .iter()
        .map(|&q| {
            let est = match q {
                Quantity::NuStar => from_series(q, &rs, &ball),
                Quantity::AlphaStar | Quantity::AlphaStarUpper => from_series(q, &rs, &complement),
                _ => from_series(q, &rs_eig, &lambdas),
            };
            (q, est)
        })
        .collect())
}

pub fn estimate_from_rows(quantity: Quantity, rows: &[ScanRow]) -> Result<AsymptoticEstimate> {
    let rs: Vec<f64> = rows.iter().map(|r| r.r).collect();
    let ys: Vec<f64> = rows
        .iter()
        .map(|row| match quantity {
            Quantity::NuStar => row.vol_ball,
            Quantity::AlphaStar | Quantity::AlphaStarUpper => row.vol_complement,
            _ => row.lambda1,
        })
        .collect();
    from_series(quantity, &rs, &ys)
}

/// Test-function evidence for the staircase profile at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaircaseRow {
    pub r: f64,
    /// Plateau index `n` and anchor radius `2ⁿ + 1 ≤ r`.
    pub n: u32,
    pub anchor: f64,
    /// `(η(a) - η(a-1) + η(1) - η(0)) / (η(a-1) - η(1))` at the anchor `a`,
    /// from closed-form `η`.
    pub closed_form: f64,
    /// The same quotient from quadrature of `η'`.
    pub quadrature: f64,
    /// Exact quotient of the unit-ramp trapezoid on `(0, a)`.
    pub trapezoid: f64,
    /// `closed_form / (e^{-r/2} (ln r)²)`.
    pub envelope_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaircaseReport {
    pub rows: Vec<StaircaseRow>,
    /// Largest envelope ratio; every bound satisfies
    /// `bound ≤ c_fit e^{-r/2} (ln r)²`.
    pub c_fit: f64,
    /// Largest `closed_form / (n² e^{-2ⁿ})` over the anchors.
    pub c_anchor: f64,
    pub verdict: Verdict,
}

/// Upper bounds for `λ₁(B_r)` on the staircase profile from the trapezoid
/// on `(0, a)`, `a` the largest anchor `2ⁿ + 1 ≤ r` (domain monotonicity
/// carries the bound from `B_a` to `B_r`).
pub fn staircase_checks(radii: &[f64]) -> Result<StaircaseReport> {
    let p = Profile::staircase();
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r >= 16.0) || r > super::staircase::MAX_T {
            return Err(Error::InvalidInput(format!(
                "staircase checks need 16 <= r <= {}, got {r}",
                super::staircase::MAX_T
            )));
        }
        let (n, a) = super::staircase::Staircase::anchor(r)
            .ok_or_else(|| Error::InvalidInput(format!("no anchor below r = {r}")))?;
        let eta = |t: f64| p.eta(t);
        let closed_form = (eta(a) - eta(a - 1.0) + eta(1.0) - eta(0.0)) / (eta(a - 1.0) - eta(1.0));
        let mass = |lo: f64, hi: f64| p.weighted_integral(lo, hi, |_| 1.0);
        let quadrature = (mass(a - 1.0, a)? + mass(0.0, 1.0)?) / mass(1.0, a - 1.0)?;
        let trapezoid = super::trapezoid_quotient(&p, 0.0, a, 1.0)?;
        let envelope = (-0.5 * r).exp() * r.ln().powi(2);
        rows.push(StaircaseRow {
            r,
            n,
            anchor: a,
            closed_form,
            quadrature,
            trapezoid,
            envelope_ratio: closed_form / envelope,
        });
    }
    let c_fit = rows.iter().map(|r| r.envelope_ratio).fold(0.0, f64::max);
    let c_anchor = rows
        .iter()
        .map(|row| row.closed_form / ((row.n * row.n) as f64 * (-(2f64.powi(row.n as i32))).exp()))
        .fold(0.0, f64::max);
    let verdict = h_bounds(&p, &DEFAULT_CUTOFFS)?.verdict;
    Ok(StaircaseReport {
        rows,
        c_fit,
        c_anchor,
        verdict,
    })
}
