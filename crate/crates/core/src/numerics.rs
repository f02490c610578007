//! Shared numerical utilities: adaptive quadrature, bracketed root finding
//! and least-squares slope fitting.
//!
//! Everything here is a pure function of its inputs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// A finite, non-degenerate interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!(
                "interval endpoints must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo >= hi {
            return Err(Error::InvalidInput(format!(
                "interval requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Accuracy request for iterative routines.
///
/// `abs` and `rel` combine as `max(abs, rel * |value|)`. `max_depth` bounds
/// the number of bisections a quadrature panel may undergo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_depth: u32,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64, max_depth: u32) -> Result<Self> {
        if !(abs >= 0.0) || !(rel >= 0.0) || abs + rel <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "tolerance needs abs, rel >= 0 with abs + rel > 0 (abs = {abs}, rel = {rel})"
            )));
        }
        if max_depth == 0 {
            return Err(Error::InvalidInput("max_depth must be positive".into()));
        }
        Ok(Self {
            abs,
            rel,
            max_depth,
        })
    }

    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            max_depth: 100,
        }
    }

    pub fn relative(rel: f64) -> Self {
        Self {
            abs: 0.0,
            rel,
            max_depth: 100,
        }
    }

    /// Error budget for a result of size `value`, floored at what double
    /// precision can resolve.
    fn target(&self, value: f64) -> f64 {
        self.abs
            .max(self.rel * value.abs())
            .max(50.0 * f64::EPSILON * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-12,
            max_depth: 100,
        }
    }
}

// 15-point Kronrod nodes (non-negative half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(Error::NonFinite(center));
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite() {
            return Err(Error::NonFinite(x1));
        }
        if !f2.is_finite() {
            return Err(Error::NonFinite(x2));
        }
        kronrod += w * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Ok(Panel {
        a,
        b,
        value,
        error,
        depth,
    })
}

/// Single 15-point Kronrod rule on `[a, b]` (exact for degree-22
/// polynomials); the building block of fixed composite rules.
pub(crate) fn kronrod_fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = f(center) * WGK[7];
    for (&x, &w) in XGK.iter().zip(WGK.iter()).take(7) {
        let dx = half * x;
        acc += w * (f(center - dx) + f(center + dx));
    }
    acc * half
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `iv`.
///
/// Panels are bisected in order of decreasing error estimate until the
/// summed estimate is below `max(tol.abs, tol.rel * |value|)`. The rule
/// never evaluates `f` at panel endpoints, so integrable endpoint
/// singularities are tolerated; use [`integrate_graded`] to make them cheap.
pub fn integrate<F: Fn(f64) -> f64>(f: F, iv: Interval, tol: Tolerance) -> Result<f64> {
    integrate_range(&f, iv.lo, iv.hi, tol)
}

fn integrate_range<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    const MAX_PANELS: usize = 200_000;
    let first = kronrod_panel(f, a, b, 0)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while error > tol.target(value) {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = mid <= worst.a || mid >= worst.b;
        if worst.depth >= tol.max_depth || too_narrow || heap.len() > MAX_PANELS {
            return Err(Error::NonConvergence {
                error,
                tolerance: tol.target(value),
            });
        }
        let left = kronrod_panel(f, worst.a, mid, worst.depth + 1)?;
        let right = kronrod_panel(f, mid, worst.b, worst.depth + 1)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Refresh the running sums occasionally to keep cancellation error
        // from accumulating over many updates.
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(heap.iter().map(|p| p.value).sum())
}

/// Quadrature with the substitution `s = lo + (hi - lo) * u^k` clustering
/// nodes at the lower endpoint.
///
/// With `k` chosen so that `k * mu >= 1`, a weight like `s^(mu - 1)` becomes
/// a bounded integrand in `u`.
pub fn integrate_graded<F: Fn(f64) -> f64>(
    f: F,
    iv: Interval,
    tol: Tolerance,
    grading: f64,
) -> Result<f64> {
    if !(grading >= 1.0) || !grading.is_finite() {
        return Err(Error::InvalidInput(format!(
            "grading exponent must be >= 1, got {grading}"
        )));
    }
    if grading == 1.0 {
        return integrate(f, iv, tol);
    }
    let (lo, width) = (iv.lo, iv.width());
    let g = |u: f64| {
        let s = lo + width * u.powf(grading);
        let jac = width * grading * u.powf(grading - 1.0);
        if jac == 0.0 {
            0.0
        } else {
            f(s) * jac
        }
    };
    integrate_range(&g, 0.0, 1.0, tol)
}

/// Root of `f` inside `bracket` by bisection with secant acceleration.
///
/// The iterate never leaves the current bracket, and a bisection step is
/// forced whenever two consecutive steps fail to halve the bracket, so
/// convergence is guaranteed for any continuous `f` with a sign change.
/// Returns the midpoint of the final bracket, whose width is at most
/// `max(tol.abs, tol.rel * |x|)` (floored at a few ulps).
pub fn find_root<F: Fn(f64) -> f64>(f: F, bracket: Interval, tol: Tolerance) -> Result<f64> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !fa.is_finite() || !fb.is_finite() || fa.signum() == fb.signum() {
        return Err(Error::InvalidBracket { lo: a, hi: b });
    }
    let mut width_two_back = f64::INFINITY;
    let mut width_one_back = b - a;
    for _ in 0..400 {
        let width = b - a;
        let x_scale = a.abs().max(b.abs());
        let limit = tol
            .abs
            .max(tol.rel * x_scale)
            .max(4.0 * f64::EPSILON * x_scale);
        if width <= limit {
            break;
        }
        let mid = 0.5 * (a + b);
        let mut x = a - fa * (b - a) / (fb - fa);
        let stalled = width > 0.5 * width_two_back;
        if !x.is_finite() || x <= a || x >= b || stalled {
            x = mid;
        } else {
            // Keep the secant point a little away from the endpoints so the
            // bracket shrinks from the far side as well.
            let guard = 0.01 * width;
            x = x.clamp(a + guard, b - guard);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if !fx.is_finite() {
            return Err(Error::NonFinite(x));
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        width_two_back = width_one_back;
        width_one_back = width;
    }
    Ok(0.5 * (a + b))
}

/// Least-squares fit of a straight line through `(log x, log y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_abs_residual: f64,
    pub window: Interval,
}

/// Ordinary least-squares line `y = slope * x + intercept`.
pub fn fit_linear(samples: &[(f64, f64)]) -> Result<SlopeFit> {
    if samples.len() < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::InvalidInput(
            "sample abscissae must be strictly increasing".into(),
        ));
    }
    if samples
        .iter()
        .any(|(x, y)| !x.is_finite() || !y.is_finite())
    {
        return Err(Error::InvalidInput("samples must be finite".into()));
    }
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_y = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let sxx: f64 = samples.iter().map(|s| (s.0 - mean_x).powi(2)).sum();
    let sxy: f64 = samples
        .iter()
        .map(|s| (s.0 - mean_x) * (s.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let max_abs_residual = samples
        .iter()
        .map(|s| (s.1 - slope * s.0 - intercept).abs())
        .fold(0.0, f64::max);
    Ok(SlopeFit {
        slope,
        intercept,
        max_abs_residual,
        window: Interval::new(samples[0].0, samples[samples.len() - 1].0)?,
    })
}

/// Fit `log y = slope * log x + intercept`; the reported window is in the
/// original `x` units.
pub fn fit_log_slope(samples: &[(f64, f64)]) -> Result<SlopeFit> {
    if samples.len() < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    if samples.iter().any(|&(x, y)| !(x > 0.0) || !(y > 0.0)) {
        return Err(Error::InvalidInput(
            "log-slope fit needs positive samples".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let fit = fit_linear(&logs)?;
    Ok(SlopeFit {
        window: Interval::new(samples[0].0, samples[samples.len() - 1].0)?,
        ..fit
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn interval_rejects_degenerate() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn tolerance_rejects_zero() {
        assert!(Tolerance::new(0.0, 0.0, 10).is_err());
        assert!(Tolerance::new(1e-9, 0.0, 0).is_err());
        assert!(Tolerance::new(-1.0, 1.0, 10).is_err());
    }

    #[test]
    fn integrates_linear_exactly() {
        let v = integrate(|s| s, unit(), Tolerance::default()).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn integrates_inverse_sqrt_singularity() {
        let v = integrate(|s: f64| s.powf(-0.5), unit(), Tolerance::absolute(1e-10)).unwrap();
        assert!((v - 2.0).abs() < 1e-8, "{v}");
        let graded =
            integrate_graded(|s: f64| s.powf(-0.5), unit(), Tolerance::default(), 2.0).unwrap();
        assert!((graded - 2.0).abs() < 1e-12, "{graded}");
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate(
            |s: f64| if s > 0.5 { f64::NAN } else { 1.0 },
            unit(),
            Tolerance::default(),
        );
        assert!(matches!(err, Err(Error::NonFinite(_))));
    }

    #[test]
    fn depth_cap_reports_non_convergence() {
        let tol = Tolerance::new(1e-14, 0.0, 3).unwrap();
        let err = integrate(|s: f64| s.powf(-0.9), unit(), tol);
        assert!(matches!(err, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn root_of_quadratic_and_cosine() {
        let tol = Tolerance::absolute(1e-13);
        let r = find_root(|x| x * x - 2.0, Interval::new(1.0, 2.0).unwrap(), tol).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
        let r = find_root(f64::cos, Interval::new(1.0, 2.0).unwrap(), tol).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn root_rejects_same_sign_bracket() {
        let err = find_root(
            |x| x * x + 1.0,
            Interval::new(-1.0, 1.0).unwrap(),
            Tolerance::default(),
        );
        assert!(matches!(err, Err(Error::InvalidBracket { .. })));
    }

    #[test]
    fn root_handles_flat_then_steep_function() {
        // Secant steps stall on this shape; forced bisection must kick in.
        let f = |x: f64| {
            if x < 0.999 {
                -1e-12
            } else {
                (x - 0.9995) * 1e6
            }
        };
        let r = find_root(
            f,
            Interval::new(0.0, 1.0).unwrap(),
            Tolerance::absolute(1e-12),
        )
        .unwrap();
        assert!((r - 0.9995).abs() < 1e-11);
    }

    #[test]
    fn log_slope_of_exact_power_law() {
        let fit = fit_log_slope(&[(1.0, 1.0), (2.0, 4.0), (4.0, 16.0)]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-14);
        let fit = fit_log_slope(&[(1.0, 2.0), (2.0, 2.0), (4.0, 2.0)]).unwrap();
        assert!(fit.slope.abs() < 1e-15);
        assert_eq!(fit.window.lo(), 1.0);
        assert_eq!(fit.window.hi(), 4.0);
    }

    #[test]
    fn log_slope_needs_three_increasing_samples() {
        assert!(matches!(
            fit_log_slope(&[(1.0, 1.0), (2.0, 2.0)]),
            Err(Error::InsufficientSamples { .. })
        ));
        assert!(fit_log_slope(&[(1.0, 1.0), (1.0, 2.0), (3.0, 2.0)]).is_err());
        assert!(fit_log_slope(&[(1.0, 1.0), (2.0, -2.0), (3.0, 2.0)]).is_err());
    }
}
