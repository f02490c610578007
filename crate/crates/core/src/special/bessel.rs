//! Bessel functions of the first kind for real order `nu > -1` and real
//! argument `t >= 0`.
//!
//! Two evaluation routes are combined:
//!
//! * the ascending power series, used while the sum of the absolute values
//!   of its terms stays small enough that cancellation costs no accuracy;
//! * Schläfli's integral
//!   `J_nu(t) = (1/pi) int_0^pi cos(nu th - t sin th) dth
//!              - (sin(nu pi)/pi) int_0^inf exp(-t sinh u - nu u) du`,
//!   integrated with a fixed composite Kronrod rule whose panel count grows
//!   with the phase range, giving absolute accuracy near 1e-15.

use std::f64::consts::PI;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use crate::numerics::{integrate, kronrod_fixed, Interval, Tolerance};

/// Largest supported order.
pub const MAX_ORDER: f64 = 120.0;
/// Largest supported argument.
pub const MAX_ARGUMENT: f64 = 300.0;

/// Order `nu` of a Bessel function, restricted to `(-1, MAX_ORDER]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > -1.0) || !(nu <= MAX_ORDER) {
            return Err(Error::OutOfSupportedRange(format!(
                "Bessel order nu = {nu} outside (-1, {MAX_ORDER}]"
            )));
        }
        Ok(Self(nu))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// `J_nu(t)`.
pub fn bessel_j(order: BesselOrder, t: f64) -> Result<f64> {
    if !(t >= 0.0) || t > MAX_ARGUMENT {
        return Err(Error::OutOfSupportedRange(format!(
            "Bessel argument t = {t} outside [0, {MAX_ARGUMENT}]"
        )));
    }
    Ok(j_unchecked(order.0, t))
}

/// Sum of `(-x)^m / (m! (nu+1)_m)` with `x = z^2/4`, returned together with
/// the sum of absolute values of the terms (the cancellation gauge).
fn reduced_series(nu: f64, z: f64) -> (f64, f64) {
    let x = 0.25 * z * z;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    let mut sum_abs = 1.0_f64;
    let mut m = 1.0_f64;
    loop {
        term *= -x / (m * (nu + m));
        // Kahan summation
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        sum_abs += term.abs();
        if term.abs() <= 1e-18 * sum_abs && m > x.sqrt() {
            break;
        }
        m += 1.0;
        if m > 2000.0 {
            break;
        }
    }
    (sum, sum_abs)
}

/// True when the series result is relatively accurate, or its absolute
/// error in `J_nu(z)` is no worse than the integral route's (~1e-15).
/// `log_prefactor` is `ln((z/2)^nu / Γ(nu+1))`.
fn series_is_accurate(sum: f64, sum_abs: f64, log_prefactor: f64) -> bool {
    let rel_err = 4.0 * f64::EPSILON * sum_abs / sum.abs();
    rel_err <= 1e-13 || (4.0 * f64::EPSILON * sum_abs).ln() + log_prefactor <= (1e-15_f64).ln()
}

fn schlafli(nu: f64, t: f64) -> f64 {
    // Oscillatory part: panels sized so the phase moves by at most ~2 rad.
    let phase_range = nu.abs() * PI + 2.0 * t;
    let panels = (phase_range / 2.0).ceil() as usize + 4;
    let h = PI / panels as f64;
    let osc = |th: f64| (nu * th - t * th.sin()).cos();
    let mut first = 0.0;
    for k in 0..panels {
        let a = k as f64 * h;
        first += kronrod_fixed(&osc, a, a + h);
    }
    first /= PI;

    let s = (nu * PI).sin();
    if nu == nu.round() || s.abs() < 1e-300 {
        return first;
    }
    // Tail part: integrand exp(-t sinh u - nu u) decays monotonically once
    // t sinh u dominates; truncate where it falls below e^-60.
    let decay = |u: f64| t * u.sinh() + nu * u;
    let mut upper = 1.0;
    while decay(upper) < 60.0 {
        upper *= 2.0;
    }
    let tail = integrate(
        |u| (-decay(u)).exp(),
        Interval::new(0.0, upper).expect("positive upper limit"),
        Tolerance::new(1e-17, 1e-15, 60).expect("valid tolerance"),
    )
    .unwrap_or_else(|_| {
        // Fall back to a fine fixed rule; the integrand is smooth.
        let n = 400;
        let w = upper / n as f64;
        (0..n)
            .map(|k| {
                kronrod_fixed(
                    &|u: f64| (-decay(u)).exp(),
                    k as f64 * w,
                    (k + 1) as f64 * w,
                )
            })
            .sum()
    });
    first - s / PI * tail
}

pub(crate) fn j_unchecked(nu: f64, t: f64) -> f64 {
    if t == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    let (sum, sum_abs) = reduced_series(nu, t);
    let log_prefactor = nu * (0.5 * t).ln() - ln_gamma(nu + 1.0);
    if series_is_accurate(sum, sum_abs, log_prefactor) {
        return log_prefactor.exp() * sum;
    }
    schlafli(nu, t)
}

/// `s^(-nu) J_nu(k s)`, finite at `s = 0` where it equals
/// `(k/2)^nu / Γ(nu + 1)`.
pub(crate) fn scaled_j(nu: f64, k: f64, s: f64) -> f64 {
    let z = k * s;
    let (sum, sum_abs) = reduced_series(nu, z);
    if z == 0.0 || series_is_accurate(sum, sum_abs, nu * (0.5 * z).ln() - ln_gamma(nu + 1.0)) {
        let log_prefactor = nu * (0.5 * k).ln() - ln_gamma(nu + 1.0);
        return log_prefactor.exp() * sum;
    }
    s.powf(-nu) * j_unchecked(nu, z)
}

/// Derivative `J_nu'(z)` written as `nu z^(nu-1) g_nu(z) - z^(nu+1) g_{nu+1}(z)`
/// with `g_nu(z) = z^(-nu) J_nu(z)`, which is regular at `z = 0` for
/// `nu = 0` and `nu >= 1`.
pub(crate) fn j_prime_unchecked(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 || nu > 1.0 {
            0.0
        } else if nu == 1.0 {
            0.5
        } else {
            f64::INFINITY
        };
    }
    let lead = if nu == 0.0 {
        0.0
    } else {
        nu * z.powf(nu - 1.0) * scaled_j(nu, 1.0, z)
    };
    lead - z.powf(nu + 1.0) * scaled_j(nu + 1.0, 1.0, z)
}

/// McMahon-type estimate of the first zero for `nu >= 1`.
fn first_zero_guess(nu: f64) -> f64 {
    nu + 1.8557571 * nu.cbrt() + 1.033150 / nu.cbrt()
}

/// First positive zero `j_nu` of `J_nu`.
///
/// The bracket is found by scanning from below at step 0.05, starting at
/// `nu` for `nu >= 1` (where `J_nu(nu) > 0` since `j_nu > nu`) and near 0
/// otherwise, so the first sign change found is the first zero. The result
/// is refined by bisection/secant and positivity on `(0, j_nu)` is verified
/// at 64 interior points.
pub fn first_zero(order: BesselOrder) -> Result<f64> {
    let nu = order.0;
    let step = 0.05;
    let (mut a, end) = if nu >= 1.0 {
        (nu, first_zero_guess(nu) + 3.0)
    } else {
        (step, 6.0)
    };
    let mut fa = j_unchecked(nu, a);
    if nu < 1.0 && fa <= 0.0 {
        // The zero lies below the first scan point (nu close to -1).
        let mut lo = a;
        while j_unchecked(nu, lo) <= 0.0 {
            lo *= 0.5;
            if lo < 1e-12 {
                return Err(Error::BracketingFailure { nu });
            }
        }
        a = lo;
        fa = j_unchecked(nu, a);
    }
    if !(fa > 0.0) {
        return Err(Error::BracketingFailure { nu });
    }
    let mut bracket = None;
    let mut b = a;
    while b < end {
        let next = if b == a && nu < 1.0 && a < step {
            step
        } else {
            b + step
        };
        let fb = j_unchecked(nu, next);
        if fb <= 0.0 {
            bracket = Some((b, next));
            break;
        }
        b = next;
    }
    let (lo, hi) = bracket.ok_or(Error::BracketingFailure { nu })?;
    let root = crate::numerics::find_root(
        |t| j_unchecked(nu, t),
        Interval::new(lo, hi)?,
        Tolerance::new(1e-15, 1e-15, 100)?,
    )?;
    // t^(-nu) J_nu(t) avoids underflow at large order near the origin.
    let positive_inside = (1..=64).all(|i| scaled_j(nu, 1.0, root * i as f64 / 65.0) > 0.0);
    if !positive_inside {
        return Err(Error::BracketingFailure { nu });
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(nu: f64) -> BesselOrder {
        BesselOrder::new(nu).unwrap()
    }

    #[test]
    fn order_range_is_enforced() {
        assert!(BesselOrder::new(-1.0).is_err());
        assert!(BesselOrder::new(120.5).is_err());
        assert!(BesselOrder::new(-0.999).is_ok());
        assert!(bessel_j(order(0.0), -1.0).is_err());
        assert!(bessel_j(order(0.0), 301.0).is_err());
    }

    #[test]
    fn value_at_origin() {
        assert_eq!(bessel_j(order(0.0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(order(2.5), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn half_integer_closed_forms() {
        for &t in &[
            0.3,
            1.0,
            std::f64::consts::PI,
            7.5,
            19.0,
            28.0,
            45.0,
            120.0,
            250.0,
        ] {
            let j_half = (2.0 / (PI * t)).sqrt() * t.sin();
            let j_mhalf = (2.0 / (PI * t)).sqrt() * t.cos();
            let j_3half = (2.0 / (PI * t)).sqrt() * (t.sin() / t - t.cos());
            assert!((j_unchecked(0.5, t) - j_half).abs() < 1e-14, "t = {t}");
            assert!((j_unchecked(-0.5, t) - j_mhalf).abs() < 1e-14, "t = {t}");
            assert!((j_unchecked(1.5, t) - j_3half).abs() < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn derivative_matches_recurrence() {
        // J_nu' = (J_{nu-1} - J_{nu+1}) / 2
        for &nu in &[1.0, 1.5, 3.0, 7.25] {
            for &z in &[0.5, 2.0, 9.0, 31.0] {
                let lhs = j_prime_unchecked(nu, z);
                let rhs = 0.5 * (j_unchecked(nu - 1.0, z) - j_unchecked(nu + 1.0, z));
                assert!((lhs - rhs).abs() < 1e-13, "nu = {nu}, z = {z}");
            }
        }
        assert_eq!(j_prime_unchecked(0.0, 0.0), 0.0);
        assert_eq!(j_prime_unchecked(1.0, 0.0), 0.5);
    }

    #[test]
    fn scaled_value_is_finite_at_origin() {
        let k = 2.0;
        let expected = 1.0; // (k/2)^nu / Γ(nu+1) with k = 2, nu = 0
        assert_eq!(scaled_j(0.0, k, 0.0), expected);
        let v = scaled_j(-0.5, 3.0, 0.0);
        let e = (1.5_f64).powf(-0.5) / PI.sqrt();
        assert!((v - e).abs() < 1e-14);
    }

    #[test]
    fn first_zero_of_half_order_is_pi() {
        assert!((first_zero(order(0.5)).unwrap() - PI).abs() < 1e-12);
        assert!((first_zero(order(-0.5)).unwrap() - 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn first_zero_near_minus_one() {
        let j = first_zero(order(-0.99)).unwrap();
        assert!(j > 0.19 && j < 0.21, "{j}");
        let j = first_zero(order(-0.9999)).unwrap();
        assert!(j > 0.0 && j < 0.03, "{j}");
        assert!(j_unchecked(-0.9999, j).abs() < 1e-10);
    }

    #[test]
    fn first_zero_at_large_order() {
        for &nu in &[40.0, 80.0, 120.0] {
            let j = first_zero(order(nu)).unwrap();
            assert!(j / nu > 0.9 && j / nu < 1.4);
            assert!(j_unchecked(nu, j).abs() < 1e-10);
        }
    }
}
