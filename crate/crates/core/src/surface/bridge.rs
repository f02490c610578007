//! Smooth positive bridge for `η'` on `[-1, 1]`.
//!
//! `ln η'` is the linear interpolant of the prescribed end values plus a
//! flat-bottomed bump `c (1 - t^{2k})`, which vanishes at `±1`. So `η'` is
//! continuous across the junctions (`η` is C¹) while `η''` may jump there.
//! `c` is fixed so that `∫_{-1}^1 η' = Δη`, which keeps `η` continuous.
//! Among `k ∈ {1, 2, 4, 8, 16}` the one with the largest `min η'` is used.
//! A steep bump edge keeps that minimum away from zero when the mass is much
//! smaller than the end values.

use crate::error::{Error, Result};
use crate::numerics::{find_root, kronrod_fixed, Interval, Tolerance};

/// Number of panels on which `η` is tabulated across the bridge.
const KNOTS: usize = 512;
const EXPONENTS: [i32; 5] = [1, 2, 4, 8, 16];
/// Sample count for minima over the bridge.
const MIN_SAMPLES: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Bridge {
    /// `ln η'(-1)`, `ln η'(1)`.
    log_values: [f64; 2],
    /// Exponent `2k` of the bump.
    power: i32,
    bump: f64,
    /// `η` at `-1 + 2i/KNOTS`.
    eta_knots: Vec<f64>,
}

fn log_shape(t: f64, v: [f64; 2], power: i32, c: f64) -> f64 {
    let tau = 0.5 * (t + 1.0);
    (1.0 - tau) * v[0] + tau * v[1] + c * (1.0 - t.powi(power))
}

fn panel(i: usize) -> (f64, f64) {
    let w = 2.0 / KNOTS as f64;
    (-1.0 + i as f64 * w, -1.0 + (i + 1) as f64 * w)
}

fn solve_bump(mass: f64, v: [f64; 2], power: i32) -> Result<f64> {
    let total = |c: f64| {
        (0..KNOTS)
            .map(|i| {
                let (a, b) = panel(i);
                kronrod_fixed(&|t| log_shape(t, v, power, c).exp(), a, b)
            })
            .sum::<f64>()
            - mass
    };
    let (mut lo, mut hi) = (-1.0, 1.0);
    while total(lo) > 0.0 {
        lo *= 2.0;
        if lo < -1e3 {
            return Err(Error::InvalidInput("bridge mass too small".into()));
        }
    }
    while total(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::InvalidInput("bridge mass too large".into()));
        }
    }
    find_root(
        total,
        Interval::new(lo, hi)?,
        Tolerance::new(1e-15, 1e-15, 200)?,
    )
}

impl Bridge {
    /// Bridge from `η(-1) = eta_left` to `η(1) = eta_left + mass` with the
    /// given values of `ln η'` at the ends.
    pub(crate) fn new(eta_left: f64, mass: f64, log_values: [f64; 2]) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() || log_values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(
                "bridge needs positive mass and finite end data".into(),
            ));
        }
        let mut best: Option<(f64, i32, f64)> = None;
        for k in EXPONENTS {
            let power = 2 * k;
            let c = solve_bump(mass, log_values, power)?;
            let floor = (0..=MIN_SAMPLES)
                .map(|i| {
                    log_shape(
                        -1.0 + 2.0 * i as f64 / MIN_SAMPLES as f64,
                        log_values,
                        power,
                        c,
                    )
                })
                .fold(f64::INFINITY, f64::min);
            if best.is_none_or(|b| floor > b.0) {
                best = Some((floor, power, c));
            }
        }
        let (_, power, bump) = best.expect("non-empty exponent list");
        let mut eta_knots = Vec::with_capacity(KNOTS + 1);
        let mut acc = eta_left;
        eta_knots.push(acc);
        for i in 0..KNOTS {
            let (a, b) = panel(i);
            acc += kronrod_fixed(&|t| log_shape(t, log_values, power, bump).exp(), a, b);
            eta_knots.push(acc);
        }
        // Pin the right end exactly.
        eta_knots[KNOTS] = eta_left + mass;
        Ok(Self {
            log_values,
            power,
            bump,
            eta_knots,
        })
    }

    pub(crate) fn eta_prime(&self, t: f64) -> f64 {
        log_shape(t, self.log_values, self.power, self.bump).exp()
    }

    /// `η(t)` for `t ∈ [-1, 1]`.
    pub(crate) fn eta(&self, t: f64) -> f64 {
        let width = 2.0 / KNOTS as f64;
        let i = (((t + 1.0) / width).floor().max(0.0) as usize).min(KNOTS - 1);
        let (a, _) = panel(i);
        if t == a {
            return self.eta_knots[i];
        }
        self.eta_knots[i] + kronrod_fixed(&|s| self.eta_prime(s), a, t)
    }

    /// Minimum of `η'/η` over `[a, b] ⊂ [-1, 1]`, sampled.
    pub(crate) fn min_log_derivative(&self, a: f64, b: f64) -> f64 {
        (0..=MIN_SAMPLES)
            .map(|i| {
                let t = a + (b - a) * i as f64 / MIN_SAMPLES as f64;
                self.eta_prime(t) / self.eta(t)
            })
            .fold(f64::INFINITY, f64::min)
    }
}
