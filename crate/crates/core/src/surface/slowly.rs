//! Slowly decaying rates `μ(t)` on `[1, ∞)` and their integrals
//! `I(t) = ∫_1^t μ`.

use crate::error::{Error, Result};
use crate::numerics::{integrate, kronrod_fixed, Interval, Tolerance};

/// Choice of decaying rate `μ(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlowlyVarying {
    /// `μ(t) = (ln(t + e))^β / (t + e)`.
    LogPower { beta: f64 },
    /// `μ(t) = t^(-α)`, `0 < α < 1`.
    Power { alpha: f64 },
    /// `μ(t) = (ln(t + 1))^(-γ)`.
    LogLog { gamma: f64 },
}

/// Knot spacing and extent of the tabulated `I(t)` for the LogLog rate.
const TABLE_STEP: f64 = 0.5;
const TABLE_END: f64 = 4096.0;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Rate {
    choice: SlowlyVarying,
    /// `I` at `1 + k·TABLE_STEP` (LogLog only).
    table: Vec<f64>,
}

impl Rate {
    pub(crate) fn new(choice: SlowlyVarying) -> Result<Self> {
        let ok = match choice {
            SlowlyVarying::LogPower { beta } => beta > 0.0 && beta.is_finite(),
            SlowlyVarying::Power { alpha } => alpha > 0.0 && alpha < 1.0,
            SlowlyVarying::LogLog { gamma } => gamma > 0.0 && gamma.is_finite(),
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "invalid slowly varying parameters: {choice:?}"
            )));
        }
        let mut rate = Self {
            choice,
            table: Vec::new(),
        };
        if let SlowlyVarying::LogLog { .. } = choice {
            let n = ((TABLE_END - 1.0) / TABLE_STEP) as usize;
            let mut acc = 0.0;
            rate.table.push(0.0);
            for k in 0..n {
                let a = 1.0 + k as f64 * TABLE_STEP;
                acc += kronrod_fixed(&|t| rate.mu(t), a, a + TABLE_STEP);
                rate.table.push(acc);
            }
        }
        Ok(rate)
    }

    pub(crate) fn choice(&self) -> SlowlyVarying {
        self.choice
    }

    pub(crate) fn mu(&self, t: f64) -> f64 {
        match self.choice {
            SlowlyVarying::LogPower { beta } => {
                let s = t + std::f64::consts::E;
                s.ln().powf(beta) / s
            }
            SlowlyVarying::Power { alpha } => t.powf(-alpha),
            SlowlyVarying::LogLog { gamma } => (t + 1.0).ln().powf(-gamma),
        }
    }

    /// `I(t) = ∫_1^t μ` for `t ≥ 1`.
    pub(crate) fn integral(&self, t: f64) -> f64 {
        match self.choice {
            SlowlyVarying::LogPower { beta } => {
                let e = std::f64::consts::E;
                let l = |x: f64| (x + e).ln().powf(beta + 1.0);
                (l(t) - l(1.0)) / (beta + 1.0)
            }
            SlowlyVarying::Power { alpha } => (t.powf(1.0 - alpha) - 1.0) / (1.0 - alpha),
            SlowlyVarying::LogLog { .. } => {
                if t < TABLE_END {
                    let k = ((t - 1.0) / TABLE_STEP).floor().max(0.0) as usize;
                    let a = 1.0 + k as f64 * TABLE_STEP;
                    self.table[k] + kronrod_fixed(&|s| self.mu(s), a, t)
                } else {
                    let last = self.table.len() - 1;
                    let a = 1.0 + last as f64 * TABLE_STEP;
                    self.table[last]
                        + integrate(
                            |s| self.mu(s),
                            Interval::new(a, t.max(a + 1e-9)).expect("ordered"),
                            Tolerance::new(0.0, 1e-13, 80).expect("valid"),
                        )
                        .unwrap_or(f64::NAN)
                }
            }
        }
    }

    /// Numerical value of the constant beyond which `t μ(t)` increases: the
    /// first point of a geometric grid on `[1, 1e6]` after the last grid
    /// interval on which `t μ(t)` decreases.
    pub(crate) fn monotonicity_constant(&self) -> f64 {
        let n = 600;
        let grid: Vec<f64> = (0..=n)
            .map(|i| 10f64.powf(6.0 * i as f64 / n as f64))
            .collect();
        let mut c = 1.0;
        for w in grid.windows(2) {
            if w[1] * self.mu(w[1]) < w[0] * self.mu(w[0]) {
                c = w[1];
            }
        }
        c
    }
}
