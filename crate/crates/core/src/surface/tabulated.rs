//! Profiles given by samples of `η'`, interpolated piecewise linearly and
//! extended by constants outside the sampled range; `η` vanishes at the
//! first node.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Table {
    t: Vec<f64>,
    d: Vec<f64>,
    /// `η` at the nodes.
    eta: Vec<f64>,
}

/// Outcome of the tail heuristic on one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Tail {
    /// Integral of `1/η'` converges; value of the full tail integral
    /// (sampled part plus geometric extrapolation).
    Converges(f64),
    Diverges,
    Inconclusive,
}

/// Geometric blocks examined by the tail heuristic.
const TAIL_BLOCKS: usize = 5;

impl Table {
    pub(crate) fn new(t: Vec<f64>, d: Vec<f64>) -> Result<Self> {
        if t.len() != d.len() || t.len() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: t.len().min(d.len()),
            });
        }
        if t.iter().any(|x| !x.is_finite()) || t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "tabulated t must be finite and strictly increasing".into(),
            ));
        }
        if d.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(Error::InvalidInput(
                "tabulated eta' must be positive".into(),
            ));
        }
        let mut eta = vec![0.0];
        for i in 1..t.len() {
            let prev = eta[i - 1];
            eta.push(prev + 0.5 * (t[i] - t[i - 1]) * (d[i] + d[i - 1]));
        }
        Ok(Self { t, d, eta })
    }

    /// Reads a two-column CSV `(t, eta_prime)`; a non-numeric first row is
    /// treated as a header.
    pub(crate) fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        let (mut t, mut d) = (Vec::new(), Vec::new());
        for (line, record) in reader.records().enumerate() {
            let record =
                record.map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            if record.len() < 2 {
                return Err(Error::InvalidInput(format!(
                    "{}: row {} needs two columns",
                    path.display(),
                    line + 1
                )));
            }
            match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
                (Ok(a), Ok(b)) => {
                    t.push(a);
                    d.push(b);
                }
                _ if line == 0 => continue,
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "{}: row {} is not numeric",
                        path.display(),
                        line + 1
                    )))
                }
            }
        }
        Self::new(t, d)
    }

    fn locate(&self, x: f64) -> usize {
        let i = self.t.partition_point(|&v| v <= x);
        i.clamp(1, self.t.len() - 1) - 1
    }

    pub(crate) fn eta_prime(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x <= self.t[0] {
            return self.d[0];
        }
        if x >= self.t[n - 1] {
            return self.d[n - 1];
        }
        let i = self.locate(x);
        let s = (x - self.t[i]) / (self.t[i + 1] - self.t[i]);
        self.d[i] + s * (self.d[i + 1] - self.d[i])
    }

    pub(crate) fn eta(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x <= self.t[0] {
            return self.d[0] * (x - self.t[0]);
        }
        if x >= self.t[n - 1] {
            return self.eta[n - 1] + self.d[n - 1] * (x - self.t[n - 1]);
        }
        let i = self.locate(x);
        let h = x - self.t[i];
        self.eta[i] + 0.5 * h * (self.d[i] + self.eta_prime(x))
    }

    pub(crate) fn nodes(&self) -> &[f64] {
        &self.t
    }

    pub(crate) fn range(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }

    /// Exact `∫_a^b dt / η'` for the piecewise-linear interpolant.
    pub(crate) fn inverse_integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        if a > b {
            return -self.inverse_integral(b, a);
        }
        let mut cuts = vec![a];
        cuts.extend(self.t.iter().copied().filter(|&x| x > a && x < b));
        cuts.push(b);
        cuts.windows(2)
            .map(|w| {
                let (d0, d1) = (self.eta_prime(w[0]), self.eta_prime(w[1]));
                let h = w[1] - w[0];
                if (d1 - d0).abs() <= 1e-12 * d0.max(d1) {
                    h * 2.0 / (d0 + d1)
                } else {
                    h * (d1 / d0).ln() / (d1 - d0)
                }
            })
            .sum()
    }

    /// Tail heuristic for `∫_0^{±∞} dt/η'` on one side (`sign = ±1`): the
    /// sampled range on that side is cut into geometric blocks
    /// `[T/2^(k+1), T/2^k]`; shrinking block integrals (ratio ≤ 0.9 in every
    /// step) indicate convergence, non-shrinking ones (ratio ≥ 0.97)
    /// divergence.
    pub(crate) fn tail(&self, sign: f64) -> Tail {
        let (lo, hi) = self.range();
        let extent = if sign > 0.0 { hi } else { -lo };
        if !(extent > 0.0) {
            return Tail::Inconclusive;
        }
        let inside = self
            .t
            .iter()
            .filter(|&&x| sign * x >= extent / 2f64.powi(TAIL_BLOCKS as i32))
            .count();
        if inside < 4 * TAIL_BLOCKS {
            return Tail::Inconclusive;
        }
        let edges: Vec<f64> = (0..=TAIL_BLOCKS)
            .map(|k| extent / 2f64.powi((TAIL_BLOCKS - k) as i32))
            .collect();
        let blocks: Vec<f64> = edges
            .windows(2)
            .map(|w| self.inverse_integral(sign * w[0], sign * w[1]).abs())
            .collect();
        let ratios: Vec<f64> = blocks.windows(2).map(|w| w[1] / w[0]).collect();
        let last = &ratios[ratios.len() - 3..];
        if last.iter().all(|&q| q <= 0.9) {
            let q = last.iter().cloned().fold(0.0, f64::max);
            let sampled = self.inverse_integral(0.0, sign * extent).abs();
            let extrapolated = blocks[blocks.len() - 1] * q / (1.0 - q);
            Tail::Converges(sampled + extrapolated)
        } else if last.iter().all(|&q| q >= 0.97) {
            Tail::Diverges
        } else {
            Tail::Inconclusive
        }
    }
}
