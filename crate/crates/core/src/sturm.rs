//! First eigenvalue of one-dimensional weighted Rayleigh quotients
//! `∫ u'² w / ∫ u² q` (with `q = w` unless a separate potential weight is
//! given) on an interval, by finite elements or by shooting.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{find_root, Interval, Tolerance};

/// Shared real function used for weights.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Condition imposed at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndCondition {
    /// `u = 0`.
    Dirichlet,
    /// No constraint; the natural condition `w u' = 0` arises variationally.
    Natural,
}

/// Conditions at both endpoints; at least one is Dirichlet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryConditions {
    left: EndCondition,
    right: EndCondition,
}

impl BoundaryConditions {
    pub fn new(left: EndCondition, right: EndCondition) -> Result<Self> {
        if left == EndCondition::Natural && right == EndCondition::Natural {
            return Err(Error::InvalidInput(
                "at least one endpoint must be Dirichlet".into(),
            ));
        }
        Ok(Self { left, right })
    }

    pub fn dirichlet() -> Self {
        Self {
            left: EndCondition::Dirichlet,
            right: EndCondition::Dirichlet,
        }
    }

    /// Natural at the left end, Dirichlet at the right end.
    pub fn natural_left() -> Self {
        Self {
            left: EndCondition::Natural,
            right: EndCondition::Dirichlet,
        }
    }

    pub fn left(&self) -> EndCondition {
        self.left
    }

    pub fn right(&self) -> EndCondition {
        self.right
    }
}

/// The quotient `∫ u'² w / ∫ u² q` on an interval with boundary conditions.
#[derive(Clone)]
pub struct WeightedProblem {
    interval: Interval,
    weight: RealFn,
    potential_weight: Option<RealFn>,
    bc: BoundaryConditions,
}

impl fmt::Debug for WeightedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedProblem")
            .field("interval", &self.interval)
            .field("has_potential_weight", &self.potential_weight.is_some())
            .field("bc", &self.bc)
            .finish()
    }
}

impl WeightedProblem {
    pub fn new<W>(interval: Interval, weight: W, bc: BoundaryConditions) -> Self
    where
        W: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            interval,
            weight: Arc::new(weight),
            potential_weight: None,
            bc,
        }
    }

    /// Uses `q` in the denominator instead of `w`.
    pub fn with_potential_weight<Q>(mut self, q: Q) -> Self
    where
        Q: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.potential_weight = Some(Arc::new(q));
        self
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn bc(&self) -> BoundaryConditions {
        self.bc
    }

    pub fn weight(&self, s: f64) -> f64 {
        (self.weight)(s)
    }

    /// Denominator weight `q`, equal to `w` when no potential weight is set.
    pub fn mass_weight(&self, s: f64) -> f64 {
        match &self.potential_weight {
            Some(q) => q(s),
            None => (self.weight)(s),
        }
    }
}

/// How mesh nodes were distributed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform,
    /// `s = lo + (hi - lo) (i/N)^k`, clustered at the left end.
    Power(f64),
    /// Geometric spacing; requires `lo > 0`.
    Logarithmic,
    Custom,
}

/// Strictly increasing nodes spanning an interval, at least 16 of them
/// interior.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    grading: Grading,
}

/// Minimum number of interior nodes.
pub const MIN_INTERIOR_NODES: usize = 16;

impl Mesh {
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        Self::build(nodes, Grading::Custom)
    }

    fn build(nodes: Vec<f64>, grading: Grading) -> Result<Self> {
        if nodes.len() < MIN_INTERIOR_NODES + 2 {
            return Err(Error::InsufficientSamples {
                needed: MIN_INTERIOR_NODES + 2,
                got: nodes.len(),
            });
        }
        if nodes.iter().any(|x| !x.is_finite()) || nodes.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::InvalidInput(
                "mesh nodes must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self { nodes, grading })
    }

    pub fn uniform(iv: Interval, cells: usize) -> Result<Self> {
        Self::power_graded(iv, cells, 1.0).map(|m| Self {
            grading: Grading::Uniform,
            ..m
        })
    }

    pub fn power_graded(iv: Interval, cells: usize, exponent: f64) -> Result<Self> {
        if !(exponent >= 1.0) || !exponent.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grading exponent must be >= 1, got {exponent}"
            )));
        }
        let n = cells.max(1) as f64;
        let mut nodes: Vec<f64> = (0..=cells)
            .map(|i| iv.lo() + iv.width() * (i as f64 / n).powf(exponent))
            .collect();
        if let Some(last) = nodes.last_mut() {
            *last = iv.hi();
        }
        Self::build(nodes, Grading::Power(exponent))
    }

    pub fn logarithmic(iv: Interval, cells: usize) -> Result<Self> {
        if !(iv.lo() > 0.0) {
            return Err(Error::InvalidInput(
                "logarithmic mesh needs a positive left endpoint".into(),
            ));
        }
        let (a, b) = (iv.lo().ln(), iv.hi().ln());
        let n = cells.max(1) as f64;
        let mut nodes: Vec<f64> = (0..=cells)
            .map(|i| (a + (b - a) * i as f64 / n).exp())
            .collect();
        nodes[0] = iv.lo();
        if let Some(last) = nodes.last_mut() {
            *last = iv.hi();
        }
        Self::build(nodes, Grading::Logarithmic)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn max_cell_width(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|p| p[1] - p[0])
            .fold(0.0, f64::max)
    }

    fn spans(&self, iv: Interval) -> bool {
        let (lo, hi) = (self.nodes[0], self.nodes[self.nodes.len() - 1]);
        let tol = 1e-12 * iv.width().max(iv.hi().abs());
        (lo - iv.lo()).abs() <= tol && (hi - iv.hi()).abs() <= tol
    }
}

/// First eigenpair of a weighted problem.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub lambda: f64,
    /// Nodal values, non-negative, normalized so `∫ u² q = 1`.
    pub eigenfunction: Vec<f64>,
    pub residual: f64,
    pub mesh: Mesh,
}

/// Smallest scaled cell weight used in the FEM pencil.
const WEIGHT_FLOOR: f64 = 1e-300;

/// Per-cell midpoint values of `w` and `q`.
fn cell_weights(p: &WeightedProblem, m: &Mesh) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut w = Vec::with_capacity(m.cells());
    let mut q = Vec::with_capacity(m.cells());
    for (cell, pair) in m.nodes.windows(2).enumerate() {
        let mid = 0.5 * (pair[0] + pair[1]);
        let (wk, qk) = (p.weight(mid), p.mass_weight(mid));
        if !(wk > 0.0) || !wk.is_finite() || !(qk > 0.0) || !qk.is_finite() {
            return Err(Error::SingularMass { cell });
        }
        w.push(wk);
        q.push(qk);
    }
    Ok((w, q))
}

/// The pencil `A - σB` of the P1 discretization, kept per cell: stiffness
/// `k = w/h` and mass `m = q h / 6` (so the cell mass matrix is
/// `m [2 1; 1 2]`). Unknowns are the nodes `first..=last`.
#[derive(Debug, Clone)]
struct Pencil {
    k: Vec<f64>,
    m: Vec<f64>,
    first: usize,
    last: usize,
}

impl Pencil {
    fn new(mesh: &Mesh, w: &[f64], q: &[f64], first: usize, last: usize) -> Self {
        let (k, m) = mesh
            .nodes
            .windows(2)
            .zip(w.iter().zip(q))
            .map(|(pair, (wk, qk))| {
                let h = pair[1] - pair[0];
                (wk / h, qk * h / 6.0)
            })
            .unzip();
        Self { k, m, first, last }
    }

    fn cells(&self) -> usize {
        self.k.len()
    }

    fn value(&self, u: &[f64], node: usize) -> f64 {
        if node < self.first || node > self.last {
            0.0
        } else {
            u[node - self.first]
        }
    }

    /// `(A u, B u)` over the unknowns, assembled cell by cell so stiffness
    /// enters only through differences.
    fn apply(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.last - self.first + 1;
        let mut au = vec![0.0; n];
        let mut bu = vec![0.0; n];
        for c in 0..self.cells() {
            let (ul, ur) = (self.value(u, c), self.value(u, c + 1));
            let flux = self.k[c] * (ul - ur);
            if c >= self.first && c <= self.last {
                au[c - self.first] += flux;
                bu[c - self.first] += self.m[c] * (2.0 * ul + ur);
            }
            if c + 1 >= self.first && c < self.last {
                au[c + 1 - self.first] -= flux;
                bu[c + 1 - self.first] += self.m[c] * (ul + 2.0 * ur);
            }
        }
        (au, bu)
    }

    /// LDLᵀ pivots of `A - σB` as pairs `(c_i, g_i)` with `d_i = c_i + g_i`,
    /// where `-c_i` is the coupling to the next unknown (0 for the last).
    ///
    /// Writing `c²/(c + g) = c - c g/(c + g)` the recurrence only ever adds
    /// mass terms and a harmonic-type combination, so no two stiffness-sized
    /// numbers are subtracted even when stiffness spans 30 orders.
    fn pivots(&self, sigma: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.last - self.first + 1);
        for i in self.first..=self.last {
            let has_left = i > 0;
            let has_right = i < self.cells();
            let next_free = i < self.last;
            let mut g = 0.0;
            if has_left {
                let c = i - 1;
                if i == self.first {
                    g += self.k[c] - 2.0 * sigma * self.m[c];
                } else {
                    let (cp, gp) = out[out.len() - 1];
                    g += -3.0 * sigma * self.m[c] + cp * gp / (cp + gp);
                }
            }
            let mut coupling = 0.0;
            if has_right {
                if next_free {
                    coupling = self.k[i] + sigma * self.m[i];
                    g -= 3.0 * sigma * self.m[i];
                } else {
                    g += self.k[i] - 2.0 * sigma * self.m[i];
                }
            }
            out.push((coupling, g));
        }
        out
    }

    /// Number of eigenvalues of the pencil below `sigma`.
    fn count_below(&self, sigma: f64) -> usize {
        self.pivots(sigma)
            .iter()
            .filter(|(c, g)| !(c + g > 0.0))
            .count()
    }

    /// Solves `(A - σB) x = r`; the shift must lie below the spectrum.
    fn solve(&self, sigma: f64, r: &[f64]) -> Vec<f64> {
        let piv = self.pivots(sigma);
        let n = piv.len();
        let mut y = r.to_vec();
        for i in 1..n {
            let (c, g) = piv[i - 1];
            y[i] += c / (c + g) * y[i - 1];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let (c, g) = piv[i];
            let d = c + g;
            x[i] = y[i] / d;
            if i + 1 < n {
                x[i] += c / d * x[i + 1];
            }
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Range of node indices carrying unknowns.
fn free_range(bc: BoundaryConditions, nodes: usize) -> (usize, usize) {
    let first = if bc.left == EndCondition::Dirichlet {
        1
    } else {
        0
    };
    let last = if bc.right == EndCondition::Dirichlet {
        nodes - 2
    } else {
        nodes - 1
    };
    (first, last)
}

const INVERSE_ITERATION_CAP: usize = 200;

/// Smallest eigenpair of the piecewise-linear Galerkin discretization.
///
/// `λ₁` is bracketed by Sturm counts (negative LDLᵀ pivots of `A - σB`) and
/// bisected to relative `1e-13`; the eigenvector then comes from inverse
/// iteration at the lower bisection bound, and `λ` is its Rayleigh quotient.
/// Weights are scaled by their maxima, which leaves `λ` unchanged after
/// rescaling and keeps exponentially small weights representable.
pub fn first_eigen_fem(p: &WeightedProblem, m: &Mesh) -> Result<EigenSolution> {
    if !m.spans(p.interval) {
        return Err(Error::InvalidInput(
            "mesh does not span the problem interval".into(),
        ));
    }
    let (mut w, mut q) = cell_weights(p, m)?;
    let w_scale = w.iter().cloned().fold(0.0, f64::max);
    let q_scale = q.iter().cloned().fold(0.0, f64::max);
    // The floor keeps ratios beyond the double range from producing
    // subnormal pivots; such cells carry no mass at working precision.
    w.iter_mut()
        .for_each(|x| *x = (*x / w_scale).max(WEIGHT_FLOOR));
    q.iter_mut()
        .for_each(|x| *x = (*x / q_scale).max(WEIGHT_FLOOR));
    let (first, last) = free_range(p.bc, m.nodes.len());
    let pencil = Pencil::new(m, &w, &q, first, last);

    let mut hi = 1.0;
    while pencil.count_below(hi) == 0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence { iterations: 0 });
        }
    }
    let mut lo = 0.0;
    while lo == 0.0 && hi > 1e-300 {
        let mid = 0.5 * hi;
        if pencil.count_below(mid) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    while hi - lo > 1e-13 * hi {
        let mid = (lo * hi).sqrt();
        let mid = if mid > lo && mid < hi {
            mid
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        if pencil.count_below(mid) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut u = vec![1.0; last - first + 1];
    let mut rq_prev = f64::NAN;
    let mut converged = false;
    for it in 0..INVERSE_ITERATION_CAP {
        let (_, bu) = pencil.apply(&u);
        let mut x = pencil.solve(lo, &bu);
        let norm = dot(&x, &pencil.apply(&x).1).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NoConvergence { iterations: it + 1 });
        }
        x.iter_mut().for_each(|v| *v /= norm);
        u = x;
        let rq = dot(&u, &pencil.apply(&u).0);
        if it >= 1 && (rq - rq_prev).abs() <= 1e-12 * rq.abs() {
            converged = true;
            break;
        }
        rq_prev = rq;
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: INVERSE_ITERATION_CAP,
        });
    }

    let (au, bu) = pencil.apply(&u);
    let lambda_scaled = dot(&u, &au) / dot(&u, &bu);
    let res: f64 = au
        .iter()
        .zip(&bu)
        .map(|(x, y)| (x - lambda_scaled * y).powi(2))
        .sum::<f64>()
        .sqrt();
    let residual = res / (lambda_scaled * dot(&bu, &bu).sqrt());

    if u.iter().sum::<f64>() < 0.0 {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    // Unit norm in the unscaled mass: uᵀ B u = 1 / q_scale currently.
    let mass_norm = (dot(&u, &pencil.apply(&u).1) * q_scale).sqrt();
    let mut values = vec![0.0; m.nodes.len()];
    for (i, v) in u.iter().enumerate() {
        values[first + i] = v / mass_norm;
    }
    Ok(EigenSolution {
        lambda: lambda_scaled * w_scale / q_scale,
        eigenfunction: values,
        residual,
        mesh: m.clone(),
    })
}

/// Quotient `Σ ∫ u'² w / Σ ∫ u² q` of a piecewise-linear `u` given by nodal
/// values, with cell weights sampled at midpoints exactly as in
/// [`first_eigen_fem`].
pub fn rayleigh_quotient(u: &[f64], p: &WeightedProblem, m: &Mesh) -> Result<f64> {
    if u.len() != m.nodes.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} nodal values, got {}",
            m.nodes.len(),
            u.len()
        )));
    }
    let last = u.len() - 1;
    if (p.bc.left == EndCondition::Dirichlet && u[0] != 0.0)
        || (p.bc.right == EndCondition::Dirichlet && u[last] != 0.0)
    {
        return Err(Error::InvalidInput(
            "test function violates a Dirichlet condition".into(),
        ));
    }
    let (w, q) = cell_weights(p, m)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..m.cells() {
        let h = m.nodes[k + 1] - m.nodes[k];
        let (a, b) = (u[k], u[k + 1]);
        num += w[k] * (b - a) * (b - a) / h;
        den += q[k] * h * (a * a + a * b + b * b) / 3.0;
    }
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}

/// Prüfer angle equations for `(w u')' + λ q u = 0` with `u = R sin θ`,
/// `w u' = R cos θ`: returns `(θ', (ln R)')`.
fn prufer(p: &WeightedProblem, lambda: f64, s: f64, theta: f64) -> (f64, f64) {
    let (sn, cs) = theta.sin_cos();
    let w = p.weight(s);
    let q = p.mass_weight(s);
    (
        cs * cs / w + lambda * q * sn * sn,
        sn * cs * (1.0 / w - lambda * q),
    )
}

/// Dormand–Prince 5(4) integration of the Prüfer system from `a` to `b`,
/// calling `observe(s, θ, ln R)` at each requested output point.
#[allow(clippy::too_many_arguments)]
fn integrate_prufer(
    p: &WeightedProblem,
    lambda: f64,
    a: f64,
    b: f64,
    theta0: f64,
    rtol: f64,
    outputs: &[f64],
    mut observe: impl FnMut(usize, f64, f64),
) -> Result<f64> {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let atol = 1e-12;
    let mut s = a;
    let mut y = [theta0, 0.0];
    let mut h = (b - a) * 1e-3;
    let mut next_out = 0;
    while next_out < outputs.len() && outputs[next_out] <= s {
        observe(next_out, y[0], y[1]);
        next_out += 1;
    }
    let min_step = 1e-14 * (b - a).abs().max(a.abs()).max(b.abs());
    while s < b {
        let mut target = b;
        if next_out < outputs.len() {
            target = target.min(outputs[next_out]);
        }
        let step = h.min(target - s);
        let mut k = [[0.0; 2]; 7];
        for i in 0..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i) {
                yi[0] += step * A[i][j] * kj[0];
                yi[1] += step * A[i][j] * kj[1];
            }
            let (d0, d1) = prufer(p, lambda, s + C[i] * step, yi[0]);
            k[i] = [d0, d1];
        }
        let mut y5 = y;
        let mut err = 0.0_f64;
        for c in 0..2 {
            let mut hi5 = 0.0;
            let mut hi4 = 0.0;
            for i in 0..7 {
                hi5 += B5[i] * k[i][c];
                hi4 += B4[i] * k[i][c];
            }
            y5[c] += step * hi5;
            // ln R is only used for the eigenfunction shape; θ drives control.
            if c == 0 {
                let sc = atol + rtol * y[0].abs().max(y5[0].abs());
                err = err.max((step * (hi5 - hi4)).abs() / sc);
            }
        }
        if !err.is_finite() {
            h = 0.25 * step;
        } else if err <= 1.0 {
            // Land exactly on output points so they are always consumed.
            s = if step == target - s { target } else { s + step };
            y = y5;
            while next_out < outputs.len() && outputs[next_out] <= s {
                observe(next_out, y[0], y[1]);
                next_out += 1;
            }
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).min(5.0)
            };
            h = step * grow;
        } else {
            h = step * (0.9 * err.powf(-0.2)).max(0.2);
        }
        if h < min_step && s < b {
            return Err(Error::StiffnessFailure { x: s });
        }
    }
    Ok(y[0])
}

/// Start point and angle for the left end.
fn shoot_start(p: &WeightedProblem, lambda: f64) -> Result<(f64, f64)> {
    let iv = p.interval;
    let w_lo = p.weight(iv.lo());
    let degenerate = !(w_lo > 0.0) || !w_lo.is_finite();
    match p.bc.left {
        EndCondition::Dirichlet => {
            let start = if degenerate {
                iv.lo() + 1e-9 * iv.width()
            } else {
                iv.lo()
            };
            Ok((start, 0.0))
        }
        EndCondition::Natural if !degenerate => Ok((iv.lo(), 0.5 * std::f64::consts::PI)),
        EndCondition::Natural => {
            // Near the degenerate end u ≈ u(lo) and w u' ≈ -λ u Q(s), with
            // Q(s) = ∫_lo^s q, so cot θ = -λ Q(δ).
            let delta = 1e-7 * iv.width();
            let start = iv.lo() + delta;
            // q is treated as a local power s^p on (lo, lo + δ), which is
            // exact for the radial weights s^(μ-1).
            let (q1, q2) = (p.mass_weight(start), p.mass_weight(iv.lo() + 0.5 * delta));
            let power = (-(q2 / q1).log2()).clamp(-0.999, 1e3);
            let q_int = delta * q1 / (power + 1.0);
            if !q_int.is_finite() {
                return Err(Error::StiffnessFailure { x: start });
            }
            Ok((start, 0.5 * std::f64::consts::PI + (lambda * q_int).atan()))
        }
    }
}

/// Number of uniform cells on which the shooting eigenfunction is sampled.
const SHOOT_SAMPLES: usize = 256;

/// First eigenpair by shooting on the Prüfer angle.
///
/// `θ(hi; λ)` increases with `λ`; the first eigenvalue is where it reaches
/// `π` (Dirichlet right end) or `π/2` (natural right end), starting from
/// `θ = 0` (Dirichlet) or the natural-condition angle at the left end.
pub fn first_eigen_shoot(p: &WeightedProblem, tol: Tolerance) -> Result<EigenSolution> {
    use std::f64::consts::PI;
    let iv = p.interval;
    let target = match p.bc.right {
        EndCondition::Dirichlet => PI,
        EndCondition::Natural => 0.5 * PI,
    };
    let rtol = tol.rel.clamp(1e-13, 1e-8);
    let mismatch = |lambda: f64| -> Result<f64> {
        let (start, theta0) = shoot_start(p, lambda)?;
        Ok(integrate_prufer(p, lambda, start, iv.hi(), theta0, rtol, &[], |_, _, _| {})? - target)
    };
    let mut hi = 1.0;
    let mut lo = 0.0;
    while mismatch(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoConvergence { iterations: 0 });
        }
    }
    // Surface the first integrator failure rather than masking it as NaN.
    let failure = std::cell::RefCell::new(None);
    let lambda = find_root(
        |l| match mismatch(l) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        Interval::new(lo, hi)?,
        Tolerance::new(tol.abs.max(1e-300), tol.rel.max(1e-14), 300)?,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let lambda = lambda?;

    let mesh = Mesh::uniform(iv, SHOOT_SAMPLES)?;
    let (start, theta0) = shoot_start(p, lambda)?;
    let mut theta = vec![0.0; mesh.nodes.len()];
    let mut log_r = vec![0.0; mesh.nodes.len()];
    let outputs: Vec<f64> = mesh.nodes.iter().map(|&x| x.max(start)).collect();
    let end = integrate_prufer(
        p,
        lambda,
        start,
        iv.hi(),
        theta0,
        rtol,
        &outputs,
        |i, t, r| {
            theta[i] = t;
            log_r[i] = r;
        },
    )?;
    let r_max = log_r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut u: Vec<f64> = theta
        .iter()
        .zip(&log_r)
        .map(|(t, r)| (r - r_max).exp() * t.sin())
        .collect();
    if p.bc.left == EndCondition::Dirichlet {
        u[0] = 0.0;
    }
    if p.bc.right == EndCondition::Dirichlet {
        let last = u.len() - 1;
        u[last] = 0.0;
    }
    let h = iv.width() / SHOOT_SAMPLES as f64;
    let mass: f64 = u
        .iter()
        .zip(&mesh.nodes)
        .enumerate()
        .map(|(i, (v, &x))| {
            let end_factor = if i == 0 || i == SHOOT_SAMPLES {
                0.5
            } else {
                1.0
            };
            let xq = x.clamp(start, iv.hi());
            end_factor * v * v * p.mass_weight(xq)
        })
        .sum::<f64>()
        * h;
    let norm = mass.sqrt();
    if norm > 0.0 && norm.is_finite() {
        u.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(EigenSolution {
        lambda,
        eigenfunction: u,
        residual: (end - target).abs(),
        mesh,
    })
}
