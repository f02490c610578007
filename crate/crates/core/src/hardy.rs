//! Hardy inequalities, the radial eigenvalue bound, and capacities on
//! radial models.
//!
//! A radial model reduces the Laplacian to a weighted 1-D quotient in the
//! distance variable: `ℝⁿ` with weight `r^{n-1}` and `ρ = r`, or a warped
//! surface with weight `η'(t)` and `ρ = |t|`. The Hardy quotient
//! `∫ u'² w / ∫ u² w/ρ_ε²` with `ρ_ε = √(ρ² + ε²)` is a generalized
//! eigenproblem handled by [`crate::sturm`].

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{integrate, Interval, Tolerance};
use crate::special::{gamma, lambda_mu, DimensionParam};
use crate::sturm::{first_eigen_fem, BoundaryConditions, EigenSolution, Mesh, WeightedProblem};
use crate::surface::{ball_mesh, h_bounds, Profile, DEFAULT_CUTOFFS};

/// Regularization `ε` in `ρ_ε = √(ρ² + ε²)`.
pub const DEFAULT_EPSILON: f64 = 1e-3;

/// Allowed shortfall of the discrete infimum below the sharp constant.
pub const HARDY_TOLERANCE: f64 = 5e-3;

/// Largest dimension accepted by [`check_prop17`].
pub const MAX_PROP17_DIMENSION: u32 = 20;

/// Relative tolerance of [`check_prop17`].
pub const PROP17_TOLERANCE: f64 = 5e-3;

#[derive(Debug, Clone)]
pub enum ModelKind {
    /// `ℝⁿ`, `n ≥ 2`.
    EuclideanRadial(u32),
    WarpedSurface(Profile),
}

#[derive(Debug, Clone)]
pub struct RadialModel {
    kind: ModelKind,
}

impl RadialModel {
    pub fn euclidean(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "euclidean model needs n >= 2, got {n}"
            )));
        }
        Ok(Self {
            kind: ModelKind::EuclideanRadial(n),
        })
    }

    pub fn warped(p: Profile) -> Self {
        Self {
            kind: ModelKind::WarpedSurface(p),
        }
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// Open domain of the radial variable.
    pub fn domain(&self) -> (f64, f64) {
        match self.kind {
            ModelKind::EuclideanRadial(_) => (0.0, f64::INFINITY),
            ModelKind::WarpedSurface(_) => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn weight(&self, s: f64) -> f64 {
        match &self.kind {
            ModelKind::EuclideanRadial(n) => s.powi(*n as i32 - 1),
            ModelKind::WarpedSurface(p) => p.eta_prime(s),
        }
    }

    pub fn rho(&self, s: f64) -> f64 {
        s.abs()
    }

    /// Largest `μ` with `Δρ² ≥ 2μ` on the support. Exact for `ℝⁿ`; for a
    /// surface `Δρ² = 2 + 2t (ln η')'`, sampled with central differences.
    pub fn mu_effective(&self, support: Interval) -> f64 {
        match &self.kind {
            ModelKind::EuclideanRadial(n) => *n as f64,
            ModelKind::WarpedSurface(p) => {
                const SAMPLES: usize = 2048;
                let h = 1e-5 * support.width();
                (1..SAMPLES)
                    .map(|i| {
                        let t = support.lo() + support.width() * i as f64 / SAMPLES as f64;
                        let d = (p.eta_prime(t + h).ln() - p.eta_prime(t - h).ln()) / (2.0 * h);
                        1.0 + t * d
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    fn check_support(&self, support: Interval) -> Result<()> {
        let (lo, hi) = self.domain();
        if support.lo() < lo || support.hi() > hi {
            return Err(Error::InvalidInput(format!(
                "support ({}, {}) leaves the model domain",
                support.lo(),
                support.hi()
            )));
        }
        Ok(())
    }
}

/// Mesh suited to the Hardy quotients on `support`.
///
/// Euclidean supports touching the origin get a uniform block on `[0, ε]`
/// followed by nodes uniform in `ln r`, which resolves both the
/// regularization scale and the `r^{-(n-2)/2}` profile of near-minimizers.
/// Surfaces use the adaptive ball mesh when the support is symmetric.
pub fn hardy_mesh(m: &RadialModel, support: Interval, cells: usize, epsilon: f64) -> Result<Mesh> {
    match &m.kind {
        ModelKind::EuclideanRadial(_) => {
            if support.lo() > 0.0 {
                return Mesh::logarithmic(support, cells);
            }
            let knee = epsilon.min(0.5 * support.hi());
            let inner = (cells / 16).max(8);
            let outer = cells.saturating_sub(inner).max(8);
            let mut nodes: Vec<f64> = (0..inner).map(|i| knee * i as f64 / inner as f64).collect();
            nodes.extend(Mesh::logarithmic(Interval::new(knee, support.hi())?, outer)?.nodes());
            Mesh::from_nodes(nodes)
        }
        ModelKind::WarpedSurface(p) => {
            if support.lo() == -support.hi() {
                ball_mesh(p, support.hi(), cells)
            } else {
                Mesh::uniform(support, cells)
            }
        }
    }
}

/// `∫ u'² w / ∫ u² w/ρ_ε²` on `support`, Dirichlet at both ends.
pub fn hardy_problem(m: &RadialModel, support: Interval, epsilon: f64) -> Result<WeightedProblem> {
    m.check_support(support)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidInput(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let (a, b) = (m.clone(), m.clone());
    let e2 = epsilon * epsilon;
    Ok(WeightedProblem::new(
        support,
        move |s| a.weight(s),
        BoundaryConditions::dirichlet(),
    )
    .with_potential_weight(move |s| {
        let r = b.rho(s);
        b.weight(s) / (r * r + e2)
    }))
}

#[derive(Debug, Clone)]
pub struct HardyReport {
    pub mu_effective: f64,
    pub discrete_infimum: f64,
    /// `((μ-2)/2)²`.
    pub sharp_constant: f64,
    pub epsilon: f64,
    pub support: Interval,
    /// Discrete minimizer on its mesh.
    pub minimizer: EigenSolution,
}

impl HardyReport {
    /// `discrete_infimum - sharp_constant`.
    pub fn excess(&self) -> f64 {
        self.discrete_infimum - self.sharp_constant
    }

    pub fn within_tolerance(&self) -> bool {
        self.excess() >= -HARDY_TOLERANCE
    }
}

/// Discrete Hardy infimum with `ε = DEFAULT_EPSILON`.
pub fn hardy_infimum(m: &RadialModel, mesh: &Mesh, support: Interval) -> Result<HardyReport> {
    hardy_infimum_with_epsilon(m, mesh, support, DEFAULT_EPSILON)
}

pub fn hardy_infimum_with_epsilon(
    m: &RadialModel,
    mesh: &Mesh,
    support: Interval,
    epsilon: f64,
) -> Result<HardyReport> {
    let mu = m.mu_effective(support);
    if !(mu > 2.0) {
        return Err(Error::MeaninglessConstant { mu });
    }
    let sharp = (0.5 * (mu - 2.0)).powi(2);
    let sol = first_eigen_fem(&hardy_problem(m, support, epsilon)?, mesh)?;
    Ok(HardyReport {
        mu_effective: mu,
        discrete_infimum: sol.lambda,
        sharp_constant: sharp,
        epsilon,
        support,
        minimizer: sol,
    })
}

/// Quotient `∫ u'² w / ∫ u² w/ρ²` of `u = ρ^{-(μ-2)/2} v(ln ρ)` on the
/// annulus `a < ρ < b`, with `v` a trapezoid whose ramps each take 3/8 of
/// `ln(b/a)`.
///
/// Substituting `s = ln ρ` turns the quotient into
/// `((μ-2)/2)² + ∫ v'² / ∫ v²` when `w = ρ^{μ-1}`; the ramp length
/// minimizes the second term among trapezoids.
pub fn near_optimizer_quotient(m: &RadialModel, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "annulus needs 0 < a < b < inf, got ({a}, {b})"
        )));
    }
    let support = Interval::new(a, b)?;
    m.check_support(support)?;
    let mu = m.mu_effective(support);
    if !(mu > 2.0) {
        return Err(Error::MeaninglessConstant { mu });
    }
    let k = 0.5 * (mu - 2.0);
    let (s0, s1) = (a.ln(), b.ln());
    let ramp = 0.375 * (s1 - s0);
    let v = |s: f64| ((s - s0) / ramp).min((s1 - s) / ramp).clamp(0.0, 1.0);
    let dv = |s: f64| {
        if s < s0 + ramp {
            1.0 / ramp
        } else if s > s1 - ramp {
            -1.0 / ramp
        } else {
            0.0
        }
    };
    // `r = e^s`, `u = r^{-k} v`, `u' = r^{-k-1} (v' - k v)`, `dr = r ds`;
    // every power of `r` is folded into one exponent against `w(r)`.
    let num = |s: f64| {
        let r = s.exp();
        (v(s) * -k + dv(s)).powi(2) * (-(2.0 * k + 1.0) * s).exp() * m.weight(r)
    };
    let den = |s: f64| {
        let r = s.exp();
        v(s).powi(2) * (-(2.0 * k + 1.0) * s).exp() * m.weight(r)
    };
    let tol = Tolerance::new(0.0, 1e-12, 60)?;
    let cuts = [s0, s0 + ramp, s1 - ramp, s1];
    let mut n = 0.0;
    let mut d = 0.0;
    for w in cuts.windows(2) {
        let iv = Interval::new(w[0], w[1])?;
        n += integrate(num, iv, tol)?;
        d += integrate(den, iv, tol)?;
    }
    Ok(n / d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop17Report {
    pub n: u32,
    pub r: f64,
    pub lambda1: f64,
    /// `λ_n / r²`.
    pub predicted: f64,
    pub relative_error: f64,
    pub pass: bool,
}

/// Compares `λ₁(B(0, r))` in `ℝⁿ` (radial quotient, natural at 0) with
/// `λ_n / r²`.
pub fn check_prop17(n: u32, r: f64) -> Result<Prop17Report> {
    if !(2..=MAX_PROP17_DIMENSION).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "dimension must lie in [2, {MAX_PROP17_DIMENSION}], got {n}"
        )));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("r must be positive, got {r}")));
    }
    let iv = Interval::new(0.0, r)?;
    let p = WeightedProblem::new(
        iv,
        move |s: f64| s.powi(n as i32 - 1),
        BoundaryConditions::natural_left(),
    );
    let sol = first_eigen_fem(&p, &Mesh::power_graded(iv, 4000, 1.5)?)?;
    let predicted = lambda_mu(DimensionParam::new(n as f64)?)?.lambda / (r * r);
    let relative_error = (sol.lambda - predicted).abs() / predicted;
    Ok(Prop17Report {
        n,
        r,
        lambda1: sol.lambda,
        predicted,
        relative_error,
        pass: relative_error <= PROP17_TOLERANCE,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityValue {
    pub r0: f64,
    /// Outer radius, possibly `+∞`.
    pub outer: f64,
    pub value: f64,
}

/// Area of the unit sphere in `ℝⁿ`.
fn sphere_area(n: u32) -> f64 {
    let h = 0.5 * n as f64;
    2.0 * PI.powf(h) / gamma(h)
}

/// Capacity of `{ρ ≤ r0}` relative to `{ρ < R}`, from the explicit radial
/// potential: `ω_{n-1} / ∫_{r0}^R s^{1-n} ds` in `ℝⁿ`, and
/// `2π / ∫ dt/η'` summed over the two ends of a surface. `R = +∞` is
/// allowed; surfaces then use the tails of `h`. On a surface `r0 = 0` is
/// allowed and means the waist circle.
pub fn capacity(m: &RadialModel, r0: f64, outer: f64) -> Result<CapacityValue> {
    let floor_ok = match m.kind {
        ModelKind::EuclideanRadial(_) => r0 > 0.0,
        ModelKind::WarpedSurface(_) => r0 >= 0.0,
    };
    if !floor_ok || !r0.is_finite() || !(outer > r0) {
        return Err(Error::InvalidInput(format!(
            "capacity needs 0 < r0 < R, got r0 = {r0}, R = {outer}"
        )));
    }
    let value = match &m.kind {
        ModelKind::EuclideanRadial(n) => {
            let resistance = if *n == 2 {
                (outer / r0).ln()
            } else {
                let k = *n as f64 - 2.0;
                (r0.powf(-k) - outer.powf(-k)) / k
            };
            sphere_area(*n) / resistance
        }
        ModelKind::WarpedSurface(p) => {
            let (right, left) = if outer.is_finite() {
                (p.h(outer)? - p.h(r0)?, p.h(-r0)? - p.h(-outer)?)
            } else {
                let v = h_bounds(p, &DEFAULT_CUTOFFS)?;
                if v.h_sup.is_nan() || v.h_inf.is_nan() {
                    return Err(Error::InconclusiveTail(
                        "one tail of 1/eta' is undetermined".into(),
                    ));
                }
                (v.h_sup - p.h(r0)?, p.h(-r0)? - v.h_inf)
            };
            2.0 * PI * (1.0 / right + 1.0 / left)
        }
    };
    Ok(CapacityValue { r0, outer, value })
}

/// Capacity by minimizing the discrete energy `∫ u'² w` over piecewise
/// linear `u` with `u(r0) = 1`, `u(R) = 0` on a logarithmic mesh.
/// Euclidean models only; cross-checks [`capacity`].
pub fn capacity_discrete(m: &RadialModel, r0: f64, outer: f64, cells: usize) -> Result<f64> {
    let ModelKind::EuclideanRadial(n) = m.kind else {
        return Err(Error::InvalidInput(
            "discrete capacity is implemented for euclidean models".into(),
        ));
    };
    if !(r0 > 0.0 && outer > r0 && outer.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "capacity needs 0 < r0 < R < inf, got ({r0}, {outer})"
        )));
    }
    let mesh = Mesh::logarithmic(Interval::new(r0, outer)?, cells)?;
    let x = mesh.nodes();
    // Cell conductances `w(mid) / h`; the stiffness system is a weighted
    // path graph, so the minimal energy is the series conductance.
    let resistance: f64 = x
        .windows(2)
        .map(|c| {
            let h = c[1] - c[0];
            h / m.weight(0.5 * (c[0] + c[1]))
        })
        .sum();
    Ok(sphere_area(n) / resistance)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyScanRow {
    pub support: Interval,
    pub cells: usize,
    /// Discrete infimum of `∫ u'² w / ∫ u² w/(1+ρ²)`.
    pub infimum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardyScanReport {
    pub rows: Vec<HardyScanRow>,
    /// Smallest infimum over the schedule.
    pub lower_bound: f64,
    /// Largest relative change under mesh refinement on a fixed support;
    /// NaN when no support appears at two mesh sizes.
    pub refinement_change: f64,
    /// `refinement_change` at most [`STABILITY_TOLERANCE`].
    pub stable: bool,
}

pub const STABILITY_TOLERANCE: f64 = 0.05;

/// Discrete infimum of the non-sharp Hardy quotient with weight
/// `1/(1+ρ²)` over a schedule of supports and mesh sizes.
pub fn verify_hardy_scan(
    m: &RadialModel,
    schedule: &[(Interval, usize)],
) -> Result<HardyScanReport> {
    if schedule.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let probe = match m.kind {
        ModelKind::EuclideanRadial(_) => 1.0,
        ModelKind::WarpedSurface(_) => 0.0,
    };
    if !(capacity(m, probe, f64::INFINITY)?.value > 0.0) {
        return Err(Error::Precondition(
            "the model is parabolic; no Hardy inequality holds".into(),
        ));
    }
    let mut rows = schedule
        .par_iter()
        .map(|&(support, cells)| {
            m.check_support(support)?;
            let (a, b) = (m.clone(), m.clone());
            let p = WeightedProblem::new(
                support,
                move |s| a.weight(s),
                BoundaryConditions::dirichlet(),
            )
            .with_potential_weight(move |s| b.weight(s) / (1.0 + b.rho(s).powi(2)));
            let mesh = hardy_mesh(m, support, cells, DEFAULT_EPSILON)?;
            Ok(HardyScanRow {
                support,
                cells,
                infimum: first_eigen_fem(&p, &mesh)?.lambda,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| {
        (x.support.width(), x.support.lo(), x.cells)
            .partial_cmp(&(y.support.width(), y.support.lo(), y.cells))
            .expect("finite supports")
    });
    let lower_bound = rows.iter().map(|r| r.infimum).fold(f64::INFINITY, f64::min);
    // Rows are sorted by (width, start, cells): consecutive rows on one support are
    // successive refinements.
    let refinement_change = rows
        .windows(2)
        .filter(|w| w[0].support == w[1].support)
        .map(|w| (w[1].infimum - w[0].infimum).abs() / w[1].infimum)
        .fold(f64::NAN, f64::max);
    if !(lower_bound > 0.0) {
        return Err(Error::InvariantViolation(format!(
            "Hardy infimum {lower_bound} is not positive"
        )));
    }
    Ok(HardyScanReport {
        rows,
        lower_bound,
        refinement_change,
        stable: refinement_change <= STABILITY_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sturm::rayleigh_quotient;

    fn euclid_report(n: u32, hi: f64, cells: usize) -> HardyReport {
        let m = RadialModel::euclidean(n).unwrap();
        let iv = Interval::new(0.0, hi).unwrap();
        let mesh = hardy_mesh(&m, iv, cells, DEFAULT_EPSILON).unwrap();
        hardy_infimum(&m, &mesh, iv).unwrap()
    }

    #[test]
    fn sharp_constant_bracketed_for_n3() {
        for hi in [1.0, 10.0] {
            let r = euclid_report(3, hi, 4000);
            assert_eq!(r.sharp_constant, 0.25);
            assert!(r.within_tolerance(), "{hi}: {}", r.discrete_infimum);
            assert!(r.excess() < 0.3, "{hi}: {}", r.discrete_infimum);
        }
    }

    #[test]
    fn minimizer_quotient_is_the_eigenvalue() {
        let m = RadialModel::euclidean(4).unwrap();
        let iv = Interval::new(0.0, 10.0).unwrap();
        let mesh = hardy_mesh(&m, iv, 2000, DEFAULT_EPSILON).unwrap();
        let r = hardy_infimum(&m, &mesh, iv).unwrap();
        let p = hardy_problem(&m, iv, DEFAULT_EPSILON).unwrap();
        let q = rayleigh_quotient(&r.minimizer.eigenfunction, &p, &mesh).unwrap();
        assert!((q / r.discrete_infimum - 1.0).abs() < 1e-10);
    }

    #[test]
    fn n2_is_meaningless() {
        let m = RadialModel::euclidean(2).unwrap();
        let iv = Interval::new(0.0, 10.0).unwrap();
        let mesh = hardy_mesh(&m, iv, 200, DEFAULT_EPSILON).unwrap();
        assert!(matches!(
            hardy_infimum(&m, &mesh, iv),
            Err(Error::MeaninglessConstant { .. })
        ));
    }

    #[test]
    fn near_optimizer_matches_trapezoid_formula() {
        // C + 32 / (3 T²) with T = ln(b/a), from ∫v'² = 2/L, ∫v² = P + 2L/3.
        for n in [3_u32, 4, 5] {
            let m = RadialModel::euclidean(n).unwrap();
            let (a, b) = (1e-6_f64, 1e6_f64);
            let t = (b / a).ln();
            let c = (0.5 * (n as f64 - 2.0)).powi(2);
            let q = near_optimizer_quotient(&m, a, b).unwrap();
            assert!((q - (c + 32.0 / (3.0 * t * t))).abs() < 1e-9, "n {n}: {q}");
        }
    }

    #[test]
    fn prop17_examples() {
        let r = check_prop17(2, 1.0).unwrap();
        assert!((r.lambda1 - 5.7832).abs() < 0.005 * 5.7832 && r.pass);
        let r = check_prop17(3, 2.0).unwrap();
        assert!((r.lambda1 - PI * PI / 4.0).abs() < 0.005 * PI * PI / 4.0);
        assert!(check_prop17(21, 1.0).is_err());
        assert!(check_prop17(3, 0.0).is_err());
    }

    #[test]
    fn euclidean_capacities() {
        let m3 = RadialModel::euclidean(3).unwrap();
        let c = capacity(&m3, 1.0, f64::INFINITY).unwrap().value;
        assert!((c - 4.0 * PI).abs() < 1e-12);
        let m2 = RadialModel::euclidean(2).unwrap();
        assert_eq!(capacity(&m2, 1.0, f64::INFINITY).unwrap().value, 0.0);
        // ω₁ / ln R
        let c = capacity(&m2, 1.0, 10.0).unwrap().value;
        assert!((c - 2.0 * PI / 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn discrete_capacity_cross_check() {
        let m = RadialModel::euclidean(3).unwrap();
        let exact = capacity(&m, 1.0, 10.0).unwrap().value;
        // 4π / (1 - 1/10)
        assert!((exact - 4.0 * PI / 0.9).abs() < 1e-12);
        let d = capacity_discrete(&m, 1.0, 10.0, 400).unwrap();
        assert!((d / exact - 1.0).abs() < 0.01);
    }

    #[test]
    fn dprs_capacity_positive_limit() {
        let m = RadialModel::warped(Profile::dprs());
        let c = capacity(&m, 0.0, f64::INFINITY).unwrap().value;
        // right end ∫₀^∞ e^{-t} dt = 1, left end diverges
        assert!((c - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn capacity_decreases_in_outer_radius() {
        let m = RadialModel::warped(Profile::power_law(3.0).unwrap());
        let mut prev = f64::INFINITY;
        for outer in [2.0, 4.0, 8.0, 16.0, f64::INFINITY] {
            let c = capacity(&m, 1.0, outer).unwrap().value;
            assert!(c < prev && c > 0.0);
            prev = c;
        }
    }

    #[test]
    fn parabolic_model_has_no_hardy_scan() {
        let m = RadialModel::euclidean(2).unwrap();
        let iv = Interval::new(0.0, 10.0).unwrap();
        assert!(matches!(
            verify_hardy_scan(&m, &[(iv, 500)]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn epsilon_halving_away_from_origin() {
        let m = RadialModel::euclidean(3).unwrap();
        let iv = Interval::new(1.0, 10.0).unwrap();
        let mesh = hardy_mesh(&m, iv, 2000, DEFAULT_EPSILON).unwrap();
        let a = hardy_infimum_with_epsilon(&m, &mesh, iv, 1e-3).unwrap();
        let b = hardy_infimum_with_epsilon(&m, &mesh, iv, 5e-4).unwrap();
        assert!((a.discrete_infimum - b.discrete_infimum).abs() < 1e-4);
    }

    #[test]
    fn hardy_scan_examples() {
        let iv = |a: f64, b: f64| Interval::new(a, b).unwrap();
        let m = RadialModel::euclidean(3).unwrap();
        let r = verify_hardy_scan(&m, &[(iv(0.0, 10.0), 1000), (iv(0.0, 10.0), 2000)]).unwrap();
        assert!(r.lower_bound >= 0.24 && r.stable);
        let m = RadialModel::euclidean(4).unwrap();
        let r = verify_hardy_scan(&m, &[(iv(0.0, 50.0), 1000), (iv(0.0, 50.0), 2000)]).unwrap();
        assert!(r.lower_bound >= 0.95 && r.stable);
        let m = RadialModel::warped(Profile::power_law(6.0).unwrap());
        let r = verify_hardy_scan(&m, &[(iv(-50.0, 50.0), 1000), (iv(-50.0, 50.0), 2000)]).unwrap();
        assert!(r.lower_bound > 0.0 && r.stable);
    }
}
