//! Bessel functions, the eigenvalue constant `λ_μ = j²_{μ/2-1}` and the
//! radial extremals `ψ_μ(s) = s^{1-μ/2} J_{μ/2-1}(√λ_μ s)` and
//! `Φ(s) = J_{μ/2-1}(√λ_μ s)`.

mod bessel;
mod gamma;

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

pub use bessel::{bessel_j, first_zero, BesselOrder, MAX_ARGUMENT, MAX_ORDER};
pub use gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate, integrate_graded, Interval, Tolerance};

/// Largest supported dimension parameter, matching `MAX_ORDER`.
pub const MAX_MU: f64 = 2.0 * (MAX_ORDER + 1.0);

/// Dimension parameter `μ > 0`; the order of the associated Bessel
/// function is `μ/2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionParam(f64);

impl DimensionParam {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !(mu <= MAX_MU) {
            return Err(Error::OutOfSupportedRange(format!(
                "dimension parameter mu = {mu} outside (0, {MAX_MU}]"
            )));
        }
        Ok(Self(mu))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// Bessel order `μ/2 - 1`.
    pub fn order(&self) -> BesselOrder {
        BesselOrder::new(0.5 * self.0 - 1.0).expect("mu range maps into the order range")
    }

    /// `((μ-2)/2)²`, the sharp Hardy constant; only meaningful for `μ > 2`.
    pub fn hardy_constant(&self) -> Result<f64> {
        if self.0 <= 2.0 {
            return Err(Error::MeaninglessConstant { mu: self.0 });
        }
        let h = 0.5 * (self.0 - 2.0);
        Ok(h * h)
    }
}

/// `λ_μ` together with the zero `j = √λ_μ` it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConstant {
    pub mu: DimensionParam,
    pub j: f64,
    /// Stored as exactly `j * j`.
    pub lambda: f64,
}

fn memo() -> &'static RwLock<HashMap<u64, EigenConstant>> {
    static MEMO: OnceLock<RwLock<HashMap<u64, EigenConstant>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `λ_μ = j²_{μ/2-1}`, memoized per `μ`.
pub fn lambda_mu(mu: DimensionParam) -> Result<EigenConstant> {
    let key = mu.0.to_bits();
    if let Some(hit) = memo().read().ok().and_then(|m| m.get(&key).copied()) {
        return Ok(hit);
    }
    let j = first_zero(mu.order())?;
    let value = EigenConstant {
        mu,
        j,
        lambda: j * j,
    };
    if let Ok(mut m) = memo().write() {
        m.insert(key, value);
    }
    Ok(value)
}

/// The `μ` with `λ_μ = lambda`; `λ_μ` is increasing in `μ`, ranging over
/// `(0, λ_MAX_MU]`.
pub fn inverse_lambda(lambda: f64) -> Result<f64> {
    let lo = 1e-6;
    let f = |mu: f64| {
        let j = bessel::first_zero(BesselOrder::new(0.5 * mu - 1.0).expect("in range"))
            .unwrap_or(f64::NAN);
        j * j - lambda
    };
    let (flo, fhi) = (f(lo), f(MAX_MU));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::OutOfSupportedRange(format!(
            "lambda = {lambda} outside the range of mu -> lambda_mu"
        )));
    }
    find_root(
        f,
        Interval::new(lo, MAX_MU)?,
        Tolerance::new(1e-12, 1e-12, 200)?,
    )
}

fn check_unit(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfSupportedRange(format!(
            "s = {s} outside [0, 1]"
        )));
    }
    Ok(())
}

impl EigenConstant {
    fn nu(&self) -> f64 {
        0.5 * self.mu.0 - 1.0
    }

    /// `ψ_μ(s)`, finite at `s = 0` for every `μ > 0`.
    pub fn psi(&self, s: f64) -> Result<f64> {
        check_unit(s)?;
        Ok(bessel::scaled_j(self.nu(), self.j, s))
    }

    /// `ψ_μ'(s) = -k s · s^{-(ν+1)} J_{ν+1}(k s)` with `k = √λ_μ`.
    pub fn psi_prime(&self, s: f64) -> Result<f64> {
        check_unit(s)?;
        Ok(-self.j * s * bessel::scaled_j(self.nu() + 1.0, self.j, s))
    }

    /// `ψ_μ''(s)`, from differentiating the recurrence once more.
    pub fn psi_second(&self, s: f64) -> Result<f64> {
        check_unit(s)?;
        let k = self.j;
        let nu = self.nu();
        Ok(
            -k * bessel::scaled_j(nu + 1.0, k, s)
                + k * k * s * s * bessel::scaled_j(nu + 2.0, k, s),
        )
    }

    /// `Φ(s) = J_ν(k s)`.
    pub fn phi(&self, s: f64) -> Result<f64> {
        check_unit(s)?;
        Ok(bessel::j_unchecked(self.nu(), self.j * s))
    }

    /// `Φ'(s) = k J_ν'(k s)`.
    pub fn phi_prime(&self, s: f64) -> Result<f64> {
        check_unit(s)?;
        Ok(self.j * bessel::j_prime_unchecked(self.nu(), self.j * s))
    }

    /// `Φ''(s) = k² J_ν''(k s)` via Bessel's equation; only used for
    /// residual checks, so `s > 0`.
    fn phi_second(&self, s: f64) -> Result<f64> {
        let nu = self.nu();
        let z = self.j * s;
        // Differentiate J_ν'(z) = ν z^{ν-1} g_ν - z^{ν+1} g_{ν+1} using
        // g_ν' = -z g_{ν+1}; Bessel's equation itself is not used so the
        // residual check stays independent.
        let g = |o: f64| bessel::scaled_j(o, 1.0, z);
        let lead = if nu == 0.0 {
            0.0
        } else {
            nu * (nu - 1.0) * z.powf(nu - 2.0) * g(nu) - nu * z.powf(nu) * g(nu + 1.0)
        };
        let second = lead - (nu + 1.0) * z.powf(nu) * g(nu + 1.0) + z.powf(nu + 2.0) * g(nu + 2.0);
        Ok(self.j * self.j * second)
    }
}

/// `ψ_μ(s)`.
pub fn psi(mu: DimensionParam, s: f64) -> Result<f64> {
    lambda_mu(mu)?.psi(s)
}

/// `ψ_μ'(s)`.
pub fn psi_prime(mu: DimensionParam, s: f64) -> Result<f64> {
    lambda_mu(mu)?.psi_prime(s)
}

/// `Φ(s)` for the order `μ/2 - 1`.
pub fn phi(mu: DimensionParam, s: f64) -> Result<f64> {
    lambda_mu(mu)?.phi(s)
}

/// `Φ'(s)` for the order `μ/2 - 1`.
pub fn phi_prime(mu: DimensionParam, s: f64) -> Result<f64> {
    lambda_mu(mu)?.phi_prime(s)
}

/// Residual of `ψ'' + (μ-1)/s ψ' + λ_μ ψ = 0` at `s ∈ (0, 1]`, divided by
/// the largest of the three terms (and 1), so it is meaningful when `ψ`
/// itself is large.
pub fn psi_ode_residual(mu: DimensionParam, s: f64) -> Result<f64> {
    let e = lambda_mu(mu)?;
    if !(s > 0.0) {
        return Err(Error::OutOfSupportedRange(format!(
            "s = {s} must be positive"
        )));
    }
    let t1 = e.psi_second(s)?;
    let t2 = (mu.0 - 1.0) / s * e.psi_prime(s)?;
    let t3 = e.lambda * e.psi(s)?;
    let scale = t1.abs().max(t2.abs()).max(t3.abs()).max(1.0);
    Ok((t1 + t2 + t3).abs() / scale)
}

/// Residual of `Φ'' + Φ'/s + (λ_μ - (μ-2)²/(4s²)) Φ = 0`, scaled as in
/// [`psi_ode_residual`].
pub fn phi_ode_residual(mu: DimensionParam, s: f64) -> Result<f64> {
    let e = lambda_mu(mu)?;
    if !(s > 0.0) || s > 1.0 {
        return Err(Error::OutOfSupportedRange(format!(
            "s = {s} outside (0, 1]"
        )));
    }
    let c = 0.25 * (mu.0 - 2.0) * (mu.0 - 2.0);
    let t1 = e.phi_second(s)?;
    let t2 = e.phi_prime(s)? / s;
    let t3 = e.lambda * e.phi(s)?;
    let t4 = -c / (s * s) * e.phi(s)?;
    let scale = [t1, t2, t3, t4].iter().fold(1.0_f64, |m, t| m.max(t.abs()));
    Ok((t1 + t2 + t3 + t4).abs() / scale)
}

fn quad_tol() -> Tolerance {
    Tolerance::new(1e-13, 1e-12, 60).expect("valid tolerance")
}

/// Grading exponent making `s^(p)` with `p > -1` bounded after substitution.
fn grading_for(power: f64) -> f64 {
    if power >= 0.0 {
        1.0
    } else {
        (1.0 / (1.0 + power)).max(1.0)
    }
}

/// Checks the energy identity
/// `∫_a^b (λ_μ ψ² - ψ'²) s^{μ-1} ds = -ψ'(b)ψ(b)b^{μ-1} + ψ'(a)ψ(a)a^{μ-1}`
/// and the flux identity `ψ'(b) b^{μ-1} = -λ_μ ∫_0^b ψ t^{μ-1} dt`.
/// Returns the larger of the two absolute residuals.
pub fn check_lemma21(mu: DimensionParam, a: f64, b: f64) -> Result<f64> {
    check_unit(a)?;
    check_unit(b)?;
    if a > b {
        return Err(Error::InvalidInput(format!(
            "need a <= b, got a = {a}, b = {b}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let e = lambda_mu(mu)?;
    let m = mu.0;
    let weight = |s: f64| if s == 0.0 { 0.0 } else { s.powf(m - 1.0) };
    let boundary = |s: f64| -> Result<f64> {
        if s == 0.0 {
            // ψ'(s) = O(s) so ψ'ψ s^{μ-1} = O(s^μ) -> 0.
            return Ok(0.0);
        }
        Ok(e.psi_prime(s)? * e.psi(s)? * weight(s))
    };
    let grading = if a == 0.0 { grading_for(m - 1.0) } else { 1.0 };
    let iv = Interval::new(a, b)?;
    let lhs = integrate_graded(
        |s| {
            let p = e.psi(s).unwrap_or(f64::NAN);
            let dp = e.psi_prime(s).unwrap_or(f64::NAN);
            (e.lambda * p * p - dp * dp) * weight(s)
        },
        iv,
        quad_tol(),
        grading,
    )?;
    let rhs = -boundary(b)? + boundary(a)?;
    let energy = (lhs - rhs).abs();

    let flux_lhs = e.psi_prime(b)? * weight(b);
    let flux_int = integrate_graded(
        |t| e.psi(t).unwrap_or(f64::NAN) * weight(t),
        Interval::new(0.0, b)?,
        quad_tol(),
        grading_for(m - 1.0),
    )?;
    let flux = (flux_lhs + e.lambda * flux_int).abs();
    Ok(energy.max(flux))
}

/// Checks
/// `∫_0^x Φ'² s ds = λ_μ ∫_0^x Φ² s ds - ((μ-2)/2)² ∫_0^x Φ²/s ds + Φ'(x)Φ(x)x`
/// for `μ > 2`, returning the absolute residual.
pub fn check_lemma23(mu: DimensionParam, x: f64) -> Result<f64> {
    let c = mu.hardy_constant()?;
    if !(x > 0.0) || x > 1.0 {
        return Err(Error::OutOfSupportedRange(format!(
            "x = {x} outside (0, 1]"
        )));
    }
    let (lhs, rhs) = lemma23_sides(mu, x, c)?;
    Ok((lhs - rhs).abs())
}

/// Both sides of the Φ identity, exposed for tests that bound their size.
pub fn lemma23_sides(mu: DimensionParam, x: f64, c: f64) -> Result<(f64, f64)> {
    let e = lambda_mu(mu)?;
    let nu = e.nu();
    let iv = Interval::new(0.0, x)?;
    // Φ ~ s^ν near 0, so Φ²/s ~ s^{2ν-1} and Φ'² s ~ s^{2ν-1}.
    let grading = grading_for(2.0 * nu - 1.0);
    let tol = quad_tol();
    let dphi2 = integrate_graded(
        |s| {
            let d = e.phi_prime(s).unwrap_or(f64::NAN);
            d * d * s
        },
        iv,
        tol,
        grading,
    )?;
    let phi2 = integrate(
        |s| {
            let p = e.phi(s).unwrap_or(f64::NAN);
            p * p * s
        },
        iv,
        tol,
    )?;
    let phi2_over_s = integrate_graded(
        |s| {
            if s == 0.0 {
                return 0.0;
            }
            let p = e.phi(s).unwrap_or(f64::NAN);
            p * p / s
        },
        iv,
        tol,
        grading,
    )?;
    let boundary = e.phi_prime(x)? * e.phi(x)? * x;
    Ok((dphi2, e.lambda * phi2 - c * phi2_over_s + boundary))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(mu: f64) -> DimensionParam {
        DimensionParam::new(mu).unwrap()
    }

    #[test]
    fn dimension_range() {
        assert!(DimensionParam::new(0.0).is_err());
        assert!(DimensionParam::new(242.5).is_err());
        assert!(matches!(
            dim(2.0).hardy_constant(),
            Err(Error::MeaninglessConstant { .. })
        ));
        assert_eq!(dim(4.0).hardy_constant().unwrap(), 1.0);
    }

    #[test]
    fn lambda_three_is_pi_squared() {
        let e = lambda_mu(dim(3.0)).unwrap();
        assert!((e.lambda - std::f64::consts::PI.powi(2)).abs() < 1e-8);
        assert_eq!(e.lambda, e.j * e.j);
    }

    #[test]
    fn psi_endpoints() {
        for &m in &[0.3, 1.0, 2.0, 3.0, 7.5, 40.0] {
            let e = lambda_mu(dim(m)).unwrap();
            assert!(e.psi(1.0).unwrap().abs() < 1e-10, "mu = {m}");
            assert_eq!(e.psi_prime(0.0).unwrap(), 0.0);
            assert!(e.psi(0.0).unwrap().is_finite());
        }
        assert!(psi(dim(3.0), 1.5).is_err());
    }

    #[test]
    fn psi_matches_direct_formula() {
        let e = lambda_mu(dim(4.0)).unwrap();
        let direct = bessel::j_unchecked(1.0, e.j * 0.5) / 0.5;
        assert!((e.psi(0.5).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn psi_prime_matches_difference_quotient() {
        let e = lambda_mu(dim(5.0)).unwrap();
        let h = 1e-6;
        for &s in &[0.1, 0.4, 0.9] {
            let fd = (e.psi(s + h).unwrap() - e.psi(s - h).unwrap()) / (2.0 * h);
            assert!((fd - e.psi_prime(s).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn phi_examples() {
        let e = lambda_mu(dim(4.0)).unwrap();
        assert_eq!(e.phi(0.0).unwrap(), 0.0);
        assert!(e.phi(1.0).unwrap().abs() < 1e-10);
        let v = phi(dim(3.0), 0.5).unwrap();
        let expected = (2.0 / (std::f64::consts::PI * std::f64::consts::FRAC_PI_2)).sqrt();
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn lemma21_examples() {
        assert!(check_lemma21(dim(3.0), 0.0, 1.0).unwrap() < 1e-8);
        assert!(check_lemma21(dim(2.0), 0.25, 0.75).unwrap() < 1e-8);
        assert_eq!(check_lemma21(dim(6.0), 0.4, 0.4).unwrap(), 0.0);
        assert!(check_lemma21(dim(0.5), 0.0, 0.8).unwrap() < 1e-8);
    }

    #[test]
    fn lemma23_examples() {
        assert!(check_lemma23(dim(4.0), 1.0).unwrap() < 1e-8);
        assert!(check_lemma23(dim(3.0), 0.5).unwrap() < 1e-8);
        // Near 0, Φ' ≈ k/2 so both sides behave like λ x²/8.
        let x = 1e-3;
        let (l, r) = lemma23_sides(dim(4.0), x, 1.0).unwrap();
        let lam = lambda_mu(dim(4.0)).unwrap().lambda;
        assert!((l / (lam * x * x / 8.0) - 1.0).abs() < 1e-4);
        assert!((l - r).abs() < 1e-15);
        assert!(matches!(
            check_lemma23(dim(2.0), 0.5),
            Err(Error::MeaninglessConstant { .. })
        ));
    }

    #[test]
    fn ode_residuals_small() {
        for &m in &[0.2, 1.0, 2.0, 3.3, 10.0, 50.0] {
            for &s in &[0.05, 0.3, 0.77, 1.0] {
                assert!(
                    psi_ode_residual(dim(m), s).unwrap() < 1e-9,
                    "psi mu={m} s={s}"
                );
                assert!(
                    phi_ode_residual(dim(m), s).unwrap() < 1e-9,
                    "phi mu={m} s={s}"
                );
            }
        }
    }

    #[test]
    fn inverse_lambda_roundtrip() {
        for &m in &[0.5, 2.0, 6.05, 33.0] {
            let l = lambda_mu(dim(m)).unwrap().lambda;
            assert!((inverse_lambda(l).unwrap() - m).abs() < 1e-8);
        }
        assert!(inverse_lambda(-1.0).is_err());
    }
}
