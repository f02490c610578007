//! Oracles shared by the integration tests. Nothing here calls the crate.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Fixed-point scale `2^FRACTION_BITS` of the series oracle.
const FRACTION_BITS: u32 = 1024;

/// Exact `(m, e)` with `x = m / 2^e` for finite `x`.
fn dyadic(x: f64) -> (BigInt, u32) {
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let mut mantissa = bits & ((1u64 << 52) - 1);
    let exp = if biased == 0 {
        -1074
    } else {
        mantissa |= 1u64 << 52;
        biased - 1075
    };
    let mut m = BigInt::from(mantissa);
    if negative {
        m = -m;
    }
    if exp >= 0 {
        (m << exp as usize, 0)
    } else {
        (m, (-exp) as u32)
    }
}

/// Sign of `Σ_k (-x²/4)^k / (k! (ν+1)_k)`, which is the sign of `J_ν(x)`
/// for `x > 0`, `ν > -1`. Exact rational recursion in 1024-bit fixed point.
pub fn bessel_series_sign(nu: f64, x: f64) -> i32 {
    let (xm, xe) = dyadic(x);
    let (nm, ne) = dyadic(nu);
    let one_nu = BigInt::from(1) << ne as usize;
    let num = &xm * &xm * &one_nu;
    let den_base = BigInt::from(1) << (2 * xe + 2) as usize;
    let mut term = BigInt::from(1) << FRACTION_BITS as usize;
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        let shift = &nm + &one_nu * BigInt::from(k);
        let den = &den_base * BigInt::from(k) * shift;
        term = -(&term * &num) / den;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
        assert!(k < 100_000, "series did not terminate");
    }
    if sum.is_zero() {
        0
    } else if sum.is_positive() {
        1
    } else {
        -1
    }
}

/// First positive zero of `J_ν` by scanning the exact series sign and then
/// bisecting to a relative width of `1e-14`.
pub fn bessel_first_zero_oracle(nu: f64) -> f64 {
    // j_{ν,1} > ν for ν > 0; zeros are about π apart, so the step cannot
    // skip one.
    let step = 0.05;
    let mut lo = if nu > 0.0 { nu } else { 1e-3 };
    assert_eq!(bessel_series_sign(nu, lo), 1);
    let mut hi = lo + step;
    while bessel_series_sign(nu, hi) > 0 {
        lo = hi;
        hi += step;
    }
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if bessel_series_sign(nu, mid) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `j_{0,1}²` to double precision.
pub const J0_SQUARED: f64 = 5.783185962946784;

/// Simpson's rule on `n` (even) panels; a quadrature independent of the
/// crate's Kronrod rules.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}
