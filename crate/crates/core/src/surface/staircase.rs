//! A concrete staircase profile: `η' = e^t` except near `t = 2ⁿ`, where it
//! descends to a plateau `n²` on `[2ⁿ, 2ⁿ + 1]` and climbs back, `n ≥ 2`.
//!
//! On `[2ⁿ - 1, 2ⁿ]` and `[2ⁿ + 1, 2ⁿ + 2]` `η'` is the cubic Hermite
//! interpolant matching the neighbouring values and slopes, so `η'` is C¹.
//! Writing the descent as `n² + H00 (A - n²) + H10 A` and the ascent as
//! `n² + τ² ((2 - τ) B - (3 - 2τ) n²)` shows both stay `≥ n²` whenever
//! `A ≥ n²` and `B ≥ 3n²`, which holds for every `n ≥ 2`.

/// Largest `t` at which `η'` is finite in double precision.
pub const MAX_T: f64 = 700.0;
/// Plateaus are built for `n = 2..=LAST_N`; `2^(LAST_N+1) - 1` exceeds
/// [`MAX_T`].
const LAST_N: u32 = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Exp,
    Plateau(f64),
    /// Values and derivatives at the segment ends (unit length).
    Hermite {
        p0: f64,
        m0: f64,
        p1: f64,
        m1: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct Segment {
    a: f64,
    b: f64,
    shape: Shape,
    /// `η(a)`.
    eta_a: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Staircase {
    segments: Vec<Segment>,
}

/// Factored basis: the end values span `e^{2ⁿ}` against `n²`, and the
/// expanded power basis would cancel them away near the plateau.
fn hermite(tau: f64, p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let s = 1.0 - tau;
    s * s * ((1.0 + 2.0 * tau) * p0 + tau * m0) + tau * tau * ((3.0 - 2.0 * tau) * p1 - s * m1)
}

fn hermite_antiderivative(tau: f64, p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let t2 = tau * tau;
    let t3 = t2 * tau;
    let t4 = t3 * tau;
    (0.5 * t4 - t3 + tau) * p0
        + (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2) * m0
        + (-0.5 * t4 + t3) * p1
        + (0.25 * t4 - t3 / 3.0) * m1
}

impl Segment {
    fn eta_prime(&self, t: f64) -> f64 {
        match self.shape {
            Shape::Exp => t.exp(),
            Shape::Plateau(v) => v,
            Shape::Hermite { p0, m0, p1, m1 } => hermite(t - self.a, p0, m0, p1, m1),
        }
    }

    /// `∫_a^t η'`.
    fn partial(&self, t: f64) -> f64 {
        match self.shape {
            Shape::Exp => self.a.exp() * (t - self.a).exp_m1(),
            Shape::Plateau(v) => v * (t - self.a),
            Shape::Hermite { p0, m0, p1, m1 } => hermite_antiderivative(t - self.a, p0, m0, p1, m1),
        }
    }
}

impl Staircase {
    pub(crate) fn new() -> Self {
        let mut segments = Vec::new();
        let mut eta = 3.0_f64.exp();
        let mut push = |a: f64, b: f64, shape: Shape, segments: &mut Vec<Segment>| {
            let seg = Segment {
                a,
                b,
                shape,
                eta_a: eta,
            };
            eta += seg.partial(b);
            segments.push(seg);
        };
        for n in 2..=LAST_N {
            let p = 2f64.powi(n as i32);
            let plateau = (n * n) as f64;
            let top = (p - 1.0).exp();
            push(
                p - 1.0,
                p,
                Shape::Hermite {
                    p0: top,
                    m0: top,
                    p1: plateau,
                    m1: 0.0,
                },
                &mut segments,
            );
            push(p, p + 1.0, Shape::Plateau(plateau), &mut segments);
            let rise = (p + 2.0).exp();
            push(
                p + 1.0,
                p + 2.0,
                Shape::Hermite {
                    p0: plateau,
                    m0: 0.0,
                    p1: rise,
                    m1: rise,
                },
                &mut segments,
            );
            push(p + 2.0, 2.0 * p - 1.0, Shape::Exp, &mut segments);
        }
        Self { segments }
    }

    fn segment(&self, t: f64) -> Option<&Segment> {
        if t <= 3.0 {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.b < t);
        self.segments.get(idx.min(self.segments.len() - 1))
    }

    pub(crate) fn eta_prime(&self, t: f64) -> f64 {
        match self.segment(t) {
            None => t.exp(),
            Some(s) => s.eta_prime(t),
        }
    }

    pub(crate) fn eta(&self, t: f64) -> f64 {
        match self.segment(t) {
            None => t.exp(),
            Some(s) => s.eta_a + s.partial(t),
        }
    }

    /// Segment endpoints in `(3, MAX_T]`, plus 3.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        let mut out = vec![3.0];
        out.extend(self.segments.iter().map(|s| s.b).filter(|&b| b <= MAX_T));
        out
    }

    /// Plateau index `n` whose plateau starts at `2ⁿ`, for the largest
    /// `2ⁿ + 1 ≤ r` with `n ≥ 2`.
    pub(crate) fn anchor(r: f64) -> Option<(u32, f64)> {
        let mut best = None;
        for n in 2..=LAST_N {
            let a = 2f64.powi(n as i32) + 1.0;
            if a <= r {
                best = Some((n, a));
            }
        }
        best
    }

    /// Plateau levels beyond the last built segment contribute `1/n²` each to
    /// `∫ dt/η'`; the descending/ascending pieces there contribute below
    /// `1e-100`.
    pub(crate) fn tail_inverse_integral() -> f64 {
        let partial: f64 = (1..=LAST_N).map(|n| 1.0 / (n * n) as f64).sum();
        std::f64::consts::PI.powi(2) / 6.0 - partial
    }

    /// Right end of the last built segment.
    pub(crate) fn built_end(&self) -> f64 {
        self.segments.last().map(|s| s.b).unwrap_or(3.0)
    }
}
