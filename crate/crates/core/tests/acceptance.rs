//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.
//! Runtime limits are wall-clock and count as part of each criterion.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::bessel_first_zero_oracle;
use rand::{rngs::StdRng, Rng, SeedableRng};
use spectral_type::cli::default_window;
use spectral_type::hardy::{
    check_prop17, hardy_infimum, hardy_mesh, near_optimizer_quotient, RadialModel, DEFAULT_EPSILON,
};
use spectral_type::numerics::Interval;
use spectral_type::special::{
    check_lemma21, check_lemma23, first_zero, inverse_lambda, lambda_mu, BesselOrder,
    DimensionParam,
};
use spectral_type::sturm::{first_eigen_fem, BoundaryConditions, Mesh, WeightedProblem};
use spectral_type::surface::{
    check_scan, estimate, geometric_grid, h_bounds, lambda1_ball, scan, test_function_upper_bound,
    Profile, Quantity, SlowlyVarying, SolverOptions, Verdict, DEFAULT_CUTOFFS,
};

type Outcome = Result<String, String>;

/// `(id, title, time limit in seconds, check)`.
type Criterion = (u32, &'static str, f64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lam(mu: f64) -> f64 {
    lambda_mu(DimensionParam::new(mu).unwrap()).unwrap().lambda
}

fn c1_bessel() -> Outcome {
    let mut worst: f64 = 0.0;
    for nu in [-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0, 20.0, 60.0] {
        let got = first_zero(BesselOrder::new(nu).unwrap()).unwrap();
        let d = (got - bessel_first_zero_oracle(nu)).abs();
        ensure(d < 1e-9, format!("nu={nu}: |diff| = {d:.2e}"))?;
        worst = worst.max(d);
    }
    let (l2, l3) = (lam(2.0), lam(3.0));
    ensure((5.7831..=5.7833).contains(&l2), format!("lambda_2 = {l2}"))?;
    ensure((l3 - PI * PI).abs() < 1e-8, format!("lambda_3 = {l3}"))?;
    Ok(format!(
        "max |j - oracle| = {worst:.1e}, lambda_2 = {l2:.6}, lambda_3 - pi^2 = {:.1e}",
        l3 - PI * PI
    ))
}

fn c2_sturm() -> Outcome {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let mut worst_err: f64 = 0.0;
    let mut worst_order = f64::INFINITY;
    for mu in [2.0, 3.0, 4.0, 6.0, 10.0] {
        let p = WeightedProblem::new(
            iv,
            move |s: f64| s.powf(mu - 1.0),
            BoundaryConditions::natural_left(),
        );
        let exact = lam(mu);
        let errs: Vec<f64> = [1000, 2000, 4000]
            .iter()
            .map(|&n| {
                let m = Mesh::power_graded(iv, n, 1.5).unwrap();
                (first_eigen_fem(&p, &m).unwrap().lambda - exact).abs() / exact
            })
            .collect();
        ensure(errs[2] < 2e-3, format!("mu={mu}: rel err {:.2e}", errs[2]))?;
        let order = (errs[1] / errs[2]).log2().min((errs[0] / errs[1]).log2());
        ensure(order >= 1.8, format!("mu={mu}: observed order {order:.3}"))?;
        worst_err = worst_err.max(errs[2]);
        worst_order = worst_order.min(order);
    }
    Ok(format!(
        "max rel err at 4000 cells {worst_err:.1e}, min observed order {worst_order:.3}"
    ))
}

fn c3_lemmas() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let r = if i % 2 == 0 {
            let mu: f64 = rng.gen_range(1.0..10.0);
            let a: f64 = rng.gen_range(0.0..0.9);
            let b: f64 = rng.gen_range(a + 0.05..1.0);
            let r = check_lemma21(DimensionParam::new(mu).unwrap(), a, b).unwrap();
            ensure(r < 1e-8, format!("energy mu={mu} a={a} b={b}: {r:.2e}"))?;
            r
        } else {
            let mu: f64 = rng.gen_range(2.05..10.0);
            let x: f64 = rng.gen_range(0.05..1.0);
            let r = check_lemma23(DimensionParam::new(mu).unwrap(), x).unwrap();
            ensure(r < 1e-8, format!("hardy mu={mu} x={x}: {r:.2e}"))?;
            r
        };
        worst = worst.max(r);
    }
    Ok(format!(
        "20 random configurations, max residual {worst:.1e}"
    ))
}

fn c4_prop17() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        for r in [0.5, 1.0, 3.0] {
            let rep = check_prop17(n, r).unwrap();
            ensure(
                rep.relative_error <= 5e-3,
                format!("n={n} r={r}: {:.2e}", rep.relative_error),
            )?;
            worst = worst.max(rep.relative_error);
        }
    }
    Ok(format!("max relative error {worst:.1e}"))
}

fn c5_hardy() -> Outcome {
    let mut parts = Vec::new();
    for n in [3u32, 4, 5] {
        let m = RadialModel::euclidean(n).unwrap();
        let c = ((n as f64 - 2.0) / 2.0).powi(2);
        let slack: Vec<f64> = [10.0, 20.0, 50.0]
            .iter()
            .map(|&hi| {
                let s = Interval::new(0.0, hi).unwrap();
                let mesh = hardy_mesh(&m, s, 8000, DEFAULT_EPSILON).unwrap();
                hardy_infimum(&m, &mesh, s).unwrap().discrete_infimum - c
            })
            .collect();
        ensure(
            (-5e-3..=0.3).contains(&slack[0]),
            format!("n={n}: slack on (0,10) {:.4}", slack[0]),
        )?;
        ensure(
            slack[0] > slack[1] && slack[1] > slack[2],
            format!("n={n}: slack not shrinking {slack:?}"),
        )?;
        let q = near_optimizer_quotient(&m, 1e-6, 1e6).unwrap();
        ensure(
            (q - c).abs() <= 0.1 * c,
            format!("n={n}: near-optimizer {q} vs {c}"),
        )?;
        parts.push(format!(
            "n={n} slack {:.3}/{:.3}/{:.3} near-opt/C {:.3}",
            slack[0],
            slack[1],
            slack[2],
            q / c
        ));
    }
    Ok(parts.join("; "))
}

fn c6_type() -> Outcome {
    let v = |p: Profile| h_bounds(&p, &DEFAULT_CUTOFFS).unwrap().verdict;
    let mut cases: Vec<(String, Profile, Verdict)> = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        cases.push((
            format!("PL{a}"),
            Profile::power_law(a).unwrap(),
            Verdict::Parabolic,
        ));
    }
    for a in [2.5, 3.0, 6.0] {
        cases.push((
            format!("PL{a}"),
            Profile::power_law(a).unwrap(),
            Verdict::Hyperbolic,
        ));
    }
    cases.push((
        "exp".into(),
        Profile::exponential_decay(1.0).unwrap(),
        Verdict::Parabolic,
    ));
    cases.push(("dprs".into(), Profile::dprs(), Verdict::Hyperbolic));
    cases.push((
        "staircase".into(),
        Profile::staircase(),
        Verdict::Hyperbolic,
    ));
    let count = cases.len();
    for (name, p, want) in cases {
        let got = v(p);
        ensure(got == want, format!("{name}: {got:?}, expected {want:?}"))?;
    }
    Ok(format!("{count} profiles classified"))
}

fn builtin() -> Vec<Profile> {
    vec![
        Profile::power_law(0.5).unwrap(),
        Profile::power_law(3.0).unwrap(),
        Profile::power_law(6.0).unwrap(),
        Profile::exponential_decay(1.0).unwrap(),
        Profile::dprs(),
        Profile::staircase(),
        Profile::slowly_varying(SlowlyVarying::LogPower { beta: 1.0 }).unwrap(),
        Profile::slowly_varying(SlowlyVarying::Power { alpha: 0.5 }).unwrap(),
        Profile::slowly_varying(SlowlyVarying::LogLog { gamma: 1.0 }).unwrap(),
    ]
}

fn c7_sandwich() -> Outcome {
    let dprs = Profile::dprs();
    let mut floor = f64::INFINITY;
    for r in [4.0, 8.0, 16.0] {
        let l = lambda1_ball(&dprs, r, SolverOptions::default())
            .unwrap()
            .lambda;
        let up = test_function_upper_bound(&dprs, r).unwrap();
        ensure(l >= 0.25, format!("r={r}: lambda {l}"))?;
        ensure(l <= up, format!("r={r}: lambda {l} above upper {up}"))?;
        floor = floor.min(l);
    }
    let mut rows = 0;
    for p in builtin() {
        let (lo, hi) = default_window(&p);
        let grid = geometric_grid(lo, hi, 1.25).unwrap();
        let scanned = scan(&p, &grid, SolverOptions::default())
            .map_err(|e| format!("{}: {e}", p.describe()))?;
        check_scan(&scanned).map_err(|e| format!("{}: {e}", p.describe()))?;
        rows += scanned.len();
    }
    Ok(format!(
        "dprs min lambda {floor:.4}; sandwich holds on {rows} rows of 9 profiles"
    ))
}

fn c8_exp() -> Outcome {
    let p = Profile::exponential_decay(1.0).unwrap();
    let grid = geometric_grid(8.0, 24.0, 1.1).unwrap();
    let rows = scan(&p, &grid, SolverOptions::default()).map_err(|e| e.to_string())?;
    // least squares slope of -log λ against r
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.r, -r.lambda1.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    ensure((0.85..=1.15).contains(&slope), format!("slope {slope}"))?;
    let w = Interval::new(8.0, 24.0).unwrap();
    let opts = SolverOptions::default();
    let a = estimate(&p, Quantity::AlphaStar, w, 12, opts)
        .unwrap()
        .value;
    ensure((0.98..=1.02).contains(&a), format!("alpha_* {a}"))?;
    let t = estimate(&p, Quantity::LambdaTilde, w, 12, opts)
        .unwrap()
        .value;
    ensure(
        t >= a - 0.05,
        format!("Lambda_tilde {t} < alpha_* {a} - 0.05"),
    )?;
    Ok(format!(
        "slope {slope:.4}, alpha_* {a:.4}, Lambda_tilde_* {t:.4}"
    ))
}

fn c9_slowly() -> Outcome {
    let p = Profile::slowly_varying(SlowlyVarying::Power { alpha: 0.5 }).unwrap();
    let mut vals = Vec::new();
    for r in [25.0, 50.0, 100.0, 200.0] {
        let l = lambda1_ball(&p, r, SolverOptions::default())
            .unwrap()
            .lambda;
        ensure(
            (0.2..=5.0).contains(&(l * r)),
            format!("r={r}: lambda*r {}", l * r),
        )?;
        vals.push(format!("{:.3}", l * r));
    }
    Ok(format!("lambda*r = {}", vals.join(", ")))
}

fn c10_volume() -> Outcome {
    let p = Profile::power_law(6.0).unwrap();
    let w = Interval::new(10.0, 200.0).unwrap();
    let opts = SolverOptions::default();
    let nu = estimate(&p, Quantity::NuStar, w, 12, opts).unwrap().value;
    ensure((nu - 6.0).abs() <= 0.05, format!("nu_* {nu}"))?;
    let ls = estimate(&p, Quantity::LambdaStar, w, 12, opts)
        .unwrap()
        .value;
    let cap = lam(6.05);
    ensure(ls <= cap, format!("Lambda_* {ls} > lambda_6.05 {cap}"))?;
    let mu = inverse_lambda(ls).unwrap();
    let grid = geometric_grid(10.0, 200.0, 1.05).unwrap();
    let rows = scan(&p, &grid, opts).map_err(|e| e.to_string())?;
    let min_ratio = rows
        .iter()
        .map(|r| r.vol_ball / r.r.powf(mu))
        .fold(f64::INFINITY, f64::min);
    ensure(
        min_ratio > 0.0 && min_ratio.is_finite(),
        format!("min |B_r|/r^mu = {min_ratio}"),
    )?;
    Ok(format!(
        "nu_* {nu:.4}, Lambda_* {ls:.4} <= {cap:.4}, mu {mu:.4}, min |B_r|/r^mu {min_ratio:.3e}"
    ))
}

fn c11_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_spectral-type");
    let args = [
        "scan",
        "--family",
        "power_law",
        "--alpha",
        "3",
        "--no-banner",
    ];
    let a = Command::new(bin)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let b = Command::new(bin)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(a.status.success() && b.status.success(), "scan failed")?;
    ensure(a.stdout == b.stdout, "outputs differ")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "bessel oracle", 5.0, c1_bessel),
        (2, "weighted sturm reproduces lambda_mu", 30.0, c2_sturm),
        (3, "integral identity residuals", 10.0, c3_lemmas),
        (4, "euclidean ball eigenvalues", 20.0, c4_prop17),
        (5, "sharp hardy constant", 60.0, c5_hardy),
        (6, "type classification", 5.0, c6_type),
        (7, "dprs floor and sandwich", 60.0, c7_sandwich),
        (8, "exponential decay rates", 90.0, c8_exp),
        (9, "slowly varying two-sided bound", 120.0, c9_slowly),
        (10, "volume growth and Lambda_*", 60.0, c10_volume),
        (11, "determinism", 10.0, c11_determinism),
    ];
    let mut failed = 0;
    for (id, title, limit, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(d) if secs > limit => Err(format!("{d}; over the time limit")),
            o => o,
        };
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {id} {title}: {detail} [{secs:.2} s, limit {limit} s]");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
