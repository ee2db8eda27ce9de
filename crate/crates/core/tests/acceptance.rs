//! Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if
//! any criterion fails. INFO lines carry context that is not judged.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use cscs_core::baselines::{
    bartels_stewart_solve, bssor_solve, hss_solve, kron_oracle_solve, BssorOptions, HssOptions,
};
use cscs_core::cscs::{build_context, cscs_solve, cscs_solve_with, shifts_for, CscsOptions, ShiftPolicy};
use cscs_core::dense::{max_abs, relative_error};
use cscs_core::problems::{
    convection_diffusion_example1, example3_instance, example3_instance_with, example4_instance, RhsMode, Scheme,
};
use cscs_core::{DenseMatrix, SolveReport, ToeplitzSpec};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};
use rand::Rng;

type Outcome = Result<String, String>;

fn info(line: impl AsRef<str>) {
    println!("INFO  {}", line.as_ref());
}

fn within(got: usize, want: usize, frac: f64) -> bool {
    (got as f64 - want as f64).abs() <= frac * want as f64
}

// 1 -------------------------------------------------------------------------

fn oracle_equivalence() -> Outcome {
    let mut g = rng(1);
    let mut bssor_checked = 0;
    let mut worst = 0.0_f64;
    for case in 0..50 {
        let n = g.random_range(1..=16);
        let m = g.random_range(1..=16);
        let a = seeded_dominant(&mut g, n);
        let b = seeded_dominant(&mut g, m);
        let cm = seeded_matrix(&mut g, n, m);
        let (da, db) = (a.to_dense(), b.to_dense());
        let want = kron_oracle_solve(&da, &db, &cm).map_err(|e| format!("case {case}: oracle {e}"))?;

        let sel = shifts_for(&a, &b);
        if sel.theta_min <= 0.0 {
            return Err(format!("case {case}: generated instance is not positive definite"));
        }
        let cscs = cscs_solve(&a, &b, &cm, &CscsOptions::default().tol(1e-8)).map_err(|e| e.to_string())?;
        let hss = hss_solve(&da, &db, &cm, &HssOptions::new(sel.alpha, sel.beta).tol(1e-8)).map_err(|e| e.to_string())?;
        let bs = bartels_stewart_solve(&da, &db, &cm).map_err(|e| e.to_string())?;
        for (name, x, ok) in [("cscs", &cscs.x, cscs.converged()), ("hss", &hss.x, hss.converged()), ("bartels_stewart", &bs, true)] {
            let err = relative_error(x, &want);
            worst = worst.max(err);
            if !ok || err > 1e-6 {
                return Err(format!("case {case} ({n}x{m}): {name} converged={ok} error {err:.2e}"));
            }
        }
        let bssor = bssor_solve(&da, &db, &cm, &BssorOptions::new(1.0).tol(1e-8)).map_err(|e| e.to_string())?;
        if bssor.converged() {
            bssor_checked += 1;
            let err = relative_error(&bssor.x, &want);
            worst = worst.max(err);
            if err > 1e-6 {
                return Err(format!("case {case}: bssor error {err:.2e}"));
            }
        }
    }
    Ok(format!("50 instances, bssor converged on {bssor_checked}, worst relative error {worst:.2e}"))
}

// 2 -------------------------------------------------------------------------

fn contraction_bound_holds() -> Outcome {
    let mut g = rng(2);
    let mut checks = 0;
    for case in 0..20 {
        let n = g.random_range(2..=10);
        let m = g.random_range(2..=(100 / n).min(10));
        let a = seeded_dominant(&mut g, n);
        let b = seeded_dominant(&mut g, m);
        let gamma_star = shifts_for(&a, &b).gamma_star;
        for k in 0..10 {
            let gamma = gamma_star * 10f64.powf(-2.0 + 4.0 * k as f64 / 9.0);
            check_contraction(&a, &b, gamma).map_err(|e| format!("case {case} ({n}x{m}): {e}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (instance, gamma) pairs with rho(M) <= sigma_gamma + 1e-10"))
}

// 3 -------------------------------------------------------------------------

fn gamma_star_optimal() -> Outcome {
    let mut g = rng(3);
    for case in 0..100 {
        let theta_min = 10f64.powf(g.random_range(-3.0..1.0));
        let theta_max = theta_min + 10f64.powf(g.random_range(-2.0..2.5));
        // half the boxes straddle the branch switch at eta_tilde
        let eta_tilde = (theta_min * (theta_max - theta_min) / 2.0).sqrt();
        let eta_max = if case % 2 == 0 { g.random_range(0.0..eta_tilde) } else { eta_tilde * g.random_range(1.0..20.0) };
        check_gamma_optimal(theta_min, theta_max, eta_max).map_err(|e| format!("box {case}: {e}"))?;
    }
    Ok("100 boxes, gamma* within one step of the 10^4-point grid minimum".into())
}

// 4 -------------------------------------------------------------------------

fn example3_counts() -> Outcome {
    let cscs_rows = [(0.01, 64, 0.130, 32), (0.01, 128, 0.070, 60), (0.1, 64, 0.14, 31), (1.0, 64, 0.26, 26), (1.0, 256, 0.11, 61)];
    let mut fails = Vec::new();
    let mut got = Vec::new();
    for &(r, n, alpha, want) in &cscs_rows {
        let p = example3_instance(n, r).map_err(|e| e.to_string())?;
        let rep = cscs_solve(&p.a, &p.b, &p.c, &CscsOptions::with_shifts(alpha, alpha)).map_err(|e| e.to_string())?;
        got.push(format!("cscs r={r} n={n}: {} (target {want})", rep.iterations));
        if !rep.converged() || !within(rep.iterations, want, 0.2) {
            fails.push(format!("cscs r={r} n={n} alpha={alpha}: {} iters vs {want}", rep.iterations));
        }

        let q = example3_instance_with(n, r, RhsMode::Uniform { seed: 2021 }).map_err(|e| e.to_string())?;
        let alt = cscs_solve(&q.a, &q.b, &q.c, &CscsOptions::with_shifts(alpha, alpha)).map_err(|e| e.to_string())?;
        info(format!("example 3 uniform-random C (seed 2021): cscs r={r} n={n}: {} iters (target {want})", alt.iterations));
    }

    let p = example3_instance(64, 0.01).map_err(|e| e.to_string())?;
    let (da, db) = (p.a.to_dense(), p.b.to_dense());
    let hss = hss_solve(&da, &db, &p.c, &HssOptions::new(0.17, 0.17)).map_err(|e| e.to_string())?;
    got.push(format!("hss: {} (target 123)", hss.iterations));
    if !hss.converged() || !within(hss.iterations, 123, 0.2) {
        fails.push(format!("hss r=0.01 n=64: {} iters vs 123", hss.iterations));
    }

    let p = example3_instance(64, 1.0).map_err(|e| e.to_string())?;
    let (da, db) = (p.a.to_dense(), p.b.to_dense());
    let bssor = bssor_solve(&da, &db, &p.c, &BssorOptions::new(1.5)).map_err(|e| e.to_string())?;
    got.push(format!("bssor: {} (target 22)", bssor.iterations));
    if !bssor.converged() || !within(bssor.iterations, 22, 0.2) {
        fails.push(format!("bssor r=1 n=64: {} iters vs 22", bssor.iterations));
    }

    let mode = RhsMode::Uniform { seed: 2021 };
    let q = example3_instance_with(64, 0.01, mode).map_err(|e| e.to_string())?;
    let h = hss_solve(&q.a.to_dense(), &q.b.to_dense(), &q.c, &HssOptions::new(0.17, 0.17)).map_err(|e| e.to_string())?;
    let q = example3_instance_with(64, 1.0, mode).map_err(|e| e.to_string())?;
    let s = bssor_solve(&q.a.to_dense(), &q.b.to_dense(), &q.c, &BssorOptions::new(1.5)).map_err(|e| e.to_string())?;
    info(format!("example 3 uniform-random C (seed 2021): hss {} iters, bssor {} iters", h.iterations, s.iterations));

    if fails.is_empty() {
        Ok(format!("all-ones solution C: {}", got.join("; ")))
    } else {
        Err(fails.join("; "))
    }
}

// 5 -------------------------------------------------------------------------

fn example1_counts() -> Outcome {
    let mut parts = Vec::new();
    let mut fails = Vec::new();
    for (sigma, alpha, want) in [(2.0, 0.10, 42), (10.0, 0.20, 29)] {
        // h = 0.04 means n = 24
        let p = convection_diffusion_example1(24, sigma, sigma, Scheme::Centered).map_err(|e| e.to_string())?;
        let rep = cscs_solve(&p.a, &p.b, &p.c, &CscsOptions::with_shifts(alpha, alpha)).map_err(|e| e.to_string())?;
        parts.push(format!("sigma={sigma}: {} (target {want})", rep.iterations));
        if !rep.converged() || !within(rep.iterations, want, 0.2) {
            fails.push(format!("sigma={sigma}: {} iters vs {want}", rep.iterations));
        }
    }
    if fails.is_empty() {
        Ok(parts.join("; "))
    } else {
        Err(fails.join("; "))
    }
}

// 6 -------------------------------------------------------------------------

fn first_below(rep: &SolveReport, level: f64) -> Option<usize> {
    rep.residual_history.iter().position(|&r| r <= level)
}

fn example4_convergence() -> Outcome {
    let mut parts = Vec::new();
    for (n, ref_alpha) in [(100, 43.49), (250, 103.75), (500, 208.0)] {
        let p = example4_instance(n, n as u64).map_err(|e| e.to_string())?;
        let deep = cscs_solve(&p.a, &p.b, &p.c, &CscsOptions::default().tol(1e-14).maxit(60)).map_err(|e| e.to_string())?;
        let (alpha, _) = deep.shifts.unwrap();
        let k6 = first_below(&deep, 2e-6);
        let k14 = first_below(&deep, 1e-14);
        info(format!(
            "example 4 n={n}: alpha={alpha:.2} (reference {ref_alpha}), iterations to 2e-6: {k6:?}, to 1e-14: {k14:?}"
        ));
        match (k6, k14) {
            (Some(a), Some(b)) if a <= 7 && b <= 15 => {}
            _ => return Err(format!("n={n}: iterations to 2e-6 {k6:?} (<=7), to 1e-14 {k14:?} (<=15)")),
        }
        let rep = cscs_solve(&p.a, &p.b, &p.c, &CscsOptions::default()).map_err(|e| e.to_string())?;
        let err = max_abs(&(&rep.x - p.x_true.as_ref().unwrap()));
        if !rep.converged() || err > 1e-5 {
            return Err(format!("n={n}: |X - 1|_max = {err:.2e} at tol 1e-6"));
        }
        parts.push(format!("n={n}: {}/{} iters, |X-1|={err:.1e}", k6.unwrap(), k14.unwrap()));
    }
    Ok(parts.join("; "))
}

// 7 -------------------------------------------------------------------------

fn per_iteration_seconds(n: usize, m: usize) -> f64 {
    let a = ToeplitzSpec::tridiagonal(n, -0.99, 2.01, -1.01).unwrap();
    let b = ToeplitzSpec::tridiagonal(m, -0.99, 2.01, -1.01).unwrap();
    let cm = DenseMatrix::from_element(n, m, c(1.0, 0.0));
    let ctx = build_context(&a, &b, ShiftPolicy::Auto).unwrap();
    let iters = 4;
    let opts = CscsOptions::default().tol(1e-300).maxit(iters);
    let _ = cscs_solve_with(&ctx, &cm, &opts).unwrap();
    let mut samples: Vec<f64> = (0..5)
        .map(|_| {
            let start = Instant::now();
            let rep = cscs_solve_with(&ctx, &cm, &opts).unwrap();
            assert_eq!(rep.iterations, iters);
            start.elapsed().as_secs_f64() / iters as f64
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    samples[2]
}

fn doubling(sizes: &[(usize, usize)]) -> (Vec<f64>, Vec<f64>) {
    let times: Vec<f64> = sizes.iter().map(|&(n, m)| per_iteration_seconds(n, m)).collect();
    let ratios = times.windows(2).map(|w| w[1] / w[0]).collect();
    (times, ratios)
}

fn fmt_list(v: &[f64], spec: usize) -> String {
    v.iter().map(|x| format!("{x:.spec$e}")).collect::<Vec<_>>().join(", ")
}

fn complexity() -> Outcome {
    // Doubling n alone: the work per iteration is O(nm log n), ratio ~2.2.
    let (times, ratios) = doubling(&[(128, 128), (256, 128), (512, 128), (1024, 128)]);
    info(format!(
        "per-iteration seconds at m = 128, n = 128..1024: {} (doubling ratios {})",
        fmt_list(&times, 3),
        ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", ")
    ));

    // Doubling n with m = n quadruples the number of unknowns, so the ratio
    // cannot drop below 4 for any O(n^2 log n) iteration.
    let (times, ratios) = doubling(&[(128, 128), (256, 256), (512, 512), (1024, 1024)]);
    let detail = format!(
        "m = n = 128..1024 per-iteration seconds {}, doubling ratios {} (limit 2.6)",
        fmt_list(&times, 3),
        ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", ")
    );
    if ratios.iter().all(|&r| r <= 2.6) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 8 -------------------------------------------------------------------------

fn runner(seed: u64) -> TestRunner {
    TestRunner::new(Config { cases: 1000, failure_persistence: None, rng_seed: RngSeed::Fixed(seed), ..Config::default() })
}

fn property<S: Strategy>(name: &str, seed: u64, strategy: S, check: impl Fn(S::Value) -> Check) -> Result<(), String> {
    runner(seed)
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| format!("{name}: {e}"))
}

fn invariant_suites() -> Outcome {
    let mut names = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| -> Result<(), String> {
        r?;
        names.push(name.to_string());
        Ok(())
    };
    record("split exactness", property("split exactness", 81, toeplitz_strategy(2, 64), |t| check_split_exact(&t)))?;
    record("class closure", property("class closure", 82, toeplitz_strategy(1, 64), |t| check_class_closure(&t)))?;
    record("spectra vs dense", property("spectra vs dense", 83, toeplitz_strategy(1, 32), |t| check_spectra_vs_dense(&t)))?;
    record("diagonalization", property("diagonalization", 84, toeplitz_strategy(1, 32), |t| check_diagonalization(&t)))?;
    record(
        "unitarity",
        property("unitarity", 85, (1usize..=24, 1usize..=24, any::<u64>()), |(r, cc, s)| {
            check_unitarity(&seeded_matrix(&mut rng(s), r, cc))
        }),
    )?;
    record(
        "linearity",
        property("linearity", 86, (1usize..=24, any::<u64>(), -2.0..2.0f64, -2.0..2.0f64), |(n, s, a, b)| {
            let mut g = rng(s);
            let x = seeded_matrix(&mut g, n, 3);
            let y = seeded_matrix(&mut g, n, 3);
            check_linearity(&x, &y, c(a, b), c(b, -a))
        }),
    )?;
    record(
        "residual equivalence",
        property("residual equivalence", 87, (toeplitz_strategy(1, 16), toeplitz_strategy(1, 16), any::<u64>()), |(a, b, s)| {
            let mut g = rng(s);
            let x = seeded_matrix(&mut g, a.order(), b.order());
            let cm = seeded_matrix(&mut g, a.order(), b.order());
            check_residual_equivalence(&a, &b, &x, &cm)
        }),
    )?;
    record(
        "fixed point",
        property("fixed point", 88, (dominant_strategy(1, 8), dominant_strategy(1, 8), any::<u64>()), |(a, b, s)| {
            let cm = seeded_matrix(&mut rng(s), a.order(), b.order());
            check_fixed_point(&a, &b, &cm)
        }),
    )?;
    record(
        "contraction consistency",
        property("contraction", 89, (dominant_strategy(1, 10), dominant_strategy(1, 10), -2.0..2.0f64), |(a, b, lg)| {
            if a.order() * b.order() > 100 {
                return Ok(());
            }
            check_contraction(&a, &b, shifts_for(&a, &b).gamma_star * 10f64.powf(lg))
        }),
    )?;
    record(
        "gamma* optimality",
        property("gamma*", 90, (1e-3..10.0f64, 0.0..100.0f64, 0.0..50.0f64), |(t, w, e)| check_gamma_optimal(t, t + w, e)),
    )?;
    record(
        "example 3 definiteness",
        property("example 3 definiteness", 91, (2usize..=256, 1e-3..2.0f64), |(n, r)| check_example3_definite(n, r)),
    )?;
    Ok(format!("1000 cases each: {}", names.join(", ")))
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        (1, "oracle equivalence", oracle_equivalence),
        (2, "spectral radius bound", contraction_bound_holds),
        (3, "gamma* optimality", gamma_star_optimal),
        (4, "example 3 iteration counts", example3_counts),
        (5, "example 1 iteration counts", example1_counts),
        (6, "example 4 convergence", example4_convergence),
        (7, "per-iteration complexity", complexity),
        (8, "invariant suites", invariant_suites),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {id} ({name}, {secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {id} ({name}, {secs:.1}s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
