//! Acceptance checks. One line per criterion, then a summary.
//!
//! Criteria listed in `KNOWN_RED` are mathematically out of reach as stated.
//! They are still run in full and reported as FAIL; only an unexpected
//! failure (or an unexpected pass of a known-red one) fails the process.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use obtuse_core::constructions::arc_triple::{pattern_report, ArcTripleParams};
use obtuse_core::constructions::fixed_point::{fixed_point_acute, maximize_acute};
use obtuse_core::constructions::self_similar::{level_report, SelfSimilarParams};
use obtuse_core::constructions::PATTERNS;
use obtuse_core::dist::{DistributionSpec, SphereParams};
use obtuse_core::exact_bounds::{
    asymptotic_bound, binom3, closed_form_2d, closed_form_3d, limit_bound, recursion_step, Trajectory,
};
use obtuse_core::geom::{count_classes, Configuration, DEFAULT_TOL};
use obtuse_core::mc::{estimate, McConfig};
use obtuse_core::search::{
    enumerate_exact, forced_nonacute_bound, named_configuration, search_min, CountMethod, SearchMode, SearchParams,
};
use obtuse_core::sphere::{asymptotic_sphere, obtuse_prob_sphere, DEFAULT_QUAD_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_RED: [u32; 4] = [4, 6, 7, 9];
const FOUR_NINTHS: f64 = 4.0 / 9.0;
const SEED: u64 = 20_240_611;

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn criterion_1() -> Outcome {
    let (bad, took) = timed(|| {
        let mut bad = Vec::new();
        let mut t = closed_form_2d(4).unwrap();
        for n in 4..=10_000u64 {
            let next = closed_form_2d(n + 1).unwrap();
            if recursion_step(&t, n).unwrap() != next {
                bad.push(format!("2d n={n}"));
            }
            t = next;
        }
        let mut t = closed_form_3d(6).unwrap();
        for n in 6..=10_000u64 {
            let next = closed_form_3d(n + 1).unwrap();
            if recursion_step(&t, n).unwrap() != next {
                bad.push(format!("3d n={n}"));
            }
            t = next;
        }
        bad
    });
    let fast = took < Duration::from_secs(1);
    outcome(
        bad.is_empty() && fast,
        format!("mismatches={} first={:?} time={}", bad.len(), bad.first(), secs(took)),
    )
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, limit) in [(2u32, 1.0 / 3.0), (3, 1.0 / 11.0)] {
        let (r, took) = timed(|| limit_bound(d, 1_000_000));
        match r {
            Ok(b) => {
                // limit_bound already fails on any exact decrease; recheck in floats
                let in_range = b.lower_bound >= limit - 1e-5 && b.lower_bound <= limit;
                let ok = in_range && took < Duration::from_secs(10);
                pass &= ok;
                parts.push(format!("d={d} bound={:.9} time={}", b.lower_bound, secs(took)));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("d={d} error: {e}"));
            }
        }
    }
    // independent monotonicity check over the 3D trajectory with exact ratios
    let mut prev: Option<BigRational> = None;
    let mut monotone = true;
    for rec in Trajectory::new(3, 20_000).unwrap() {
        let r = rec.ratio();
        if let Some(p) = &prev {
            monotone &= &r >= p;
        }
        prev = Some(r);
    }
    parts.push(format!("monotone={monotone}"));
    outcome(pass && monotone, parts.join("; "))
}

fn criterion_3() -> Outcome {
    let table = [7.91e-3, 1.73e-3, 4.07e-4, 9.89e-5, 2.43e-5];
    let (rows, took) = timed(|| {
        (4u32..=8)
            .zip(table)
            .map(|(d, want)| {
                let got = limit_bound(d, 1_000_000).unwrap().lower_bound;
                (d, got, (got / want - 1.0).abs())
            })
            .collect::<Vec<_>>()
    });
    let worst = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let pass = worst <= 0.02 && took < Duration::from_secs(60);
    let vals: Vec<String> = rows.iter().map(|(d, g, _)| format!("d{d}={g:.4e}")).collect();
    outcome(pass, format!("{} worst_rel={worst:.4} time={}", vals.join(" "), secs(took)))
}

fn criterion_4() -> Outcome {
    let mut exact = true;
    for d in 2u32..=16 {
        let n = BigUint::from(1u8) << d;
        let want = BigRational::new(3.into(), ((&n - 1u8) * (&n - 2u8)).into());
        exact &= asymptotic_bound(d).unwrap() == want;
    }
    let big_m = 1_000_000u64;
    let mut worst = 0.0f64;
    for m in [4u64, 16, 64] {
        // smallest terms first
        let sum: f64 = (m..=big_m)
            .rev()
            .map(|k| {
                let k = k as f64;
                6.0 / (k * (k - 1.0) * (k - 2.0))
            })
            .sum();
        let limit = 3.0 / ((m - 1) as f64 * (m - 2) as f64);
        worst = worst.max((sum - limit).abs());
    }
    outcome(
        exact && worst <= 1e-12,
        format!("closed_form_exact={exact} partial_sum_max_err={worst:.3e} (tol 1e-12)"),
    )
}

fn criterion_5() -> Outcome {
    let (vals, took) = timed(|| {
        (
            obtuse_prob_sphere(3, DEFAULT_QUAD_TOL).unwrap(),
            obtuse_prob_sphere(2, DEFAULT_QUAD_TOL).unwrap(),
        )
    });
    let (p3, p2) = vals;
    let spec = DistributionSpec::Sphere(SphereParams { dim: 2 });
    let (est, mc_took) = timed(|| estimate(&spec, &McConfig::new(1_000_000, SEED).workers(workers())).unwrap());
    let sigma = (0.75f64 * 0.25 / est.samples as f64).sqrt();
    let z = (est.p_hat - 0.75) / sigma;
    let pass = (p3 - 0.5).abs() <= 1e-8
        && (p2 - 0.75).abs() <= 1e-8
        && z.abs() <= 3.0
        && took + mc_took < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "S2={p3:.12} S1={p2:.12} mc={:.5} z={z:.2} time={}",
            est.p_hat,
            secs(took + mc_took)
        ),
    )
}

fn criterion_6() -> Outcome {
    let a3 = asymptotic_sphere(3).unwrap();
    let want = 1.5 * (1.0 - 0.5f64.sqrt());
    let first = (a3 - want).abs() <= 1e-12;
    let gaps: Vec<f64> = [10u32, 20, 40, 80]
        .iter()
        .map(|&d| (obtuse_prob_sphere(d, DEFAULT_QUAD_TOL).unwrap() / asymptotic_sphere(d).unwrap() - 1.0).abs())
        .collect();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.4}")).collect();
    outcome(
        first && decreasing,
        format!("asym3_err={:.1e} gaps(d=10,20,40,80)=[{}] decreasing={decreasing}", (a3 - want).abs(), shown.join(", ")),
    )
}

fn criterion_7() -> Outcome {
    let p5 = obtuse_prob_sphere(5, DEFAULT_QUAD_TOL).unwrap();
    let p6 = obtuse_prob_sphere(6, DEFAULT_QUAD_TOL).unwrap();
    let target = 0.326097;
    outcome(p6 < target && target < p5, format!("d5={p5:.6} d6={p6:.6} target={target}"))
}

fn criterion_8() -> Outcome {
    let r = maximize_acute().unwrap();
    let s = 133f64.sqrt();
    let p_want = (22.0 - s) / 13.0;
    let x_want = (2.0 * s - 17.0) / 9.0;
    let x = fixed_point_acute(r.p).unwrap();
    let q = 1.0 - r.p;
    let residual = (x - (3.0 * q * r.p * r.p + q * q * q * x + 5.0 / 9.0 * r.p.powi(3))).abs();
    let pass = (r.p - p_want).abs() <= 1e-9 && (r.acute - x_want).abs() <= 1e-9 && residual <= 1e-12;
    outcome(
        pass,
        format!(
            "p_err={:.1e} x_err={:.1e} residual={residual:.1e}",
            (r.p - p_want).abs(),
            (r.acute - x_want).abs()
        ),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let base = ArcTripleParams { eps: 1e-2, delta: 1e-3, alpha: 1e-2, ..Default::default() };
    let report = pattern_report(base, 1_000_000, SEED, workers(), DEFAULT_TOL).unwrap();
    let rate = report.obtuse_rate();
    let in_band = (rate - FOUR_NINTHS).abs() <= 0.02;
    let same_arc = ["AAA", "BBB", "CCC"]
        .iter()
        .all(|p| report.row(p).is_some_and(|c| c.obtuse == c.total()));
    let abc = report.row("ABC").is_some_and(|c| c.acute == c.total());
    let mut rates = vec![rate];
    for k in 1..=2 {
        let f = 0.5f64.powi(k);
        let p = ArcTripleParams { eps: base.eps * f, delta: base.delta * f, alpha: base.alpha * f, ..base };
        rates.push(pattern_report(p, 1_000_000, SEED, workers(), DEFAULT_TOL).unwrap().obtuse_rate());
    }
    let toward = rates.windows(2).all(|w| (w[1] - FOUR_NINTHS).abs() < (w[0] - FOUR_NINTHS).abs());
    let took = start.elapsed();
    debug_assert_eq!(report.rows.len(), PATTERNS.len());
    outcome(
        in_band && same_arc && abc && toward && took < Duration::from_secs(60),
        format!(
            "obtuse={rate:.4} (4/9±0.02) same_arc_obtuse={same_arc} abc_acute={abc} halving={:?} monotone={toward} time={}",
            rates.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>(),
            secs(took)
        ),
    )
}

fn criterion_10() -> Outcome {
    let (r, took) = timed(|| level_report(SelfSimilarParams::default(), 1_000_000, SEED, workers(), DEFAULT_TOL).unwrap());
    let rate = r.obtuse_rate();
    let pass = (rate - 0.3261).abs() <= 0.01 && r.accounting_z.abs() <= 3.0 && took < Duration::from_secs(120);
    outcome(
        pass,
        format!("obtuse={rate:.4} (0.3261±0.01) accounting_z={:.2} time={}", r.accounting_z, secs(took)),
    )
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = Vec::new();
    for d in [2usize, 3] {
        let mut done = 0;
        while done < 500 {
            let n = rng.random_range(3..=10usize);
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let cfg = Configuration::new(pts).unwrap();
            if cfg.validate().is_err() {
                continue;
            }
            let c = count_classes(&cfg, DEFAULT_TOL).unwrap();
            let bound = forced_nonacute_bound(n, d).unwrap_or(0);
            if c.non_acute() < bound {
                violations.push(format!("random n={n} d={d}: {} < {bound}", c.non_acute()));
            }
            done += 1;
        }
    }
    let mut search_err = None;
    for (n, d) in [(4, 2), (5, 2), (6, 2), (7, 2), (6, 3), (7, 3), (8, 3)] {
        let p = SearchParams {
            n,
            d,
            iterations: 5_000,
            restarts: 3,
            seed: SEED,
            workers: workers(),
            ..Default::default()
        };
        match search_min(&p) {
            Ok(r) if r.bound.is_some_and(|b| r.best_count < b) => {
                violations.push(format!("search n={n} d={d}: {}", r.best_count))
            }
            Ok(_) => {}
            Err(e) => search_err = Some(format!("search n={n} d={d}: {e}")),
        }
    }
    let mut strict_zero = true;
    for (name, n, d) in [("square", 4, 2), ("octahedron", 6, 3)] {
        let e = enumerate_exact(&named_configuration(name, n, d).unwrap(), DEFAULT_TOL).unwrap();
        strict_zero &= e.method == CountMethod::Exact && SearchMode::StrictObtuse.count(&e.counts) == 0;
        let p = SearchParams {
            n,
            d,
            mode: SearchMode::StrictObtuse,
            iterations: 5_000,
            restarts: 2,
            seed: SEED,
            ..Default::default()
        };
        strict_zero &= search_min(&p).is_ok_and(|r| r.best_count == 0);
    }
    let pass = violations.is_empty() && search_err.is_none() && strict_zero;
    outcome(
        pass,
        format!(
            "violations={} {:?} search_error={:?} strict_zero={strict_zero}",
            violations.len(),
            violations.first(),
            search_err
        ),
    )
}

fn criterion_12() -> Outcome {
    let mut first_bad = None;
    let three = BigUint::from(3u8);
    for n in 4..=100_000u64 {
        let c = binom3(n);
        let shifted = &c * (n + 1) == binom3(n + 1) * (n - 2);
        let residue = &c % &three == BigUint::from((n / 3) % 3);
        if !(shifted && residue) {
            first_bad = Some(n);
            break;
        }
    }
    outcome(first_bad.is_none(), format!("first_failure={first_bad:?}"))
}

fn criterion_13() -> Outcome {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let spec_path = dir.join("acceptance_spec.json");
    let spec = r#"{"kind": "arc_triple", "params": {"eps": 0.1, "delta": 2.5e-4, "alpha": 1.5e-4}}"#;
    if let Err(e) = std::fs::write(&spec_path, spec) {
        return outcome(false, format!("cannot write spec: {e}"));
    }
    let mut seen = Vec::new();
    for w in [1, 4, 16] {
        let out = Command::new(env!("CARGO_BIN_EXE_obtuse"))
            .args(["mc", "--samples", "300000", "--seed", "7", "--workers", &w.to_string(), "--spec"])
            .arg(&spec_path)
            .output();
        let out = match out {
            Ok(o) if o.status.success() => o,
            Ok(o) => return outcome(false, format!("workers={w}: {}", String::from_utf8_lossy(&o.stderr))),
            Err(e) => return outcome(false, format!("workers={w}: {e}")),
        };
        let doc: serde_json::Value = match serde_json::from_slice(&out.stdout) {
            Ok(v) => v,
            Err(e) => return outcome(false, format!("workers={w}: bad json: {e}")),
        };
        seen.push(doc["result"]["counts"].to_string());
    }
    let same = seen.windows(2).all(|w| w[0] == w[1]);
    outcome(same, format!("counts={}", seen[0]))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, "recurrence and closed forms agree", criterion_1),
        (2, "planar and spatial limits", criterion_2),
        (3, "table for d=4..8", criterion_3),
        (4, "asymptotic formula and partial sums", criterion_4),
        (5, "sphere values for d=2,3", criterion_5),
        (6, "asymptotic sphere formula and gap trend", criterion_6),
        (7, "sphere vs self-similar crossover", criterion_7),
        (8, "fixed point optimum", criterion_8),
        (9, "arc-triple construction", criterion_9),
        (10, "self-similar construction", criterion_10),
        (11, "forced count consistency", criterion_11),
        (12, "binomial identities", criterion_12),
        (13, "determinism across worker counts", criterion_13),
    ];
    let mut failed = Vec::new();
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id:>2} {name}: {}", o.detail);
        if !o.pass {
            failed.push(id);
        }
        if o.pass == KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    println!(
        "acceptance: {} passed, {} failed {failed:?}; known red {KNOWN_RED:?}",
        13 - failed.len(),
        failed.len()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: outcome differs from the recorded analysis for {unexpected:?}");
        ExitCode::FAILURE
    }
}
