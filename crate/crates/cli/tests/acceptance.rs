//! Acceptance criteria. Run with `--nocapture` to see one line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use logpart::{
    agreement_check, classify_rule, geometric_partition, is_geometric, plan_bands,
    relative_weight, solve_partition, weight_profile, Interval, MeanRule, Partition,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_logpart"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn csv_rows(bytes: &[u8]) -> Result<Vec<Vec<f64>>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(bytes);
    reader
        .records()
        .map(|r| {
            let r = r.map_err(|e| e.to_string())?;
            r.iter()
                .map(|f| f.parse::<f64>().map_err(|e| format!("{f:?}: {e}")))
                .collect()
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn iv(lo: f64, hi: f64) -> Result<Interval, String> {
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

fn ac1() -> Check {
    let out = cli(&["partition", "--lo", "1", "--hi", "16", "--n", "4", "--format", "csv"])?;
    let points: Vec<f64> = csv_rows(&out)?.iter().map(|r| r[1]).collect();
    let want = [1.0, 2.0, 4.0, 8.0, 16.0];
    ensure(points.len() == want.len(), || format!("got {points:?}"))?;
    for (p, w) in points.iter().zip(want) {
        ensure((p - w).abs() <= 1e-12 * w, || format!("{p} vs {w}"))?;
    }
    ensure(points[0].to_bits() == 1f64.to_bits(), || "lo not bitwise".into())?;
    ensure(points[4].to_bits() == 16f64.to_bits(), || "hi not bitwise".into())?;

    let range = iv(1.0, 16.0)?;
    let best = (0..100)
        .map(|_| {
            let start = Instant::now();
            let p = geometric_partition(range, 4);
            let elapsed = start.elapsed();
            std::hint::black_box(p).map(|_| elapsed)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .min()
        .unwrap_or(Duration::MAX);
    ensure(best < Duration::from_millis(1), || format!("took {best:?}"))?;
    Ok(format!("[1, 2, 4, 8, 16], computed in {best:?}"))
}

fn ac2() -> Check {
    let p = Partition::new(vec![1.0, 2.0, 4.0, 8.0, 16.0]).map_err(|e| e.to_string())?;
    // Hand arithmetic: (2-1)/1.5 and (2-1)/sqrt(2).
    let cases = [
        (MeanRule::Arithmetic, 1.0 / 1.5, 2.0 / 3.0),
        (MeanRule::Geometric, 1.0 / 2f64.sqrt(), 0.5f64.sqrt()),
    ];
    let mut parts = Vec::new();
    for (rule, hand, pinned) in cases {
        ensure((hand - pinned).abs() <= 1e-15, || format!("{rule}: oracle {hand} vs {pinned}"))?;
        let prof = weight_profile(&p, &rule).map_err(|e| e.to_string())?;
        ensure(prof.max_abs_deviation <= 1e-12, || {
            format!("{rule}: deviation {:e}", prof.max_abs_deviation)
        })?;
        ensure((prof.mean() - pinned).abs() <= 1e-12, || {
            format!("{rule}: common value {} vs {pinned}", prof.mean())
        })?;
        parts.push(format!("{rule} {} (dev {:e})", prof.mean(), prof.max_abs_deviation));
    }
    Ok(parts.join(", "))
}

/// hi/lo in [1 + 1e-6, 1e9], with hi/lo - 1 log-uniform.
fn random_ratio(rng: &mut ChaCha8Rng) -> f64 {
    1.0 + 10f64.powf(rng.random_range(-6.0..=(1e9f64 - 1.0).log10()))
}

fn ac3() -> Check {
    let rules = [
        MeanRule::Arithmetic,
        MeanRule::Geometric,
        MeanRule::Harmonic,
        MeanRule::LeftEndpoint,
        MeanRule::RightEndpoint,
        MeanRule::PowerMean(2.0),
        MeanRule::PowerMean(-2.0),
        MeanRule::PowerMean(0.5),
        MeanRule::PowerMean(-0.5),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let lo = 10f64.powf(rng.random_range(-6.0..=6.0));
        let hi = lo * random_ratio(&mut rng);
        let n = rng.random_range(1..=64usize);
        let range = iv(lo, hi)?;
        let reference = geometric_partition(range, n).map_err(|e| format!("#{k}: {e}"))?;
        for rule in &rules {
            let report = solve_partition(range, n, rule, 1e-10)
                .map_err(|e| format!("#{k} [{lo}, {hi}] n={n} {rule}: {e}"))?;
            for (a, b) in report.partition.points().iter().zip(reference.points()) {
                let dev = (a - b).abs() / b;
                worst = worst.max(dev);
                ensure(dev <= 1e-9, || {
                    format!("#{k} [{lo}, {hi}] n={n} {rule}: {a} vs {b}")
                })?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("9000 solves, worst {worst:.2e}, {elapsed:.2?}"))
}

fn ac4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for k in 0..1000 {
        let lo = 10f64.powf(rng.random_range(-6.0..=6.0));
        let hi = lo * random_ratio(&mut rng);
        let n = rng.random_range(1..=1024usize);
        let range = iv(lo, hi)?;
        let ok = agreement_check(range, n, 1e-12).map_err(|e| format!("#{k}: {e}"))?;
        ensure(ok, || format!("#{k} [{lo}, {hi}] n={n} disagrees"))?;
    }
    Ok("1000 instances agree at 1e-12".into())
}

fn ac5() -> Check {
    let oracle = (1.75f64.ln() / (2.05f64 / 1.95).ln()).ceil() as usize;
    ensure(oracle == 12, || format!("oracle gave {oracle}"))?;
    let out = cli(&["bands", "--lo", "400", "--hi", "700", "--epsilon", "0.05", "--rule", "am", "--format", "csv"])?;
    let weights: Vec<f64> = csv_rows(&out)?.iter().map(|r| r[5]).collect();
    ensure(weights.len() == oracle, || format!("{} bands", weights.len()))?;
    let (min, max) = weights
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &w| (a.min(w), b.max(w)));
    ensure(max - min <= 1e-12, || format!("weight spread {:e}", max - min))?;
    ensure(max <= 0.05, || format!("max weight {max}"))?;

    let eleven = geometric_partition(iv(400.0, 700.0)?, 11).map_err(|e| e.to_string())?;
    let w11 = eleven
        .points()
        .windows(2)
        .map(|w| relative_weight(w[0], w[1], &MeanRule::Arithmetic))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(0.0, f64::max);
    ensure(w11 > 0.05, || format!("11 bands fit: {w11}"))?;

    let plan = plan_bands(iv(400.0, 700.0)?, 0.05, &MeanRule::Arithmetic).map_err(|e| e.to_string())?;
    ensure(plan.n == 12, || format!("library plan has {} bands", plan.n))?;
    Ok(format!("12 bands, weight {max:.6}, 11 bands would need {w11:.6}"))
}

/// y = x(1 + c/2) + c over (1 - c/2): one step of the shifted mean.
fn shifted_step(x: f64, c: f64) -> f64 {
    (x * (1.0 + 0.5 * c) + c) / (1.0 - 0.5 * c)
}

/// Bisects c so that n shifted steps from lo land on hi.
fn brute_shifted(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let land = |c: f64| (0..n).fold(lo, |x, _| shifted_step(x, c));
    let (mut a, mut b) = (0.0, 2.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if land(m) < hi {
            a = m;
        } else {
            b = m;
        }
    }
    let c = 0.5 * (a + b);
    (0..=n)
        .scan(lo, |x, i| {
            let out = *x;
            if i < n {
                *x = shifted_step(*x, c);
            }
            Some(out)
        })
        .collect()
}

fn ac6() -> Check {
    for rule in MeanRule::builtins() {
        let ok = classify_rule(&rule, 1000, 1e-9).map_err(|e| e.to_string())?;
        ensure(ok, || format!("{rule} classified as not homogeneous"))?;
    }
    let shifted = MeanRule::custom("shifted", |u, v| 0.5 * (u + v) + 1.0);
    let ok = classify_rule(&shifted, 1000, 1e-9).map_err(|e| e.to_string())?;
    ensure(!ok, || "shifted mean classified as homogeneous".into())?;

    let (lo, hi, n) = (1.0, 16.0, 4);
    let brute = brute_shifted(lo, hi, n);
    let report = solve_partition(iv(lo, hi)?, n, &shifted, 1e-12).map_err(|e| e.to_string())?;
    for (a, b) in report.partition.points().iter().zip(&brute) {
        ensure((a - b).abs() <= 1e-9 * b, || format!("solver {a} vs brute force {b}"))?;
    }
    let geometric = is_geometric(&report.partition, 1e-6).map_err(|e| e.to_string())?;
    ensure(!geometric, || "shifted partition is geometric".into())?;
    Ok(format!(
        "{} builtins homogeneous, shifted mean not; shifted [1,16] n=4 x_1 = {:.6}",
        MeanRule::builtins().len(),
        report.partition.points()[1]
    ))
}

fn ac7() -> Check {
    let invocations: [&[&str]; 4] = [
        &["partition", "--lo", "0.001", "--hi", "1000", "--n", "7", "--format", "csv"],
        &["verify", "--lo", "3", "--hi", "7", "--n", "5", "--format", "json"],
        &["continuous", "--lo", "1", "--hi", "16", "--n", "4", "--samples", "9", "--format", "csv"],
        &["bands", "--lo", "400", "--hi", "700", "--epsilon", "0.05", "--format", "svg"],
    ];
    for args in invocations {
        let first = cli(args)?;
        for _ in 0..3 {
            ensure(cli(args)? == first, || format!("{args:?} output changed"))?;
        }
    }

    let cases = [(0.001, 1000.0, 7usize), (1.0, 16.0, 4), (3.0, 7.0, 1), (1e-300, 1e300, 97), (2.0, 2.0000001, 13)];
    for (lo, hi, n) in cases {
        let (slo, shi, sn) = (format!("{lo:e}"), format!("{hi:e}"), n.to_string());
        let want: Vec<u64> = geometric_partition(iv(lo, hi)?, n)
            .map_err(|e| e.to_string())?
            .points()
            .iter()
            .map(|x| x.to_bits())
            .collect();

        let csv_out = cli(&["partition", "--lo", &slo, "--hi", &shi, "--n", &sn, "--format", "csv"])?;
        let from_csv: Vec<u64> = csv_rows(&csv_out)?.iter().map(|r| r[1].to_bits()).collect();
        ensure(from_csv == want, || format!("csv round trip differs for [{lo}, {hi}] n={n}"))?;

        let json_out = cli(&["partition", "--lo", &slo, "--hi", &shi, "--n", &sn, "--format", "json"])?;
        let doc: serde_json::Value = serde_json::from_slice(&json_out).map_err(|e| e.to_string())?;
        let from_json: Vec<u64> = doc["data"]
            .as_array()
            .ok_or("json data is not an array")?
            .iter()
            .map(|v| v.as_f64().map(f64::to_bits).ok_or("non-numeric point"))
            .collect::<Result<_, _>>()?;
        ensure(from_json == want, || format!("json round trip differs for [{lo}, {hi}] n={n}"))?;
    }
    Ok("byte-identical reruns, bitwise csv/json round trips".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("AC1", "[1,16] n=4 partition", ac1),
        ("AC2", "AM/GM constant weight", ac2),
        ("AC3", "solver matches log spacing", ac3),
        ("AC4", "continuous agreement", ac4),
        ("AC5", "400-700 band plan", ac5),
        ("AC6", "homogeneity boundary", ac6),
        ("AC7", "determinism and round trip", ac7),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(why) => {
                println!("[FAIL] {id} {name}: {why}");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
