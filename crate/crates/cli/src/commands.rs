use std::fmt::Write;

use logpart::{
    fit_exponential, geometric_partition, plan_bands, solve_partition, weight_profile, Interval,
    MeanRule,
};
use serde_json::{json, Value};

use crate::cli::{BandsArgs, ContinuousArgs, Format, PartitionArgs, RangeArgs, VerifyArgs};
use crate::num::full;
use crate::svg;

/// A fully rendered document, plus a diagnostic when the command's
/// mathematical check did not hold.
#[derive(Debug)]
pub struct Outcome {
    pub document: String,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(document: String) -> Self {
        Self {
            document,
            failure: None,
        }
    }
}

/// Bad input: unparsable rule names, invalid ranges, unsupported formats.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<logpart::Error> for InputError {
    fn from(e: logpart::Error) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<Outcome, InputError>;

/// Demonstration rule whose mean is shifted by a constant, so its relative
/// weight is not scale-invariant.
pub const SHIFTED_RULE: &str = "custom-shifted";

pub fn parse_rule(name: &str) -> Result<MeanRule, InputError> {
    match name.trim() {
        SHIFTED_RULE => Ok(MeanRule::custom(SHIFTED_RULE, |u, v| 0.5 * (u + v) + 1.0)),
        other => Ok(other.parse()?),
    }
}

fn interval(range: &RangeArgs) -> Result<Interval, InputError> {
    Ok(Interval::new(range.lo, range.hi)?)
}

fn check_n(n: usize) -> Result<(), InputError> {
    if n == 0 {
        Err(InputError("--n must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn no_svg(format: Format, command: &str) -> Result<(), InputError> {
    if format == Format::Svg {
        Err(InputError(format!(
            "svg output is only available for partition and bands, not {command}"
        )))
    } else {
        Ok(())
    }
}

fn json_document(meta: Value, data: Value) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "data": data }))
        .expect("json values always serialize");
    s.push('\n');
    s
}

/// Right-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

pub fn partition(args: &PartitionArgs) -> CmdResult {
    check_n(args.n)?;
    let range = interval(&args.range)?;
    let p = geometric_partition(range, args.n)?;
    let points = p.points();

    let document = match args.format {
        Format::Csv => {
            let mut s = String::from("i,x_i\n");
            for (i, x) in points.iter().enumerate() {
                let _ = writeln!(s, "{i},{}", full(*x));
            }
            s
        }
        Format::Json => json_document(
            json!({ "command": "partition", "lo": range.lo(), "hi": range.hi(), "n": args.n }),
            json!(points),
        ),
        Format::Table => {
            let rows: Vec<Vec<String>> = points
                .iter()
                .enumerate()
                .map(|(i, x)| vec![i.to_string(), full(*x)])
                .collect();
            table(&["i", "x_i"], &rows)
        }
        Format::Svg => svg::partition(points),
    };
    Ok(Outcome::ok(document))
}

struct RuleCheck {
    rule: String,
    c: Option<f64>,
    iterations: Option<usize>,
    residual: Option<f64>,
    point_deviation: Option<f64>,
    weight_deviation: Option<f64>,
    passed: bool,
    error: Option<String>,
}

impl RuleCheck {
    fn status(&self) -> &'static str {
        match (&self.error, self.passed) {
            (Some(_), _) => "error",
            (None, true) => "ok",
            (None, false) => "FAIL",
        }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(full).unwrap_or_default()
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    no_svg(args.format, "verify")?;
    check_n(args.n)?;
    if !(args.rel_tol.is_finite() && args.rel_tol > 0.0) {
        return Err(InputError(format!(
            "--rel-tol must be finite and positive (got {})",
            args.rel_tol
        )));
    }
    let range = interval(&args.range)?;
    let rules = args
        .rules
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_rule)
        .collect::<Result<Vec<_>, _>>()?;
    if rules.is_empty() {
        return Err(InputError("--rules must name at least one rule".into()));
    }
    let reference = geometric_partition(range, args.n)?;

    let checks: Vec<RuleCheck> = rules
        .iter()
        .map(|rule| match solve_partition(range, args.n, rule, args.rel_tol) {
            Ok(report) => {
                let point_deviation = report
                    .partition
                    .points()
                    .iter()
                    .zip(reference.points())
                    .map(|(a, b)| (a - b).abs() / b)
                    .fold(0.0, f64::max);
                let (weight_deviation, mean) = match weight_profile(&report.partition, rule) {
                    Ok(p) => (p.max_abs_deviation, p.mean()),
                    Err(_) => (f64::INFINITY, 1.0),
                };
                RuleCheck {
                    rule: rule.to_string(),
                    c: Some(report.c),
                    iterations: Some(report.iterations),
                    residual: Some(report.residual),
                    point_deviation: Some(point_deviation),
                    weight_deviation: Some(weight_deviation),
                    passed: point_deviation <= args.rel_tol
                        && weight_deviation <= args.rel_tol * mean,
                    error: None,
                }
            }
            Err(e) => RuleCheck {
                rule: rule.to_string(),
                c: None,
                iterations: None,
                residual: None,
                point_deviation: None,
                weight_deviation: None,
                passed: false,
                error: Some(e.to_string()),
            },
        })
        .collect();

    let document = match args.format {
        Format::Csv => {
            let mut s = format!(
                "# lo={} hi={} n={} rel_tol={}\n",
                full(range.lo()),
                full(range.hi()),
                args.n,
                full(args.rel_tol)
            );
            s.push_str("rule,status,c,iterations,residual,max_point_deviation,weight_max_abs_deviation\n");
            for c in &checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    c.rule,
                    c.status(),
                    opt(c.c),
                    c.iterations.map(|i| i.to_string()).unwrap_or_default(),
                    opt(c.residual),
                    opt(c.point_deviation),
                    opt(c.weight_deviation)
                );
            }
            s
        }
        Format::Json => json_document(
            json!({
                "command": "verify",
                "lo": range.lo(),
                "hi": range.hi(),
                "n": args.n,
                "rel_tol": args.rel_tol,
                "rules": checks.iter().map(|c| c.rule.clone()).collect::<Vec<_>>(),
            }),
            checks
                .iter()
                .map(|c| {
                    json!({
                        "rule": c.rule,
                        "status": c.status(),
                        "c": c.c,
                        "iterations": c.iterations,
                        "residual": c.residual,
                        "max_point_deviation": c.point_deviation,
                        "weight_max_abs_deviation": c.weight_deviation,
                        "error": c.error,
                    })
                })
                .collect(),
        ),
        Format::Table | Format::Svg => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    vec![
                        c.rule.clone(),
                        opt(c.c),
                        c.iterations.map(|i| i.to_string()).unwrap_or_default(),
                        c.residual.map(|r| format!("{r:.3e}")).unwrap_or_default(),
                        c.point_deviation.map(|r| format!("{r:.3e}")).unwrap_or_default(),
                        c.weight_deviation.map(|r| format!("{r:.3e}")).unwrap_or_default(),
                        c.status().to_string(),
                    ]
                })
                .collect();
            table(
                &["rule", "c", "iterations", "residual", "point_dev", "weight_dev", "status"],
                &rows,
            )
        }
    };

    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| match &c.error {
            Some(e) => format!("{} ({e})", c.rule),
            None => format!("{} (not geometric within {})", c.rule, full(args.rel_tol)),
        })
        .collect();
    let failure =
        (!failed.is_empty()).then(|| format!("verification failed for {}", failed.join(", ")));
    Ok(Outcome { document, failure })
}

pub fn continuous(args: &ContinuousArgs) -> CmdResult {
    no_svg(args.format, "continuous")?;
    check_n(args.n)?;
    let range = interval(&args.range)?;
    let samples = args.samples.unwrap_or(args.n + 1);
    if samples < 2 {
        return Err(InputError("--samples must be at least 2".into()));
    }
    let fit = fit_exponential(range, args.n)?;
    let span = (samples - 1) as f64;
    let rows = (0..samples)
        .map(|k| {
            let t = k as f64 * args.n as f64 / span;
            Ok((t, fit.sample(t)?))
        })
        .collect::<Result<Vec<_>, InputError>>()?;

    let document = match args.format {
        Format::Csv => {
            let mut s = format!("# A={}\n# B={}\nt,x\n", full(fit.amplitude), full(fit.rate));
            for (t, x) in &rows {
                let _ = writeln!(s, "{},{}", full(*t), full(*x));
            }
            s
        }
        Format::Json => json_document(
            json!({
                "command": "continuous",
                "lo": range.lo(),
                "hi": range.hi(),
                "n": args.n,
                "samples": samples,
                "A": fit.amplitude,
                "B": fit.rate,
            }),
            rows.iter().map(|(t, x)| json!({ "t": t, "x": x })).collect(),
        ),
        Format::Table | Format::Svg => {
            let mut s = format!("# A = {}\n# B = {}\n", full(fit.amplitude), full(fit.rate));
            let rows: Vec<Vec<String>> = rows.iter().map(|(t, x)| vec![full(*t), full(*x)]).collect();
            s.push_str(&table(&["t", "x"], &rows));
            s
        }
    };
    Ok(Outcome::ok(document))
}

pub fn bands(args: &BandsArgs) -> CmdResult {
    let range = interval(&args.range)?;
    let rule = parse_rule(&args.rule)?;
    let plan = plan_bands(range, args.epsilon, &rule)?;

    let document = match args.format {
        Format::Csv => {
            let mut s = format!(
                "# n={}\n# epsilon={}\n# rule={}\nband,lo,hi,am_center,gm_center,weight\n",
                plan.n,
                full(plan.epsilon),
                plan.rule
            );
            for (k, b) in plan.bands.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{k},{},{},{},{},{}",
                    full(b.lo),
                    full(b.hi),
                    full(b.am_center),
                    full(b.gm_center),
                    full(b.weight)
                );
            }
            s
        }
        Format::Json => json_document(
            json!({
                "command": "bands",
                "lo": range.lo(),
                "hi": range.hi(),
                "epsilon": plan.epsilon,
                "rule": plan.rule.to_string(),
                "n": plan.n,
            }),
            plan.bands
                .iter()
                .enumerate()
                .map(|(k, b)| {
                    json!({
                        "band": k,
                        "lo": b.lo,
                        "hi": b.hi,
                        "am_center": b.am_center,
                        "gm_center": b.gm_center,
                        "weight": b.weight,
                    })
                })
                .collect(),
        ),
        Format::Table => {
            let mut s = format!(
                "# n = {}, epsilon = {}, rule = {}\n",
                plan.n,
                full(plan.epsilon),
                plan.rule
            );
            let rows: Vec<Vec<String>> = plan
                .bands
                .iter()
                .enumerate()
                .map(|(k, b)| {
                    vec![
                        k.to_string(),
                        full(b.lo),
                        full(b.hi),
                        full(b.am_center),
                        full(b.gm_center),
                        full(b.weight),
                    ]
                })
                .collect();
            s.push_str(&table(
                &["band", "lo", "hi", "am_center", "gm_center", "weight"],
                &rows,
            ));
            s
        }
        Format::Svg => svg::bands(&plan),
    };
    Ok(Outcome::ok(document))
}
