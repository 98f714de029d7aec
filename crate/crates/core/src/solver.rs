//! Equal relative-weight partitions for arbitrary mean rules.
//!
//! A partition with constant weight `c` is generated by a forward
//! recurrence: from `x_i`, the next point is the unique `x_{i+1} > x_i`
//! whose sub-interval has weight `c`. The built-in rules have closed-form
//! steps; power means and custom rules use a bracketed root find.
//! An outer bisection then adjusts `c` until `n` steps from `lo` land on
//! `hi`. The terminal point is strictly increasing in `c`, which is what
//! makes the bisection valid.
//!
//! For scale-invariant rules the result coincides with the geometric
//! partition; [`classify_rule`] probes a rule for that property.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interval::{Interval, Partition};
use crate::mean::{power_mean, power_mean_headroom, MeanRule, POWER_MEAN_GEOMETRIC_CUTOFF};
use crate::partition::{check_tolerance, common_ratio, relative_weight};
use crate::roots::{brent, Root};

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

/// Bracket width, relative to the step length, at which a numerical step
/// is accepted.
const STEP_REL_TOL: f64 = 1e-14;
const STEP_MAX_ITERATIONS: usize = 200;
/// Enough doublings to span the whole f64 exponent range.
const MAX_EXPANSIONS: usize = 2100;

const CLASSIFY_SEED: u64 = 0x6c6f_6770_6172_7431;

/// A common weight together with its distance below the rule's supremum.
///
/// Near the supremum of a bounded rule the weight itself carries too few
/// significant bits to pin the step ratio, so the headroom is tracked
/// separately and used by the closed forms that divide by it.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Level {
    c: f64,
    headroom: f64,
}

impl Level {
    fn from_weight(c: f64, max: Option<f64>) -> Self {
        let headroom = max.map_or(f64::INFINITY, |m| m - c);
        Self { c, headroom }
    }

    fn from_headroom(h: f64, max: f64) -> Self {
        Self {
            c: max - h,
            headroom: h,
        }
    }

    fn midpoint(a: Level, b: Level, max: Option<f64>) -> Self {
        match max {
            Some(m) if a.c > 0.5 * m && b.c > 0.5 * m => {
                Level::from_headroom(0.5 * (a.headroom + b.headroom), m)
            }
            _ => Level::from_weight(0.5 * (a.c + b.c), max),
        }
    }
}

/// The forward step `x -> y` with `relative_weight(x, y, rule) = c`.
#[derive(Debug, Clone)]
pub struct StepFormula {
    rule: MeanRule,
    max_weight: Option<f64>,
}

impl StepFormula {
    pub fn new(rule: &MeanRule) -> Self {
        Self {
            rule: rule.clone(),
            max_weight: rule.max_weight(),
        }
    }

    pub fn rule(&self) -> &MeanRule {
        &self.rule
    }

    /// Supremum of admissible weights; `None` when unbounded.
    pub fn max_weight(&self) -> Option<f64> {
        self.max_weight
    }

    /// The unique `y > x` whose sub-interval `[x, y]` has weight `c`.
    pub fn step(&self, x: f64, c: f64) -> Result<f64> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::NonFinite("step origin must be finite and positive"));
        }
        let level = self.admissible(c)?;
        self.step_level(x, level)
    }

    /// Applies `steps` forward steps of weight `c` starting at `start`.
    pub fn iterate(&self, start: f64, c: f64, steps: usize) -> Result<f64> {
        if !(start.is_finite() && start > 0.0) {
            return Err(Error::NonFinite("start point must be finite and positive"));
        }
        let level = self.admissible(c)?;
        let mut x = start;
        for _ in 0..steps {
            x = self.step_level(x, level)?;
            if !x.is_finite() {
                break;
            }
        }
        Ok(x)
    }

    fn admissible(&self, c: f64) -> Result<Level> {
        let max = self.max_weight.unwrap_or(f64::INFINITY);
        if !(c.is_finite() && c > 0.0 && c < max) {
            return Err(Error::WeightOutOfRange {
                rule: self.rule.to_string(),
                c,
                max,
            });
        }
        Ok(Level::from_weight(c, self.max_weight))
    }

    fn step_level(&self, x: f64, level: Level) -> Result<f64> {
        let Level { c, headroom } = level;
        let y = match &self.rule {
            MeanRule::Arithmetic => x * (2.0 + c) / headroom,
            MeanRule::Geometric => geometric_step(x, c),
            MeanRule::PowerMean(p) if p.abs() < POWER_MEAN_GEOMETRIC_CUTOFF => geometric_step(x, c),
            MeanRule::Harmonic => x * (c + c.hypot(1.0)),
            MeanRule::LeftEndpoint => x.mul_add(c, x),
            MeanRule::RightEndpoint => x / headroom,
            MeanRule::PowerMean(p) => return self.power_step(x, *p, level),
            MeanRule::Custom(_) => return self.numeric_step(x, c),
        };
        Ok(y)
    }

    /// Power means are scale-invariant, so the step is solved for the log
    /// ratio `t = ln(y / x)`. Close to the supremum of a bounded power mean
    /// the headroom is matched instead of the weight.
    fn power_step(&self, x: f64, p: f64, level: Level) -> Result<f64> {
        let Level { c, headroom } = level;
        let near_supremum = self.max_weight.is_some_and(|m| headroom < 0.5 * m);
        let g = |t: f64| -> Result<f64> {
            let z = t.exp();
            Ok(if near_supremum {
                headroom - power_mean_headroom(p, z)
            } else {
                t.exp_m1() / power_mean(p, 1.0, z) - c
            })
        };
        let bracket_failure = || Error::BracketFailure {
            rule: self.rule.to_string(),
            x,
            c,
        };

        // the weight never exceeds z - 1
        let mut t_lo = (0.5 * c).ln_1p();
        let mut g_lo = g(t_lo)?;
        if g_lo > 0.0 {
            return Err(bracket_failure());
        }
        let mut t_hi = c.ln_1p();
        let mut g_hi = g(t_hi)?;
        while g_hi < 0.0 {
            t_lo = t_hi;
            g_lo = g_hi;
            t_hi *= 2.0;
            if t_hi > f64::MAX.ln() {
                return Err(bracket_failure());
            }
            g_hi = g(t_hi)?;
        }

        match brent(g, t_lo, t_hi, g_lo, g_hi, STEP_REL_TOL, STEP_MAX_ITERATIONS)? {
            Root::Converged(t) => Ok(x * t.exp()),
            Root::Exhausted(t) => Err(Error::NoConvergence {
                iterations: STEP_MAX_ITERATIONS,
                residual: g(t)?.abs(),
            }),
        }
    }

    /// Root find on the step length `d = y - x`.
    fn numeric_step(&self, x: f64, c: f64) -> Result<f64> {
        let rule = &self.rule;
        let g = |d: f64| relative_weight(x, x + d, rule).map(|w| w - c);
        let bracket_failure = || Error::BracketFailure {
            rule: rule.to_string(),
            x,
            c,
        };

        // M(x, y) >= x bounds the weight at d = c*x/2 by c/2
        let mut d_lo = 0.5 * c * x;
        let mut g_lo = g(d_lo)?;
        if g_lo > 0.0 {
            return Err(bracket_failure());
        }
        let mut d_hi = c * x;
        let mut g_hi = g(d_hi)?;
        let mut expansions = 0;
        while g_hi < 0.0 {
            d_lo = d_hi;
            g_lo = g_hi;
            d_hi *= 2.0;
            expansions += 1;
            if expansions > MAX_EXPANSIONS || !(x + d_hi).is_finite() {
                return Err(bracket_failure());
            }
            g_hi = g(d_hi)?;
        }

        match brent(g, d_lo, d_hi, g_lo, g_hi, STEP_REL_TOL, STEP_MAX_ITERATIONS)? {
            Root::Converged(d) => Ok(x + d),
            Root::Exhausted(d) => Err(Error::NoConvergence {
                iterations: STEP_MAX_ITERATIONS,
                residual: g(d)?.abs() / c,
            }),
        }
    }

    /// Starting weight for the outer solve: the weight of the geometric
    /// step `[lo, lo*z]`, with the headroom taken from a closed form where
    /// the rule is bounded.
    fn initial_level(&self, lo: f64, z: f64) -> Result<Level> {
        let c = relative_weight(lo, lo * z, &self.rule)?;
        let Some(max) = self.max_weight else {
            return Ok(Level::from_weight(c, None));
        };
        let headroom = match &self.rule {
            MeanRule::Arithmetic => 4.0 / (z + 1.0),
            MeanRule::RightEndpoint => 1.0 / z,
            MeanRule::PowerMean(p) => power_mean_headroom(*p, z),
            _ => max - c,
        };
        Ok(if headroom < 0.5 * max {
            Level::from_headroom(headroom.max(max * f64::EPSILON), max)
        } else {
            Level::from_weight(c, Some(max))
        })
    }
}

fn geometric_step(x: f64, c: f64) -> f64 {
    let r = 0.5 * (c + c.hypot(2.0));
    x * r * r
}

/// Convenience wrapper around [`StepFormula::step`].
pub fn step_forward(x: f64, c: f64, rule: &MeanRule) -> Result<f64> {
    StepFormula::new(rule).step(x, c)
}

/// Result of [`solve_partition`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub partition: Partition,
    /// The common relative weight.
    pub c: f64,
    /// Number of terminal-point evaluations made by the outer solve.
    pub iterations: usize,
    /// `|x_n - hi| / hi` before the last point was pinned to `hi`.
    pub residual: f64,
}

/// Outer-solve settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solver {
    pub rel_tol: f64,
    pub max_iterations: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

impl Solver {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    /// Finds the partition of `interval` into `n` sub-intervals of equal
    /// relative weight under `rule`.
    pub fn solve(&self, interval: Interval, n: usize, rule: &MeanRule) -> Result<SolveReport> {
        check_tolerance(self.rel_tol)?;
        if n == 0 {
            return Err(Error::ZeroSubintervals);
        }
        let (lo, hi) = (interval.lo(), interval.hi());
        if n == 1 {
            return Ok(SolveReport {
                partition: Partition::new(vec![lo, hi])?,
                c: relative_weight(lo, hi, rule)?,
                iterations: 0,
                residual: 0.0,
            });
        }

        let formula = StepFormula::new(rule);
        let max = formula.max_weight;
        let mut search = Search {
            formula: &formula,
            interval,
            n,
            max_iterations: self.max_iterations,
            iterations: 0,
            best_residual: f64::INFINITY,
        };

        let z = common_ratio(interval, n)?;
        let first = formula.initial_level(lo, z)?;
        let (path, residual) = search.evaluate(first)?;
        if residual <= self.rel_tol {
            return search.finish(first, path, residual);
        }

        // Expand until the terminal point is bracketed around hi.
        let (mut below, mut above) = if path[n] < hi {
            (Some(first), None)
        } else {
            (None, Some(first))
        };
        while below.is_none() || above.is_none() {
            let next = match (below, above) {
                (Some(b), None) => match max {
                    Some(m) => Level::from_headroom(0.5 * b.headroom, m),
                    None => Level::from_weight(2.0 * b.c, None),
                },
                (None, Some(a)) => Level::from_weight(0.5 * a.c, max),
                _ => unreachable!(),
            };
            if !(next.c > 0.0 && next.c.is_finite() && next.headroom > 0.0) {
                return Err(Error::NoAdmissibleWeight {
                    rule: rule.to_string(),
                    hi,
                });
            }
            let (path, residual) = search.evaluate(next)?;
            if residual <= self.rel_tol {
                return search.finish(next, path, residual);
            }
            if path[n] < hi {
                below = Some(next);
            } else {
                above = Some(next);
            }
        }

        let (mut below, mut above) = (below.unwrap(), above.unwrap());
        loop {
            let mid = Level::midpoint(below, above, max);
            if mid == below || mid == above {
                return Err(search.no_convergence());
            }
            let (path, residual) = search.evaluate(mid)?;
            if residual <= self.rel_tol {
                return search.finish(mid, path, residual);
            }
            if path[n] < hi {
                below = mid;
            } else {
                above = mid;
            }
        }
    }
}

struct Search<'a> {
    formula: &'a StepFormula,
    interval: Interval,
    n: usize,
    max_iterations: usize,
    iterations: usize,
    best_residual: f64,
}

impl Search<'_> {
    /// Trajectory and relative terminal residual for one weight.
    fn evaluate(&mut self, level: Level) -> Result<(Vec<f64>, f64)> {
        if self.iterations >= self.max_iterations {
            return Err(self.no_convergence());
        }
        self.iterations += 1;
        let path = trajectory(self.formula, self.interval.lo(), self.n, level)?;
        let hi = self.interval.hi();
        let residual = (path[self.n] - hi).abs() / hi;
        self.best_residual = self.best_residual.min(residual);
        Ok((path, residual))
    }

    fn no_convergence(&self) -> Error {
        Error::NoConvergence {
            iterations: self.iterations,
            residual: self.best_residual,
        }
    }

    fn finish(&self, level: Level, mut path: Vec<f64>, residual: f64) -> Result<SolveReport> {
        let (lo, hi, n) = (self.interval.lo(), self.interval.hi(), self.n);
        path[n] = hi;
        let partition = Partition::new(path).map_err(|_| Error::TooNarrow { lo, hi, n })?;
        Ok(SolveReport {
            partition,
            c: level.c,
            iterations: self.iterations,
            residual,
        })
    }
}

/// All `n + 1` iterates from `lo`. A weight the rule cannot reach from some
/// point, or a step that overflows, yields an infinite terminal point.
fn trajectory(formula: &StepFormula, lo: f64, n: usize, level: Level) -> Result<Vec<f64>> {
    let mut path = Vec::with_capacity(n + 1);
    path.push(lo);
    let mut x = lo;
    for _ in 0..n {
        x = match formula.step_level(x, level) {
            Ok(y) if y.is_finite() => y,
            Ok(_) | Err(Error::BracketFailure { .. }) => {
                path.resize(n + 1, f64::INFINITY);
                return Ok(path);
            }
            Err(e) => return Err(e),
        };
        path.push(x);
    }
    Ok(path)
}

/// [`Solver::solve`] with the given tolerance and the default iteration cap.
pub fn solve_partition(
    interval: Interval,
    n: usize,
    rule: &MeanRule,
    rel_tol: f64,
) -> Result<SolveReport> {
    Solver::with_rel_tol(rel_tol).solve(interval, n, rule)
}

/// Probes whether `rule`'s relative weight is scale-invariant.
///
/// Draws `sample_count` pairs `0 < u < v` and scales `s` in `[1e-6, 1e6]`
/// from a fixed-seed generator and checks
/// `|w(s*u, s*v) - w(u, v)| <= rel_tol * w(u, v)` for each.
pub fn classify_rule(rule: &MeanRule, sample_count: usize, rel_tol: f64) -> Result<bool> {
    if sample_count == 0 {
        return Err(Error::ZeroSamples);
    }
    check_tolerance(rel_tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(CLASSIFY_SEED);
    for _ in 0..sample_count {
        let u = 10f64.powf(rng.random_range(-3.0..3.0));
        let z = 10f64.powf(rng.random_range(0.005..3.0));
        let s = 10f64.powf(rng.random_range(-6.0..6.0));
        let v = u * z;
        let w = relative_weight(u, v, rule)?;
        let ws = relative_weight(s * u, s * v, rule)?;
        if (ws - w).abs() > rel_tol * w {
            return Ok(false);
        }
    }
    Ok(true)
}
