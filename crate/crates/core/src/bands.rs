//! Constant relative-error band planning.
//!
//! Splits a spectral range into the fewest contiguous bands whose relative
//! width `Δλ / λ_avg` stays within a budget. The band edges are the
//! geometric partition of the range, so every band has the same relative
//! width and the edges do not depend on which average is used. Only the
//! reported weights, and therefore the meaning of the budget, do.
//!
//! Units are whatever the caller uses for the range; nothing is converted.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mean::MeanRule;
use crate::partition::{geometric_partition, relative_weight, LogSpacing};
use crate::solver::{classify_rule, step_forward};

/// Largest band count the planner will produce.
pub const MAX_BANDS: usize = 1 << 31;

const CUSTOM_CLASSIFY_SAMPLES: usize = 256;
const CUSTOM_CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    pub am_center: f64,
    pub gm_center: f64,
    /// Relative width under the plan's rule.
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct BandPlan {
    pub range: Interval,
    pub epsilon: f64,
    pub rule: MeanRule,
    pub n: usize,
    pub bands: Vec<Band>,
}

impl BandPlan {
    pub fn edges(&self) -> Vec<f64> {
        let mut edges: Vec<f64> = self.bands.iter().map(|b| b.lo).collect();
        edges.push(self.range.hi());
        edges
    }

    pub fn max_weight(&self) -> f64 {
        self.bands.iter().map(|b| b.weight).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Smallest `n >= 1` for which every band of the `n`-band geometric split
/// has relative weight `<= epsilon` under `rule`.
///
/// The estimate comes from inverting the rule's weight at the largest
/// admissible step ratio; it is then confirmed by evaluating the actual band
/// weights at `n` and `n - 1`.
pub fn min_bands(range: Interval, epsilon: f64, rule: &MeanRule) -> Result<usize> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidBudget(epsilon));
    }
    if rule.is_custom() && !classify_rule(rule, CUSTOM_CLASSIFY_SAMPLES, CUSTOM_CLASSIFY_TOL)? {
        return Err(Error::NotHomogeneous(rule.to_string()));
    }
    if relative_weight(range.lo(), range.hi(), rule)? <= epsilon {
        return Ok(1);
    }

    let z_max = match rule.max_weight() {
        Some(max) if epsilon >= max => f64::INFINITY,
        _ => match step_forward(1.0, epsilon, rule) {
            Ok(z) => z,
            Err(Error::BracketFailure { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        },
    };
    let estimate = (range.log_ratio() / z_max.ln()).ceil().max(1.0);
    if estimate.is_nan() || estimate > MAX_BANDS as f64 {
        return Err(Error::BandCountOverflow { estimate });
    }

    let mut n = estimate as usize;
    while max_band_weight(range, n, rule)? > epsilon {
        n += 1;
        if n > MAX_BANDS {
            return Err(Error::BandCountOverflow { estimate: n as f64 });
        }
    }
    while n > 1 && max_band_weight(range, n - 1, rule)? <= epsilon {
        n -= 1;
    }
    Ok(n)
}

/// Largest band weight of the `n`-band geometric split, without
/// materialising the edges.
fn max_band_weight(range: Interval, n: usize, rule: &MeanRule) -> Result<f64> {
    let spacing = LogSpacing::new(range, n)?;
    let mut max = f64::NEG_INFINITY;
    let mut u = spacing.point(0);
    for i in 1..=n {
        let v = spacing.point(i);
        if v <= u {
            return Err(Error::TooNarrow {
                lo: range.lo(),
                hi: range.hi(),
                n,
            });
        }
        max = max.max(relative_weight(u, v, rule)?);
        u = v;
    }
    Ok(max)
}

/// The minimal band plan for `range` under budget `epsilon`.
pub fn plan_bands(range: Interval, epsilon: f64, rule: &MeanRule) -> Result<BandPlan> {
    let n = min_bands(range, epsilon, rule)?;
    let partition = geometric_partition(range, n)?;
    let bands = partition
        .subintervals()
        .map(|(lo, hi)| {
            Ok(Band {
                lo,
                hi,
                am_center: 0.5 * (lo + hi),
                gm_center: lo.sqrt() * hi.sqrt(),
                weight: relative_weight(lo, hi, rule)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandPlan {
        range,
        epsilon,
        rule: rule.clone(),
        n,
        bands,
    })
}
