//! Log-equispaced partitions and relative-weight evaluation.
//!
//! The relative weight of a sub-interval `[u, v]` under a mean rule `M` is
//! `(v - u) / M(u, v)`. For any scale-invariant mean this depends only on the
//! ratio `v / u`, so a partition with a constant ratio between consecutive
//! points has a constant weight under every such rule at once.

use crate::error::{Error, Result};
use crate::interval::{Interval, Partition};
use crate::mean::MeanRule;

/// Per-sub-interval relative weights of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightProfile {
    pub weights: Vec<f64>,
    /// Largest `|w_i - mean(w)|`.
    pub max_abs_deviation: f64,
}

impl WeightProfile {
    fn from_weights(weights: Vec<f64>) -> Self {
        let mean = weights.iter().sum::<f64>() / weights.len() as f64;
        let max_abs_deviation = weights
            .iter()
            .map(|w| (w - mean).abs())
            .fold(0.0, f64::max);
        Self {
            weights,
            max_abs_deviation,
        }
    }

    pub fn mean(&self) -> f64 {
        self.weights.iter().sum::<f64>() / self.weights.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.weights.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `max_abs_deviation / mean`.
    pub fn relative_deviation(&self) -> f64 {
        self.max_abs_deviation / self.mean()
    }
}

/// Splits `interval` into `n` sub-intervals with a constant ratio between
/// consecutive points, `x_i = hi^(i/n) * lo^((n-i)/n)`.
///
/// Evaluated as `lo * (hi / lo)^(i/n)`, or as the exponential of the convex
/// combination of `ln lo` and `ln hi` when `hi / lo` overflows, so neither
/// `hi^(i/n)` nor `lo^((n-i)/n)` is ever formed. The first and last points
/// are the interval bounds themselves, bit for bit.
pub fn geometric_partition(interval: Interval, n: usize) -> Result<Partition> {
    let spacing = LogSpacing::new(interval, n)?;
    let points: Vec<f64> = (0..=n).map(|i| spacing.point(i)).collect();
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::TooNarrow {
            lo: interval.lo(),
            hi: interval.hi(),
            n,
        });
    }
    Partition::new(points)
}

/// Point formula shared by [`geometric_partition`] and callers that stream
/// the points instead of collecting them.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSpacing {
    lo: f64,
    hi: f64,
    n: usize,
    ratio_finite: bool,
}

impl LogSpacing {
    pub(crate) fn new(interval: Interval, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSubintervals);
        }
        let (lo, hi) = (interval.lo(), interval.hi());
        Ok(Self {
            lo,
            hi,
            n,
            ratio_finite: (hi / lo).is_finite(),
        })
    }

    pub(crate) fn point(&self, i: usize) -> f64 {
        if i == 0 {
            return self.lo;
        }
        if i >= self.n {
            return self.hi;
        }
        let t = i as f64 / self.n as f64;
        if self.ratio_finite {
            // pow evaluates exp(t ln q) with extra internal precision
            self.lo * (self.hi / self.lo).powf(t)
        } else {
            ((1.0 - t) * self.lo.ln() + t * self.hi.ln()).exp()
        }
    }
}

/// `(v - u) / M(u, v)` for `0 < u < v`.
pub fn relative_weight(u: f64, v: f64, rule: &MeanRule) -> Result<f64> {
    if !u.is_finite() || !v.is_finite() {
        return Err(Error::NonFinite("sub-interval endpoint"));
    }
    if u <= 0.0 || u >= v {
        return Err(Error::DegenerateSubinterval { u, v });
    }
    let m = rule.mean(u, v);
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidMean {
            rule: rule.to_string(),
            u,
            v,
            value: m,
        });
    }
    Ok((v - u) / m)
}

/// Relative weight of every sub-interval of `partition`.
pub fn weight_profile(partition: &Partition, rule: &MeanRule) -> Result<WeightProfile> {
    let weights = partition
        .subintervals()
        .map(|(u, v)| relative_weight(u, v, rule))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightProfile::from_weights(weights))
}

/// The constant ratio `(hi / lo)^(1/n)` between consecutive points of the
/// geometric partition.
pub fn common_ratio(interval: Interval, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroSubintervals);
    }
    Ok((interval.log_ratio() / n as f64).exp())
}

/// True when every consecutive ratio is within relative `rel_tol` of the
/// first one.
pub fn is_geometric(partition: &Partition, rel_tol: f64) -> Result<bool> {
    check_tolerance(rel_tol)?;
    let p = partition.points();
    let first = p[1] / p[0];
    Ok(p
        .windows(2)
        .all(|w| (w[1] / w[0] - first).abs() <= rel_tol * first))
}

pub(crate) fn check_tolerance(rel_tol: f64) -> Result<()> {
    if rel_tol.is_finite() && rel_tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(rel_tol))
    }
}
