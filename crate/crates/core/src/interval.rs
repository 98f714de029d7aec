//! Positive real intervals and ordered partitions of them.

use crate::error::{Error, Result};

/// A positive real interval `[lo, hi]` with `0 < lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFiniteBound { lo, hi });
        }
        if lo <= 0.0 || hi <= 0.0 {
            return Err(Error::NonPositiveBound { lo, hi });
        }
        if lo >= hi {
            return Err(Error::Unordered { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Natural log of `hi / lo`.
    ///
    /// Uses the quotient when it is representable, which keeps the rounding
    /// error independent of the magnitude of the endpoints. Falls back to the
    /// difference of logs for ranges like `[1e-300, 1e300]`.
    pub fn log_ratio(&self) -> f64 {
        let q = self.hi / self.lo;
        if q.is_finite() {
            q.ln()
        } else {
            self.hi.ln() - self.lo.ln()
        }
    }
}

/// Ordered points `lo = x_0 < x_1 < ... < x_n = hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    points: Vec<f64>,
}

impl Partition {
    /// Validates and wraps a point sequence. At least two points are needed;
    /// all must be finite, positive and strictly increasing.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(&p) = points.iter().find(|p| !p.is_finite() || **p <= 0.0) {
            return Err(Error::InvalidPartition(format!(
                "point {p} is not finite and positive"
            )));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "points[{}] = {} is not below points[{}] = {}",
                i,
                points[i],
                i + 1,
                points[i + 1]
            )));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn into_points(self) -> Vec<f64> {
        self.points
    }

    /// Number of sub-intervals.
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    /// The interval spanned by the first and last point.
    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.points[0],
            hi: self.points[self.points.len() - 1],
        }
    }

    /// Consecutive `(x_i, x_{i+1})` pairs.
    pub fn subintervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_rejects_bad_bounds() {
        assert!(matches!(Interval::new(5.0, 5.0), Err(Error::Unordered { .. })));
        assert!(matches!(Interval::new(7.0, 3.0), Err(Error::Unordered { .. })));
        assert!(matches!(Interval::new(0.0, 3.0), Err(Error::NonPositiveBound { .. })));
        assert!(matches!(Interval::new(-1.0, 3.0), Err(Error::NonPositiveBound { .. })));
        assert!(matches!(Interval::new(1.0, f64::INFINITY), Err(Error::NonFiniteBound { .. })));
        assert!(matches!(Interval::new(f64::NAN, 2.0), Err(Error::NonFiniteBound { .. })));
        assert!(Interval::new(1.0, 16.0).is_ok());
    }

    #[test]
    fn log_ratio_extreme_range() {
        let i = Interval::new(1e-300, 1e300).unwrap();
        let expected = 600.0 * std::f64::consts::LN_10;
        assert!((i.log_ratio() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1.0]).is_err());
        assert!(Partition::new(vec![1.0, 1.0]).is_err());
        assert!(Partition::new(vec![2.0, 1.0]).is_err());
        assert!(Partition::new(vec![0.0, 1.0]).is_err());
        assert!(Partition::new(vec![1.0, f64::NAN]).is_err());
        let p = Partition::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.interval(), Interval::new(1.0, 3.0).unwrap());
        assert_eq!(p.subintervals().collect::<Vec<_>>(), vec![(1.0, 2.0), (2.0, 3.0)]);
    }
}
