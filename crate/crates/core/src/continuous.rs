//! Continuous limit of the equal-weight recurrence.
//!
//! With the left endpoint as the average, the recurrence reads
//! `dx / x = k dn`, which integrates to `x(t) = A e^(B t)`. Fitting `A` and
//! `B` to `x(0) = lo` and `x(n) = hi` gives back the geometric partition at
//! integer `t`.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::partition::{check_tolerance, geometric_partition};

/// `x(t) = amplitude * exp(rate * t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFit {
    /// `A`, in the units of the partitioned quantity.
    pub amplitude: f64,
    /// `B`, log-growth per unit index.
    pub rate: f64,
}

impl ExponentialFit {
    /// Evaluates the fit at `t`. Errors on non-finite `t` and on results that
    /// overflow or underflow.
    pub fn sample(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::NonFinite("sample position"));
        }
        let x = self.amplitude * (self.rate * t).exp();
        if x.is_finite() && x > 0.0 {
            Ok(x)
        } else {
            Err(Error::SampleOutOfRange { t })
        }
    }
}

/// Fits `A = lo`, `B = ln(hi / lo) / n`.
pub fn fit_exponential(interval: Interval, n: usize) -> Result<ExponentialFit> {
    if n == 0 {
        return Err(Error::ZeroSubintervals);
    }
    Ok(ExponentialFit {
        amplitude: interval.lo(),
        rate: interval.log_ratio() / n as f64,
    })
}

/// See [`ExponentialFit::sample`].
pub fn sample(fit: &ExponentialFit, t: f64) -> Result<f64> {
    fit.sample(t)
}

/// True when the fitted exponential matches the geometric partition at every
/// integer index `0..=n` within relative `rel_tol`.
pub fn agreement_check(interval: Interval, n: usize, rel_tol: f64) -> Result<bool> {
    check_tolerance(rel_tol)?;
    let fit = fit_exponential(interval, n)?;
    let partition = geometric_partition(interval, n)?;
    for (i, &x) in partition.points().iter().enumerate() {
        let s = fit.sample(i as f64)?;
        if (s - x).abs() > rel_tol * x {
            return Ok(false);
        }
    }
    Ok(true)
}
