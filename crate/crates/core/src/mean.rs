//! Two-point averaging rules used as the denominator of a relative weight.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::Error;

/// Power-mean exponents with `|p|` below this are evaluated as the geometric
/// mean, the `p -> 0` limit.
pub const POWER_MEAN_GEOMETRIC_CUTOFF: f64 = 1e-8;

/// Caller-supplied mean functional `M(u, v)`.
pub type MeanFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A named caller-supplied mean.
///
/// The functional must be pure, continuous, strictly positive and satisfy
/// `u <= M(u, v) <= v` for `0 < u <= v`. Violations are reported by the
/// solver as errors.
#[derive(Clone)]
pub struct CustomMean {
    name: String,
    func: MeanFn,
}

impl CustomMean {
    pub fn new<F>(name: impl Into<String>, func: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            func: Arc::new(func),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        (self.func)(u, v)
    }
}

impl fmt::Debug for CustomMean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomMean").field("name", &self.name).finish_non_exhaustive()
    }
}

/// The "average" of a sub-interval `[u, v]`.
#[derive(Debug, Clone)]
pub enum MeanRule {
    Arithmetic,
    Geometric,
    Harmonic,
    /// `((u^p + v^p) / 2)^(1/p)`; `p = 0` is the geometric mean.
    PowerMean(f64),
    LeftEndpoint,
    RightEndpoint,
    Custom(CustomMean),
}

impl MeanRule {
    pub fn custom<F>(name: impl Into<String>, func: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        MeanRule::Custom(CustomMean::new(name, func))
    }

    /// Every built-in rule, with a representative spread of power-mean
    /// exponents.
    pub fn builtins() -> Vec<MeanRule> {
        vec![
            MeanRule::Arithmetic,
            MeanRule::Geometric,
            MeanRule::Harmonic,
            MeanRule::LeftEndpoint,
            MeanRule::RightEndpoint,
            MeanRule::PowerMean(-2.0),
            MeanRule::PowerMean(-1.0),
            MeanRule::PowerMean(-0.5),
            MeanRule::PowerMean(0.0),
            MeanRule::PowerMean(0.5),
            MeanRule::PowerMean(1.0),
            MeanRule::PowerMean(2.0),
        ]
    }

    pub fn is_custom(&self) -> bool {
        matches!(self, MeanRule::Custom(_))
    }

    /// Evaluates `M(u, v)`. No validation; see [`crate::relative_weight`].
    pub fn mean(&self, u: f64, v: f64) -> f64 {
        match self {
            MeanRule::Arithmetic => 0.5 * (u + v),
            MeanRule::Geometric => geometric(u, v),
            MeanRule::Harmonic => harmonic(u, v),
            MeanRule::PowerMean(p) => power_mean(*p, u, v),
            MeanRule::LeftEndpoint => u,
            MeanRule::RightEndpoint => v,
            MeanRule::Custom(c) => c.eval(u, v),
        }
    }

    /// Supremum of the relative weight `(v - u) / M(u, v)` as `v / u -> inf`,
    /// or `None` when the weight is unbounded. Custom rules report `None`;
    /// their bound, if any, surfaces as a bracketing failure.
    pub fn max_weight(&self) -> Option<f64> {
        match self {
            MeanRule::Arithmetic => Some(2.0),
            MeanRule::RightEndpoint => Some(1.0),
            MeanRule::PowerMean(p) if *p > POWER_MEAN_GEOMETRIC_CUTOFF => Some(2f64.powf(1.0 / p)),
            _ => None,
        }
    }

    /// Relative weight of a sub-interval with endpoint ratio `z = v / u`,
    /// for the scale-invariant built-in rules. `None` for custom rules.
    pub fn weight_at_ratio(&self, z: f64) -> Option<f64> {
        let w = match self {
            MeanRule::Arithmetic => 2.0 * (z - 1.0) / (z + 1.0),
            MeanRule::Geometric => (z - 1.0) / z.sqrt(),
            MeanRule::Harmonic => (z * z - 1.0) / (2.0 * z),
            MeanRule::LeftEndpoint => z - 1.0,
            MeanRule::RightEndpoint => 1.0 - 1.0 / z,
            MeanRule::PowerMean(p) => (z - 1.0) / power_mean(*p, 1.0, z),
            MeanRule::Custom(_) => return None,
        };
        Some(w)
    }
}

impl fmt::Display for MeanRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanRule::Arithmetic => f.write_str("am"),
            MeanRule::Geometric => f.write_str("gm"),
            MeanRule::Harmonic => f.write_str("hm"),
            MeanRule::PowerMean(p) => write!(f, "pow:{p}"),
            MeanRule::LeftEndpoint => f.write_str("left"),
            MeanRule::RightEndpoint => f.write_str("right"),
            MeanRule::Custom(c) => f.write_str(c.name()),
        }
    }
}

impl FromStr for MeanRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rule = match s.trim() {
            "am" => MeanRule::Arithmetic,
            "gm" => MeanRule::Geometric,
            "hm" => MeanRule::Harmonic,
            "left" => MeanRule::LeftEndpoint,
            "right" => MeanRule::RightEndpoint,
            other => {
                let p = other
                    .strip_prefix("pow:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .filter(|p| p.is_finite())
                    .ok_or_else(|| Error::UnknownRule(other.to_string()))?;
                MeanRule::PowerMean(p)
            }
        };
        Ok(rule)
    }
}

fn geometric(u: f64, v: f64) -> f64 {
    let prod = u * v;
    if prod.is_normal() {
        prod.sqrt()
    } else {
        u.sqrt() * v.sqrt()
    }
}

fn harmonic(u: f64, v: f64) -> f64 {
    2.0 * u * (v / (u + v))
}

/// `max_weight - weight` at ratio `z` for a power mean with `p > 0`, without
/// the cancellation of subtracting two nearly equal weights.
///
/// With `M = M_p(1, z)`, `2^(1/p) M - (z - 1) = z ((1 + z^-p)^(1/p) - 1) + 1`.
pub(crate) fn power_mean_headroom(p: f64, z: f64) -> f64 {
    let excess = z * ((z.powf(-p)).ln_1p() / p).exp_m1();
    (excess + 1.0) / power_mean(p, 1.0, z)
}

pub(crate) fn power_mean(p: f64, u: f64, v: f64) -> f64 {
    if p.abs() < POWER_MEAN_GEOMETRIC_CUTOFF {
        return geometric(u, v);
    }
    // scale by the larger argument so u^p and v^p stay in range
    let m = u.max(v);
    let s = 0.5 * ((u / m).powf(p) + (v / m).powf(p));
    m * s.powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn basic_means() {
        assert_eq!(MeanRule::Arithmetic.mean(1.0, 2.0), 1.5);
        assert_eq!(MeanRule::Geometric.mean(2.0, 8.0), 4.0);
        assert!(rel(MeanRule::Harmonic.mean(1.0, 2.0), 4.0 / 3.0) < 1e-15);
        assert_eq!(MeanRule::LeftEndpoint.mean(1.0, 2.0), 1.0);
        assert_eq!(MeanRule::RightEndpoint.mean(1.0, 2.0), 2.0);
        assert!(rel(MeanRule::PowerMean(2.0).mean(1.0, 7.0), 5.0) < 1e-15);
    }

    #[test]
    fn power_mean_near_zero_is_geometric() {
        let g = MeanRule::Geometric.mean(3.0, 11.0);
        assert_eq!(MeanRule::PowerMean(0.0).mean(3.0, 11.0), g);
        assert_eq!(MeanRule::PowerMean(5e-9).mean(3.0, 11.0), g);
        assert_ne!(MeanRule::PowerMean(1e-6).mean(3.0, 11.0), g);
        assert!(rel(MeanRule::PowerMean(1e-6).mean(3.0, 11.0), g) < 1e-6);
    }

    #[test]
    fn power_mean_does_not_overflow() {
        let m = MeanRule::PowerMean(3.0).mean(1e200, 2e200);
        assert!(m.is_finite() && m > 1e200 && m < 2e200);
        let h = MeanRule::Harmonic.mean(1e300, 1e308);
        assert!(h.is_finite());
    }

    #[test]
    fn max_weights() {
        assert_eq!(MeanRule::Arithmetic.max_weight(), Some(2.0));
        assert_eq!(MeanRule::RightEndpoint.max_weight(), Some(1.0));
        assert_eq!(MeanRule::PowerMean(1.0).max_weight(), Some(2.0));
        assert!(rel(MeanRule::PowerMean(2.0).max_weight().unwrap(), 2f64.sqrt()) < 1e-15);
        assert_eq!(MeanRule::PowerMean(0.5).max_weight(), Some(4.0));
        assert_eq!(MeanRule::Geometric.max_weight(), None);
        assert_eq!(MeanRule::Harmonic.max_weight(), None);
        assert_eq!(MeanRule::LeftEndpoint.max_weight(), None);
        assert_eq!(MeanRule::PowerMean(0.0).max_weight(), None);
        assert_eq!(MeanRule::PowerMean(-1.0).max_weight(), None);
    }

    #[test]
    fn weight_approaches_supremum() {
        for rule in MeanRule::builtins() {
            let far = rule.weight_at_ratio(1e12).unwrap();
            match rule.max_weight() {
                Some(max) => assert!(far < max && rel(far, max) < 1e-3, "{rule}: {far} vs {max}"),
                None => assert!(far > 1e3, "{rule}: {far}"),
            }
        }
    }

    #[test]
    fn power_headroom_matches_subtraction() {
        for p in [0.5, 1.0, 2.0, 3.0] {
            let rule = MeanRule::PowerMean(p);
            let max = rule.max_weight().unwrap();
            for z in [1.5, 2.0, 10.0, 100.0] {
                let direct = max - rule.weight_at_ratio(z).unwrap();
                assert!(rel(power_mean_headroom(p, z), direct) < 1e-12, "p={p} z={z}");
            }
        }
        // AM closed form 4 / (z + 1) far out where subtraction has no digits left
        assert!(rel(power_mean_headroom(1.0, 1e15), 4.0 / (1e15 + 1.0)) < 1e-12);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["am", "gm", "hm", "left", "right", "pow:2", "pow:-0.5", "pow:0"] {
            let r: MeanRule = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!(matches!("median".parse::<MeanRule>(), Err(Error::UnknownRule(_))));
        assert!("pow:".parse::<MeanRule>().is_err());
        assert!("pow:inf".parse::<MeanRule>().is_err());
    }

    #[test]
    fn custom_rule() {
        let r = MeanRule::custom("shifted", |u, v| 0.5 * (u + v) + 1.0);
        assert_eq!(r.mean(1.0, 2.0), 2.5);
        assert_eq!(r.to_string(), "shifted");
        assert!(r.is_custom());
        assert_eq!(r.max_weight(), None);
        assert_eq!(r.weight_at_ratio(2.0), None);
        assert!(format!("{r:?}").contains("shifted"));
    }
}
