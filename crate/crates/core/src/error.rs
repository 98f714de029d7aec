use thiserror::Error;

/// Errors produced by partition construction, the mean-rule solver and the
/// band planner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interval bounds must be finite (got lo = {lo}, hi = {hi})")]
    NonFiniteBound { lo: f64, hi: f64 },

    #[error("interval bounds must be strictly positive (got lo = {lo}, hi = {hi})")]
    NonPositiveBound { lo: f64, hi: f64 },

    #[error("interval must satisfy lo < hi (got lo = {lo}, hi = {hi})")]
    Unordered { lo: f64, hi: f64 },

    #[error("sub-interval count must be at least 1")]
    ZeroSubintervals,

    #[error("[{lo}, {hi}] is too narrow to split into {n} strictly increasing points")]
    TooNarrow { lo: f64, hi: f64, n: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("sub-interval [{u}, {v}] is degenerate or reversed")]
    DegenerateSubinterval { u: f64, v: f64 },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("mean rule `{rule}` returned {value} for ({u}, {v}); expected a finite positive value")]
    InvalidMean { rule: String, u: f64, v: f64, value: f64 },

    #[error("weight {c} is outside the admissible range (0, {max}) for rule `{rule}`")]
    WeightOutOfRange { rule: String, c: f64, max: f64 },

    #[error("could not bracket a step of weight {c} from x = {x} under rule `{rule}`")]
    BracketFailure { rule: String, x: f64, c: f64 },

    #[error("no admissible common weight reaches hi = {hi} under rule `{rule}`")]
    NoAdmissibleWeight { rule: String, hi: f64 },

    #[error("solver did not converge within {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("tolerance must be finite and strictly positive (got {0})")]
    InvalidTolerance(f64),

    #[error("sample count must be at least 1")]
    ZeroSamples,

    #[error("exponential sample at t = {t} is not a finite positive number")]
    SampleOutOfRange { t: f64 },

    #[error("relative-error budget must be finite and strictly positive (got {0})")]
    InvalidBudget(f64),

    #[error("required band count {estimate:e} exceeds the supported maximum of 2^31")]
    BandCountOverflow { estimate: f64 },

    #[error("rule `{0}` is not scale-invariant; band planning requires a homogeneous mean")]
    NotHomogeneous(String),

    #[error("unknown mean rule `{0}` (expected am, gm, hm, left, right or pow:<p>)")]
    UnknownRule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
