//! Interval partitions with constant relative sub-interval width.
//!
//! The relative weight of a sub-interval `[u, v]` is its width divided by an
//! average of its endpoints. Partitioning `[lo, hi]` so that every
//! sub-interval has the same weight gives the log-equispaced points
//! `x_i = lo * (hi / lo)^(i / n)` whether the average is the arithmetic
//! mean, the geometric mean, an endpoint, or any other scale-invariant mean.
//!
//! ```
//! use logpart::{geometric_partition, solve_partition, Interval, MeanRule};
//!
//! let range = Interval::new(1.0, 16.0)?;
//! let closed = geometric_partition(range, 4)?;
//! let solved = solve_partition(range, 4, &MeanRule::Geometric, 1e-10)?;
//! for (a, b) in closed.points().iter().zip(solved.partition.points()) {
//!     assert!((a - b).abs() <= 1e-9 * a);
//! }
//! # Ok::<(), logpart::Error>(())
//! ```

pub mod bands;
pub mod continuous;
mod error;
mod interval;
pub mod mean;
pub mod partition;
mod roots;
pub mod solver;

pub use bands::{min_bands, plan_bands, Band, BandPlan};
pub use continuous::{agreement_check, fit_exponential, sample, ExponentialFit};
pub use error::{Error, Result};
pub use interval::{Interval, Partition};
pub use mean::{CustomMean, MeanRule};
pub use partition::{
    common_ratio, geometric_partition, is_geometric, relative_weight, weight_profile,
    WeightProfile,
};
pub use solver::{
    classify_rule, solve_partition, step_forward, SolveReport, Solver, StepFormula,
};
