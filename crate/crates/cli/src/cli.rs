use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "logpart", version, about = "Equal relative-width interval partitions and band tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Log-equispaced partition of [lo, hi] into n sub-intervals
    Partition(PartitionArgs),
    /// Solve the equal-weight partition under each rule and compare it with the log-equispaced one
    Verify(VerifyArgs),
    /// Exponential x(t) = A e^(B t) through x(0) = lo and x(n) = hi
    Continuous(ContinuousArgs),
    /// Fewest bands of [lo, hi] with relative width at most epsilon
    Bands(BandsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: f64,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    /// Number of sub-intervals
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long)]
    pub n: usize,
    /// Comma-separated rules: am, gm, hm, left, right, pow:<p>, custom-shifted
    #[arg(long, default_value = "am,gm,hm,left,right")]
    pub rules: String,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ContinuousArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long)]
    pub n: usize,
    /// Evenly spaced sample positions over [0, n], endpoints included (default n + 1)
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    /// Relative-width budget per band
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: f64,
    /// Averaging rule for the relative width
    #[arg(long, default_value = "am")]
    pub rule: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}
