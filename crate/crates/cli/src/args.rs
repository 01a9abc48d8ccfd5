use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "distsep", version, about = "Exact EDM geometry, nested polygons and rank brackets")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Largest n for symbolic rational-function checks.
    #[arg(long, global = true, default_value_t = distsep::polygeom::DEFAULT_SYMBOLIC_LIMIT)]
    pub symbolic_limit: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Distance matrices.
    #[command(subcommand)]
    Edm(EdmCmd),
    /// Structural checks on D, D' and the slice polygons.
    #[command(subcommand)]
    Claims(ClaimsCmd),
    /// Minimum nested polygons.
    #[command(subcommand)]
    Nested(NestedCmd),
    /// Nonnegative factorization search.
    #[command(subcommand)]
    Nmf(NmfCmd),
    /// Lower and upper bounds on the nonnegative rank.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Randomized protocols computing a matrix in expectation.
    #[command(subcommand)]
    Protocol(ProtocolCmd),
    /// Summary table over several sizes.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AlphaArgs {
    /// Number of points; must match --alpha when both are given.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated rationals, e.g. 0,1/2,3.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "random")]
    pub alpha: Option<String>,
    /// Draw this many distinct random rationals (uses --seed).
    #[arg(long)]
    pub random: Option<usize>,
    /// Bound on numerators and denominators of random entries.
    #[arg(long, alias = "bound", default_value_t = 50)]
    pub denom_bound: u32,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdmCmd {
    /// Build D, D' and the slice polygons.
    Gen(AlphaArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimsCmd {
    /// Run every check and report exact witnesses for failures.
    Verify(ClaimsArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct ClaimsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub alpha: AlphaArgs,
    /// Random points per edge for the quadratic recovery check.
    #[arg(long, default_value_t = 4)]
    pub vieta_points: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NestedCmd {
    /// Solve an instance {inner, outer} given as JSON.
    Solve(NestedArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct NestedArgs {
    #[arg(long)]
    pub input: std::path::PathBuf,
    /// Cross-check k with the brute-force search.
    #[arg(long)]
    pub oracle: bool,
    /// Grid points per outer edge for the brute-force search.
    #[arg(long, default_value_t = distsep::nested::oracle::DEFAULT_GRID)]
    pub grid: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NmfCmd {
    /// Search for an approximate factorization of a given size.
    Search(NmfArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct NmfArgs {
    /// A matrix (array of rows) or an object with an "alpha" list.
    #[arg(long)]
    pub target: std::path::PathBuf,
    /// Use D' instead of D when the target is given by alpha.
    #[arg(long)]
    pub stochastic: bool,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 8)]
    pub seeds: usize,
    #[arg(long, default_value_t = 5000)]
    pub iters: usize,
    /// Max-abs residual tolerance.
    #[arg(long, default_value_t = distsep::nmf::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsCmd {
    /// Bracket rank_+ of D' for an alpha vector.
    Bracket(BracketArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct BracketArgs {
    /// JSON with an "alpha" list (an `edm gen` report also works).
    #[arg(long)]
    pub input: Option<std::path::PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub alpha: AlphaArgs,
    /// Seeds for the numeric search below the exact upper bound; 0 skips it.
    #[arg(long, default_value_t = 0)]
    pub seeds: usize,
    #[arg(long, default_value_t = 3000)]
    pub iters: usize,
    #[arg(long, default_value_t = distsep::nmf::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolCmd {
    /// Sample the protocol built from an exact factorization.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    /// Factorization JSON {mode: "exact", B, C}.
    #[arg(long)]
    pub factorization: std::path::PathBuf,
    /// One-based cell "i,j".
    #[arg(long)]
    pub cell: String,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    /// Comma-separated sizes, e.g. 4,8,16,32.
    #[arg(long)]
    pub n_list: String,
    #[arg(long, alias = "bound", default_value_t = 50)]
    pub denom_bound: u32,
    /// Random alpha vectors per size.
    #[arg(long, default_value_t = 1)]
    pub instances: usize,
}
