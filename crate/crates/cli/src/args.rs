use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bvh",
    version,
    about = "Balanced varietal hypercube topology analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a topology and write its graph document.
    Build(BuildArgs),
    /// Audit the adjacency rules of a topology.
    Audit(AuditArgs),
    /// Measure metrics by BFS and compare with closed forms.
    Metrics(MetricsArgs),
    /// Emit the comparison tables and figure data, diffed against published values.
    Tables(TablesArgs),
    /// Route between two nodes.
    Route(RouteArgs),
    /// All-port one-to-all broadcast schedule.
    Broadcast(BroadcastArgs),
    /// Maximum set of vertex-disjoint paths between two nodes.
    Paths(PathsArgs),
    /// Terminal reliability from disjoint-path classes.
    Reliability(ReliabilityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Hc,
    Vq,
    Bh,
    Bvh,
}

impl From<FamilyArg> for bvh_core::Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Hc => Self::Hc,
            FamilyArg::Vq => Self::Vq,
            FamilyArg::Bh => Self::Bh,
            FamilyArg::Bvh => Self::Bvh,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    /// Structured text (JSON).
    Json,
    Plain,
}

#[derive(Debug, Args)]
pub struct Topology {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long = "dim")]
    pub dimension: u32,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub topology: Topology,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub topology: Topology,
    /// Use the uncorrected BVH case table (one rule line duplicated).
    #[arg(long)]
    pub as_printed: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// One or more dimensions, e.g. `--dim 1,2,3`.
    #[arg(long = "dim", value_delimiter = ',', required = true)]
    pub dimensions: Vec<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// Average distance, HC/BH/BVH, n = 1..6.
    AvgDistance,
    /// Cost-effectiveness factor grid.
    Cef,
    /// Time-cost-effectiveness factor grid.
    Tcef,
    /// Diameter of every family, n = 1..6.
    Diameter,
    /// Cost (degree x diameter) of every family, n = 1..6.
    Cost,
    /// Terminal reliability over time for 64-node HC, BH and BVH.
    Reliability,
    All,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub table: TableKind,
    /// Restrict CEF/TCEF output to a single rho column.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Write every CSV plus `diff.csv` into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Skip the comparison against published values.
    #[arg(long)]
    pub no_diff: bool,
    #[arg(long, default_value_t = 5000.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Greedy,
    Oracle,
    Both,
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    #[command(flatten)]
    pub topology: Topology,
    #[arg(long)]
    pub source: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, value_enum, default_value = "both")]
    pub policy: PolicyArg,
    /// Compare greedy and oracle over every pair instead of routing one.
    #[arg(long)]
    pub stretch: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BroadcastArgs {
    #[command(flatten)]
    pub topology: Topology,
    /// Defaults to the all-zeros node.
    #[arg(long)]
    pub root: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    #[command(flatten)]
    pub topology: Topology,
    #[arg(long)]
    pub source: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ReliabilityArgs {
    #[command(flatten)]
    pub topology: Topology,
    #[arg(long)]
    pub source: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
    /// Use the hand-listed path classes (BVH_2 and BVH_3 only).
    #[arg(long)]
    pub paper_classes: bool,
    #[arg(long, default_value_t = bvh_core::reliability::DEFAULT_LINK_RELIABILITY)]
    pub rl: f64,
    #[arg(long, default_value_t = bvh_core::reliability::DEFAULT_PROCESSOR_RELIABILITY)]
    pub rp: f64,
    /// Emit TR(t) instead of a single value.
    #[arg(long)]
    pub curve: bool,
    #[arg(long, default_value_t = bvh_core::reliability::DEFAULT_LINK_FAILURE_RATE)]
    pub lambda_link: f64,
    #[arg(long, default_value_t = bvh_core::reliability::DEFAULT_PROCESSOR_FAILURE_RATE)]
    pub lambda_proc: f64,
    #[arg(long, default_value_t = 5000.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_step: f64,
    #[command(flatten)]
    pub common: Common,
}
