use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "splab",
    version,
    about = "Support problems and reduction orders for Q^* and elliptic curves over Q"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "SPLAB_THREADS",
          value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemChoice {
    Mul,
    Ec,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Look for n and p with p dividing exactly one of x^n - 1, y^n - 1.
    Erdos(ErdosArgs),
    /// Sweep primes for a prescribed l-part profile of reduction orders.
    OrderSearch(OrderSearchArgs),
    /// Linear implication between reductions at one prime.
    Implication(ImplicationArgs),
    /// Affine implication with right-hand sides P0, Q0 at one prime.
    AffineImplication(AffineArgs),
    /// Recover e with Q_i = e P_i from reductions, verified exactly.
    DetectRelation(DetectArgs),
    /// Search for a small relation a P + b Q = 0.
    PairRelation(PairArgs),
    /// Per-prime power condition for lists of rationals, with exponent recovery.
    Schinzel(SchinzelArgs),
    /// Count points of a curve over F_p.
    Count(CountArgs),
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    #[arg(long, value_enum, default_value_t = SystemChoice::Mul)]
    pub system: SystemChoice,

    /// Coefficients "a1,a2,a3,a4,a6" (required for --system ec).
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, default_value_t = 2)]
    pub p_min: u64,

    #[arg(long)]
    pub p_max: u64,
}

#[derive(Debug, Args)]
pub struct ErdosArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,

    #[arg(long, allow_hyphen_values = true)]
    pub y: String,

    #[arg(long, default_value_t = 100)]
    pub n_max: u64,

    #[arg(long, default_value_t = 100_000)]
    pub p_max: u64,
}

#[derive(Debug, Args)]
pub struct OrderSearchArgs {
    #[command(flatten)]
    pub system: SystemArgs,

    /// Elements ("2,3/5") or points ("(0,0) (1,0)").
    #[arg(
        long = "points",
        visible_alias = "elements",
        allow_hyphen_values = true
    )]
    pub inputs: String,

    #[arg(long)]
    pub l: u64,

    /// One exponent per input, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub ks: Vec<u32>,

    #[command(flatten)]
    pub range: RangeArgs,

    /// Include per-prime l-parts in the report.
    #[arg(long)]
    pub detail: bool,
}

#[derive(Debug, Args)]
pub struct ImplicationArgs {
    #[command(flatten)]
    pub system: SystemArgs,

    #[arg(long = "Ps", visible_alias = "P", allow_hyphen_values = true)]
    pub ps: String,

    #[arg(long = "Qs", visible_alias = "Q", allow_hyphen_values = true)]
    pub qs: String,

    #[arg(long)]
    pub p: u64,

    /// Box size for searches that have no exact shortcut.
    #[arg(long, default_value_t = 64)]
    pub m_bound: u64,
}

#[derive(Debug, Args)]
pub struct AffineArgs {
    #[command(flatten)]
    pub system: SystemArgs,

    #[arg(long = "Ps", visible_alias = "P", allow_hyphen_values = true)]
    pub ps: String,

    #[arg(long = "P0", allow_hyphen_values = true)]
    pub p0: String,

    #[arg(long = "Qs", visible_alias = "Q", allow_hyphen_values = true)]
    pub qs: String,

    #[arg(long = "Q0", allow_hyphen_values = true)]
    pub q0: String,

    #[arg(long)]
    pub p: u64,

    #[arg(long, default_value_t = 64)]
    pub m_bound: u64,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub system: SystemArgs,

    #[arg(long = "Ps", visible_alias = "P", allow_hyphen_values = true)]
    pub ps: String,

    #[arg(long = "Qs", visible_alias = "Q", allow_hyphen_values = true)]
    pub qs: String,

    #[command(flatten)]
    pub range: RangeArgs,

    #[arg(long, default_value_t = 64)]
    pub m_bound: u64,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub system: SystemArgs,

    #[arg(long = "P", allow_hyphen_values = true)]
    pub p: String,

    #[arg(long = "Q", allow_hyphen_values = true)]
    pub q: String,

    /// Largest |a|, |b| tried.
    #[arg(long, default_value_t = 5)]
    pub bound: u64,
}

#[derive(Debug, Args)]
pub struct SchinzelArgs {
    #[arg(long = "Ps", visible_alias = "P", allow_hyphen_values = true)]
    pub ps: String,

    #[arg(long = "Qs", visible_alias = "Q", allow_hyphen_values = true)]
    pub qs: String,

    #[command(flatten)]
    pub range: RangeArgs,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,

    #[command(flatten)]
    pub range: RangeArgs,

    /// Random points used to check each group order.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}
