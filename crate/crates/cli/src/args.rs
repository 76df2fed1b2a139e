use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sft", version, about = "Exact SFT algebra: hierarchies, brackets, Weyl actions, Hurwitz counts")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write a run manifest (flags, model hash, result digest) to this file.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Orbit model file; the circle when omitted.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Worker threads for sweeps; output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a truncated Hamiltonian.
    #[command(subcommand)]
    Gen(Gen),
    /// Poisson bracket of two polynomial files.
    Bracket {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// One exact coefficient of the bracket of two series.
    BracketCoeff {
        /// Signed indices, e.g. "[-2,1,1]".
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        filter: FilterArg,
    },
    /// Check that two series Poisson-commute on a window.
    Verify {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        window: u32,
        #[command(flatten)]
        filter: FilterArg,
    },
    /// Search multiplicative sign assignments making two filtered levels commute.
    SignSearch {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        window: u32,
        /// Largest |index| whose sign is varied.
        #[arg(long)]
        bound: u32,
        #[command(flatten)]
        filter: FilterArg,
    },
    /// Branched-cover counts and branching Hamiltonians.
    #[command(subcommand)]
    Hurwitz(Hurwitz),
    /// Same as `hurwitz rho`.
    Rho(RhoArgs),
    /// Weyl algebra and cobordism operations on JSON files.
    #[command(subcommand)]
    Weyl(Weyl),
    /// Read a file and write it back in canonical form.
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FilterArg {
    /// Degree filter for filtered series: target, none, max or degree=N.
    #[arg(long, default_value = "target")]
    pub filter: String,
}

#[derive(Subcommand, Debug)]
pub enum Gen {
    /// Circle hierarchy.
    Kdv {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        cutoff: u32,
    },
    /// Degree-filtered hierarchy of the model.
    Filtered {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        cutoff: u32,
        #[command(flatten)]
        filter: FilterArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum Hurwitz {
    /// Weighted count of covers with the given monodromy.
    Count {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        lp: String,
        #[arg(long)]
        lm: String,
        #[arg(long)]
        nu: String,
        #[arg(long)]
        connected: bool,
        /// Enumeration degree bound.
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Branching Hamiltonian of a profile.
    Bh {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        cutoff: u32,
    },
    /// Decompose a circle level into branching Hamiltonians.
    Rho(RhoArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RhoArgs {
    #[arg(long)]
    pub j: u32,
    #[arg(long)]
    pub cutoff: u32,
    /// Correction profile to include; repeatable. Defaults to the genus-0 candidates.
    #[arg(long = "profile")]
    pub profiles: Vec<String>,
    /// Solve with the leading term only.
    #[arg(long, conflicts_with = "profiles")]
    pub bare: bool,
}

#[derive(Subcommand, Debug)]
pub enum Weyl {
    /// Star product.
    Star(BinaryWeyl),
    /// Graded commutator.
    Commutator(BinaryWeyl),
    /// `[H, H]` up to an hbar order.
    Master {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        order: i32,
    },
    /// Left or right action on a boundary element.
    Action {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        order: i32,
        #[command(flatten)]
        ends: Ends,
    },
    /// Cobordism differential of a boundary element.
    Differential {
        #[arg(long)]
        g: PathBuf,
        #[command(flatten)]
        cobordism: Cobordism,
    },
    /// Master-equation residual of a cobordism.
    Residual {
        #[command(flatten)]
        cobordism: Cobordism,
    },
}

#[derive(Args, Debug)]
pub struct BinaryWeyl {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long)]
    pub order: i32,
}

#[derive(Args, Debug)]
pub struct Ends {
    /// Model of the positive end; the negative end uses --model.
    #[arg(long)]
    pub model_plus: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Cobordism {
    /// Even potential on the boundary module; zero when omitted.
    #[arg(long)]
    pub potential: Option<PathBuf>,
    #[arg(long)]
    pub h_minus: PathBuf,
    #[arg(long)]
    pub h_plus: PathBuf,
    #[arg(long)]
    pub order: i32,
    #[command(flatten)]
    pub ends: Ends,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ExportKind {
    Model,
    Polynomial,
    Weyl,
    Boundary,
}
