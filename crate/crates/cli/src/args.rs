use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "fanforge",
    version,
    about = "Exact g-vector fans, type cones and their polytopes"
)]
pub struct Cli {
    /// Worker threads for enumeration and per-wall work (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct DynkinArgs {
    /// Dynkin type: A, D (or E with the `type-e` feature).
    #[arg(long = "type")]
    pub kind: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Arrows such as `2>1,2>3` (1-based); linear orientation by default.
    #[arg(long)]
    pub orientation: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate a g-vector fan and write it as JSON.
    Fan {
        #[command(flatten)]
        dynkin: DynkinArgs,
        /// Seed file: an exchange matrix or a polygon triangulation.
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the exchange graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compute the type cone of a fan (read from stdin without `--fan`).
    Typecone {
        #[arg(long)]
        fan: Option<PathBuf>,
        /// Print a one-line summary instead of the JSON on stdout.
        #[arg(long)]
        report: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Realize a fan as `Q_c` (default `c` all ones) or as `P_h`, in ROFF.
    Realize {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        typecone: PathBuf,
        /// Comma-separated rationals, one per type-cone facet.
        #[arg(long, conflicts_with = "h")]
        c: Option<String>,
        /// Comma-separated rationals, one per ray.
        #[arg(long)]
        h: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The mesh-equation polytope of a Dynkin quiver, in ROFF.
    Abhy {
        #[command(flatten)]
        dynkin: DynkinArgs,
        /// Comma-separated rationals, one per mesh.
        #[arg(long)]
        c: Option<String>,
        /// Also write the AR quiver as JSON.
        #[arg(long)]
        ar: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a ROFF polytope realizes a fan; exit 1 if not.
    Verify {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        polytope: PathBuf,
    },
    /// Exchange graph of a fan as DOT, walls annotated by their dependencies.
    Graph {
        #[arg(long)]
        fan: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rerun the rank-two worked example and compare with stored values.
    #[command(name = "paper-a2")]
    PaperA2,
}
