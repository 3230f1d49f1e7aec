use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use diverge_cli::commands::{
    run_capacity, run_collide, run_diff, run_gen, run_verify, Format, GlobalOpts,
};
use diverge_core::HorizonCap;

#[derive(Parser)]
#[command(
    name = "diverge",
    version,
    about = "Closed-form infinite permutations of the naturals: generate prefixes, compare \
             pairs, verify their properties over finite horizons, and compute exact \
             permutation capacities for small n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format (verify always reports JSON)
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Pin all tie-breaking so identical invocations are byte-identical
    #[arg(long, global = true)]
    deterministic: bool,

    /// Seed for randomized tie-breaking (ignored with --deterministic)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Abort clique search after this many milliseconds
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,

    /// Ceiling on every position and value any command may evaluate
    #[arg(
        long,
        global = true,
        env = "DIVERGE_HORIZON_CAP",
        default_value_t = 100_000_000
    )]
    horizon_cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a construction prefix as position,value rows
    Gen {
        /// identity | divergent:<i> | colliding:<j1,j2,...> | blockswap:<i> | residueswap:<q>:<i>
        construction: String,
        /// Prefix length
        #[arg(long, visible_alias = "horizon")]
        n: u64,
    },
    /// Positionwise absolute differences of two constructions, with an
    /// optional divergence certificate
    Diff {
        c1: String,
        c2: String,
        /// Horizon to scan
        #[arg(long, visible_alias = "horizon")]
        n: u64,
        /// Certificate thresholds, e.g. 1,5,10
        #[arg(long, value_delimiter = ',')]
        thresholds: Vec<u64>,
    },
    /// Positions where two constructions land on graph-adjacent values
    Collide {
        c1: String,
        c2: String,
        /// distance:<k> | complete | residue:<q> | file:<path>
        #[arg(long)]
        graph: String,
        /// Horizon to scan
        #[arg(long, visible_alias = "horizon")]
        n: u64,
    },
    /// Run the full streams/verify invariant suite and report pass/fail JSON
    Verify {
        /// Override the divergence/collision scan horizons (default 10^6)
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Exact omega table over permutations of [n], one row per n in 2..=nmax
    Capacity {
        /// distance:<k> | complete | residue:<q> | file:<path>
        #[arg(long)]
        graph: String,
        #[arg(long)]
        nmax: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = GlobalOpts {
        out: cli.out,
        format: cli.format,
        deterministic: cli.deterministic,
        seed: cli.seed,
        timeout_ms: cli.timeout_ms,
        cap: HorizonCap::new(cli.horizon_cap),
    };
    let result = match &cli.command {
        Command::Gen { construction, n } => run_gen(construction, *n, &opts),
        Command::Diff {
            c1,
            c2,
            n,
            thresholds,
        } => run_diff(c1, c2, *n, thresholds, &opts),
        Command::Collide { c1, c2, graph, n } => run_collide(c1, c2, graph, *n, &opts),
        Command::Verify { horizon } => run_verify(*horizon, &opts),
        Command::Capacity { graph, nmax } => run_capacity(graph, *nmax, &opts),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
