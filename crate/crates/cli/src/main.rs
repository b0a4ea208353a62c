mod commands;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "tlc",
    version,
    about = "Exact tools for 2-level configurations and maximal 0/1 matrices"
)]
pub struct Cli {
    /// Content-addressed result store directory.
    #[arg(long, global = true, env = "TLC_STORE")]
    pub store: Option<PathBuf>,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Membership in M_d and maximality of a 0/1 matrix.
    Check { matrix: PathBuf },
    /// Maximal completion of a vector set given as JSON `{"d": .., "B": [[..]]}`.
    Complete { config: PathBuf },
    /// Canonical form of a 0/1 matrix under row and column permutations.
    Canon { matrix: PathBuf },
    /// Enumerate the maximal elements of M_d.
    Enum {
        #[arg(long)]
        dim: usize,
        /// Visit seeds in reverse order.
        #[arg(long)]
        reverse: bool,
        /// Stop after this many seeds (allows d = 5).
        #[arg(long)]
        budget: Option<u64>,
        /// Also print every class representative.
        #[arg(long)]
        print: bool,
    },
    /// Compress a maximal configuration (JSON) to weighted-graph text.
    Compress { config: PathBuf },
    /// Recover a configuration from weighted-graph text.
    Decompress { graph: PathBuf },
    /// Face of the correlation cone cut out by `<b,x> in {0,1}` for each given b.
    Face {
        #[arg(long)]
        dim: usize,
        /// File with one integer vector of length `dim` per line.
        #[arg(long)]
        b_vectors: PathBuf,
    },
    /// All faces of the correlation cone.
    FaceEnum {
        #[arg(long)]
        dim: usize,
    },
    /// Triangular core and binary/integral form of a polytope (JSON).
    Core { polytope: PathBuf },
    /// Slack matrix of the stable set polytope of a bipartite graph.
    StabSlack {
        graph: PathBuf,
        /// Nonnegativity and edge rows only, instead of the maximal slack matrix.
        #[arg(long)]
        basic: bool,
    },
    /// Counts of bipartite graphs and their maximal slack matrices.
    StabCensus {
        #[arg(long)]
        nodes: usize,
    },
    /// Table of class counts per dimension.
    Report {
        /// Enumerate dimensions 1..=max-dim when no store is given.
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
}

/// Malformed input; exits with status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
