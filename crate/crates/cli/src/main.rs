mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ekrw", version, about = "Intersecting k-uniform families: constructions, shifting, separability and exact search")]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct FamilyArg {
    /// Family JSON file, or `-` for stdin.
    #[arg(long)]
    pub family: PathBuf,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    #[arg(long)]
    pub x: usize,
    #[arg(long)]
    pub y: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named family: star, hm, t3, g:<i> or j:<i>.
    Construct {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Center of a star or HM family.
        #[arg(long)]
        center: Option<usize>,
        /// The k-set F of an HM family.
        #[arg(long = "f", value_delimiter = ',')]
        f_set: Option<Vec<usize>>,
        /// The 3-set S of a t3 family.
        #[arg(long = "s", value_delimiter = ',')]
        s_set: Option<Vec<usize>>,
        /// The set E of a G or J family.
        #[arg(long = "e", value_delimiter = ',')]
        e_set: Option<Vec<usize>>,
        /// The set J of a J family.
        #[arg(long = "j", value_delimiter = ',')]
        j_set: Option<Vec<usize>>,
        #[arg(long)]
        x0: Option<usize>,
    },
    /// All closed-form bounds at (n, k).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
    },
    /// Parse a family and print it in canonical form.
    Normalize(FamilyArg),
    /// Predicates, centers, triples, embeddings and degrees of a family.
    Classify(FamilyArg),
    /// Apply one shift S_xy.
    Shift(PairArgs),
    /// Shift until stable.
    Stabilize {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<usize>,
        /// Refuse shifts that make the family EKR or HM and grow the exclusion set instead.
        #[arg(long)]
        guarded: bool,
    },
    /// All intersecting families mapped onto the given one by S_xy.
    Preimages(PairArgs),
    /// A_i profile of a family on a window (default: the counting window).
    Profile {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<usize>,
    },
    /// Components of the disjointness graph and the non-separability verdict.
    Separability(FamilyArg),
    /// The two-centre family built from |C|, a, b (and s).
    Prop1 {
        #[arg(long)]
        c: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        s: Option<usize>,
    },
    /// The r-sets meeting A partially, inside a ground set of size m.
    Prop2 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        asize: usize,
    },
    /// Random intersecting families, reproducible from --seed.
    Corpus {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 64)]
        max_len: usize,
    },
    /// Exact maximum admissible family.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Comma list from trivial, hm, g2, j2.
        #[arg(long, default_value = "")]
        forbid: String,
        #[arg(long)]
        degree_cap: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        /// List every maximum family up to isomorphism.
        #[arg(long)]
        enumerate: bool,
    },
    /// Check one theorem at (n, k): ekr, hm, hm2:<s>, main or maxdeg.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run the default verification grid.
    VerifyAll {
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
