//! Thin argument parser around [`quadrics::cli::run`]. All logic lives in
//! the library; this file only maps flags onto a job and forwards bytes.

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadrics::cli::{self, Command, Format, InputSource, JobSpec};

#[derive(Parser)]
#[command(name = "quadrics", about = "Exact analysis of families of quadratic forms")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Classify a pair of quadratics against a family: a spanned member,
    /// a split pencil member, or a common isotropic plane
    Classify(Common),
    /// Exact radical-ideal membership of a polynomial
    Radical(Common),
    /// Incidence checks: closure, robustness fraction, three-group
    /// cross-closure, or the pairwise radical condition
    SgVerify(Common),
    /// Dimension of the linear span of a family of quadratics
    Dim(Common),
    /// Zero test for a sum of up to three products of quadratics
    Pit(Common),
    /// Seeded instance with a planted witness, consumable by classify
    Generate {
        /// Witness shape: "ii" (split pencil member) or "iii" (shared plane)
        #[arg(long)]
        case: String,
        /// Number of variables
        #[arg(long)]
        n: usize,
        /// Make the plane members full quadratics instead of bare squares
        #[arg(long, default_value_t = false)]
        homogenized: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Input JSON: a file path, or "-" for stdin
    #[arg(long)]
    input: Option<String>,
    /// Seed for every randomized step; echoed in the report
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on live monomials in expansions and the radical oracle
    #[arg(long)]
    max_terms: Option<usize>,
    /// Cap on critical pairs in the radical oracle
    #[arg(long)]
    max_pairs: Option<usize>,
    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Radical-oracle confirmation passes
    #[arg(long, value_enum, default_value_t = OracleArg::On)]
    oracle: OracleArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    On,
    Off,
}

fn main() {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Sub::Classify(c) => (Command::Classify, c),
        Sub::Radical(c) => (Command::Radical, c),
        Sub::SgVerify(c) => (Command::SgVerify, c),
        Sub::Dim(c) => (Command::Dim, c),
        Sub::Pit(c) => (Command::Pit, c),
        Sub::Generate { case, n, homogenized, common } => {
            (Command::Generate { case, n, homogenized }, common)
        }
    };
    let spec = JobSpec {
        command,
        input: common.input.map(|p| {
            if p == "-" {
                InputSource::Stdin
            } else {
                InputSource::Path(p.into())
            }
        }),
        seed: common.seed,
        max_terms: common.max_terms,
        max_pairs: common.max_pairs,
        format: match common.format {
            FormatArg::Human => Format::Human,
            FormatArg::Json => Format::Json,
        },
        oracle: matches!(common.oracle, OracleArg::On),
    };
    let out = cli::run(&spec);
    if !out.stdout.is_empty() {
        print!("{}", out.stdout);
        if !out.stdout.ends_with('\n') {
            println!();
        }
    }
    if !out.stderr.is_empty() {
        eprintln!("{}", out.stderr);
    }
    std::process::exit(out.code);
}
