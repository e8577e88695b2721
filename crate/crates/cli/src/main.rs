use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::{CliError, Format};

#[derive(Parser)]
#[command(name = "sl2kit", version)]
#[command(about = "Presentations, abelianizations and coset enumeration around SL2(Z[1/m])")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized samples
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Coset table capacity for enumerations
    #[arg(long, global = true, default_value_t = 2_000_000)]
    max_cosets: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Hlt,
    Felsch,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Alphabet {
    Abu,
    Xy,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PresentationSource {
    /// Presentation file
    #[arg(long)]
    presentation: Option<PathBuf>,
    /// Use the built-in H_m
    #[arg(long)]
    hm: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification campaign
    VerifyPaper {
        /// Values of m: `A..B` (inclusive), `A..=B` or a comma list
        #[arg(long, default_value = "1..50")]
        m_range: String,
        /// Odd moduli for the SL2(Z/rZ) family
        #[arg(long, default_value = "3,5,7")]
        r: String,
        /// Random words per m in the decomposition round-trip
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Abelian invariants of a presentation
    Abelianize {
        #[command(flatten)]
        source: PresentationSource,
        /// Also print the relation matrix and invariant factors
        #[arg(short, long)]
        verbose: bool,
    },
    /// Todd-Coxeter enumeration of the cosets of a subgroup
    CosetEnum {
        #[arg(long)]
        presentation: PathBuf,
        /// Comma-separated subgroup generators (default: trivial subgroup)
        #[arg(long, default_value = "")]
        subgroup: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Hlt)]
        strategy: StrategyArg,
        /// Print the permutation action of each generator
        #[arg(long)]
        table: bool,
    },
    /// Cross-check |SL2(Z/rZ)| by coset enumeration, BFS and direct count
    VerifyCorollary {
        #[arg(long)]
        r: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Hlt)]
        strategy: StrategyArg,
    },
    /// Factor a unimodular matrix over Z[1/m] into generators
    Decompose {
        #[arg(long)]
        m: u64,
        /// `[[a, b], [c, d]]`, entries `n` or `n/d`
        #[arg(long)]
        matrix: String,
        #[arg(long, value_enum, default_value_t = Alphabet::Xy)]
        alphabet: Alphabet,
    },
    /// Check the matrix identities among A, Q_m, B and U_m
    VerifyLemma {
        #[arg(long)]
        m: u64,
    },
    /// Evaluate every relator under a matrix assignment
    CheckRelations {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        assign: PathBuf,
        /// Read matrices over Z[1/M], overriding the file
        #[arg(long, conflicts_with = "modulus")]
        m: Option<u64>,
        /// Read matrices modulo R, overriding the file
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Order of SL2(Z/rZ) by breadth-first search and by counting
    Sl2Order {
        #[arg(long)]
        r: u64,
    },
}

impl From<StrategyArg> for sl2kit::coset::Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Hlt => sl2kit::coset::Strategy::Hlt,
            StrategyArg::Felsch => sl2kit::coset::Strategy::Felsch,
        }
    }
}

fn run(cli: Cli) -> Result<report::Output, CliError> {
    let ctx = commands::Context {
        seed: cli.seed,
        max_cosets: cli.max_cosets,
    };
    match cli.command {
        Command::VerifyPaper { m_range, r, samples } => commands::verify_paper(&ctx, &m_range, &r, samples),
        Command::Abelianize { source, verbose } => {
            commands::abelianize(source.presentation.as_deref(), source.hm, verbose)
        }
        Command::CosetEnum {
            presentation,
            subgroup,
            strategy,
            table,
        } => commands::coset_enum(&ctx, &presentation, &subgroup, strategy.into(), table),
        Command::VerifyCorollary { r, strategy } => commands::verify_corollary(&ctx, r, strategy.into()),
        Command::Decompose { m, matrix, alphabet } => {
            commands::decompose(m, &matrix, matches!(alphabet, Alphabet::Xy))
        }
        Command::VerifyLemma { m } => commands::verify_lemma(m),
        Command::CheckRelations {
            presentation,
            assign,
            m,
            modulus,
        } => commands::check_relations(&presentation, &assign, m, modulus),
        Command::Sl2Order { r } => commands::sl2_order(r),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            out.print(format);
            ExitCode::from(out.code)
        }
        Err(e) => {
            e.print(format);
            ExitCode::from(e.code)
        }
    }
}
