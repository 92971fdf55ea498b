use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pointscheme::cli::{self, CommandError, CommandResult, EXIT_VERIFICATION};
use pointscheme::ffield_enum::{ScanConfig, DEFAULT_MAX_PRIME, DEFAULT_SCAN_BUDGET};
use pointscheme::verify::SweepBounds;

/// Chow classes, point counts and multidegrees of truncated point schemes.
#[derive(Debug, Parser)]
#[command(name = "pointscheme", version)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Shape literal, e.g. "r=2 d=3,4 n=5".
    #[arg(long, global = true)]
    shape: Option<String>,

    /// Relation file (JSON).
    #[arg(long, global = true)]
    relations: Option<std::path::PathBuf>,

    /// Seed for generated relations.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Coefficient field: Q or Fp:<p>.
    #[arg(long, global = true, default_value = "Q")]
    field: String,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Scan budget for finite-field enumeration.
    #[arg(long, global = true, env = "POINTSCHEME_BUDGET", default_value_t = DEFAULT_SCAN_BUDGET)]
    budget: u128,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Defect, expected dimension and stability of a shape.
    ExpectedDim,
    /// Number of points counted with multiplicity (zero expected dimension).
    Count,
    /// Chow class of the truncated point scheme.
    ChowClass,
    /// Multidegree table, or tuple for curves.
    Multidegree,
    /// Choice-function census and explicit points for seeded split relations.
    Oracle,
    /// Exhaustive scan over a prime field.
    FfEnum {
        /// Largest prime accepted.
        #[arg(long, default_value_t = DEFAULT_MAX_PRIME)]
        max_prime: u64,
        /// Include the enumerated tuples in the output.
        #[arg(long)]
        tuples: bool,
    },
    /// Run the self-check suite.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 6)]
        max_s: usize,
        /// Skip oracle comparisons for shapes with more raw choice functions.
        #[arg(long, default_value_t = 1_000_000)]
        max_raw: u128,
    },
}

fn shape_arg(args: &Args) -> Result<pointscheme::AlgebraShape, CommandError> {
    let text = args
        .shape
        .as_deref()
        .ok_or_else(|| CommandError::Usage("--shape is required".into()))?;
    cli::parse_shape(text)
}

fn run(args: &Args) -> CommandResult {
    let field = cli::parse_field(&args.field)?;
    match &args.command {
        Command::ExpectedDim => cli::expected_dim(&shape_arg(args)?),
        Command::Count => cli::count(&shape_arg(args)?),
        Command::ChowClass => cli::chow_class(&shape_arg(args)?),
        Command::Multidegree => cli::multidegree(&shape_arg(args)?),
        Command::Oracle => cli::oracle(&shape_arg(args)?, args.seed, field),
        Command::FfEnum { max_prime, tuples } => {
            let relations = match &args.relations {
                Some(path) => Some(std::fs::read_to_string(path).map_err(|e| {
                    CommandError::Usage(format!("cannot read {}: {e}", path.display()))
                })?),
                None => None,
            };
            let config = ScanConfig {
                max_prime: *max_prime,
                budget: args.budget,
            };
            cli::ff_enum(
                &shape_arg(args)?,
                relations.as_deref(),
                args.seed,
                field,
                &config,
                *tuples,
            )
        }
        Command::Verify {
            max_n,
            max_s,
            max_raw,
        } => {
            let bounds = SweepBounds {
                max_n: *max_n,
                max_relations: *max_s,
                max_raw_choices: *max_raw,
                ..SweepBounds::default()
            };
            cli::verify(&bounds, args.seed)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(out) => {
            if args.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON output"));
            } else {
                print!("{}", out.text);
            }
            match out.failed {
                Some(reason) => {
                    eprintln!("error: {reason}");
                    ExitCode::from(EXIT_VERIFICATION as u8)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
