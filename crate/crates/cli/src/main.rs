//! `bentkit`: batch analysis of Boolean functions, reproduction of the
//! published catalog values and the direct-sum and Ω constructions.

mod analyze;
mod construct;
mod input;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bentkit::catalog::Catalog;
use bentkit::Error;

/// Exit status for a published value that did not reproduce.
const EXIT_MISMATCH: u8 = 1;
/// Exit status for malformed input.
const EXIT_USAGE: u8 = 2;
/// Exit status for an exhausted `--budget`.
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "bentkit", version, about = "Analysis and construction of cubic bent functions")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on search steps for subspace enumeration and Ω searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// JSON on standard output.
    #[value(alias = "json")]
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Compute invariants of one function.
    Analyze(AnalyzeArgs),
    /// Recompute the published catalog values and diff them.
    VerifyPaper {
        #[arg(value_enum, default_value_t = verify::Scope::All)]
        scope: verify::Scope,
    },
    /// Build concatenations, scan Ω sets or certify direct sums.
    Construct(ConstructArgs),
    /// List catalog entries.
    Catalog,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// `name:<entry>`, `anf:<monomials>[@n]`, `tt:<hex>@<n>`, or a bare name or hex table.
    function: String,
    #[arg(long)]
    snf: bool,
    #[arg(long)]
    index: bool,
    #[arg(long)]
    relaxed_index: bool,
    #[arg(long)]
    fp: bool,
    #[arg(long)]
    bent: bool,
    #[arg(long)]
    homogeneous: bool,
    #[arg(long)]
    gamma_rank: bool,
    /// List the M-subspaces of this dimension.
    #[arg(long, value_name = "R")]
    ms: Option<usize>,
    /// List the relaxed M-subspaces of this dimension.
    #[arg(long, value_name = "R")]
    rms: Option<usize>,
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("mode").required(true).args(["concat", "omega_scan", "product_check"])))]
struct ConstructArgs {
    /// Copies `i,j,k,l` of R3, h8_1, h10_4, h12_5.
    #[arg(long, value_name = "I,J,K,L")]
    concat: Option<String>,
    /// Homogeneity-preserving modifications of a base function.
    #[arg(long, value_name = "FUNCTION")]
    omega_scan: Option<String>,
    /// Decide the direct sum of two functions by the product-subspace check.
    #[arg(long, num_args = 2, value_names = ["F", "G"])]
    product_check: Option<Vec<String>>,
    /// Base-32 basis of the M-subspace used by `--omega-scan`.
    #[arg(long, value_name = "VECTORS")]
    subspace: Option<String>,
    /// Random span elements to fingerprint in `--omega-scan`.
    #[arg(long, default_value_t = 2)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Search the span for the Smith normal form prefix of this catalog entry.
    #[arg(long = "match", value_name = "ENTRY")]
    target: Option<String>,
    /// Write the concatenation or the Ω match as a catalog block.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

/// Ways a command can end unsuccessfully.
pub enum Failure {
    Usage(String),
    Library(Error),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(EXIT_USAGE)
            }
            Failure::Mismatch => ExitCode::from(EXIT_MISMATCH),
            Failure::Library(e) => {
                eprintln!("error: {e}");
                ExitCode::from(match e {
                    Error::BudgetExceeded { .. } => EXIT_BUDGET,
                    Error::Internal(_) | Error::SlotValidation { .. } => EXIT_MISMATCH,
                    _ => EXIT_USAGE,
                })
            }
        }
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) {
    match format {
        Format::Text => print!("{}", text(value)),
        Format::Structured => {
            println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
        }
    }
}

fn parse_counts(text: &str) -> Result<[usize; 4], Failure> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("`{text}` is not a list of four counts")))?;
    parts.try_into().map_err(|_| Failure::Usage(format!("`{text}` must have exactly four counts")))
}

fn write_block(path: &PathBuf, name: &str, n: usize, anf: &str) -> Result<(), Failure> {
    let text = format!("[{name}]\nn = {n}\nanf = {anf}\n");
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot size the thread pool: {e}")))?;
    }
    let catalog = Catalog::load()?;
    match cli.command {
        Command::Analyze(args) => {
            let input = input::resolve(&args.function, &catalog).map_err(Failure::Usage)?;
            let selection = analyze::Selection {
                bent: args.bent,
                homogeneous: args.homogeneous,
                fp: args.fp,
                index: args.index,
                relaxed_index: args.relaxed_index,
                gamma_rank: args.gamma_rank,
                snf: args.snf,
                ms: args.ms,
                rms: args.rms,
            };
            let report = analyze::run(&input, selection, cli.budget)?;
            emit(cli.format, &report, analyze::render_text);
            Ok(())
        }
        Command::VerifyPaper { scope } => {
            let report = verify::run(&catalog, scope)?;
            emit(cli.format, &report, verify::render_text);
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Command::Construct(args) => construct(&catalog, args, cli.format, cli.budget),
        Command::Catalog => {
            #[derive(Serialize)]
            struct Row<'a> {
                name: &'a str,
                n: usize,
                sourced: bool,
            }
            let rows: Vec<Row> =
                catalog.entries().iter().map(|e| Row { name: &e.name, n: e.n, sourced: e.is_sourced() }).collect();
            emit(cli.format, &rows, |rows| {
                rows.iter()
                    .map(|r| format!("{:<8} n = {:<3}{}\n", r.name, r.n, if r.sourced { "" } else { " (unsourced)" }))
                    .collect()
            });
            Ok(())
        }
    }
}

fn construct(catalog: &Catalog, args: ConstructArgs, format: Format, budget: Option<u64>) -> Result<(), Failure> {
    if let Some(text) = &args.concat {
        let report = construct::concat(catalog, parse_counts(text)?)?;
        if let Some(path) = &args.output {
            let anf = report
                .digits
                .as_deref()
                .ok_or_else(|| Failure::Usage("digit notation covers at most 32 variables".into()))?;
            write_block(path, "concat", report.num_vars, anf)?;
        }
        emit(format, &report, construct::render_concat);
        return Ok(());
    }
    if let Some(base) = &args.omega_scan {
        let input = input::resolve(base, catalog).map_err(Failure::Usage)?;
        let opts = construct::OmegaOptions {
            subspace: args.subspace.as_deref(),
            samples: args.samples,
            seed: args.seed,
            target: args.target.as_deref(),
            budget,
        };
        let report = construct::omega_scan(catalog, &input, &opts)?;
        if let Some(path) = &args.output {
            let anf = report
                .search
                .as_ref()
                .and_then(|s| s.generated_anf.as_deref())
                .ok_or_else(|| Failure::Usage("--output with --omega-scan needs a successful --match".into()))?;
            write_block(path, "omega", input.function.num_vars(), anf)?;
        }
        emit(format, &report, construct::render_omega);
        return Ok(());
    }
    if let Some(pair) = &args.product_check {
        let f = input::resolve(&pair[0], catalog).map_err(Failure::Usage)?;
        let g = input::resolve(&pair[1], catalog).map_err(Failure::Usage)?;
        let cert = construct::product_check(&f, &g, budget)?;
        emit(format, &cert, construct::render_certificate);
        return Ok(());
    }
    Err(Failure::Usage("choose --concat, --omega-scan or --product-check".into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.exit(),
    }
}
