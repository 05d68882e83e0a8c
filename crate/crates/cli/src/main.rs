//! Command-line front end: ingest tables, run measures, inference, sweeps
//! and sampling, emit CSV or JSON, and recompute the bundled reference
//! results.
//!
//! Exit codes: 0 on success, 1 on any module error (one machine-parsable
//! `Code: message` line on stderr), 2 on usage errors (from clap).

mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mclambda::inference::confidence_interval;
use mclambda::measures::{self, Direction, Family};
use mclambda::normal::{self, NormalGridSpec, RNG_ALGORITHM};
use mclambda::parse::{self, ParseOptions, ParsedTable};
use mclambda::report::ResultRow;
use mclambda::Error;

#[derive(Parser)]
#[command(
    name = "mclambda",
    version,
    about = "Top-t proportional-reduction-in-error association measures for two-way tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute association measures for a table
    Measure(MeasureArgs),
    /// Delta-method standard errors and confidence intervals (counts input)
    Ci(CiArgs),
    /// Sweep the correlation of an equal-frequency bivariate-normal grid
    Sweep(SweepArgs),
    /// Draw a multinomial sample from a table
    Sample(SampleArgs),
    /// Recompute the bundled reference results and compare
    Verify,
}

#[derive(Args)]
struct InputArgs {
    /// Path to a CSV table (one row per line, cells comma-separated)
    #[arg(long)]
    input: PathBuf,
    /// Treat cells as probabilities summing to 1 instead of counts
    #[arg(long)]
    probabilities: bool,
    /// Skip the first non-comment line (column headers)
    #[arg(long)]
    header: bool,
    /// Skip the first field of every data line (row labels)
    #[arg(long)]
    labels: bool,
}

impl InputArgs {
    fn load(&self) -> Result<ParsedTable, CliError> {
        let text = std::fs::read_to_string(&self.input)
            .map_err(|e| CliError::Io(format!("{}: {e}", self.input.display())))?;
        let opts = ParseOptions {
            probabilities: self.probabilities,
            header: self.header,
            labels: self.labels,
        };
        Ok(parse::parse_table(&text, &opts)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    YGivenX,
    XGivenY,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Direction {
        match d {
            DirectionArg::YGivenX => Direction::YGivenX,
            DirectionArg::XGivenY => Direction::XGivenY,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Plain,
    K,
    Both,
}

impl FamilyArg {
    fn families(self) -> Vec<Family> {
        match self {
            FamilyArg::Plain => vec![Family::Plain],
            FamilyArg::K => vec![Family::K],
            FamilyArg::Both => vec![Family::Plain, Family::K],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("scope").required(true).args(["t", "all_t", "symmetric"])))]
struct MeasureArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Order of the measure (number of top categories), 1 <= t < c
    #[arg(long)]
    t: Option<usize>,
    /// Evaluate every valid order
    #[arg(long)]
    all_t: bool,
    /// The classic symmetric measure (order 1)
    #[arg(long)]
    symmetric: bool,
    #[arg(long, value_enum, default_value = "y-given-x")]
    direction: DirectionArg,
    #[arg(long, value_enum, default_value = "both")]
    family: FamilyArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("scope").required(true).args(["t", "all_t"])))]
struct CiArgs {
    /// Path to a CSV table of counts (the sample size n is required)
    #[arg(long)]
    input: PathBuf,
    /// Skip the first non-comment line (column headers)
    #[arg(long)]
    header: bool,
    /// Skip the first field of every data line (row labels)
    #[arg(long)]
    labels: bool,
    /// Order of the measure, 1 <= t < c
    #[arg(long)]
    t: Option<usize>,
    /// Evaluate every valid order
    #[arg(long)]
    all_t: bool,
    #[arg(long, value_enum, default_value = "y-given-x")]
    direction: DirectionArg,
    #[arg(long, value_enum, default_value = "both")]
    family: FamilyArg,
    /// Significance level of the two-sided interval
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct SweepArgs {
    /// Categories per margin of the discretized normal grid
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    r: u32,
    #[arg(long, default_value_t = 0.0)]
    rho_start: f64,
    #[arg(long, default_value_t = 1.0)]
    rho_end: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Dump the constructed probability grid at this correlation instead
    /// of sweeping
    #[arg(long)]
    table_at: Option<f64>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of observations to draw
    #[arg(long)]
    n: u64,
    /// Seed of the deterministic generator
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

enum CliError {
    Module(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Module(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Measure(args) => cmd_measure(&args),
        Command::Ci(args) => cmd_ci(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Sample(args) => cmd_sample(&args),
        Command::Verify => return verify::run(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Module(e)) => {
            eprintln!("{}: {e}", e.code());
            ExitCode::FAILURE
        }
        Err(CliError::Io(msg)) => {
            eprintln!("IoError: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_measure(args: &MeasureArgs) -> Result<(), CliError> {
    let p = args.input.load()?.probabilities();
    let direction: Direction = args.direction.into();
    let families = args.family.families();
    let mut rows = Vec::new();

    if args.symmetric {
        let (m, _) = measures::symmetric_lambda(&p)?;
        rows.push(ResultRow::from_measure(&m));
    } else if args.all_t {
        for entry in measures::measure_profile(&p, direction)? {
            if !families.contains(&entry.family) {
                continue;
            }
            rows.push(match entry.result {
                Ok(m) => ResultRow::from_measure(&m),
                Err(Error::DegenerateMarginal { .. }) => {
                    ResultRow::degenerate_entry(entry.family, direction, entry.t)
                }
                Err(other) => return Err(other.into()),
            });
        }
    } else {
        let t = args.t.expect("clap enforces the scope group");
        for family in families {
            let m = measures::measure(&p, family, t, direction)?;
            rows.push(ResultRow::from_measure(&m));
        }
    }
    emit(&rows, args.format, MEASURE_COLUMNS);
    Ok(())
}

fn cmd_ci(args: &CiArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    let opts = ParseOptions {
        probabilities: false,
        header: args.header,
        labels: args.labels,
    };
    let table = match parse::parse_table(&text, &opts)? {
        ParsedTable::Counts(t) => t,
        ParsedTable::Probabilities(_) => unreachable!("counts mode is forced"),
    };
    let direction: Direction = args.direction.into();
    let orders: Vec<usize> = if args.all_t {
        let limit = match direction {
            Direction::XGivenY => table.rows(),
            _ => table.cols(),
        };
        (1..limit).collect()
    } else {
        vec![args.t.expect("clap enforces the scope group")]
    };

    let mut rows = Vec::new();
    for &t in &orders {
        for family in args.family.families() {
            match confidence_interval(&table, family, t, direction, args.alpha) {
                Ok(r) => rows.push(ResultRow::from_inference(&r)),
                Err(Error::DegenerateMarginal { .. }) if args.all_t => {
                    rows.push(ResultRow::degenerate_entry(family, direction, t));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    emit(&rows, args.format, CI_COLUMNS);
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let r = args.r as usize;
    if let Some(rho) = args.table_at {
        let table = NormalGridSpec::new(r, rho)?.build()?;
        print!("{}", parse::probability_table_to_csv(&table));
        return Ok(());
    }
    // The negated form also rejects a NaN step.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(args.step > 0.0) {
        return Err(Error::DomainError {
            what: "sweep step",
            value: args.step,
        }
        .into());
    }
    let mut rhos = Vec::new();
    let mut k = 0u64;
    loop {
        let rho = args.rho_start + k as f64 * args.step;
        if rho > args.rho_end + 1e-12 {
            break;
        }
        rhos.push(rho.min(args.rho_end));
        k += 1;
    }
    let rows = normal::sweep(r, &rhos)?;
    print!("{}", normal::sweep_csv(&rows));
    Ok(())
}

fn cmd_sample(args: &SampleArgs) -> Result<(), CliError> {
    if args.n < 1 {
        return Err(Error::DomainError {
            what: "sample size",
            value: args.n as f64,
        }
        .into());
    }
    let p = args.input.load()?.probabilities();
    let table = normal::sample_multinomial_seeded(&p, args.n, args.seed);
    match args.format {
        FormatArg::Csv => {
            println!(
                "# multinomial sample: generator={RNG_ALGORITHM} seed={} n={}",
                args.seed, args.n
            );
            print!("{}", parse::contingency_table_to_csv(&table));
        }
        FormatArg::Json => {
            let counts: Vec<Vec<f64>> = (0..table.rows())
                .map(|i| (0..table.cols()).map(|j| table.count(i, j)).collect())
                .collect();
            let doc = serde_json::json!({
                "generator": RNG_ALGORITHM,
                "seed": args.seed,
                "n": args.n,
                "counts": counts,
            });
            println!("{doc}");
        }
    }
    Ok(())
}

const MEASURE_COLUMNS: &[&str] = &[
    "family",
    "direction",
    "t",
    "value",
    "error_case1",
    "error_case2",
    "degenerate",
    "tie_warning",
];
const CI_COLUMNS: &[&str] = &[
    "family",
    "direction",
    "t",
    "estimate",
    "se",
    "ci_low",
    "ci_high",
    "degenerate",
    "tie_warning",
];

/// Prints result rows as CSV (6-decimal values, empty fields for absent
/// numbers) or as one JSON array in the stable schema.
fn emit(rows: &[ResultRow], format: FormatArg, columns: &[&str]) {
    match format {
        FormatArg::Json => {
            println!(
                "{}",
                serde_json::to_string(rows).expect("rows serialize cleanly")
            );
        }
        FormatArg::Csv => {
            println!("{}", columns.join(","));
            let fmt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
            for row in rows {
                let mut fields = vec![
                    row.family.to_string(),
                    row.direction.to_string(),
                    row.t.to_string(),
                ];
                if columns == MEASURE_COLUMNS {
                    fields.push(fmt(row.value));
                    fields.push(fmt(row.error_case1));
                    fields.push(fmt(row.error_case2));
                } else {
                    fields.push(fmt(row.value));
                    fields.push(fmt(row.se));
                    fields.push(fmt(row.ci_low));
                    fields.push(fmt(row.ci_high));
                }
                fields.push(row.degenerate.to_string());
                fields.push(row.tie_warning.to_string());
                println!("{}", fields.join(","));
            }
        }
    }
}
