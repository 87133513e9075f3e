//! `testability`: design metrics, quality-model scores and the statistics
//! used to validate them.
//!
//! Exit status: 0 on success, 1 when a computation or replication check
//! fails, 2 on invalid input (flags, files, schema).

mod analysis;
mod error;
mod measure;
mod output;
mod replicate;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use testability_core::quality::{BUILTIN_FLEXIBILITY, BUILTIN_MODIFIABILITY, BUILTIN_TESTABILITY};
use testability_core::replication::TableSelector;
use testability_core::stats::DfConvention;

use error::CliError;
use output::Output;

#[derive(Parser)]
#[command(
    name = "testability",
    version,
    about = "Object-oriented design metrics and testability estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum AggregateArg {
    #[default]
    Mean,
    Sum,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Direction {
    /// Rank 1 is the lowest value.
    #[default]
    Ascending,
    /// Rank 1 is the highest value.
    Descending,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Ties {
    /// Tied values share the mean of the ranks they span.
    #[default]
    Average,
    /// Tied values are ranked by order of appearance.
    First,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Method {
    #[default]
    Pearson,
    Spearman,
}

#[derive(Subcommand)]
enum Command {
    /// Compute metrics, factor scores and testability for one or more class models.
    ///
    /// Metrics are per-class ratios (ENM, INM, COM in [0, 1]) and a count
    /// (CPM), folded into one project vector. Several models are ranked
    /// against each other in argument order.
    Measure {
        /// Class-model JSON documents, one project each.
        #[arg(required = true)]
        models: Vec<PathBuf>,
        /// Modifiability coefficients: built-in name or JSON file.
        #[arg(long, default_value = BUILTIN_MODIFIABILITY)]
        modifiability: String,
        /// Flexibility coefficients: built-in name or JSON file.
        #[arg(long, default_value = BUILTIN_FLEXIBILITY)]
        flexibility: String,
        /// Testability coefficients: built-in name or JSON file.
        #[arg(long, default_value = BUILTIN_TESTABILITY)]
        testability: String,
        /// How class vectors are folded into the project vector.
        #[arg(long, value_enum, default_value_t)]
        aggregate: AggregateArg,
        #[arg(long, value_enum, default_value_t)]
        rank_direction: Direction,
        /// Emit per-class metric rows instead of the project report.
        #[arg(long)]
        classes: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Rank the values of one CSV column.
    Rank {
        dataset: PathBuf,
        #[arg(long)]
        column: String,
        #[arg(long, value_enum, default_value_t)]
        ties: Ties,
        #[arg(long, value_enum, default_value_t)]
        rank_direction: Direction,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Ordinary least squares fit with coefficient table and model summary.
    Fit {
        dataset: PathBuf,
        #[arg(long)]
        response: String,
        #[arg(long, required = true, value_delimiter = ',')]
        predictors: Vec<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Pairwise correlation matrix, or Spearman's r_s from a known sum of squared rank differences.
    Correlate {
        #[arg(required_unless_present = "sum_d2", conflicts_with = "sum_d2")]
        dataset: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
        /// Columns to correlate; defaults to all columns.
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
        /// Sum of squared rank differences.
        #[arg(long, requires = "n")]
        sum_d2: Option<f64>,
        /// Number of ranked pairs, used with --sum-d2.
        #[arg(long, requires = "sum_d2")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Significance test of a correlation coefficient.
    #[command(name = "ttest-r")]
    TtestR {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Degrees of freedom for the critical value: n_minus_2 or n.
        #[arg(long, default_value = "n_minus_2")]
        df_convention: DfConvention,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Re-derive the published result tables from the embedded fixtures.
    #[command(name = "replicate-paper")]
    ReplicatePaper {
        /// 1, 2, 3, 4, 5 or all.
        #[arg(long, default_value = "all")]
        table: TableSelector,
        /// Alternative fixture file; must match the embedded checksum.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Measure {
            models,
            modifiability,
            flexibility,
            testability,
            aggregate,
            rank_direction,
            classes,
            format,
        } => measure::run(&measure::MeasureArgs {
            models,
            modifiability,
            flexibility,
            testability,
            aggregate,
            direction: rank_direction,
            classes,
            format,
        }),
        Command::Rank {
            dataset,
            column,
            ties,
            rank_direction,
            format,
        } => analysis::rank(&dataset, &column, ties, rank_direction, format),
        Command::Fit {
            dataset,
            response,
            predictors,
            format,
        } => analysis::fit(&dataset, &response, &predictors, format),
        Command::Correlate {
            dataset,
            method,
            columns,
            sum_d2,
            n,
            format,
        } => match (dataset, sum_d2, n) {
            (_, Some(d2), Some(n)) => analysis::spearman_from_sum(d2, n, format),
            (Some(path), _, _) => analysis::correlate(&path, method, &columns, format),
            _ => Err(CliError::input(anyhow::anyhow!(
                "a dataset or --sum-d2 with --n is required"
            ))),
        },
        Command::TtestR {
            r,
            n,
            alpha,
            df_convention,
            format,
        } => analysis::ttest_r(r, n, alpha, df_convention, format),
        Command::ReplicatePaper {
            table,
            fixtures,
            format,
        } => replicate::run(table, fixtures.as_deref(), format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.stdout.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            match out.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
