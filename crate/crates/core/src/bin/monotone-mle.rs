use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use monotone_mle::io::{
    fit_report, parse_table, phi_csv, plot_data_csv, simulation_text, InputFormat,
};
use monotone_mle::simulation::{run_study, HypothesisSpec, Statistic, StudyConfig};
use monotone_mle::{dataset, fit, selftest, Direction, Error, Family, ObservationTable};

/// Exit status for data and configuration errors. Usage errors exit with 2.
const EXIT_INVALID: u8 = 1;

#[derive(Parser)]
#[command(
    name = "monotone-mle",
    version,
    about = "Maximum-likelihood monotone response estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a monotone estimate to grouped data.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = DirectionArg::Nondecreasing)]
        direction: DirectionArg,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Emit::Blocks)]
        emit: Emit,
        /// JSON output instead of text (blocks only).
        #[arg(long)]
        json: bool,
    },
    /// Rank the observed table's statistic among simulated tables.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        hypothesis: HypothesisArg,
        #[arg(long, value_enum)]
        statistic: StatisticArg,
        #[arg(long, default_value_t = 10_000)]
        replicates: usize,
        #[arg(long)]
        seed: u64,
        /// Worker threads (default: all cores). Results do not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Include per-replicate values in JSON output.
        #[arg(long, requires = "json")]
        values: bool,
    },
    /// Cross-check the fit against exhaustive search on random tables.
    Selftest {
        #[arg(long, default_value_t = 10_000)]
        tables: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the bundled SAT-R no-show dataset as aggregate CSV.
    Dataset,
}

#[derive(clap::Args)]
struct InputArgs {
    /// CSV input file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Aggregate)]
    format: FormatArg,
}

#[derive(clap::Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Standard deviation, required for the normal family.
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Aggregate,
    Long,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Nondecreasing,
    Nonincreasing,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Bernoulli,
    Poisson,
    Geometric,
    Normal,
    Exponential,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Blocks,
    Phi,
    Plotdata,
}

#[derive(Clone, Copy, ValueEnum)]
enum HypothesisArg {
    NullConstant,
    AlternativeFit,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatisticArg {
    Delta,
    Loglik,
    LoglikRefit,
    BinomialLoglik,
}

impl FamilyArgs {
    fn resolve(&self) -> Result<Option<Family>, Error> {
        let family = match self.family {
            None => {
                if self.sigma.is_some() {
                    return Err(Error::Config("--sigma requires --family normal".into()));
                }
                return Ok(None);
            }
            Some(FamilyArg::Normal) => {
                let sigma = self
                    .sigma
                    .ok_or_else(|| Error::Config("--family normal requires --sigma".into()))?;
                Family::normal(sigma)?
            }
            Some(_) if self.sigma.is_some() => {
                return Err(Error::Config(
                    "--sigma applies only to --family normal".into(),
                ))
            }
            Some(FamilyArg::Bernoulli) => Family::Bernoulli,
            Some(FamilyArg::Poisson) => Family::Poisson,
            Some(FamilyArg::Geometric) => Family::Geometric,
            Some(FamilyArg::Exponential) => Family::Exponential,
        };
        Ok(Some(family))
    }
}

fn load(input: &InputArgs) -> Result<ObservationTable, Error> {
    let file = File::open(&input.input)
        .map_err(|e| Error::Io(format!("{}: {e}", input.input.display())))?;
    let format = match input.format {
        FormatArg::Aggregate => InputFormat::Aggregate,
        FormatArg::Long => InputFormat::Long,
    };
    parse_table(BufReader::new(file), format)
}

fn run(command: Command) -> Result<String, Error> {
    match command {
        Command::Fit {
            input,
            direction,
            family,
            emit,
            json,
        } => {
            let table = load(&input)?;
            let family = family.resolve()?;
            let direction = match direction {
                DirectionArg::Nondecreasing => Direction::NonDecreasing,
                DirectionArg::Nonincreasing => Direction::NonIncreasing,
            };
            let estimate = fit(&table, direction)?;
            match emit {
                Emit::Blocks => {
                    let report = fit_report(&estimate, &table, family.as_ref())?;
                    Ok(if json {
                        report.to_json() + "\n"
                    } else {
                        report.to_text()
                    })
                }
                Emit::Phi => phi_csv(&estimate, &table),
                Emit::Plotdata => plot_data_csv(&estimate, &table),
            }
        }
        Command::Simulate {
            input,
            family,
            hypothesis,
            statistic,
            replicates,
            seed,
            threads,
            json,
            values,
        } => {
            let table = load(&input)?;
            let family = family.resolve()?.unwrap_or(Family::Bernoulli);
            let hypothesis = match hypothesis {
                HypothesisArg::NullConstant => HypothesisSpec::null_constant(family, &table)?,
                HypothesisArg::AlternativeFit => HypothesisSpec::alternative_fit(family, &table)?,
            };
            let statistic = match statistic {
                StatisticArg::Delta => Statistic::Delta,
                StatisticArg::Loglik => Statistic::LogLikelihood,
                StatisticArg::LoglikRefit => Statistic::LogLikelihoodRefit,
                StatisticArg::BinomialLoglik => Statistic::BinomialLogLikelihood,
            };
            let config = StudyConfig {
                replicates,
                master_seed: seed,
                threads,
            };
            let mut report = run_study(&table, &hypothesis, statistic, &config)?;
            if json {
                if !values {
                    report.values.clear();
                }
                Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
            } else {
                Ok(simulation_text(&report))
            }
        }
        Command::Selftest { tables, seed } => {
            let summary = selftest::run(tables, seed)?;
            let text = format!(
                "tables\t{}\nbrute_force_mismatches\t{}\npava_mismatches\t{}\nmax_value_difference\t{:e}\n",
                summary.tables,
                summary.brute_force_mismatches,
                summary.pava_mismatches,
                summary.max_value_difference
            );
            if summary.passed() {
                Ok(text)
            } else {
                Err(Error::Structural(format!(
                    "selftest failed: {}",
                    summary.first_failure.unwrap_or_default()
                )))
            }
        }
        Command::Dataset => Ok(dataset::SAT_R_CSV.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_INVALID);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
