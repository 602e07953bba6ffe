use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bapsens::TiePolicy;
use bapsens_cli::commands::{self, exit_code, AssignmentChoice, VerifyTarget, EXIT_NOT_ALLOWABLE};
use bapsens_cli::formats::{parse_matrix, parse_pairs, read_input, Format};
use bapsens_cli::suite::run_battery;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Bottleneck assignment with perturbation sensitivity intervals.
#[derive(Parser)]
#[command(name = "bapsens", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input format; guessed from the extension or contents when omitted
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Disable warm starts
    #[arg(long, global = true)]
    cold: bool,

    /// Write the report here instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AssignmentArgs {
    /// File of 1-based "i,j" pairs (CSV lines or a JSON list)
    #[arg(long, conflicts_with = "lex")]
    assignment: Option<PathBuf>,

    /// Use the lexicographic bottleneck assignment
    #[arg(long)]
    lex: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ties {
    /// Any tie clears the certified flag
    Strict,
    /// Only ties that could change the result clear it
    Material,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the bottleneck assignment problem
    Solve {
        /// Matrix file, or "-" for standard input
        matrix: PathBuf,
    },
    /// Intervals keeping a bottleneck edge a bottleneck edge
    EdgeSens {
        matrix: PathBuf,
        /// Bottleneck edge to analyse (1-based); defaults to the solver's
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        anchor: Option<Vec<usize>>,
    },
    /// Intervals keeping an assignment optimal
    AssignSens {
        matrix: PathBuf,
        #[command(flatten)]
        assignment: AssignmentArgs,
        #[arg(long, value_enum, default_value = "strict")]
        ties: Ties,
    },
    /// Largest uniform perturbation an assignment tolerates
    Radius {
        matrix: PathBuf,
        #[command(flatten)]
        assignment: AssignmentArgs,
    },
    /// Check whether a perturbation is allowable; exit 5 if it is not
    Verify {
        matrix: PathBuf,
        /// Perturbation matrix in the same shape and format
        #[arg(long, short)]
        perturbation: PathBuf,
        #[command(flatten)]
        assignment: AssignmentArgs,
        /// Check a bottleneck edge instead of an assignment
        #[arg(long, num_args = 2, value_names = ["I", "J"], conflicts_with_all = ["assignment", "lex"])]
        anchor: Option<Vec<usize>>,
    },
    /// Brute-force results by enumeration (at most 7 rows)
    Oracle {
        matrix: PathBuf,
        #[command(flatten)]
        assignment: AssignmentArgs,
    },
    /// Run the allowability sampling battery on random matrices
    VerifySuite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Uniform samples per report, on top of one corner per edge
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn load(path: &Path, format: Option<Format>) -> Result<Vec<Vec<f64>>> {
    let text = read_input(path)?;
    let format = format.unwrap_or_else(|| Format::detect(Some(path), &text));
    parse_matrix(&text, format).with_context(|| format!("parsing {}", path.display()))
}

fn choice(args: &AssignmentArgs) -> Result<AssignmentChoice> {
    if let Some(path) = &args.assignment {
        let text = read_input(path)?;
        let pairs = parse_pairs(&text, Format::detect(Some(path), &text))
            .with_context(|| format!("parsing {}", path.display()))?;
        Ok(AssignmentChoice::Given(pairs))
    } else if args.lex {
        Ok(AssignmentChoice::Lexicographic)
    } else {
        Ok(AssignmentChoice::Solver)
    }
}

fn anchor(raw: &Option<Vec<usize>>) -> Option<(usize, usize)> {
    raw.as_ref().map(|v| (v[0], v[1]))
}

fn run(cli: &Cli) -> Result<(String, i32)> {
    let matrix =
        |path: &Path| -> Result<bapsens::WeightMatrix> { Ok(bapsens::validate_matrix(&load(path, cli.format)?)?) };
    let opts = |ties: TiePolicy| commands::assign_options(cli.cold, ties);
    let (report, code) = match &cli.command {
        Command::Solve { matrix: m } => (commands::solve(&matrix(m)?)?, 0),
        Command::EdgeSens { matrix: m, anchor: a } => (commands::edge_sens(&matrix(m)?, anchor(a), cli.cold)?, 0),
        Command::AssignSens {
            matrix: m,
            assignment,
            ties,
        } => {
            let policy = match ties {
                Ties::Strict => TiePolicy::Strict,
                Ties::Material => TiePolicy::Material,
            };
            (
                commands::assign_sens(&matrix(m)?, &choice(assignment)?, &opts(policy))?,
                0,
            )
        }
        Command::Radius { matrix: m, assignment } => (
            commands::radius(&matrix(m)?, &choice(assignment)?, &opts(TiePolicy::Strict))?,
            0,
        ),
        Command::Verify {
            matrix: m,
            perturbation,
            assignment,
            anchor: a,
        } => {
            let w = matrix(m)?;
            let p = load(perturbation, cli.format)?;
            let target = match anchor(a) {
                Some(pair) => VerifyTarget::Anchor(pair),
                None => VerifyTarget::Assignment(choice(assignment)?),
            };
            commands::verify(&w, &p, &target)?
        }
        Command::Oracle { matrix: m, assignment } => (commands::oracle(&matrix(m)?, &choice(assignment)?)?, 0),
        Command::VerifySuite { seed, count, samples } => {
            if *count == 0 {
                bail!("--count must be positive");
            }
            let summary = run_battery(*seed, *count, *samples, cli.cold)?;
            let code = if summary.passed() { 0 } else { EXIT_NOT_ALLOWABLE };
            return Ok((serde_json::to_string_pretty(&summary)?, code));
        }
    };
    Ok((report.to_json(), code))
}

fn main() -> ExitCode {
    // usage errors share the parse-error code; 2 means infeasible
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    let (text, code) = match run(&cli) {
        Ok(out) => out,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(exit_code(&err) as u8);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.context("writing standard output"),
        },
    };
    if let Err(err) = written {
        eprintln!("error: {err:#}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
