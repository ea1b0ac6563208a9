use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coaxial_cli::{parse_job, parse_payload, run, Command, InputError, JobSpec, Options, EXIT_INPUT_ERROR};

/// Decide admissibility of cone angles for co-axial spherical metrics and
/// realize zero multiplicities of sum c_j / (z - z_j).
///
/// Reports go to stdout as JSON, a one-line summary to stderr. Exit status:
/// 0 yes, 1 no, 2 undecided, 64 input error.
#[derive(Parser)]
#[command(name = "coaxial", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Decide whether an angle multiset is admissible
    Decide(JobArgs),
    /// List the reduced arrangements of an angle multiset
    Arrangements(JobArgs),
    /// Gauss-Bonnet and odd-lattice classification, deciding the equality case
    MpClassify(JobArgs),
    /// Decide whether residues admit zeros with the given multiplicities
    Partition(JobArgs),
    /// Branch-data realizability with a permutation witness
    Hurwitz(JobArgs),
    /// Search numerically for a charge configuration
    Realize(JobArgs),
    /// Closed-form double-zero test for residues (a, b, -c, -d)
    Q4(JobArgs),
    /// Re-check a report produced by another command
    Verify(JobArgs),
    /// Run a job document {"command", "payload", "options"}
    Run(InputArgs),
}

#[derive(Args)]
struct InputArgs {
    /// JSON file; `-` or absent reads stdin
    input: Option<PathBuf>,
    /// Inline JSON instead of a file
    #[arg(long, conflicts_with = "input")]
    json: Option<String>,
    /// Print the report on one line
    #[arg(long)]
    compact: bool,
}

#[derive(Args)]
struct JobArgs {
    #[command(flatten)]
    io: InputArgs,
    /// Also examine non-reduced arrangements
    #[arg(long)]
    exhaustive: bool,
    /// Largest degree for the permutation search
    #[arg(long, default_value_t = 7)]
    hurwitz_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    /// Residual tolerance for realizations
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Values of the transcendentals, e.g. "t1=0.7548,t2=0.4142"
    #[arg(long)]
    basis: Option<String>,
}

impl JobArgs {
    fn options(&self) -> Options {
        Options {
            exhaustive: self.exhaustive,
            hurwitz_cap: self.hurwitz_cap,
            seed: self.seed,
            restarts: self.restarts,
            tol: self.tol,
            basis: self.basis.clone(),
        }
    }
}

fn read_input(io: &InputArgs) -> Result<String, InputError> {
    if let Some(text) = &io.json {
        return Ok(text.clone());
    }
    let mut text = String::new();
    match &io.input {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path).map_err(|e| InputError::new(format!("{}: {e}", path.display())))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| InputError::new(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn job(cli: &Cli) -> Result<(JobSpec, bool), InputError> {
    let (command, args) = match &cli.command {
        Sub::Run(io) => return Ok((parse_job(&read_input(io)?)?, io.compact)),
        Sub::Decide(a) => (Command::Decide, a),
        Sub::Arrangements(a) => (Command::Arrangements, a),
        Sub::MpClassify(a) => (Command::MpClassify, a),
        Sub::Partition(a) => (Command::Partition, a),
        Sub::Hurwitz(a) => (Command::Hurwitz, a),
        Sub::Realize(a) => (Command::Realize, a),
        Sub::Q4(a) => (Command::Q4, a),
        Sub::Verify(a) => (Command::Verify, a),
    };
    let payload = parse_payload(command, &read_input(&args.io)?)?;
    Ok((JobSpec { command, payload, options: args.options() }, args.io.compact))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT_ERROR as u8 } else { 0 });
        }
    };
    let result = job(&cli).and_then(|(job, compact)| run(&job).map(|r| (r, compact)));
    match result {
        Ok((report, compact)) => {
            let text = if compact { serde_json::to_string(&report) } else { serde_json::to_string_pretty(&report) };
            println!("{}", text.expect("reports serialize"));
            eprintln!("{}: {}", report.command, report.summary);
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
