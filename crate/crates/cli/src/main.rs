use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opqm_cli::settings::parse_override;
use opqm_cli::{run_path, CliError, Options, Report, Verb};

/// Checks operational quantum-statistics scenarios.
///
/// Exit status: 0 when every check passes, 1 when one fails, 2 when the
/// scenario cannot be evaluated.
#[derive(Parser)]
#[command(name = "opqm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check a scenario defines.
    Check(Common),
    /// Sample a pipeline scenario and check the axioms on the frequencies.
    Simulate(Common),
    /// Integrate a lindblad or macrostate scenario; `--out` receives the CSV.
    Evolve(Common),
    /// Re-render a saved report and exit with its status.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    scenario: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// File for the JSON report, or the trajectory CSV with `evolve`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// `key=value`; repeatable.
    #[arg(long = "tolerance", value_parser = parse_override)]
    tolerances: Vec<(String, f64)>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Structured,
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Human => report.human(),
        Format::Structured => report.structured(),
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (verb, common) = match cli.command {
        Command::Check(c) => (Verb::Check, c),
        Command::Simulate(c) => (Verb::Simulate, c),
        Command::Evolve(c) => (Verb::Evolve, c),
        Command::Report { file, format } => {
            let text = fs::read_to_string(&file).map_err(|source| CliError::Io {
                path: file.clone(),
                source,
            })?;
            let report = Report::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            print!("{}", render(&report, format));
            return Ok(report.exit_code());
        }
    };
    let opts = Options {
        seed: common.seed,
        tolerances: common.tolerances,
    };
    let run = run_path(&common.scenario, verb, &opts)?;
    if let Some(out) = &common.out {
        match (verb, &run.csv) {
            (Verb::Evolve, Some(csv)) => write(out, csv)?,
            _ => write(out, run.report.document().as_bytes())?,
        }
    }
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(render(&run.report, common.format).as_bytes());
    Ok(run.report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
