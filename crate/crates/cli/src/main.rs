use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qphi::report::{self, examples, AnalysisRequest, DirectionChoice, Format};
use qphi::{Error, ExecMode};

#[derive(Parser)]
#[command(
    name = "qphi",
    version,
    about = "Mechanism integrated information for classical and quantum systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a request document.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Run a built-in example.
    Example {
        name: String,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// List the built-in examples.
    ListExamples,
    /// Check a request document without running it.
    Validate { file: PathBuf },
}

#[derive(Args)]
struct RunOptions {
    /// text, json or csv
    #[arg(long, default_value = "text")]
    format: String,
    /// cause, effect or both; overrides the document
    #[arg(long)]
    direction: Option<String>,
    /// `all`, or comma-separated mechanisms such as `A,AB` or `0,0+1`
    #[arg(long)]
    mechanisms: Option<String>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Disable data parallelism.
    #[arg(long)]
    sequential: bool,
}

fn read_request(path: &Path) -> qphi::Result<AnalysisRequest> {
    let bytes = fs::read(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    report::parse_request(&bytes)
}

fn execute(mut request: AnalysisRequest, opts: &RunOptions) -> qphi::Result<()> {
    let format: Format = opts.format.parse()?;
    if let Some(d) = &opts.direction {
        request.direction = d.parse::<DirectionChoice>()?;
    }
    if let Some(t) = opts.tolerance {
        request.tolerance = Some(t);
    }
    if let Some(spec) = &opts.mechanisms {
        request.mechanisms = report::parse_mechanism_spec(spec, &request.labels())?;
    }
    let exec = if opts.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    };
    let result = report::run(&request, exec)?;
    let bytes = report::render(&result, format)?;
    match &opts.out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

fn dispatch(command: Command) -> qphi::Result<()> {
    match command {
        Command::Analyze { file, opts } => execute(read_request(&file)?, &opts),
        Command::Example { name, opts } => {
            let request = examples::get(&name)
                .ok_or_else(|| Error::Usage(format!("unknown example {name:?}; try `qphi list-examples`")))?;
            execute(request, &opts)
        }
        Command::ListExamples => {
            for e in examples::all() {
                println!("{:<20} {}", e.name, e.summary);
            }
            Ok(())
        }
        Command::Validate { file } => {
            let request = read_request(&file)?;
            let model = request.prepare()?;
            println!("ok: {}", model.describe());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}
