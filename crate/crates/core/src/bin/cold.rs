use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cold::cli::{self, ExperimentConfig, OutputFormat, ResultRow};
use cold::{Error, Result};

/// Counterdiabatic optimised local driving experiments.
#[derive(Parser)]
#[command(name = "cold", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the grid described by a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a canned paper figure at desk scale (fig1, fig2, fig3, fig4, fig6, fig7, fig8).
    Figure {
        name: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
}

#[derive(Args)]
struct RunOpts {
    /// Base seed; restart j uses seed + j.
    #[arg(long)]
    seed: Option<u64>,
    /// Restarts per optimised grid point.
    #[arg(long)]
    restarts: Option<usize>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunOpts {
    fn format(&self, fallback: OutputFormat) -> OutputFormat {
        self.format
            .as_deref()
            .and_then(OutputFormat::parse)
            .unwrap_or(fallback)
    }
}

fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config {
        line: 0,
        field: "<file>".into(),
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    ExperimentConfig::parse(&text)
}

fn emit(rows: &[ResultRow], format: OutputFormat, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => {
            let f = fs::File::create(p)?;
            cli::write_rows(rows, format, io::BufWriter::new(f))
        }
        None => cli::write_rows(rows, format, io::stdout().lock()),
    }
}

/// Exit 2 when some grid point produced no result at all.
fn check_rows(rows: &[ResultRow]) -> Result<()> {
    let failed: Vec<_> = rows.iter().filter(|r| r.best_f.is_none()).collect();
    for r in &failed {
        eprintln!(
            "failed: {} N={} N_k={} tau={}: {}",
            r.method, r.n_sites, r.n_k, r.tau, r.failure
        );
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{} of {} grid points failed", failed.len(), rows.len())))
    }
}

fn run(config: PathBuf, opts: RunOpts) -> Result<()> {
    let mut c = read_config(&config)?;
    if let Some(s) = opts.seed {
        c.seed = s;
    }
    if let Some(r) = opts.restarts {
        c.restarts = r;
    }
    c.validate()?;
    let rows = cli::run_experiment_with_jobs(&c, opts.jobs)?;
    let out = opts.out.clone().or(c.output.clone());
    emit(&rows, opts.format(c.format), out.as_deref())?;
    check_rows(&rows)
}

fn figure(name: String, opts: RunOpts) -> Result<()> {
    let fig = cli::figure(&name)?.with_restarts(opts.restarts, opts.seed);
    let mut rows = Vec::new();
    for p in &fig.panels {
        p.validate()?;
        rows.extend(cli::run_experiment_with_jobs(p, opts.jobs)?);
    }
    let format = opts.format(OutputFormat::Csv);
    emit(&rows, format, opts.out.as_deref())?;
    let manifest = serde_json::to_string_pretty(&fig.manifest()).map_err(|e| Error::Io(e.to_string()))?;
    match &opts.out {
        Some(p) => {
            let mut path = p.clone().into_os_string();
            path.push(".manifest.json");
            fs::write(path, manifest + "\n")?;
        }
        None => writeln!(io::stderr(), "{manifest}")?,
    }
    check_rows(&rows)
}

fn validate(config: PathBuf) -> Result<()> {
    let c = read_config(&config)?;
    println!(
        "ok: {} model, {} grid points",
        c.model.name(),
        cli::grid(&c).len()
    );
    Ok(())
}

fn main() -> ExitCode {
    // usage errors count as config errors (clap would exit 2)
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let r = match args.command {
        Command::Run { config, opts } => run(config, opts),
        Command::Figure { name, opts } => figure(name, opts),
        Command::Validate { config } => validate(config),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
