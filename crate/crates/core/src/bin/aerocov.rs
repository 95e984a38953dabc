use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use aerocov::analysis::Association;
use aerocov::cli::{emit_config, load_run_config, run, Command, Engine, RunOptions, SweepSpec, DEFAULT_DROPS};

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    Coverage,
    Simulate,
    Handover,
    Sweep,
}

#[derive(Clone, Copy, ValueEnum)]
enum Assoc {
    Nearest,
    Harp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Eng {
    Analytic,
    Mc,
    Both,
}

/// Coverage and altitude handover for UAVs served by ULA base stations.
#[derive(Parser)]
#[command(version)]
struct Args {
    command: Cmd,
    /// Experiment file of `key = value` lines.
    #[arg(long)]
    config: PathBuf,
    /// KEY=START:STOP:STEP or KEY=V1,V2,...
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long, value_enum)]
    association: Option<Assoc>,
    #[arg(long, value_enum)]
    engine: Option<Eng>,
    /// Drops per point (epochs for `handover`).
    #[arg(long, default_value_t = DEFAULT_DROPS)]
    drops: u64,
    /// Required whenever the Monte Carlo engine runs.
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; standard output if omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    emit_config: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = std::env::var("AEROCOV_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aerocov: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: Args) -> aerocov::Result<()> {
    let cfg = load_run_config(&args.config)?;
    if args.emit_config {
        print!("{}", emit_config(&cfg));
        return Ok(());
    }
    let opts = RunOptions {
        command: match args.command {
            Cmd::Coverage => Command::Coverage,
            Cmd::Simulate => Command::Simulate,
            Cmd::Handover => Command::Handover,
            Cmd::Sweep => Command::Sweep,
        },
        sweep: args.sweep.as_deref().map(str::parse::<SweepSpec>).transpose()?,
        association: args.association.map(|a| match a {
            Assoc::Nearest => Association::Nearest,
            Assoc::Harp => Association::Harp,
        }),
        engine: args.engine.map(|e| match e {
            Eng::Analytic => Engine::Analytic,
            Eng::Mc => Engine::MonteCarlo,
            Eng::Both => Engine::Both,
        }),
        drops: args.drops,
        seed: args.seed,
    };
    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    run(&opts, &cfg, &mut out)?;
    Ok(())
}
