use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hodgelab::cli::{exit_code, run, Command, RunSpec};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Info,
    Invariants,
    ChowVerify,
    Mixed,
    Correlation,
    Catalog,
}

/// Exact checks of Poincaré duality, hard Lefschetz and Hodge–Riemann relations for matroids.
#[derive(Debug, Parser)]
#[command(name = "hodgelab", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// JSON input document.
    #[arg(long, conflicts_with = "catalog")]
    input: Option<PathBuf>,
    /// Built-in matroid: fano, nonfano, k4, c4, nonpappus, dual_k4 or u_R_N.
    #[arg(long)]
    catalog: Option<String>,
    /// Only check this degree (chow-verify).
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value_t = 5)]
    kahler_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit JSON lines instead of text.
    #[arg(long)]
    json: bool,
    /// Run every catalog suite (catalog).
    #[arg(long)]
    verify: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let spec = RunSpec {
        command: match args.command {
            Cmd::Info => Command::Info,
            Cmd::Invariants => Command::Invariants,
            Cmd::ChowVerify => Command::ChowVerify,
            Cmd::Mixed => Command::Mixed,
            Cmd::Correlation => Command::Correlation,
            Cmd::Catalog => Command::Catalog,
        },
        input: args.input,
        catalog: args.catalog,
        q: args.q,
        kahler_samples: args.kahler_samples,
        seed: args.seed,
        json: args.json,
        verify: args.verify,
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let outcome = run(&spec, &mut out);
    let _ = out.flush();
    match &outcome {
        Err(hodgelab::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => return ExitCode::SUCCESS,
        Err(e) => eprintln!("error: {e}"),
        Ok(_) => {}
    }
    ExitCode::from(exit_code(&outcome) as u8)
}
