use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mscbo::cli::{self, Emit, Overrides};
use mscbo::{Error, Variant};

/// Multi-swarm consensus-based optimization experiments.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Args {
    /// Benchmark problem: schaffer1, dent, schaffer2, three.
    #[arg(long)]
    problem: Option<String>,
    /// Dynamics variant: fixed, adaptive, full.
    #[arg(long)]
    variant: Option<Variant>,
    #[arg(long)]
    swarms: Option<usize>,
    /// Particles per swarm.
    #[arg(long)]
    particles: Option<usize>,
    /// Number of steps (sets the end time to iters * tau).
    #[arg(long)]
    iters: Option<usize>,
    /// First seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of consecutive seeds to run.
    #[arg(long = "seeds", value_name = "N")]
    seed_count: Option<usize>,
    /// TOML configuration document.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Named base configuration, e.g. paper-schaffer1.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Comma-separated outputs: front, weights, diagnostics, summary, all, none.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    emit: Option<Vec<String>>,
}

fn run(args: Args) -> mscbo::Result<()> {
    let text = match &args.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!(
            "cannot read config {}: {e}",
            path.display()
        )))?),
        None => None,
    };
    let flags = Overrides {
        problem: args.problem,
        variant: args.variant,
        swarms: args.swarms,
        particles: args.particles,
        iters: args.iters,
        seed: args.seed,
        seed_count: args.seed_count,
        out: args.out,
        emit: args.emit.as_deref().map(Emit::from_names).transpose()?,
    };
    let spec = cli::resolve_spec(args.preset.as_deref(), text.as_deref(), &flags)?;
    let result = cli::run_experiment(&spec)?;
    let s = &result.summary;
    // a closed stdout (e.g. piped into `head`) is not an error
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "{} / {}: {} seed(s), mean hv {:.6}, gd {:.6}, igd {:.6}, ni {:.1}",
        s.problem,
        s.variant.as_str(),
        s.seeds.len(),
        s.mean.hv,
        s.mean.gd,
        s.mean.igd,
        s.mean.ni
    );
    for f in &result.files {
        let _ = writeln!(out, "wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 1 } else { 2 })
        }
    }
}
