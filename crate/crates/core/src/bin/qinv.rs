use clap::{Parser, Subcommand, ValueEnum};
use qinv::cli::{run, CliError, Command, Format, RunOptions};
use qinv::config::RunConfig;
use qinv::validate::Suite;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qinv", version, about = "q-invariant functions, Wiener-Hopf factors and passage-time transforms")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// JSON run descriptor.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Csv)]
    format: Fmt,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo paths per point.
    #[arg(long, global = true, default_value_t = 20_000)]
    paths: usize,
    /// Validation suite (bessel, kummer, tricomi, mittag_leffler, gamma_transform,
    /// wiener_hopf, fpt, simulation, all).
    #[arg(long, global = true, default_value = "all")]
    suite: String,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// I_{α,ψ}(q; z) on the z (and q) grid.
    EvalSeries,
    /// The Γ-transform by quadrature next to its series form.
    GammaTransform,
    /// Wiener-Hopf factors of a stable class, or its OU passage transform.
    WienerHopf,
    /// Closed-form Laplace transforms of passage times.
    Fpt,
    /// Monte Carlo estimates of the same transforms.
    Simulate,
    /// Cross-module identity checks; exit 1 if any fails.
    Validate,
}

#[derive(ValueEnum, Clone, Copy)]
enum Fmt {
    Csv,
    Json,
}

fn main_inner(args: &Args) -> Result<(), CliError> {
    let cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None if matches!(args.command, Cmd::Validate) => RunConfig::default(),
        None => return Err(CliError::Config("--config is required for this command".into())),
    };
    let command = match args.command {
        Cmd::EvalSeries => Command::EvalSeries,
        Cmd::GammaTransform => Command::GammaTransform,
        Cmd::WienerHopf => Command::WienerHopf,
        Cmd::Fpt => Command::Fpt,
        Cmd::Simulate => Command::Simulate,
        Cmd::Validate => Command::Validate,
    };
    let opts = RunOptions { seed: args.seed, paths: args.paths, suite: args.suite.parse::<Suite>()? };
    let format = match args.format {
        Fmt::Csv => Format::Csv,
        Fmt::Json => Format::Json,
    };
    let outcome = run(command, &cfg, &opts)?;
    match &args.out {
        Some(path) => {
            let f = std::fs::File::create(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let mut w = std::io::BufWriter::new(f);
            outcome.table.write(&mut w, format)?;
            w.flush()?;
        }
        None => outcome.table.write(std::io::stdout().lock(), format)?,
    }
    if outcome.failures > 0 {
        return Err(CliError::Validation { failed: outcome.failures });
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qinv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
