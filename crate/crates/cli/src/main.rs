use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use ness_lab::presets::PRESET_HELP;
use ness_lab::{output_dir, parse, run_experiment, validate, write_outcome, Diagnostic, Kind, OUTPUT_ENV};

/// Runs near-equilibrium identity checks described by a config file.
///
/// Exit codes: 0 all contracts hold, 1 a contract failed, 2 malformed
/// config, 3 unknown preset, 4 invalid grid, 5 size limit, 6 I/O error.
#[derive(Parser)]
#[command(name = "ness-lab", version, about, long_about)]
struct Cli {
    /// More log output (repeat for more); RUST_LOG overrides.
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
    /// Worker threads for sampling; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a config and write CSV tables.
    Run {
        config: PathBuf,
        /// Output directory; defaults to the config's `output`, then $NESS_LAB_OUT, then ./ness-lab-out.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a config without running it; prints every diagnostic.
    Validate { config: PathBuf },
    /// List the model presets and experiment kinds.
    Presets,
}

fn read_config(path: &Path) -> Result<(String, PathBuf), ExitCode> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok((text, path.parent().map(Path::to_path_buf).unwrap_or_default())),
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            Err(ExitCode::from(6))
        }
    }
}

fn report(diagnostics: &[Diagnostic]) -> ExitCode {
    for d in diagnostics {
        eprintln!("error: {d}");
    }
    ExitCode::from(diagnostics[0].kind.exit_code())
}

fn run(config: &Path, out: Option<&Path>) -> ExitCode {
    let (text, base) = match read_config(config) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let cfg = match parse(&text, &base) {
        Ok(c) => c,
        Err(d) => return report(&d),
    };
    let dir = output_dir(out, &cfg);
    let mut failed = 0;
    for e in &cfg.experiments {
        let outcome = match run_experiment(e) {
            Ok(o) => o,
            Err(err) => {
                eprintln!("error: {err}");
                return ExitCode::from(err.exit_code());
            }
        };
        if let Err(err) = write_outcome(&outcome, &dir) {
            eprintln!("error: {err}");
            return ExitCode::from(err.exit_code());
        }
        if !outcome.pass {
            failed += 1;
        }
        println!("[{}] {} ({}): {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.name, outcome.kind, outcome.summary);
        println!("       contract: {}", outcome.contract);
    }
    println!(
        "{} of {} experiments passed; tables in {}",
        cfg.experiments.len() - failed,
        cfg.experiments.len(),
        dir.display()
    );
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not set thread count: {e}");
        }
    }
    match cli.command {
        Command::Run { config, out } => run(&config, out.as_deref()),
        Command::Validate { config } => {
            let (text, base) = match read_config(&config) {
                Ok(v) => v,
                Err(code) => return code,
            };
            let d = validate(&text, &base);
            if d.is_empty() {
                println!("{}: ok", config.display());
                ExitCode::SUCCESS
            } else {
                report(&d)
            }
        }
        Command::Presets => {
            println!("model presets:");
            for (grammar, about) in PRESET_HELP {
                println!("  {grammar:<40} {about}");
            }
            println!("\nexperiment kinds:");
            for k in Kind::ALL {
                println!("  {k}");
            }
            println!("\ndefault output directory: ${OUTPUT_ENV}, else ./ness-lab-out");
            ExitCode::SUCCESS
        }
    }
}
