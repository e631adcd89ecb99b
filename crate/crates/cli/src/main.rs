use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use delta_atom_cli::{execute, Experiment};

/// Runs one experiment and writes its CSV table.
#[derive(Debug, Parser)]
#[command(name = "delta-atom", version)]
struct Args {
    /// fig5, cat, coherent, selection-rules, fnt-check or spectrum
    experiment: Experiment,
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path (overrides `output_path` in the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dotted-path override, e.g. `model.g=0.5`; repeatable
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(args.experiment, &args.config, args.out.as_deref(), &args.overrides) {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
