use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rodeo_cli::config::{config_err, parse_override, Config, Experiment, KEYS_HELP};
use rodeo_cli::experiments::{run, RunOptions};
use rodeo_cli::CliError;

/// Qudit Rodeo experiments: spectral amplitude sweeps, density of states,
/// error-bar tables and ancilla probability curves.
#[derive(Debug, Parser)]
#[command(name = "rodeo", version, after_help = KEYS_HELP)]
struct Args {
    /// sweep | dos | nos | table1 | prob-curves
    experiment: String,
    /// Path to a `key = value` config file.
    #[arg(long)]
    config: PathBuf,
    /// Override a config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Re-run about 1% of samples through the full circuit.
    #[arg(long)]
    audit: bool,
    /// Also write an SVG plot next to the CSV output.
    #[arg(long)]
    plot: bool,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let experiment: Experiment = args.experiment.parse()?;
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| config_err(format!("cannot read {}: {e}", args.config.display())))?;
    let overrides = args
        .overrides
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = Config::parse(&text, &overrides)?;
    if let Some(e) = cfg.experiment {
        if e != experiment {
            return Err(config_err(format!(
                "config is for `{e}`, not `{experiment}`"
            )));
        }
    }
    if args.plot && cfg.output.is_none() {
        return Err(config_err("--plot needs an `output` path"));
    }
    if args.workers == Some(0) {
        return Err(config_err("--workers must be at least 1"));
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = args.workers {
        pool = pool.num_threads(k);
    }
    let pool = pool.build().map_err(|e| config_err(e.to_string()))?;
    let report = pool.install(|| run(experiment, &cfg, RunOptions { audit: args.audit }))?;

    match &cfg.output {
        Some(path) => {
            std::fs::write(path, &report.csv)?;
            if args.plot {
                if let Some(plot) = &report.plot {
                    std::fs::write(path.with_extension("svg"), plot.to_svg())?;
                }
            }
        }
        None => print!("{}", report.csv),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rodeo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
