use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use minorlab::{ExperimentConfig, Overrides, RunError, Suite};

/// Verify the distributional and exact identities of one suite.
#[derive(Debug, Parser)]
#[command(name = "verify", version = minorlab::VERSION)]
struct Cli {
    suite: Suite,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    workers: Option<u64>,
    /// Output directory (default: config `out_dir`, else `results`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write wall times into the CSV `ms` column (breaks byte-identical reruns).
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("verify: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<i32, RunError> {
    let mut cfg = ExperimentConfig::load(&cli.config)?;
    if cfg.experiment != cli.suite {
        return Err(minorlab::ConfigError::Invalid(format!(
            "config is for `{}`, not `{}`",
            cfg.experiment, cli.suite
        ))
        .into());
    }
    cfg.apply(&Overrides {
        seed: cli.seed,
        samples: cli.samples,
        steps: cli.steps,
        workers: cli.workers,
        out: cli.out.clone(),
    });
    let report = minorlab::run(&cfg)?;
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("results"));
    let paths = minorlab::write_outputs(&dir, &cfg, &report, cli.timings)?;
    for r in &report.records {
        let verdict = if r.pass { "pass" } else if r.is_failure() { "FAIL" } else { "note" };
        let lk = match (r.l, r.k) {
            (Some(l), Some(k)) => format!(" (l={l}, k={k})"),
            (None, Some(k)) => format!(" (k={k})"),
            _ => String::new(),
        };
        let p = r.p_value.map(|p| format!(" p={p:.4}")).unwrap_or_default();
        eprintln!("{verdict:4} {}{lk}: {:.4e}{p} vs {:e}", r.statistic, r.distance, r.threshold);
    }
    eprintln!("wrote {}", paths.csv.display());
    Ok(report.exit_code())
}
