use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pcm_cli::bench::{format_summary, run_bench, BenchName};
use pcm_cli::config::{ExperimentConfig, Model, TimingMode};
use pcm_cli::runner::run_experiment;

/// Reconstruction experiments from non-uniform Fourier measurements.
#[derive(Parser)]
#[command(name = "pcm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Projection-only reconstruction (disables the correction stage).
    Project {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Image/signal denoising with a denoise model.
    Denoise {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full reconstruction with any measurement model.
    Reconstruct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Named reproduction run: fig4, table1, table2, or table3.
    Bench {
        name: String,
        #[arg(long)]
        out: PathBuf,
        /// Optional config whose `seeds`/`timing` keys override the preset.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, pcm_core::Error> {
    match cli.command {
        Command::Project { config, out } => {
            let mut config = ExperimentConfig::load(&config)?;
            config.model = Model::PcmTv;
            config.solver.mu_t = 0.0;
            config.solver.mu_f = 0.0;
            config.validate()?;
            let outcome = run_experiment(&config, &out)?;
            print_rows(&outcome.rows);
            Ok(!outcome.any_failed)
        }
        Command::Denoise { config, out } => {
            let config = ExperimentConfig::load(&config)?;
            if !config.model.is_denoise() {
                return Err(pcm_core::Error::InvalidArgument(format!(
                    "denoise expects a denoising model, got {}",
                    config.model.name()
                )));
            }
            let outcome = run_experiment(&config, &out)?;
            print_rows(&outcome.rows);
            Ok(!outcome.any_failed)
        }
        Command::Reconstruct { config, out } => {
            let config = ExperimentConfig::load(&config)?;
            if config.model.is_denoise() {
                return Err(pcm_core::Error::InvalidArgument(format!(
                    "reconstruct expects a measurement model, got {}",
                    config.model.name()
                )));
            }
            let outcome = run_experiment(&config, &out)?;
            print_rows(&outcome.rows);
            Ok(!outcome.any_failed)
        }
        Command::Bench { name, out, config } => {
            let name = BenchName::parse(&name)?;
            let (seeds, timing) = match config {
                Some(path) => parse_overrides(&std::fs::read_to_string(path)?)?,
                None => (None, None),
            };
            let outcome = run_bench(name, &out, seeds.as_deref(), timing)?;
            print!("{}", format_summary(&outcome));
            Ok(!outcome.any_failed)
        }
    }
}

/// `seeds` and `timing` keys of an override file for `bench`.
fn parse_overrides(
    text: &str,
) -> Result<(Option<Vec<u64>>, Option<TimingMode>), pcm_core::Error> {
    let mut seeds = None;
    let mut timing = None;
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            match key.trim() {
                "seeds" => {
                    seeds = Some(
                        value
                            .split(',')
                            .map(|s| {
                                s.trim().parse::<u64>().map_err(|e| {
                                    pcm_core::Error::InvalidArgument(format!(
                                        "bad seed {s:?}: {e}"
                                    ))
                                })
                            })
                            .collect::<Result<Vec<u64>, _>>()?,
                    );
                }
                "timing" => {
                    timing = Some(match value.trim() {
                        "real" => TimingMode::Real,
                        "zero" => TimingMode::Zero,
                        other => {
                            return Err(pcm_core::Error::InvalidArgument(format!(
                                "timing must be real or zero, got {other:?}"
                            )))
                        }
                    });
                }
                _ => {}
            }
        }
    }
    Ok((seeds, timing))
}

fn print_rows(rows: &[pcm_cli::runner::Row]) {
    println!(
        "{:<14} {:>6} {:>7} {:>9} {:>9} {:>9} {:>11} {:>9}",
        "model", "seed", "sigma", "ssim", "psnr", "snr", "rela_err", "wall_ms"
    );
    for row in rows {
        match (&row.metrics, &row.error) {
            (Some(m), _) => println!(
                "{:<14} {:>6} {:>7} {:>9.4} {:>9.4} {:>9.4} {:>11.6} {:>9}",
                row.model, row.seed, row.sigma, m.ssim, m.psnr, m.snr, m.rela_err, row.wall_ms
            ),
            (None, Some(e)) => {
                println!("{:<14} {:>6} {:>7} failed: {e}", row.model, row.seed, row.sigma)
            }
            (None, None) => {}
        }
    }
}
