//! Named reproduction runs: the noiseless projection check and the three
//! comparison tables, with tuned weights frozen per noise level.

use std::io::Write;
use std::path::Path;

use pcm_core::error::{Error, Result};
use pcm_core::proxops::CgSettings;
use pcm_core::solvers::SolverConfig;

use crate::config::{DataMode, ExperimentConfig, GammaMode, Model, TimingMode};
use crate::runner::{run_experiment, seed_averages, Row, RunOutcome};
use crate::signals::Signal;

/// Which reproduction to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchName {
    Fig4,
    Table1,
    Table2,
    Table3,
}

impl BenchName {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "fig4" => BenchName::Fig4,
            "table1" => BenchName::Table1,
            "table2" => BenchName::Table2,
            "table3" => BenchName::Table3,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown bench {other:?} (expected fig4, table1, table2, table3)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BenchName::Fig4 => "fig4",
            BenchName::Table1 => "table1",
            BenchName::Table2 => "table2",
            BenchName::Table3 => "table3",
        }
    }
}

fn base_recon(signal: Signal, model: Model, m: usize, n: usize, resolution: usize) -> ExperimentConfig {
    ExperimentConfig {
        signal,
        model,
        m,
        n,
        resolution,
        theta: 0.25,
        sigma: 0.0,
        seeds: vec![1],
        data: DataMode::Continuous,
        timing: TimingMode::Real,
        lambda: 0.0,
        gamma_mode: GammaMode::Adaptive,
        solver: SolverConfig::default(),
    }
}

/// Noiseless in-span projection: `m = 128`, `n = 32`, `θ = 0.25`, `σ = 0`.
pub fn fig4_config() -> ExperimentConfig {
    let mut c = base_recon(Signal::PwConst1d, Model::PcmTv, 128, 32, 256);
    c.data = DataMode::Span;
    c.solver.mu_t = 0.0;
    c.solver.cg.rel_tol = 1e-12;
    c.solver.cg.max_iters = 2000;
    c
}

/// Tuned weights for the 1D piecewise-linear comparison at a noise level.
pub fn table1_config(model: Model, sigma: f64, seeds: &[u64]) -> ExperimentConfig {
    let mut c = base_recon(Signal::PwLinear1d, model, 256, 128, 256);
    c.sigma = sigma;
    c.seeds = seeds.to_vec();
    c.solver.max_iters = 400;
    c.solver.stop_tol = 1e-6;
    match model {
        Model::PcmTv => {
            let (mu, lam) = match sigma {
                s if s <= 0.2 => (0.02, 0.1),
                s if s <= 0.55 => (0.05, 0.25),
                _ => (0.08, 0.4),
            };
            c.solver.mu_t = mu;
            c.solver.lambda_t = Some(lam);
        }
        Model::L1 => {
            c.lambda = match sigma {
                s if s <= 0.2 => 2e-4,
                s if s <= 0.55 => 8e-4,
                _ => 1.5e-3,
            };
            c.solver.stop_tol = 1e-9;
            c.solver.max_iters = 4000;
        }
        Model::SsTv => {
            c.lambda = match sigma {
                s if s <= 0.2 => 1e-3,
                s if s <= 0.55 => 4e-3,
                _ => 8e-3,
            };
        }
        Model::Tikhonov => {
            c.lambda = match sigma {
                s if s <= 0.2 => 1e-4,
                s if s <= 0.55 => 1e-3,
                _ => 3e-3,
            };
        }
        _ => {}
    }
    c
}

/// 2D two-squares comparison at `σ = 0.6`, `m = 128²`, `n = 64²`.
pub fn table2_config(model: Model, seeds: &[u64]) -> ExperimentConfig {
    let mut c = base_recon(Signal::TwoSquares2d, model, 128, 64, 256);
    c.sigma = 0.6;
    c.seeds = seeds.to_vec();
    c.solver.max_iters = 60;
    c.solver.stop_tol = 3e-5;
    // The tensor normal system squares the 1D conditioning: give the
    // projection its own generous budget and keep the inner loops lighter.
    c.solver.cg = CgSettings {
        rel_tol: 1e-6,
        max_iters: 600,
    };
    c.solver.p_cg = Some(CgSettings {
        rel_tol: 1e-6,
        max_iters: 4000,
    });
    match model {
        Model::PcmTv => {
            c.solver.mu_t = 0.05;
            c.solver.lambda_t = Some(0.25);
        }
        Model::SsTv => {
            c.lambda = 5e-4;
        }
        _ => {}
    }
    c
}

/// Denoising comparison on the 64×64 phantom with matched pixel noise.
pub fn table3_config(model: Model, seeds: &[u64]) -> ExperimentConfig {
    let mut c = ExperimentConfig {
        signal: Signal::Phantom2d,
        model,
        m: 2,
        n: 2,
        resolution: 64,
        theta: 0.0,
        sigma: 0.1,
        seeds: seeds.to_vec(),
        data: DataMode::Span,
        timing: TimingMode::Real,
        lambda: 0.0,
        gamma_mode: GammaMode::Adaptive,
        solver: SolverConfig::default(),
    };
    c.solver.max_iters = 200;
    c.solver.stop_tol = 1e-5;
    match model {
        Model::TvDenoise => {
            c.solver.mu_t = 0.06;
            c.solver.lambda_t = Some(0.3);
        }
        Model::TfvDenoise => {
            c.solver.mu_f = 0.002;
            c.solver.lambda_f = Some(0.01);
        }
        Model::TvTfvDenoise => {
            c.solver.mu_t = 0.06;
            c.solver.lambda_t = Some(0.3);
            c.solver.mu_f = 0.002;
            c.solver.lambda_f = Some(0.01);
            c.solver.warm_iters = 4;
        }
        _ => {}
    }
    c
}

/// Every experiment a bench runs.
pub fn bench_configs(name: BenchName, seeds: Option<&[u64]>) -> Vec<ExperimentConfig> {
    match name {
        BenchName::Fig4 => {
            let mut c = fig4_config();
            if let Some(s) = seeds {
                c.seeds = s.to_vec();
            }
            vec![c]
        }
        BenchName::Table1 => {
            let seeds = seeds.unwrap_or(&[1, 2, 3, 4, 5]);
            let mut out = Vec::new();
            for &sigma in &[0.1, 0.4, 0.7] {
                for model in [Model::PcmTv, Model::L1, Model::SsTv, Model::Tikhonov] {
                    out.push(table1_config(model, sigma, seeds));
                }
            }
            out
        }
        BenchName::Table2 => {
            let seeds = seeds.unwrap_or(&[1, 2, 3]);
            vec![
                table2_config(Model::SsTv, seeds),
                table2_config(Model::PcmTv, seeds),
            ]
        }
        BenchName::Table3 => {
            let seeds = seeds.unwrap_or(&[1, 2, 3]);
            vec![
                table3_config(Model::TvDenoise, seeds),
                table3_config(Model::TfvDenoise, seeds),
                table3_config(Model::TvTfvDenoise, seeds),
            ]
        }
    }
}

/// Outcome of a whole bench: per-seed rows and per-(σ, model) averages.
pub struct BenchOutcome {
    pub rows: Vec<Row>,
    pub summary: Vec<(f64, String, pcm_core::metrics::MetricReport, usize)>,
    pub any_failed: bool,
}

/// Run a named reproduction, writing each experiment into its own
/// subdirectory plus a combined `summary.csv`.
pub fn run_bench(
    name: BenchName,
    out_dir: &Path,
    seeds: Option<&[u64]>,
    timing: Option<TimingMode>,
) -> Result<BenchOutcome> {
    std::fs::create_dir_all(out_dir)?;
    let mut all_rows = Vec::new();
    let mut summary = Vec::new();
    let mut any_failed = false;
    for (i, mut config) in bench_configs(name, seeds).into_iter().enumerate() {
        if let Some(t) = timing {
            config.timing = t;
        }
        let sub = out_dir.join(format!(
            "{}_{:02}_{}_sigma{}",
            name.name(),
            i,
            config.model.name(),
            config.sigma
        ));
        let RunOutcome { rows, any_failed: failed } = run_experiment(&config, &sub)?;
        any_failed |= failed;
        for (model, mean, count) in seed_averages(&rows) {
            summary.push((config.sigma, model, mean, count));
        }
        all_rows.extend(rows);
    }

    let mut out = std::io::BufWriter::new(std::fs::File::create(out_dir.join("summary.csv"))?);
    writeln!(out, "bench,sigma,model,seeds,ssim,psnr,snr,rela_err")?;
    for (sigma, model, mean, count) in &summary {
        writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.6},{:.8}",
            name.name(),
            sigma,
            model,
            count,
            mean.ssim,
            mean.psnr,
            mean.snr,
            mean.rela_err
        )?;
    }
    out.flush()?;
    Ok(BenchOutcome {
        rows: all_rows,
        summary,
        any_failed,
    })
}

/// Pretty seed-averaged table for the terminal.
pub fn format_summary(outcome: &BenchOutcome) -> String {
    let mut s = format!(
        "{:<8} {:<14} {:>6} {:>9} {:>9} {:>9} {:>11}\n",
        "sigma", "model", "seeds", "ssim", "psnr", "snr", "rela_err"
    );
    for (sigma, model, mean, count) in &outcome.summary {
        s.push_str(&format!(
            "{:<8} {:<14} {:>6} {:>9.4} {:>9.4} {:>9.4} {:>11.6}\n",
            sigma, model, count, mean.ssim, mean.psnr, mean.snr, mean.rela_err
        ));
    }
    s
}
