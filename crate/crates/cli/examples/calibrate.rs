// Dev calibration sweeps for the bench presets. Deleted before ship.
use pcm_cli::bench::{table1_config, table2_config, table3_config};
use pcm_cli::config::Model;
use pcm_cli::runner::{run_rows_only, seed_averages};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(String::as_str).unwrap_or("table1");
    let seeds: Vec<u64> = vec![101, 102, 103, 104, 105];
    match which {
        "t1pcm" => {
            let sigma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.1);
            println!("=== table1 pcm_tv sigma={sigma} (weight/threshold sweep) ===");
            for w_eff in [5e-5, 1e-4, 2e-4, 4e-4, 8e-4, 2e-3, 5e-3] {
                for thresh in [0.1, 0.25, 0.5] {
                    let mu = w_eff / (2.0 * thresh);
                    let lam = mu / thresh;
                    let mut c = table1_config(Model::PcmTv, sigma, &seeds);
                    c.solver.mu_t = mu;
                    c.solver.lambda_t = Some(lam);
                    report(&format!("pcm_tv W={w_eff} T={thresh}"), &c);
                }
            }
        }
        "t1ss" => {
            let sigma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.1);
            println!("=== table1 ss_tv sigma={sigma} ===");
            for lam in [2e-5, 5e-5, 1e-4, 2e-4, 4e-4, 8e-4, 2e-3] {
                for thresh in [0.25_f64, 0.5] {
                    let mut c = table1_config(Model::SsTv, sigma, &seeds);
                    c.lambda = lam;
                    c.solver.lambda_t = Some(lam / thresh);
                    report(&format!("ss_tv L={lam} T={thresh}"), &c);
                }
            }
        }
        "t1rest" => {
            let sigma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.1);
            for lam in [5e-3, 8e-3, 1.5e-2, 3e-2, 6e-2] {
                let mut c = table1_config(Model::L1, sigma, &seeds);
                c.lambda = lam;
                report(&format!("l1 lambda={lam}"), &c);
            }
            for lam in [8e-3, 3e-2, 1e-1, 3e-1, 1.0] {
                let mut c = table1_config(Model::Tikhonov, sigma, &seeds);
                c.lambda = lam;
                report(&format!("tikhonov lambda={lam}"), &c);
            }
        }
        "table3" => {
            println!("=== table3 (calibration seeds) ===");
            let seeds3 = vec![101u64, 102, 103];
            for w_eff in [5e-3, 1e-2, 2e-2, 4e-2, 8e-2] {
                for thresh in [0.1_f64, 0.25] {
                    let mu = w_eff / (2.0 * thresh);
                    let lam = mu / thresh;
                    let mut c = table3_config(Model::TvDenoise, &seeds3);
                    c.solver.mu_t = mu;
                    c.solver.lambda_t = Some(lam);
                    report(&format!("tv W={w_eff} T={thresh}"), &c);
                }
            }
            for w_eff in [2e-4, 5e-4, 1e-3, 2e-3, 4e-3] {
                for thresh in [0.5_f64, 1.5] {
                    let mu = w_eff / (2.0 * thresh);
                    let lam = mu / thresh;
                    let mut c = table3_config(Model::TfvDenoise, &seeds3);
                    c.solver.mu_f = mu;
                    c.solver.lambda_f = Some(lam);
                    report(&format!("tfv W={w_eff} T={thresh}"), &c);
                }
            }
        }
        "table3tvtfv" => {
            let seeds3 = vec![101u64, 102, 103];
            let mu_t: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.06);
            let lam_t: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0.3);
            let mu_f: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(0.002);
            let lam_f: f64 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(0.01);
            let radius: usize = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(2);
            let mut c = table3_config(Model::TvTfvDenoise, &seeds3);
            c.solver.mu_t = mu_t;
            c.solver.lambda_t = Some(lam_t);
            c.solver.mu_f = mu_f;
            c.solver.lambda_f = Some(lam_f);
            c.solver.dilation = pcm_core::edges::DilationSpec::new(radius).unwrap();
            report(
                &format!("tvtfv mt={mu_t} lt={lam_t} mf={mu_f} lf={lam_f} r={radius}"),
                &c,
            );
        }
        "table2" => {
            let model = args.get(2).map(String::as_str).unwrap_or("pcm_tv");
            let p1: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0.05);
            let p2: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(0.25);
            let seeds2 = vec![101u64];
            let mut c = match model {
                "pcm_tv" => {
                    let mut c = table2_config(Model::PcmTv, &seeds2);
                    c.solver.mu_t = p1;
                    c.solver.lambda_t = Some(p2);
                    c
                }
                _ => {
                    let mut c = table2_config(Model::SsTv, &seeds2);
                    c.lambda = p1;
                    c.solver.lambda_t = Some(p1 / p2);
                    c
                }
            };
            if let Some(res) = args.get(5).and_then(|s| s.parse().ok()) {
                c.resolution = res;
            }
            if let Some(sig) = args.get(6).and_then(|s| s.parse().ok()) {
                c.sigma = sig;
            }
            report(&format!("{model} p1={p1} p2={p2}"), &c);
        }
        "h2h" => {
            let sigma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.1);
            for theta in [0.25_f64, 0.5, 1.0, 2.0] {
                println!("--- theta={theta} sigma={sigma} ---");
                for w_eff in [1e-4, 2e-4, 4e-4, 8e-4, 2e-3] {
                    let mu = w_eff / 0.2;
                    let lam = mu / 0.1;
                    let mut c = table1_config(Model::PcmTv, sigma, &seeds);
                    c.theta = theta;
                    c.solver.mu_t = mu;
                    c.solver.lambda_t = Some(lam);
                    report(&format!("pcm_tv W={w_eff}"), &c);
                }
                for lam in [5e-5, 1e-4, 2e-4, 4e-4, 1e-3] {
                    let mut c = table1_config(Model::SsTv, sigma, &seeds);
                    c.theta = theta;
                    c.lambda = lam;
                    c.solver.lambda_t = Some(lam / 0.25);
                    report(&format!("ss_tv L={lam}"), &c);
                }
            }
        }
        "pstop" => {
            let sigma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.1);
            for ptol in [1e-10_f64, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2] {
                for w_eff in [2e-4_f64, 4e-4, 8e-4, 2e-3] {
                    let mu = w_eff / 0.2;
                    let lam = mu / 0.1;
                    let mut c = table1_config(Model::PcmTv, sigma, &seeds);
                    c.solver.mu_t = mu;
                    c.solver.lambda_t = Some(lam);
                    c.solver.p_cg = Some(pcm_core::proxops::CgSettings { rel_tol: ptol, max_iters: 2000 });
                    report(&format!("pcm ptol={ptol:.0e} W={w_eff}"), &c);
                }
            }
        }
        "nsweep" => {
            let sigma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.4);
            let nbasis: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(64);
            println!("--- n={nbasis} sigma={sigma} ---");
            for w_eff in [2e-4_f64, 4e-4, 8e-4, 2e-3, 4e-3] {
                let mu = w_eff / 0.2;
                let lam = mu / 0.1;
                let mut c = table1_config(Model::PcmTv, sigma, &seeds);
                c.n = nbasis;
                c.solver.mu_t = mu;
                c.solver.lambda_t = Some(lam);
                report(&format!("pcm_tv W={w_eff}"), &c);
            }
            for lam in [1e-4_f64, 2e-4, 4e-4, 8e-4, 2e-3] {
                let mut c = table1_config(Model::SsTv, sigma, &seeds);
                c.n = nbasis;
                c.lambda = lam;
                c.solver.lambda_t = Some(lam / 0.25);
                report(&format!("ss_tv L={lam}"), &c);
            }
            for lam in [5e-4_f64, 1e-3, 2e-3, 4e-3, 8e-3] {
                let mut c = table1_config(Model::L1, sigma, &seeds);
                c.n = nbasis;
                c.lambda = lam;
                report(&format!("l1 L={lam}"), &c);
            }
        }
        "morozov" => {
            // Residual diagnostics: pick λ where the data residual matches
            // the known noise norm, per model, at one sigma.
            use pcm_core::grid::{Grid, Grid1D};
            use pcm_core::haar::{assemble_forward, WaveletBasis};
            use pcm_core::sampling::{add_noise, make_plan, NoiseSpec};
            use pcm_core::solvers as slv;
            let sigma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.4);
            let nb: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(128);
            let basis = WaveletBasis::haar_1d_with_dim(nb).unwrap();
            let grid = Grid::One(Grid1D::unit(256).unwrap());
            let mut cfg = pcm_core::solvers::SolverConfig::default();
            cfg.max_iters = 400;
            cfg.stop_tol = 1e-6;
            for &seed in &[101u64] {
                let plan = make_plan(256, 0.25, seed).unwrap();
                let a = assemble_forward(&basis, plan.into_frequencies()).unwrap();
                let sig = pcm_cli::signals::Signal::PwLinear1d;
                let clean: Vec<num_complex::Complex64> = (0..a.rows())
                    .map(|k| sig.fourier_1d(a.frequencies().pair(k).0).unwrap())
                    .collect();
                let eps_target = sigma * clean.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let fhat = add_noise(clean.clone(), &NoiseSpec::new(sigma, seed ^ 0x9e37_79b9_7f4a_7c15).unwrap()).unwrap();
                println!("seed {seed}: noise norm = {eps_target:.5}");
                let resid = |c: &[f64]| -> f64 {
                    a.apply(c).iter().zip(fhat.entries()).map(|(y, b)| (y - b).norm_sqr()).sum::<f64>().sqrt()
                };
                let cf = slv::pcm_p_stage(&a, &fhat, &cfg.cg).unwrap();
                println!("  projection resid {:.5}", resid(cf.values()));
                for lam in [2e-4_f64, 4e-4, 8e-4, 1.2e-3, 2e-3, 3e-3] {
                    let mut c2 = cfg.clone();
                    c2.lambda_t = Some(lam / 0.25);
                    let out = slv::baseline_ss_tv(&a, &fhat, &basis, &grid, lam, &c2).unwrap();
                    println!("  ss_tv L={lam}: resid {:.5}", resid(out.output.c.values()));
                }
                for w_eff in [4e-4_f64, 8e-4, 2e-3, 4e-3, 8e-3] {
                    let mu = w_eff / 0.2;
                    let mut c2 = cfg.clone();
                    c2.lambda_t = Some(mu / 0.1);
                    let out = slv::pcm_tv(&fhat, &a, &basis, &grid, mu, &c2).unwrap();
                    println!("  pcm_tv W={w_eff}: resid {:.5}", resid(out.output.c.values()));
                }
                for lam in [5e-4_f64, 2e-3, 8e-3, 2e-2] {
                    let out = slv::baseline_l1(&a, &fhat, lam, &cfg).unwrap();
                    println!("  l1 L={lam}: resid {:.5}", resid(out.c.values()));
                }
                for lam in [1e-4_f64, 1e-3, 1e-2, 5e-2] {
                    let out = slv::baseline_tikhonov(&a, &fhat, lam, &cfg).unwrap();
                    println!("  tikh L={lam}: resid {:.5}", resid(out.c.values()));
                }
            }
        }
        "t3ext" => {
            let seeds3 = vec![101u64, 102, 103];
            for w_eff in [0.04_f64, 0.06, 0.08, 0.12, 0.16] {
                let mu = w_eff / 0.2;
                let lam = mu / 0.1;
                let mut c = table3_config(Model::TvDenoise, &seeds3);
                c.solver.mu_t = mu;
                c.solver.lambda_t = Some(lam);
                report(&format!("tv W={w_eff}"), &c);
            }
            for w_eff in [2e-3_f64, 4e-3, 8e-3, 1.6e-2] {
                for thresh in [1.0_f64] {
                    let mu = w_eff / (2.0 * thresh);
                    let lam = mu / thresh;
                    let mut c = table3_config(Model::TfvDenoise, &seeds3);
                    c.solver.mu_f = mu;
                    c.solver.lambda_f = Some(lam);
                    report(&format!("tfv W={w_eff} T={thresh}"), &c);
                }
            }
        }
        "t3hybrid" => {
            let seeds3 = vec![101u64, 102, 103];
            for wt in [0.06_f64, 0.08, 0.1] {
                for wf in [2e-3_f64, 4e-3, 8e-3] {
                    for radius in [2usize, 3] {
                        let mu_t = wt / 0.2;
                        let lam_t = mu_t / 0.1;
                        let mu_f = wf / 2.0; // T_f = 1
                        let lam_f = mu_f / 1.0;
                        let mut c = table3_config(Model::TvTfvDenoise, &seeds3);
                        c.solver.mu_t = mu_t;
                        c.solver.lambda_t = Some(lam_t);
                        c.solver.mu_f = mu_f;
                        c.solver.lambda_f = Some(lam_f);
                        c.solver.max_iters = 250;
                        c.solver.dilation = pcm_core::edges::DilationSpec::new(radius).unwrap();
                        report(&format!("tvtfv Wt={wt} Wf={wf} r={radius}"), &c);
                    }
                }
            }
        }
        "t2fine" => {
            let seeds2 = vec![101u64];
            let w_eff: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2e-6);
            let thresh: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0.05);
            let stop: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1e-5);
            let mu = w_eff / (2.0 * thresh);
            let lam = mu / thresh;
            let mut c = table2_config(Model::PcmTv, &seeds2);
            c.solver.mu_t = mu;
            c.solver.lambda_t = Some(lam);
            c.solver.stop_tol = stop;
            c.solver.max_iters = 200;
            if let Some(sig) = args.get(5).and_then(|s| s.parse().ok()) {
                c.sigma = sig;
            }
            report(&format!("pcm2d W={w_eff} T={thresh} tol={stop} sig={}", c.sigma), &c);
        }
        "t2ss" => {
            let seeds2 = vec![101u64];
            let lam: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2e-6);
            let thresh: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0.25);
            let stop: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(5e-5);
            let mut c = table2_config(Model::SsTv, &seeds2);
            c.lambda = lam;
            c.solver.lambda_t = Some(lam / thresh);
            c.solver.stop_tol = stop;
            c.solver.max_iters = 200;
            c.solver.cg = pcm_core::proxops::CgSettings { rel_tol: 1e-6, max_iters: 2000 };
            if let Some(sig) = args.get(5).and_then(|s| s.parse().ok()) {
                c.sigma = sig;
            }
            report(&format!("ss2d L={lam} T={thresh} tol={stop} sig={}", c.sigma), &c);
        }
        other => eprintln!("unknown sweep {other}"),
    }
}

fn report(label: &str, config: &pcm_cli::config::ExperimentConfig) {
    let t0 = std::time::Instant::now();
    match run_rows_only(config) {
        Ok(rows) => {
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            for r in &rows {
                if let Some(e) = &r.error {
                    println!("  seed {} failed: {e}", r.seed);
                }
            }
            for (model, mean, n) in seed_averages(&rows) {
                let conv = rows.iter().filter(|r| r.converged == Some(true)).count();
                let viol = rows
                    .iter()
                    .filter_map(|r| r.final_stats)
                    .map(|s| s.tv_violation.max(s.tfv_violation))
                    .fold(0.0f64, f64::max);
                println!(
                    "{label:<36} {model:<10} psnr={:>8.4} rela={:>9.6} ssim={:>7.4} snr={:>8.4} n={n} conv={conv} viol={viol:.1e} fail={failed} [{:?}]",
                    mean.psnr, mean.rela_err, mean.ssim, mean.snr, t0.elapsed()
                );
            }
        }
        Err(e) => println!("{label:<36} ERROR: {e}"),
    }
}

// appended: head-to-head over jitter radii
