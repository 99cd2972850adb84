// Dev scratch. Deleted before ship.
use pcm_core::grid::{Grid2D, RealField};
use pcm_core::solvers::{tfv_denoise, tv_denoise, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let side = 64;
    let grid = Grid2D::new(side).unwrap();
    let truth: Vec<f64> = (0..side * side)
        .map(|i| {
            let (x, y) = grid.node(i % side, i / side);
            14.0 * x * (1.0 - x) * y * (1.0 - y) * (0.3 + 0.4 * x + 0.3 * y)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let noisy_v: Vec<f64> = truth
        .iter()
        .map(|&v| v + 0.2 * rng.sample::<f64, _>(rand_distr::StandardNormal))
        .collect();
    let noisy = RealField::new(grid.clone(), noisy_v).unwrap();
    let psnr = |v: &[f64]| -> f64 {
        let err: f64 = v.iter().zip(&truth).map(|(a, b)| (a - b) * (a - b)).sum();
        let peak = truth.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        10.0 * ((side * side) as f64 * peak * peak / err).log10()
    };
    println!("noisy psnr {:.3}", psnr(noisy.values()));
    for w in [0.08_f64, 0.16, 0.32, 0.64] {
        let mut c = SolverConfig::default();
        let mu = w / 0.2;
        c.lambda_t = Some(mu / 0.1);
        c.max_iters = 300;
        let out = tv_denoise(&noisy, mu, &c).unwrap();
        println!("tv W={w}: psnr {:.3} conv={}", psnr(out.output.values()), out.converged_by_tolerance);
    }
    for alpha in [1.3_f64] {
        for w in [8e-3_f64, 1.6e-2, 3.2e-2] {
            let mut c = SolverConfig::default();
            c.alpha = alpha;
            let mu = w / 2.0;
            c.lambda_f = Some(mu);
            c.max_iters = 400;
            c.cg.max_iters = 2000;
            let out = tfv_denoise(&noisy, mu, &c).unwrap();
            println!("tfv a={alpha} W={w}: psnr {:.3} conv={}", psnr(out.output.values()), out.converged_by_tolerance);
        }
    }
}
