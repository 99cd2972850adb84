//! Optimization drivers: the accelerated proximal solver for the general
//! two-stage model, split-Bregman TV/TFV denoising, the coefficient-space
//! ADMM reconstruction, and the one-stage baselines.

mod baselines;
mod bregman;
mod pcm;
mod pcm_tvtfv;
mod report;

pub use baselines::{baseline_l1, baseline_ss_tv, baseline_tikhonov, BaselineResult};
pub use bregman::{tfv_denoise, tv_denoise, tv_warmup, tvtfv_denoise};
pub use pcm::{accelerated_proximal_pcm, pcm_p_stage, AccelResult};
pub use pcm_tvtfv::{pcm_tv, pcm_tvtfv, PcmResult};
pub use report::{metrics_gap_report, GapReport, GapRow};

use std::io::Write;
use std::path::Path;

use crate::edges::{dilate, detect_edges, fuse_history, DilationSpec, EdgeDetector, GammaHistory};
use crate::error::{Error, Result};
use crate::fracdiff::{build_operator, lift_2d, Direction, FracDiffOperator, StripKind};
use crate::grid::{BinaryMask, Grid, RealField};
use crate::linalg;
use crate::proxops::CgSettings;

/// How the `Γ` region evolves during a run.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaPolicy {
    /// TV warm start, per-iteration detection, history fusion, dilation.
    Adaptive,
    /// A caller-supplied mask held fixed for the whole run.
    Fixed(BinaryMask),
}

/// Shared configuration of the edge-guided solvers.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// TV weight `μ_t`.
    pub mu_t: f64,
    /// TFV weight `μ_f`.
    pub mu_f: f64,
    /// Splitting penalty `λ_t`; defaults to `μ_t`.
    pub lambda_t: Option<f64>,
    /// Splitting penalty `λ_f`; defaults to `μ_f`.
    pub lambda_f: Option<f64>,
    /// Bregman step `γ₁` for the TV accumulator.
    pub gamma1: f64,
    /// Bregman step `γ₂` for the TFV accumulator.
    pub gamma2: f64,
    /// Fractional order `α`.
    pub alpha: f64,
    /// Coefficient truncation tolerance for the fractional strips.
    pub frac_tol: f64,
    pub max_iters: usize,
    /// Relative-change stopping threshold.
    pub stop_tol: f64,
    pub dilation: DilationSpec,
    /// Length `n` of the stored mask sequence.
    pub history_window: usize,
    /// Confidence level `t` of the vote rule; `None` selects rounding.
    pub confidence: Option<f64>,
    /// TV iterations in the warm start.
    pub warm_iters: usize,
    /// TV weight of the warm start; defaults to `μ_t` (or 0.5 when `μ_t = 0`).
    pub warm_tv_weight: Option<f64>,
    pub edge_detector: EdgeDetector,
    /// Edge threshold; 0 is the automatic rule.
    pub edge_threshold: f64,
    pub gamma_policy: GammaPolicy,
    /// Inner linear-solve settings.
    pub cg: CgSettings,
    /// Projection-stage least-squares settings; falls back to `cg`. A loose
    /// tolerance here early-stops the projection CG, which spectrally
    /// filters the noisiest directions of the pseudo-inverse.
    pub p_cg: Option<CgSettings>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mu_t: 0.1,
            mu_f: 0.0,
            lambda_t: None,
            lambda_f: None,
            gamma1: 1.0,
            gamma2: 1.0,
            alpha: 1.3,
            frac_tol: 1e-8,
            max_iters: 300,
            stop_tol: 1e-5,
            dilation: DilationSpec::default(),
            history_window: 5,
            confidence: None,
            warm_iters: 4,
            warm_tv_weight: None,
            edge_detector: EdgeDetector::Sobel,
            edge_threshold: 0.0,
            gamma_policy: GammaPolicy::Adaptive,
            cg: CgSettings {
                rel_tol: 1e-10,
                max_iters: 500,
            },
            p_cg: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mu_t < 0.0 || self.mu_f < 0.0 {
            return Err(Error::InvalidArgument(
                "regularization weights must be nonnegative".to_string(),
            ));
        }
        for (name, lam) in [("lambda_t", self.lambda_t), ("lambda_f", self.lambda_f)] {
            if let Some(l) = lam {
                if !(l > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "{name} must be positive when set, got {l}"
                    )));
                }
            }
        }
        for (name, g) in [("gamma1", self.gamma1), ("gamma2", self.gamma2)] {
            if !(g > 0.0 && g <= 2.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in (0, 2], got {g}"
                )));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 2.0 || self.alpha == 2.0) {
            return Err(Error::InvalidArgument(format!(
                "fractional order must lie in (0, 2], got {}",
                self.alpha
            )));
        }
        if !(self.stop_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "stopping tolerance must be positive".to_string(),
            ));
        }
        if self.max_iters == 0 || self.history_window == 0 {
            return Err(Error::InvalidArgument(
                "iteration budget and history window must be positive".to_string(),
            ));
        }
        if !(1..=10).contains(&self.warm_iters) {
            return Err(Error::InvalidArgument(format!(
                "warm-start iterations must lie in [1,10], got {}",
                self.warm_iters
            )));
        }
        Ok(())
    }

    /// Settings for the projection-stage solve.
    pub fn p_stage_cg(&self) -> CgSettings {
        self.p_cg.unwrap_or(self.cg)
    }

    pub fn lambda_t(&self) -> f64 {
        self.lambda_t.unwrap_or(self.mu_t)
    }

    pub fn lambda_f(&self) -> f64 {
        self.lambda_f.unwrap_or(self.mu_f)
    }

    pub(crate) fn warm_weight(&self) -> f64 {
        self.warm_tv_weight
            .unwrap_or(if self.mu_t > 0.0 { self.mu_t } else { 0.5 })
    }
}

/// Per-iteration diagnostics of a Bregman driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterStats {
    pub iter: usize,
    pub objective: f64,
    pub rel_change: f64,
    /// `‖∇f|_Γ − d‖ / max(1, ‖∇f|_Γ‖)`.
    pub tv_violation: f64,
    /// `‖∇^α f|_{Γᶜ} − e‖ / max(1, ‖∇^α f|_{Γᶜ}‖)`.
    pub tfv_violation: f64,
    pub gamma_size: usize,
}

/// Outcome of an iterative driver.
#[derive(Debug, Clone)]
pub struct SolveResult<T> {
    pub output: T,
    pub trace: Vec<IterStats>,
    pub iters: usize,
    /// Whether the relative-change rule fired before the iteration budget.
    pub converged_by_tolerance: bool,
}

impl<T> SolveResult<T> {
    pub fn final_stats(&self) -> Option<&IterStats> {
        self.trace.last()
    }
}

/// Write a solver trace as CSV with a header row.
pub fn write_trace_csv(trace: &[IterStats], path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "iter,objective,rel_change,tv_violation,tfv_violation,gamma_size"
    )?;
    for s in trace {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            s.iter, s.objective, s.rel_change, s.tv_violation, s.tfv_violation, s.gamma_size
        )?;
    }
    out.flush()?;
    Ok(())
}

/// First-difference and fractional derivative stacks for one grid shape.
/// Gradients are anisotropic forward differences with Neumann ends (the last
/// difference along each axis is zero); fractional operators are the central
/// strips, lifted per axis in 2D.
pub struct DiffOperators {
    two_d: bool,
    n: usize,
    frac: Vec<FracDiffOperator>,
}

impl DiffOperators {
    /// Build for the grid of `shape`; fractional strips are constructed only
    /// when `with_frac` (they are dense triangles, not free).
    pub fn new(grid: &Grid, alpha: f64, frac_tol: f64, with_frac: bool) -> Result<Self> {
        match grid {
            Grid::One(g) => {
                let n = g.len();
                let frac = if with_frac {
                    vec![build_operator(StripKind::Central, alpha, n, frac_tol)?]
                } else {
                    Vec::new()
                };
                Ok(Self {
                    two_d: false,
                    n,
                    frac,
                })
            }
            Grid::Two(g) => {
                let n = g.side();
                let frac = if with_frac {
                    let c = build_operator(StripKind::Central, alpha, n, frac_tol)?;
                    vec![lift_2d(&c, Direction::X)?, lift_2d(&c, Direction::Y)?]
                } else {
                    Vec::new()
                };
                Ok(Self {
                    two_d: true,
                    n,
                    frac,
                })
            }
        }
    }

    /// Number of stacked axes (1 in 1D, 2 in 2D).
    pub fn n_axes(&self) -> usize {
        if self.two_d {
            2
        } else {
            1
        }
    }

    pub fn len(&self) -> usize {
        if self.two_d {
            self.n * self.n
        } else {
            self.n
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Forward differences per axis.
    pub fn grad_axes(&self, f: &[f64]) -> Vec<Vec<f64>> {
        let n = self.n;
        if !self.two_d {
            let mut g = vec![0.0; n];
            for i in 0..n - 1 {
                g[i] = f[i + 1] - f[i];
            }
            return vec![g];
        }
        let len = n * n;
        let mut gx = vec![0.0; len];
        let mut gy = vec![0.0; len];
        for iy in 0..n {
            let base = iy * n;
            for ix in 0..n - 1 {
                gx[base + ix] = f[base + ix + 1] - f[base + ix];
            }
        }
        for iy in 0..n - 1 {
            let base = iy * n;
            for ix in 0..n {
                gy[base + ix] = f[base + n + ix] - f[base + ix];
            }
        }
        vec![gx, gy]
    }

    /// `Σ_axis Gᵀ_axis v_axis`.
    pub fn grad_adjoint(&self, v: &[Vec<f64>]) -> Vec<f64> {
        let n = self.n;
        if !self.two_d {
            let g = &v[0];
            let mut out = vec![0.0; n];
            for i in 0..n - 1 {
                out[i] -= g[i];
                out[i + 1] += g[i];
            }
            return out;
        }
        let len = n * n;
        let mut out = vec![0.0; len];
        let gx = &v[0];
        for iy in 0..n {
            let base = iy * n;
            for ix in 0..n - 1 {
                out[base + ix] -= gx[base + ix];
                out[base + ix + 1] += gx[base + ix];
            }
        }
        let gy = &v[1];
        for iy in 0..n - 1 {
            let base = iy * n;
            for ix in 0..n {
                out[base + ix] -= gy[base + ix];
                out[base + n + ix] += gy[base + ix];
            }
        }
        out
    }

    /// Central fractional derivative per axis.
    pub fn frac_axes(&self, f: &[f64]) -> Vec<Vec<f64>> {
        self.frac
            .iter()
            .map(|op| {
                let mut out = vec![0.0; f.len()];
                op.apply_into(f, &mut out, false);
                out
            })
            .collect()
    }

    /// `Σ_axis Fᵀ_axis v_axis`.
    pub fn frac_adjoint(&self, v: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        let mut tmp = vec![0.0; self.len()];
        for (op, va) in self.frac.iter().zip(v) {
            op.apply_into(va, &mut tmp, true);
            for (o, t) in out.iter_mut().zip(&tmp) {
                *o += *t;
            }
        }
        out
    }
}

pub(crate) fn mask_mul(v: &mut [f64], mask: &BinaryMask) {
    for (x, &m) in v.iter_mut().zip(mask.values()) {
        if m == 0 {
            *x = 0.0;
        }
    }
}

/// Γ bookkeeping plus the d/dd and e/ee splitting state shared by the
/// Bregman drivers. All splitting vectors live in grid space, one per axis;
/// d/dd are supported in `Γ`, e/ee in `Γᶜ`.
pub(crate) struct SplitState {
    pub use_tv: bool,
    pub use_tfv: bool,
    pub d: Vec<Vec<f64>>,
    pub dd: Vec<Vec<f64>>,
    pub e: Vec<Vec<f64>>,
    pub ee: Vec<Vec<f64>>,
    pub gamma: BinaryMask,
    pub gamma_c: BinaryMask,
    history: Option<GammaHistory>,
    adaptive: bool,
    frozen: bool,
}

impl SplitState {
    /// Build the state; for the adaptive policy the warm start (TV smoothing
    /// + detection + dilation) seeds `Γ` and the history.
    pub fn init(
        start_image: &RealField,
        config: &SolverConfig,
        use_tv: bool,
        use_tfv: bool,
    ) -> Result<Self> {
        let len = start_image.len();
        let axes = match start_image.grid() {
            Grid::One(_) => 1,
            Grid::Two(_) => 2,
        };
        let full = match start_image.grid() {
            Grid::One(_) => BinaryMask::ones_1d(len),
            Grid::Two(g) => BinaryMask::ones_2d(g.side()),
        };
        let (gamma, history, adaptive) = match &config.gamma_policy {
            GammaPolicy::Fixed(mask) => {
                if mask.len() != len {
                    return Err(Error::ShapeMismatch {
                        what: "fixed Γ mask vs image",
                        expected: len,
                        got: mask.len(),
                    });
                }
                (mask.clone(), None, false)
            }
            GammaPolicy::Adaptive => {
                if use_tv && use_tfv {
                    let smoothed =
                        bregman::tv_warmup(start_image, config.warm_iters, config.warm_weight())?;
                    let bar =
                        detect_edges(&smoothed, config.edge_detector, config.edge_threshold)?;
                    let gamma = dilate(&bar, &config.dilation);
                    let mut history =
                        GammaHistory::new(config.history_window, config.confidence)?;
                    history.push(bar)?;
                    (gamma, Some(history), true)
                } else if use_tv {
                    // Single active regularizer: TV acts everywhere.
                    (full.clone(), None, false)
                } else {
                    // TFV everywhere means Γ = ∅.
                    (full.complement(), None, false)
                }
            }
        };
        let gamma_c = gamma.complement();
        let zeros = || vec![vec![0.0; len]; axes];
        Ok(Self {
            use_tv,
            use_tfv,
            d: zeros(),
            dd: zeros(),
            e: zeros(),
            ee: zeros(),
            gamma,
            gamma_c,
            history,
            adaptive,
            frozen: false,
        })
    }

    /// Per-iteration Γ refresh: detections on the current iterate fill the
    /// history window during the first `n` iterations; once the window is
    /// full the fused vote becomes the final Γ and stays fixed. A mask that
    /// keeps tracking the iterate forms a limit cycle with it (the Bregman
    /// state is re-projected forever), and late detections barely move
    /// anyway.
    pub fn refresh_gamma(
        &mut self,
        k: usize,
        image: &RealField,
        config: &SolverConfig,
    ) -> Result<()> {
        if self.adaptive && k > 1 && !self.frozen {
            let history = self.history.as_mut().expect("adaptive runs keep history");
            let bar = if history.len() < config.history_window {
                let raw = detect_edges(image, config.edge_detector, config.edge_threshold)?;
                history.push(raw.clone())?;
                raw
            } else {
                self.frozen = true;
                fuse_history(history)?
            };
            self.gamma = dilate(&bar, &config.dilation);
            self.gamma_c = self.gamma.complement();
        }
        if self.use_tv {
            for (da, dda) in self.d.iter_mut().zip(self.dd.iter_mut()) {
                mask_mul(da, &self.gamma);
                mask_mul(dda, &self.gamma);
            }
        }
        if self.use_tfv {
            for (ea, eea) in self.e.iter_mut().zip(self.ee.iter_mut()) {
                mask_mul(ea, &self.gamma_c);
                mask_mul(eea, &self.gamma_c);
            }
        }
        Ok(())
    }

    /// Grid-space rhs contribution `2μ_t Gᵀ(d−dd) + 2μ_f Fᵀ(e−ee)`.
    pub fn rhs_terms(&self, ops: &DiffOperators, config: &SolverConfig) -> Vec<f64> {
        let mut rhs = vec![0.0; ops.len()];
        if self.use_tv {
            let diff: Vec<Vec<f64>> = self
                .d
                .iter()
                .zip(&self.dd)
                .map(|(da, dda)| da.iter().zip(dda).map(|(x, y)| x - y).collect())
                .collect();
            let term = ops.grad_adjoint(&diff);
            linalg::axpy(2.0 * config.mu_t, &term, &mut rhs);
        }
        if self.use_tfv {
            let diff: Vec<Vec<f64>> = self
                .e
                .iter()
                .zip(&self.ee)
                .map(|(ea, eea)| ea.iter().zip(eea).map(|(x, y)| x - y).collect())
                .collect();
            let term = ops.frac_adjoint(&diff);
            linalg::axpy(2.0 * config.mu_f, &term, &mut rhs);
        }
        rhs
    }

    /// Grid-space quadratic terms `2μ_t Gᵀ_Γ G_Γ x + 2μ_f Fᵀ_{Γᶜ} F_{Γᶜ} x`.
    pub fn operator_terms(&self, ops: &DiffOperators, config: &SolverConfig, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        if self.use_tv {
            let mut g = ops.grad_axes(x);
            for ga in g.iter_mut() {
                mask_mul(ga, &self.gamma);
            }
            let term = ops.grad_adjoint(&g);
            linalg::axpy(2.0 * config.mu_t, &term, &mut out);
        }
        if self.use_tfv {
            let mut fr = ops.frac_axes(x);
            for fa in fr.iter_mut() {
                mask_mul(fa, &self.gamma_c);
            }
            let term = ops.frac_adjoint(&fr);
            linalg::axpy(2.0 * config.mu_f, &term, &mut out);
        }
        out
    }

    /// Shrink and Bregman updates against the freshly solved image, and the
    /// constraint-violation pair for the trace.
    pub fn update_splits(
        &mut self,
        ops: &DiffOperators,
        config: &SolverConfig,
        image: &[f64],
    ) -> (f64, f64) {
        let mut tv_violation = 0.0;
        let mut tfv_violation = 0.0;
        if self.use_tv {
            let thresh = config.mu_t / self.shadow_lambda_t(config);
            let mut g = ops.grad_axes(image);
            let mut num = 0.0;
            let mut den = 0.0;
            for a in 0..g.len() {
                mask_mul(&mut g[a], &self.gamma);
                for i in 0..g[a].len() {
                    let v = g[a][i] + self.dd[a][i];
                    self.d[a][i] = crate::proxops::shrink(v, thresh);
                    let gap = g[a][i] - self.d[a][i];
                    self.dd[a][i] += config.gamma1 * gap;
                    num += gap * gap;
                    den += g[a][i] * g[a][i];
                }
            }
            tv_violation = num.sqrt() / den.sqrt().max(1.0);
        }
        if self.use_tfv {
            let thresh = config.mu_f / self.shadow_lambda_f(config);
            let mut fr = ops.frac_axes(image);
            let mut num = 0.0;
            let mut den = 0.0;
            for a in 0..fr.len() {
                mask_mul(&mut fr[a], &self.gamma_c);
                for i in 0..fr[a].len() {
                    let v = fr[a][i] + self.ee[a][i];
                    self.e[a][i] = crate::proxops::shrink(v, thresh);
                    let gap = fr[a][i] - self.e[a][i];
                    self.ee[a][i] += config.gamma2 * gap;
                    num += gap * gap;
                    den += fr[a][i] * fr[a][i];
                }
            }
            tfv_violation = num.sqrt() / den.sqrt().max(1.0);
        }
        (tv_violation, tfv_violation)
    }

    fn shadow_lambda_t(&self, config: &SolverConfig) -> f64 {
        let l = config.lambda_t();
        if l > 0.0 {
            l
        } else {
            1.0
        }
    }

    fn shadow_lambda_f(&self, config: &SolverConfig) -> f64 {
        let l = config.lambda_f();
        if l > 0.0 {
            l
        } else {
            1.0
        }
    }

    /// Regularizer value `μ_t‖∇x|_Γ‖₁ + μ_f‖∇^α x|_{Γᶜ}‖₁`.
    pub fn objective_reg(&self, ops: &DiffOperators, config: &SolverConfig, x: &[f64]) -> f64 {
        let mut obj = 0.0;
        if self.use_tv {
            let mut g = ops.grad_axes(x);
            for ga in g.iter_mut() {
                mask_mul(ga, &self.gamma);
                obj += config.mu_t * ga.iter().map(|v| v.abs()).sum::<f64>();
            }
        }
        if self.use_tfv {
            let mut fr = ops.frac_axes(x);
            for fa in fr.iter_mut() {
                mask_mul(fa, &self.gamma_c);
                obj += config.mu_f * fa.iter().map(|v| v.abs()).sum::<f64>();
            }
        }
        obj
    }

    pub fn gamma_size(&self) -> usize {
        self.gamma.count_ones()
    }
}

/// Debug-build check that a linear operator closure is symmetric positive
/// definite on a couple of random probes.
#[cfg(debug_assertions)]
pub(crate) fn debug_check_spd(apply: &impl Fn(&[f64]) -> Vec<f64>, dim: usize) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5bd1);
    let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let au = apply(&u);
    let av = apply(&v);
    let uav = linalg::dot(&u, &av);
    let vau = linalg::dot(&v, &au);
    let scale = linalg::norm(&au) * linalg::norm(&v) + 1e-30;
    debug_assert!(
        (uav - vau).abs() <= 1e-8 * scale,
        "subproblem operator is not symmetric: {uav} vs {vau}"
    );
    let uau = linalg::dot(&u, &au);
    debug_assert!(uau > 0.0, "subproblem operator is not positive definite");
}

#[cfg(not(debug_assertions))]
pub(crate) fn debug_check_spd(_apply: &impl Fn(&[f64]) -> Vec<f64>, _dim: usize) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;

    #[test]
    fn gradient_adjoint_is_negative_divergence() {
        let grid = Grid::Two(Grid2D::new(4).unwrap());
        let ops = DiffOperators::new(&grid, 1.3, 0.0, false).unwrap();
        let f: Vec<f64> = (0..16).map(|i| (i as f64 * 0.43).sin()).collect();
        let v: Vec<Vec<f64>> = vec![
            (0..16).map(|i| (i as f64 * 0.19).cos()).collect(),
            (0..16).map(|i| (i as f64 * 0.71).sin()).collect(),
        ];
        // ⟨G f, v⟩ = ⟨f, Gᵀ v⟩
        let g = ops.grad_axes(&f);
        let lhs: f64 = g
            .iter()
            .zip(&v)
            .map(|(ga, va)| linalg::dot(ga, va))
            .sum();
        let gt = ops.grad_adjoint(&v);
        let rhs = linalg::dot(&f, &gt);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn gradient_has_neumann_ends() {
        let grid = Grid::Two(Grid2D::new(3).unwrap());
        let ops = DiffOperators::new(&grid, 1.3, 0.0, false).unwrap();
        let f: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let g = ops.grad_axes(&f);
        // Last difference along each axis is zero.
        for iy in 0..3 {
            assert_eq!(g[0][2 + 3 * iy], 0.0);
        }
        for ix in 0..3 {
            assert_eq!(g[1][ix + 3 * 2], 0.0);
        }
    }

    #[test]
    fn fractional_adjoint_matches_inner_product() {
        let grid = Grid::Two(Grid2D::new(4).unwrap());
        let ops = DiffOperators::new(&grid, 1.3, 0.0, true).unwrap();
        let f: Vec<f64> = (0..16).map(|i| (i as f64 * 0.37).cos()).collect();
        let v: Vec<Vec<f64>> = vec![
            (0..16).map(|i| (i as f64 * 0.29).sin()).collect(),
            (0..16).map(|i| (i as f64 * 0.53).cos()).collect(),
        ];
        let fr = ops.frac_axes(&f);
        let lhs: f64 = fr
            .iter()
            .zip(&v)
            .map(|(fa, va)| linalg::dot(fa, va))
            .sum();
        let ft = ops.frac_adjoint(&v);
        let rhs = linalg::dot(&f, &ft);
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn config_validation_catches_bad_values() {
        let mut c = SolverConfig::default();
        c.gamma1 = 0.0;
        assert!(c.validate().is_err());
        let mut c = SolverConfig::default();
        c.mu_t = -1.0;
        assert!(c.validate().is_err());
        let mut c = SolverConfig::default();
        c.stop_tol = 0.0;
        assert!(c.validate().is_err());
        assert!(SolverConfig::default().validate().is_ok());
    }
}
