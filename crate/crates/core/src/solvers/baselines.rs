//! One-stage baselines fitting the Fourier data directly: `ℓ¹` shrinkage,
//! Tikhonov, and single-stage TV.

use super::pcm_tvtfv::SynthMap;
use super::{debug_check_spd, IterStats, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::grid::{ComplexVector, Grid, RealField};
use crate::haar::{CoefficientVector, ForwardOperator, WaveletBasis};
use crate::linalg;
use crate::proxops::{cg_solve_spd, power_iteration, prox_l1};

/// Outcome of a coefficient-space baseline.
#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub c: CoefficientVector,
    pub iters: usize,
    pub converged_by_tolerance: bool,
}

/// `min_c ½‖Ac − f̂‖² + λ‖c‖₁` by the accelerated proximal gradient loop;
/// the step is `1/‖A‖²_op` estimated by power iteration.
pub fn baseline_l1(
    operator: &ForwardOperator,
    fhat: &ComplexVector,
    lambda: f64,
    config: &SolverConfig,
) -> Result<BaselineResult> {
    config.validate()?;
    check_data(operator, fhat)?;
    if lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "ℓ¹ weight must be nonnegative, got {lambda}"
        )));
    }
    let a = operator.matrix();
    let n = a.cols();
    let atb = a.adjoint_re(fhat.entries());
    let lip = power_iteration(|x| operator.normal_apply(x), n, 60, 0x9e37);
    if !(lip > 0.0) {
        // A ≡ 0: the objective reduces to the ℓ¹ term alone.
        return Ok(BaselineResult {
            c: CoefficientVector::zeros(n),
            iters: 0,
            converged_by_tolerance: true,
        });
    }
    let step = 1.0 / (lip * 1.02);
    let mut c_prev = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut converged = false;
    let mut iters = 0;
    for k in 1..=config.max_iters {
        iters = k;
        let mut grad = operator.normal_apply(&y);
        for (g, b) in grad.iter_mut().zip(&atb) {
            *g -= *b;
        }
        let v: Vec<f64> = y.iter().zip(&grad).map(|(yi, gi)| yi - step * gi).collect();
        let c = prox_l1(&v, lambda * step);
        let momentum = k as f64 / (k as f64 + 3.0);
        y = c
            .iter()
            .zip(&c_prev)
            .map(|(&ck, &ckm)| ck + momentum * (ck - ckm))
            .collect();
        let rel = linalg::rel_change(&c, &c_prev);
        c_prev = c;
        if rel <= config.stop_tol {
            converged = true;
            break;
        }
    }
    Ok(BaselineResult {
        c: CoefficientVector::new(c_prev),
        iters,
        converged_by_tolerance: converged,
    })
}

/// `min_c ½‖Ac − f̂‖² + λ‖c‖²`: CG on `(Re(AᴴA) + 2λI)c = Re(Aᴴf̂)`.
pub fn baseline_tikhonov(
    operator: &ForwardOperator,
    fhat: &ComplexVector,
    lambda: f64,
    config: &SolverConfig,
) -> Result<BaselineResult> {
    config.validate()?;
    check_data(operator, fhat)?;
    if lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Tikhonov weight must be nonnegative, got {lambda}"
        )));
    }
    let a = operator.matrix();
    let rhs = a.adjoint_re(fhat.entries());
    let apply = |x: &[f64]| -> Vec<f64> {
        let mut out = operator.normal_apply(x);
        linalg::axpy(2.0 * lambda, x, &mut out);
        out
    };
    let out = cg_solve_spd(apply, &rhs, None, &config.cg)?;
    Ok(BaselineResult {
        c: CoefficientVector::new(out.x),
        iters: out.iters,
        converged_by_tolerance: true,
    })
}

/// Single-stage TV: `min_c ½‖Ac − f̂‖² + λ‖∇Φc‖₁` by split Bregman with the
/// data-fidelity quadratic inside the c-subproblem. `λ = 0` reduces to the
/// plain least-squares projection and is solved directly.
pub fn baseline_ss_tv(
    operator: &ForwardOperator,
    fhat: &ComplexVector,
    basis: &WaveletBasis,
    grid: &Grid,
    lambda: f64,
    config: &SolverConfig,
) -> Result<SolveResult<PcmLikeResult>> {
    config.validate()?;
    check_data(operator, fhat)?;
    if lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "TV weight must be nonnegative, got {lambda}"
        )));
    }
    let synth = SynthMap::new(basis, grid)?;
    let a = operator.matrix();
    let atb = a.adjoint_re(fhat.entries());
    if lambda == 0.0 {
        let out = cg_solve_spd(|x| operator.normal_apply(x), &atb, None, &config.cg)?;
        let field = RealField::new(grid.clone(), synth.apply(&out.x)?)?;
        return Ok(SolveResult {
            output: PcmLikeResult {
                field,
                c: CoefficientVector::new(out.x),
            },
            trace: Vec::new(),
            iters: out.iters,
            converged_by_tolerance: true,
        });
    }

    let ops = super::DiffOperators::new(grid, config.alpha, config.frac_tol, false)?;
    let axes = ops.n_axes();
    let len = ops.len();
    // Splitting penalty: defaults to the TV weight itself.
    let pen = config.lambda_t.unwrap_or(lambda);
    let thresh = lambda / pen;
    let mut d = vec![vec![0.0; len]; axes];
    let mut dd = vec![vec![0.0; len]; axes];
    let mut c = vec![0.0; a.cols()];
    let mut trace = Vec::with_capacity(config.max_iters.min(1024));
    let mut converged = false;
    let mut iters = 0;

    let apply = |x: &[f64]| -> Vec<f64> {
        let gx = synth.apply(x).expect("validated shapes");
        let g = ops.grad_axes(&gx);
        let term = ops.grad_adjoint(&g);
        let mut out = operator.normal_apply(x);
        let back = synth.adjoint(&term).expect("validated shapes");
        linalg::axpy(2.0 * pen, &back, &mut out);
        out
    };
    debug_check_spd(&apply, a.cols());

    for k in 1..=config.max_iters {
        iters = k;
        let diff: Vec<Vec<f64>> = d
            .iter()
            .zip(&dd)
            .map(|(da, dda)| da.iter().zip(dda).map(|(x, y)| x - y).collect())
            .collect();
        let term = ops.grad_adjoint(&diff);
        let mut rhs = synth.adjoint(&term)?;
        linalg::scale(2.0 * pen, &mut rhs);
        linalg::axpy(1.0, &atb, &mut rhs);
        let solved = cg_solve_spd(&apply, &rhs, Some(&c), &config.cg)?;
        let c_new = solved.x;
        if c_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("single-stage TV iterate"));
        }
        let gx = synth.apply(&c_new)?;
        let g = ops.grad_axes(&gx);
        let mut num = 0.0;
        let mut den = 0.0;
        let mut tv_norm = 0.0;
        for a_idx in 0..axes {
            for i in 0..len {
                let v = g[a_idx][i] + dd[a_idx][i];
                d[a_idx][i] = crate::proxops::shrink(v, thresh);
                let gap = g[a_idx][i] - d[a_idx][i];
                dd[a_idx][i] += config.gamma1 * gap;
                num += gap * gap;
                den += g[a_idx][i] * g[a_idx][i];
                tv_norm += g[a_idx][i].abs();
            }
        }
        let rel = linalg::rel_change(&c_new, &c);
        let ac = a.matvec_real(&c_new);
        let fidelity: f64 = ac
            .iter()
            .zip(fhat.entries())
            .map(|(y, b)| (y - b).norm_sqr())
            .sum::<f64>()
            / 2.0;
        trace.push(IterStats {
            iter: k,
            objective: fidelity + lambda * tv_norm,
            rel_change: rel,
            tv_violation: num.sqrt() / den.sqrt().max(1.0),
            tfv_violation: 0.0,
            gamma_size: len,
        });
        c = c_new;
        if rel <= config.stop_tol {
            converged = true;
            break;
        }
    }

    let field = RealField::new(grid.clone(), synth.apply(&c)?)?;
    Ok(SolveResult {
        output: PcmLikeResult {
            field,
            c: CoefficientVector::new(c),
        },
        trace,
        iters,
        converged_by_tolerance: converged,
    })
}

/// Field plus coefficients, the natural output of grid-synthesizing models.
#[derive(Debug, Clone)]
pub struct PcmLikeResult {
    pub field: RealField,
    pub c: CoefficientVector,
}

fn check_data(operator: &ForwardOperator, fhat: &ComplexVector) -> Result<()> {
    if fhat.len() != operator.rows() {
        return Err(Error::ShapeMismatch {
            what: "data vs forward operator rows",
            expected: operator.rows(),
            got: fhat.len(),
        });
    }
    Ok(())
}
