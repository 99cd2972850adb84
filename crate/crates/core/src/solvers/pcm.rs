//! Projection stage and the general accelerated proximal corrector.

use super::SolverConfig;
use crate::error::{Error, Result};
use crate::grid::ComplexVector;
use crate::haar::{CoefficientVector, ForwardOperator};
use crate::linalg;
use crate::proxops::{cg_normal_equations, CgSettings};

/// Projection stage: least-squares fit of the measurements onto the basis,
/// `c_f = argmin ‖A c − f̂‖₂` over real coefficients. Runs CG on the real
/// normal equations through the operator's fastest normal application.
pub fn pcm_p_stage(
    operator: &ForwardOperator,
    fhat: &ComplexVector,
    settings: &CgSettings,
) -> Result<CoefficientVector> {
    if fhat.len() != operator.rows() {
        return Err(Error::ShapeMismatch {
            what: "data vs forward operator rows",
            expected: operator.rows(),
            got: fhat.len(),
        });
    }
    let rhs = operator.matrix().adjoint_re(fhat.entries());
    let out = cg_normal_equations(|x| operator.normal_apply(x), &rhs, settings)?;
    Ok(CoefficientVector::new(out.x))
}

/// Outcome of the accelerated proximal loop.
#[derive(Debug, Clone)]
pub struct AccelResult {
    pub c: CoefficientVector,
    pub iters: usize,
    pub converged_by_tolerance: bool,
}

/// Accelerated proximal iteration for `min_c ½‖c − c_f‖² + R(c)` given the
/// prox family of `R`: `c^k = prox_{λ^k R}(d^k − λ^k(d^k − c_f))`,
/// `d^{k+1} = c^k + λ_k(c^k − c^{k−1})` with the momentum schedule
/// `λ^k = k/(k+3)`.
pub fn accelerated_proximal_pcm(
    c_f: &CoefficientVector,
    prox: impl Fn(&[f64], f64) -> Vec<f64>,
    config: &SolverConfig,
) -> Result<AccelResult> {
    config.validate()?;
    let target = c_f.values();
    let guard = 1e6 * linalg::norm(target).max(1.0);
    let mut c_prev = target.to_vec();
    let mut d = target.to_vec();
    let mut converged = false;
    let mut iters = 0;
    for k in 1..=config.max_iters {
        iters = k;
        let lambda = k as f64 / (k as f64 + 3.0);
        // Gradient step on ½‖·−c_f‖² from d, then the prox of λR.
        let v: Vec<f64> = d
            .iter()
            .zip(target)
            .map(|(&di, &cf)| di - lambda * (di - cf))
            .collect();
        let c = prox(&v, lambda);
        if c.len() != target.len() {
            return Err(Error::ShapeMismatch {
                what: "prox output",
                expected: target.len(),
                got: c.len(),
            });
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("accelerated proximal iterate"));
        }
        let norm = linalg::norm(&c);
        if norm > guard {
            return Err(Error::Diverged { norm });
        }
        d = c
            .iter()
            .zip(&c_prev)
            .map(|(&ck, &ckm)| ck + lambda * (ck - ckm))
            .collect();
        let rel = linalg::rel_change(&c, &c_prev);
        c_prev = c;
        if rel <= config.stop_tol {
            converged = true;
            break;
        }
    }
    Ok(AccelResult {
        c: CoefficientVector::new(c_prev),
        iters,
        converged_by_tolerance: converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::{assemble_forward, WaveletBasis};
    use crate::proxops::prox_l1;
    use crate::sampling::{make_plan, measure, NoiseSpec};

    #[test]
    fn p_stage_recovers_in_span_coefficients() {
        let basis = WaveletBasis::haar_1d(3);
        let plan = make_plan(32, 0.25, 4).unwrap();
        let a = assemble_forward(&basis, plan.into_frequencies()).unwrap();
        let c_true = CoefficientVector::new((0..8).map(|i| ((i * 5) % 3) as f64 - 1.0).collect());
        let fhat = measure(&a, &c_true, &NoiseSpec::noiseless()).unwrap();
        let c = pcm_p_stage(&a, &fhat, &CgSettings::default()).unwrap();
        for (got, want) in c.values().iter().zip(c_true.values()) {
            assert!((got - want).abs() < 1e-8);
        }
    }

    #[test]
    fn p_stage_of_zero_data_is_zero() {
        let basis = WaveletBasis::haar_1d(2);
        let plan = make_plan(8, 0.0, 0).unwrap();
        let a = assemble_forward(&basis, plan.into_frequencies()).unwrap();
        let fhat = ComplexVector::zeros(8);
        let c = pcm_p_stage(&a, &fhat, &CgSettings::default()).unwrap();
        assert!(c.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn identity_prox_converges_to_projection() {
        let c_f = CoefficientVector::new(vec![1.0, -2.0, 0.5, 3.0]);
        let config = SolverConfig {
            stop_tol: 1e-12,
            max_iters: 2000,
            ..SolverConfig::default()
        };
        let out = accelerated_proximal_pcm(&c_f, |v, _| v.to_vec(), &config).unwrap();
        assert!(out.converged_by_tolerance);
        for (got, want) in out.c.values().iter().zip(c_f.values()) {
            assert!((got - want).abs() < 1e-8);
        }
    }

    #[test]
    fn huge_shrinkage_converges_to_zero() {
        let c_f = CoefficientVector::new(vec![0.3, -0.7, 0.1]);
        let config = SolverConfig {
            stop_tol: 1e-12,
            max_iters: 2000,
            ..SolverConfig::default()
        };
        let out =
            accelerated_proximal_pcm(&c_f, |v, lam| prox_l1(v, lam * 100.0), &config).unwrap();
        for x in out.c.values() {
            assert_eq!(*x, 0.0);
        }
    }

    #[test]
    fn l1_prox_converges_to_soft_threshold_of_projection() {
        // The fixed point of the corrector with R = μ‖·‖₁ is the closed-form
        // soft threshold of c_f.
        let c_f = CoefficientVector::new(vec![2.0, -0.3, 0.9, -1.7, 0.05, 0.0, 3.2, -2.6]);
        let mu = 0.5;
        let config = SolverConfig {
            stop_tol: 1e-13,
            max_iters: 5000,
            ..SolverConfig::default()
        };
        let out =
            accelerated_proximal_pcm(&c_f, |v, lam| prox_l1(v, lam * mu), &config).unwrap();
        for (got, &cf) in out.c.values().iter().zip(c_f.values()) {
            let want = crate::proxops::shrink(cf, mu);
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn divergent_prox_is_reported() {
        let c_f = CoefficientVector::new(vec![1.0, 1.0]);
        let config = SolverConfig::default();
        let out = accelerated_proximal_pcm(&c_f, |v, _| v.iter().map(|x| x * 10.0).collect(), &config);
        assert!(matches!(out, Err(Error::Diverged { .. })));
    }
}
