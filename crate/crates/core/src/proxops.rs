//! Proximal operators and the conjugate-gradient solvers shared by every
//! optimization driver.
//!
//! The least-squares path constrains coefficients to be real (images are
//! real-valued), so `cg_least_squares` runs CG on the real normal equations
//! `Re(AᴴA)c = Re(Aᴴb)`. No preconditioning; plain CG is adequate at the
//! scales these operators are built for.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Tolerances for the CG loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgSettings {
    pub rel_tol: f64,
    pub max_iters: usize,
}

impl Default for CgSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_iters: 5000,
        }
    }
}

impl CgSettings {
    pub fn new(rel_tol: f64, max_iters: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "CG tolerance must be positive, got {rel_tol}"
            )));
        }
        if max_iters == 0 {
            return Err(Error::InvalidArgument(
                "CG needs at least one iteration".to_string(),
            ));
        }
        Ok(Self { rel_tol, max_iters })
    }
}

/// Solution of a CG run.
#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iters: usize,
    pub rel_residual: f64,
}

/// Entrywise soft thresholding: the proximal operator of `λ‖·‖₁`.
pub fn prox_l1(v: &[f64], lambda: f64) -> Vec<f64> {
    v.iter().map(|&x| shrink(x, lambda)).collect()
}

/// Scalar soft shrinkage, the same law as [`prox_l1`] applied per component.
pub fn shrink(x: f64, alpha: f64) -> f64 {
    if x > alpha {
        x - alpha
    } else if x < -alpha {
        x + alpha
    } else {
        0.0
    }
}

/// Conjugate gradient for an SPD operator given as a closure. Stops when
/// `‖b − A x‖ ≤ rel_tol·‖b‖`.
pub fn cg_solve_spd(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    x0: Option<&[f64]>,
    settings: &CgSettings,
) -> Result<CgOutcome> {
    let n = b.len();
    let b_norm = linalg::norm(b);
    if b_norm == 0.0 {
        return Ok(CgOutcome {
            x: vec![0.0; n],
            iters: 0,
            rel_residual: 0.0,
        });
    }
    let mut x = match x0 {
        Some(x0) => {
            assert_eq!(x0.len(), n, "warm start dimension mismatch");
            x0.to_vec()
        }
        None => vec![0.0; n],
    };
    let ax = apply(&x);
    let mut r = linalg::sub(b, &ax);
    let mut p = r.clone();
    let mut rr = linalg::dot(&r, &r);
    let mut rel = rr.sqrt() / b_norm;
    if rel <= settings.rel_tol {
        return Ok(CgOutcome {
            x,
            iters: 0,
            rel_residual: rel,
        });
    }
    for iter in 1..=settings.max_iters {
        let ap = apply(&p);
        let pap = linalg::dot(&p, &ap);
        if !(pap > 0.0) {
            // Quadratic form collapsed: either the operator is not SPD or
            // we are at numerical exhaustion.
            if rel <= settings.rel_tol.max(1e-12) * 100.0 {
                return Ok(CgOutcome {
                    x,
                    iters: iter,
                    rel_residual: rel,
                });
            }
            return Err(Error::SolverDidNotConverge {
                iters: iter,
                residual: rel,
            });
        }
        let alpha = rr / pap;
        linalg::axpy(alpha, &p, &mut x);
        linalg::axpy(-alpha, &ap, &mut r);
        let rr_new = linalg::dot(&r, &r);
        rel = rr_new.sqrt() / b_norm;
        if rel <= settings.rel_tol {
            return Ok(CgOutcome {
                x,
                iters: iter,
                rel_residual: rel,
            });
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    Err(Error::SolverDidNotConverge {
        iters: settings.max_iters,
        residual: rel,
    })
}

/// Proximal operator of the quadratic `cᵀAc`: solves `(A + I/λ)x = v/λ` by
/// CG. `A` is a dense symmetric PSD matrix in row-major order.
pub fn prox_quadratic(v: &[f64], a: &[f64], lambda: f64, settings: &CgSettings) -> Result<Vec<f64>> {
    let n = v.len();
    if a.len() != n * n {
        return Err(Error::ShapeMismatch {
            what: "quadratic prox matrix",
            expected: n * n,
            got: a.len(),
        });
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "prox weight must be positive, got {lambda}"
        )));
    }
    let inv_lambda = 1.0 / lambda;
    let apply = |x: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for i in 0..n {
            out[i] = linalg::dot(&a[i * n..(i + 1) * n], x) + inv_lambda * x[i];
        }
        out
    };
    let rhs: Vec<f64> = v.iter().map(|&vi| vi * inv_lambda).collect();
    Ok(cg_solve_spd(apply, &rhs, None, settings)?.x)
}

/// Real least squares for a complex system: minimizes `‖Ac − b‖₂` over real
/// `c` via CG on `Re(AᴴA)c = Re(Aᴴb)`; the reported residual is the relative
/// normal-equation residual.
pub fn cg_least_squares(a: &CMatrix, b: &[Complex64], settings: &CgSettings) -> Result<CgOutcome> {
    cg_least_squares_inner(a, b, settings, None)
}

/// The same normal-equations CG with the normal operator supplied as a
/// closure (so structured operators can use a faster application).
pub fn cg_normal_equations(
    apply_normal: impl Fn(&[f64]) -> Vec<f64>,
    rhs: &[f64],
    settings: &CgSettings,
) -> Result<CgOutcome> {
    let n = rhs.len();
    let b_norm = linalg::norm(rhs);
    if b_norm == 0.0 {
        return Ok(CgOutcome {
            x: vec![0.0; n],
            iters: 0,
            rel_residual: 0.0,
        });
    }
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut rr = linalg::dot(&r, &r);
    let mut rel = rr.sqrt() / b_norm;
    for iter in 1..=settings.max_iters {
        let ap = apply_normal(&p);
        let pap = linalg::dot(&p, &ap);
        if !(pap > 0.0) {
            // Semidefinite normal operator: Krylov space exhausted at a
            // least-squares minimizer.
            return Ok(CgOutcome {
                x,
                iters: iter,
                rel_residual: rel,
            });
        }
        let alpha = rr / pap;
        linalg::axpy(alpha, &p, &mut x);
        linalg::axpy(-alpha, &ap, &mut r);
        let rr_new = linalg::dot(&r, &r);
        rel = rr_new.sqrt() / b_norm;
        if rel <= settings.rel_tol {
            return Ok(CgOutcome {
                x,
                iters: iter,
                rel_residual: rel,
            });
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    Err(Error::SolverDidNotConverge {
        iters: settings.max_iters,
        residual: rel,
    })
}

/// As [`cg_least_squares`] but also records `‖Ac − b‖₂` after every
/// iteration (one extra matvec per iteration; for diagnostics and tests).
pub fn cg_least_squares_traced(
    a: &CMatrix,
    b: &[Complex64],
    settings: &CgSettings,
) -> Result<(CgOutcome, Vec<f64>)> {
    let mut trace = Vec::new();
    let out = cg_least_squares_inner(a, b, settings, Some(&mut trace))?;
    Ok((out, trace))
}

fn cg_least_squares_inner(
    a: &CMatrix,
    b: &[Complex64],
    settings: &CgSettings,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<CgOutcome> {
    if b.len() != a.rows() {
        return Err(Error::ShapeMismatch {
            what: "data vs forward operator rows",
            expected: a.rows(),
            got: b.len(),
        });
    }
    let rhs = a.adjoint_re(b);
    let ls_residual = |c: &[f64]| -> f64 {
        let ac = a.matvec_real(c);
        ac.iter()
            .zip(b)
            .map(|(y, bi)| (y - bi).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    if let Some(t) = trace.as_deref_mut() {
        t.push(ls_residual(&vec![0.0; a.cols()]));
    }
    // Run CG manually so the trace can observe each iterate.
    let n = a.cols();
    let b_norm = linalg::norm(&rhs);
    if b_norm == 0.0 {
        return Ok(CgOutcome {
            x: vec![0.0; n],
            iters: 0,
            rel_residual: 0.0,
        });
    }
    let mut x = vec![0.0; n];
    let mut r = rhs.clone();
    let mut p = r.clone();
    let mut rr = linalg::dot(&r, &r);
    let mut rel = rr.sqrt() / b_norm;
    for iter in 1..=settings.max_iters {
        let ap = a.normal_apply(&p);
        let pap = linalg::dot(&p, &ap);
        if !(pap > 0.0) {
            // Semidefinite normal operator (rank-deficient A): the Krylov
            // space is exhausted and x is already a least-squares minimizer.
            return Ok(CgOutcome {
                x,
                iters: iter,
                rel_residual: rel,
            });
        }
        let alpha = rr / pap;
        linalg::axpy(alpha, &p, &mut x);
        linalg::axpy(-alpha, &ap, &mut r);
        let rr_new = linalg::dot(&r, &r);
        rel = rr_new.sqrt() / b_norm;
        if let Some(t) = trace.as_deref_mut() {
            t.push(ls_residual(&x));
        }
        if rel <= settings.rel_tol {
            return Ok(CgOutcome {
                x,
                iters: iter,
                rel_residual: rel,
            });
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    Err(Error::SolverDidNotConverge {
        iters: settings.max_iters,
        residual: rel,
    })
}

/// Largest eigenvalue estimate of an SPD operator by seeded power iteration.
pub fn power_iteration(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    dim: usize,
    iters: usize,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nv = linalg::norm(&v).max(f64::MIN_POSITIVE);
    linalg::scale(1.0 / nv, &mut v);
    let mut lambda: f64 = 0.0;
    for _ in 0..iters {
        let av = apply(&v);
        lambda = linalg::dot(&v, &av);
        let norm = linalg::norm(&av);
        if norm == 0.0 {
            return 0.0;
        }
        v = av;
        linalg::scale(1.0 / norm, &mut v);
    }
    lambda.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(prox_l1(&[3.0], 1.0), vec![2.0]);
        assert_eq!(prox_l1(&[-0.5], 1.0), vec![0.0]);
        assert_eq!(shrink(2.0, 0.5), 1.5);
        assert_eq!(shrink(-2.0, 0.5), -1.5);
        assert_eq!(shrink(0.3, 0.5), 0.0);
    }

    #[test]
    fn prox_quadratic_of_zero_matrix_is_identity() {
        let v = [1.0, -2.0, 3.0];
        let a = vec![0.0; 9];
        let out = prox_quadratic(&v, &a, 0.7, &CgSettings::default()).unwrap();
        for (o, e) in out.iter().zip(&v) {
            assert!((o - e).abs() < 1e-10);
        }
    }

    #[test]
    fn prox_quadratic_of_identity_halves() {
        let v = [2.0, -4.0];
        let a = vec![1.0, 0.0, 0.0, 1.0];
        let out = prox_quadratic(&v, &a, 1.0, &CgSettings::default()).unwrap();
        for (o, e) in out.iter().zip(&v) {
            assert!((o - e / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn prox_quadratic_satisfies_first_order_condition() {
        // A·x + (x − v)/λ = 0 at the minimizer.
        let n = 5;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                // SPD: diagonally dominant symmetric.
                a[i * n + j] = if i == j { 3.0 } else { 0.3 / (1.0 + (i as f64 - j as f64).abs()) };
                a[j * n + i] = a[i * n + j];
            }
        }
        let v: Vec<f64> = (0..n).map(|i| (i as f64 - 2.0) * 0.8).collect();
        let lambda = 0.4;
        let x = prox_quadratic(&v, &a, lambda, &CgSettings::default()).unwrap();
        for i in 0..n {
            let ax: f64 = linalg::dot(&a[i * n..(i + 1) * n], &x);
            let grad = ax + (x[i] - v[i]) / lambda;
            assert!(grad.abs() < 1e-8, "component {i}: {grad}");
        }
    }

    #[test]
    fn least_squares_identity_returns_rhs() {
        let n = 4;
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            a.set(i, i, Complex64::new(1.0, 0.0));
        }
        let b: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let out = cg_least_squares(&a, &b, &CgSettings::default()).unwrap();
        for (i, x) in out.x.iter().enumerate() {
            assert!((x - i as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn least_squares_zero_rhs_returns_zero() {
        let a = CMatrix::from_rows(3, 2, |k, re, _| {
            re[0] = k as f64 + 1.0;
            re[1] = 1.0;
        });
        let b = vec![Complex64::new(0.0, 0.0); 3];
        let out = cg_least_squares(&a, &b, &CgSettings::default()).unwrap();
        assert_eq!(out.x, vec![0.0, 0.0]);
    }

    #[test]
    fn power_iteration_finds_dominant_eigenvalue() {
        // diag(1, 4, 9)
        let apply = |x: &[f64]| vec![x[0], 4.0 * x[1], 9.0 * x[2]];
        let lambda = power_iteration(apply, 3, 200, 1);
        assert!((lambda - 9.0).abs() < 1e-6);
    }

    #[test]
    fn cg_rejects_exhausted_budget() {
        // Ill-conditioned diagonal with a 1-iteration budget.
        let apply = |x: &[f64]| vec![1e6 * x[0], 1e-6 * x[1]];
        let settings = CgSettings::new(1e-12, 1).unwrap();
        let out = cg_solve_spd(apply, &[1.0, 1.0], None, &settings);
        assert!(matches!(out, Err(Error::SolverDidNotConverge { .. })));
    }

    proptest! {
        #[test]
        fn prox_l1_is_firmly_nonexpansive(
            v1 in proptest::collection::vec(-10.0f64..10.0, 6),
            v2 in proptest::collection::vec(-10.0f64..10.0, 6),
            lambda in 0.01f64..5.0,
        ) {
            let p1 = prox_l1(&v1, lambda);
            let p2 = prox_l1(&v2, lambda);
            let dp = linalg::norm(&linalg::sub(&p1, &p2));
            let dv = linalg::norm(&linalg::sub(&v1, &v2));
            prop_assert!(dp <= dv + 1e-12);
        }

        #[test]
        fn shrink_matches_prox_componentwise(x in -20.0f64..20.0, lambda in 0.0f64..5.0) {
            prop_assert_eq!(prox_l1(&[x], lambda)[0], shrink(x, lambda));
        }
    }
}
