//! Quality metrics: psnr, snr, relative error, and ssim.
//!
//! psnr and snr follow the exact printed formulas, including snr's unusual
//! numerator `‖mean(û)·1 − u‖_F²` (the mean of the *reconstruction* broadcast
//! against the truth). A variant centered on the truth's mean exists for
//! diagnostics but is never used in comparisons.

use crate::error::{Error, Result};
use crate::grid::{Grid, RealField};

/// One row of quality numbers for a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub ssim: f64,
    pub psnr: f64,
    pub snr: f64,
    pub rela_err: f64,
}

impl MetricReport {
    pub fn compute(truth: &RealField, recon: &RealField) -> Result<Self> {
        Ok(Self {
            ssim: ssim(truth, recon, 8, 0.01, 0.03, None)?,
            psnr: psnr(truth, recon)?,
            snr: snr(truth, recon)?,
            rela_err: rela_err(truth, recon)?,
        })
    }
}

fn check_shapes(u: &RealField, uhat: &RealField) -> Result<()> {
    if u.len() != uhat.len() {
        return Err(Error::ShapeMismatch {
            what: "truth vs reconstruction",
            expected: u.len(),
            got: uhat.len(),
        });
    }
    Ok(())
}

fn frob_sq_diff(u: &[f64], uhat: &[f64]) -> f64 {
    u.iter().zip(uhat).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `10·log₁₀(d₁d₂(max u)² / ‖u−û‖_F²)`; +∞ when the reconstruction is exact.
pub fn psnr(u: &RealField, uhat: &RealField) -> Result<f64> {
    check_shapes(u, uhat)?;
    let err = frob_sq_diff(u.values(), uhat.values());
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    let peak = u.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let count = u.len() as f64;
    Ok(10.0 * (count * peak * peak / err).log10())
}

/// `10·log₁₀(‖mean(û)·1 − u‖_F² / ‖û−u‖_F²)` exactly as printed.
pub fn snr(u: &RealField, uhat: &RealField) -> Result<f64> {
    check_shapes(u, uhat)?;
    let err = frob_sq_diff(u.values(), uhat.values());
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mean_hat = uhat.values().iter().sum::<f64>() / uhat.len() as f64;
    let num: f64 = u.values().iter().map(|&v| (mean_hat - v) * (mean_hat - v)).sum();
    Ok(10.0 * (num / err).log10())
}

/// Diagnostic variant with the numerator centered on the truth's own mean
/// (signal variance). Not used in any comparison table.
pub fn snr_centered_on_truth(u: &RealField, uhat: &RealField) -> Result<f64> {
    check_shapes(u, uhat)?;
    let err = frob_sq_diff(u.values(), uhat.values());
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mean_u = u.values().iter().sum::<f64>() / u.len() as f64;
    let num: f64 = u.values().iter().map(|&v| (mean_u - v) * (mean_u - v)).sum();
    Ok(10.0 * (num / err).log10())
}

/// `‖u−û‖₂ / ‖u‖₂`.
pub fn rela_err(u: &RealField, uhat: &RealField) -> Result<f64> {
    check_shapes(u, uhat)?;
    let err = frob_sq_diff(u.values(), uhat.values()).sqrt();
    let base = u.values().iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(err / base)
}

/// Mean structural similarity over sliding windows (`window×window` in 2D,
/// `window` samples in 1D), sample statistics, `C_i = (k_i·L)²` with dynamic
/// range `L = max(u) − min(u)` unless given.
pub fn ssim(
    u: &RealField,
    uhat: &RealField,
    window: usize,
    k1: f64,
    k2: f64,
    dynamic_range: Option<f64>,
) -> Result<f64> {
    check_shapes(u, uhat)?;
    if window < 2 {
        return Err(Error::InvalidArgument(format!(
            "ssim window must be at least 2, got {window}"
        )));
    }
    let range = match dynamic_range {
        Some(r) => r,
        None => {
            let min = u.values().iter().cloned().fold(f64::INFINITY, f64::min);
            let max = u.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            max - min
        }
    };
    let c1 = (k1 * range) * (k1 * range);
    let c2 = (k2 * range) * (k2 * range);
    match u.grid() {
        Grid::One(g) => {
            if g.len() < window {
                return Err(Error::InvalidArgument(format!(
                    "signal of length {} is smaller than the ssim window {window}",
                    g.len()
                )));
            }
            let a = u.values();
            let b = uhat.values();
            let mut sum = 0.0;
            let count = g.len() - window + 1;
            for start in 0..count {
                sum += window_ssim(&a[start..start + window], &b[start..start + window], c1, c2);
            }
            Ok(sum / count as f64)
        }
        Grid::Two(g) => {
            let side = g.side();
            if side < window {
                return Err(Error::InvalidArgument(format!(
                    "image side {side} is smaller than the ssim window {window}"
                )));
            }
            let mut wa = vec![0.0; window * window];
            let mut wb = vec![0.0; window * window];
            let mut sum = 0.0;
            let per_axis = side - window + 1;
            for wy in 0..per_axis {
                for wx in 0..per_axis {
                    let mut t = 0;
                    for dy in 0..window {
                        for dx in 0..window {
                            let idx = g.index(wx + dx, wy + dy);
                            wa[t] = u.values()[idx];
                            wb[t] = uhat.values()[idx];
                            t += 1;
                        }
                    }
                    sum += window_ssim(&wa, &wb, c1, c2);
                }
            }
            Ok(sum / (per_axis * per_axis) as f64)
        }
    }
}

fn window_ssim(a: &[f64], b: &[f64], c1: f64, c2: f64) -> f64 {
    let n = a.len() as f64;
    let mu_a = a.iter().sum::<f64>() / n;
    let mu_b = b.iter().sum::<f64>() / n;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    let mut cov = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        var_a += (x - mu_a) * (x - mu_a);
        var_b += (y - mu_b) * (y - mu_b);
        cov += (x - mu_a) * (y - mu_b);
    }
    // Sample statistics.
    let denom = n - 1.0;
    var_a /= denom;
    var_b /= denom;
    cov /= denom;
    ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2))
        / ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2))
}
