//! Side-by-side metric rows for several reconstructions of one truth.

use std::fmt;

use crate::error::Result;
use crate::grid::RealField;
use crate::metrics::MetricReport;

/// One model's row.
#[derive(Debug, Clone)]
pub struct GapRow {
    pub model: String,
    pub report: MetricReport,
    /// Gap to the best psnr among the compared models (0 for the leader).
    pub psnr_gap: f64,
}

/// Comparison table across models.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
}

/// Score every labelled reconstruction against the truth and report the
/// psnr gap to the best of them. Pure formatting around the metrics module.
pub fn metrics_gap_report(
    reconstructions: &[(String, &RealField)],
    truth: &RealField,
) -> Result<GapReport> {
    let mut rows = Vec::with_capacity(reconstructions.len());
    for (model, recon) in reconstructions {
        rows.push(GapRow {
            model: model.clone(),
            report: MetricReport::compute(truth, recon)?,
            psnr_gap: 0.0,
        });
    }
    let best = rows
        .iter()
        .map(|r| r.report.psnr)
        .fold(f64::NEG_INFINITY, f64::max);
    for row in &mut rows {
        row.psnr_gap = if best.is_finite() && row.report.psnr.is_finite() {
            best - row.report.psnr
        } else if row.report.psnr == best {
            0.0
        } else {
            f64::INFINITY
        };
    }
    Ok(GapReport { rows })
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:>8} {:>9} {:>9} {:>10} {:>9}",
            "model", "ssim", "psnr", "snr", "rela_err", "psnr_gap"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<14} {:>8.4} {:>9.4} {:>9.4} {:>10.6} {:>9.4}",
                r.model, r.report.ssim, r.report.psnr, r.report.snr, r.report.rela_err, r.psnr_gap
            )?;
        }
        Ok(())
    }
}
