//! Construction and iterative refinement of the `Γ` edge-region mask:
//! gradient-filter edge detection, morphological dilation, and
//! confidence-thresholded history fusion.
//!
//! `Γ` is a dilated band around detected edges, not the edges themselves: the
//! edge set has zero measure, so the band gives the TV term something to act
//! on. Detection runs on the current reconstruction each iteration; the
//! history fuses recent detections by vote once enough of them accumulate.

use crate::error::{Error, Result};
use crate::grid::{BinaryMask, Grid, RealField};

/// 3×3 gradient filter choice. Sobel is the default; Canny is deliberately
/// left out (its hysteresis thresholds are extra parameters with no setting
/// to inherit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeDetector {
    Sobel,
    Prewitt,
}

impl EdgeDetector {
    /// Kernel row weights: the x kernel is `outer(smooth, diff)`.
    fn smooth(&self) -> [f64; 3] {
        match self {
            EdgeDetector::Sobel => [1.0, 2.0, 1.0],
            EdgeDetector::Prewitt => [1.0, 1.0, 1.0],
        }
    }
}

/// Square structuring element of half-width `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DilationSpec {
    pub radius: usize,
}

impl Default for DilationSpec {
    fn default() -> Self {
        // Γ must be a band of positive measure around the edges.
        Self { radius: 2 }
    }
}

impl DilationSpec {
    pub fn new(radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidArgument(
                "dilation radius must be at least 1".to_string(),
            ));
        }
        Ok(Self { radius })
    }
}

/// Threshold gradient magnitude into a mask. `threshold = 0` selects the
/// automatic rule `mean + 2·std` of the magnitude. 1D signals threshold the
/// absolute forward difference instead of a 2D filter response.
pub fn detect_edges(
    image: &RealField,
    method: EdgeDetector,
    threshold: f64,
) -> Result<BinaryMask> {
    if threshold < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "edge threshold must be ≥ 0, got {threshold}"
        )));
    }
    match image.grid() {
        Grid::One(_) => {
            let v = image.values();
            let mut mag = vec![0.0; v.len()];
            for i in 0..v.len().saturating_sub(1) {
                mag[i] = (v[i + 1] - v[i]).abs();
            }
            let thr = effective_threshold(&mag, threshold);
            Ok(BinaryMask::new_1d(
                mag.iter().map(|&m| u8::from(m > thr)).collect(),
            )?)
        }
        Grid::Two(g) => {
            let side = g.side();
            let v = image.values();
            let smooth = method.smooth();
            let diff = [-1.0, 0.0, 1.0];
            let clamp = |i: isize| -> usize { i.clamp(0, side as isize - 1) as usize };
            let at = |ix: isize, iy: isize| -> f64 { v[clamp(ix) + side * clamp(iy)] };
            let mut mag = vec![0.0; v.len()];
            for iy in 0..side as isize {
                for ix in 0..side as isize {
                    let mut gx = 0.0;
                    let mut gy = 0.0;
                    for dy in -1..=1isize {
                        for dx in -1..=1isize {
                            let pix = at(ix + dx, iy + dy);
                            gx += diff[(dx + 1) as usize] * smooth[(dy + 1) as usize] * pix;
                            gy += smooth[(dx + 1) as usize] * diff[(dy + 1) as usize] * pix;
                        }
                    }
                    mag[ix as usize + side * iy as usize] = (gx * gx + gy * gy).sqrt();
                }
            }
            let thr = effective_threshold(&mag, threshold);
            Ok(BinaryMask::new_2d(
                side,
                mag.iter().map(|&m| u8::from(m > thr)).collect(),
            )?)
        }
    }
}

fn effective_threshold(mag: &[f64], threshold: f64) -> f64 {
    if threshold > 0.0 {
        return threshold;
    }
    let n = mag.len() as f64;
    let mean = mag.iter().sum::<f64>() / n;
    let var = mag.iter().map(|&m| (m - mean) * (m - mean)).sum::<f64>() / n;
    mean + 2.0 * var.sqrt()
}

/// Morphological dilation by a square `(2r+1)²` structuring element
/// (a `2r+1` window in 1D). Output always contains the input.
pub fn dilate(mask: &BinaryMask, spec: &DilationSpec) -> BinaryMask {
    let r = spec.radius;
    match mask.side() {
        None => {
            let v = mask.values();
            let n = v.len();
            let out = (0..n)
                .map(|i| {
                    let lo = i.saturating_sub(r);
                    let hi = (i + r).min(n - 1);
                    u8::from(v[lo..=hi].iter().any(|&b| b == 1))
                })
                .collect();
            BinaryMask::new_1d(out).expect("binary by construction")
        }
        Some(side) => {
            let v = mask.values();
            // Separable max filter: along x, then along y.
            let mut tmp = vec![0u8; v.len()];
            for iy in 0..side {
                let row = &v[iy * side..(iy + 1) * side];
                for ix in 0..side {
                    let lo = ix.saturating_sub(r);
                    let hi = (ix + r).min(side - 1);
                    tmp[ix + side * iy] = u8::from(row[lo..=hi].iter().any(|&b| b == 1));
                }
            }
            let mut out = vec![0u8; v.len()];
            for ix in 0..side {
                for iy in 0..side {
                    let lo = iy.saturating_sub(r);
                    let hi = (iy + r).min(side - 1);
                    out[ix + side * iy] =
                        u8::from((lo..=hi).any(|y| tmp[ix + side * y] == 1));
                }
            }
            BinaryMask::new_2d(side, out).expect("binary by construction")
        }
    }
}

/// Sliding window of previous `Γ̄` masks with fusion parameters.
#[derive(Debug, Clone)]
pub struct GammaHistory {
    masks: Vec<BinaryMask>,
    n_keep: usize,
    confidence: Option<f64>,
    weights: Option<Vec<f64>>,
}

impl GammaHistory {
    /// `confidence = None` selects the rounded-average rule; otherwise the
    /// vote `Σ w_i Γ_i > t`.
    pub fn new(n_keep: usize, confidence: Option<f64>) -> Result<Self> {
        if n_keep == 0 {
            return Err(Error::InvalidArgument(
                "history window must hold at least one mask".to_string(),
            ));
        }
        if let Some(t) = confidence {
            if !(0.0..1.0).contains(&t) {
                return Err(Error::InvalidArgument(format!(
                    "confidence level must lie in [0,1), got {t}"
                )));
            }
        }
        Ok(Self {
            masks: Vec::new(),
            n_keep,
            confidence,
            weights: None,
        })
    }

    /// Install explicit vote weights (nonnegative, nondecreasing, summing to
    /// 1); their length must match the fused window when fusing.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidArgument(
                "weights must be nonempty and nonnegative".to_string(),
            ));
        }
        if weights.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::InvalidArgument(
                "weights must be nondecreasing".to_string(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "weights must sum to 1, got {sum}"
            )));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn n_keep(&self) -> usize {
        self.n_keep
    }

    pub fn confidence(&self) -> Option<f64> {
        self.confidence
    }

    pub fn push(&mut self, mask: BinaryMask) -> Result<()> {
        if let Some(first) = self.masks.first() {
            if first.len() != mask.len() || first.side() != mask.side() {
                return Err(Error::ShapeMismatch {
                    what: "mask vs history grid",
                    expected: first.len(),
                    got: mask.len(),
                });
            }
        }
        self.masks.push(mask);
        Ok(())
    }

    /// Masks inside the current fusion window (the last `min(len, n_keep)`).
    fn window(&self) -> &[BinaryMask] {
        let w = self.masks.len().min(self.n_keep);
        &self.masks[self.masks.len() - w..]
    }
}

/// Fuse the history window into a single mask by the rounded-average rule
/// (tie 0.5 rounds to 1) or, when a confidence level is set, by the
/// weighted vote `Σ w_i Γ_i > t`.
pub fn fuse_history(history: &GammaHistory) -> Result<BinaryMask> {
    if history.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let window = history.window();
    let w = window.len();
    let len = window[0].len();
    match (&history.weights, history.confidence) {
        (None, None) => {
            // Integer arithmetic: round(cnt/w) = 1  ⟺  2·cnt ≥ w.
            let mut out = vec![0u8; len];
            for (i, o) in out.iter_mut().enumerate() {
                let cnt: usize = window.iter().map(|m| m.values()[i] as usize).sum();
                *o = u8::from(2 * cnt >= w);
            }
            rebuild(window, out)
        }
        (None, Some(t)) => {
            let mut out = vec![0u8; len];
            for (i, o) in out.iter_mut().enumerate() {
                let cnt: usize = window.iter().map(|m| m.values()[i] as usize).sum();
                *o = u8::from(cnt as f64 / w as f64 > t);
            }
            rebuild(window, out)
        }
        (Some(weights), confidence) => {
            if weights.len() != w {
                return Err(Error::ShapeMismatch {
                    what: "weights vs fusion window",
                    expected: w,
                    got: weights.len(),
                });
            }
            let t = confidence.unwrap_or(0.5);
            let mut out = vec![0u8; len];
            for (i, o) in out.iter_mut().enumerate() {
                let vote: f64 = window
                    .iter()
                    .zip(weights)
                    .map(|(m, &wi)| wi * m.values()[i] as f64)
                    .sum();
                *o = u8::from(vote > t);
            }
            rebuild(window, out)
        }
    }
}

fn rebuild(window: &[BinaryMask], out: Vec<u8>) -> Result<BinaryMask> {
    match window[0].side() {
        Some(side) => BinaryMask::new_2d(side, out),
        None => BinaryMask::new_1d(out),
    }
}

/// Parameters for the TV warm start that seeds `Γ`.
#[derive(Debug, Clone, Copy)]
pub struct WarmStartParams {
    pub detector: EdgeDetector,
    /// 0 selects the automatic threshold.
    pub edge_threshold: f64,
    /// TV weight for the warm-up iterations.
    pub tv_weight: f64,
}

impl Default for WarmStartParams {
    fn default() -> Self {
        Self {
            detector: EdgeDetector::Sobel,
            edge_threshold: 0.0,
            tv_weight: 0.5,
        }
    }
}

/// Run a few TV iterations on the noisy input, detect edges on the result,
/// and dilate into the initial `Γ`. `tv_iters` must lie in `[1, 10]`; the
/// usual setting is 3–5 (default 4 in the drivers).
pub fn warm_start_gamma(
    noisy: &RealField,
    tv_iters: usize,
    spec: &DilationSpec,
) -> Result<BinaryMask> {
    warm_start_gamma_with(noisy, tv_iters, spec, &WarmStartParams::default())
}

/// [`warm_start_gamma`] with explicit detector/threshold/TV-weight choices.
pub fn warm_start_gamma_with(
    noisy: &RealField,
    tv_iters: usize,
    spec: &DilationSpec,
    params: &WarmStartParams,
) -> Result<BinaryMask> {
    if !(1..=10).contains(&tv_iters) {
        return Err(Error::InvalidArgument(format!(
            "warm-start TV iteration count must lie in [1,10], got {tv_iters}"
        )));
    }
    let smoothed = crate::solvers::tv_warmup(noisy, tv_iters, params.tv_weight)?;
    let edges = detect_edges(&smoothed, params.detector, params.edge_threshold)?;
    Ok(dilate(&edges, spec))
}
