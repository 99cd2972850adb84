//! Jittered frequency plans, the measurement model, and calibrated noise.
//!
//! Frequencies follow `w_k = k + η_k`, `k = −m/2..m/2−1`, with `η_k` uniform
//! on `[−θ, θ]`; `θ = 0` reproduces the integer lattice exactly. Noise is
//! complex circular Gaussian, rescaled so that `‖ε‖₂ / ‖f̂_clean‖_∞ = σ`
//! holds exactly (the clean vector's max modulus, so the definition is not
//! circular).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::ComplexVector;
use crate::haar::{CoefficientVector, ForwardOperator, Frequencies};

/// Jittered 1D sampling plan.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePlan {
    m: usize,
    theta: f64,
    seed: u64,
    frequencies: Vec<f64>,
}

impl SamplePlan {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn into_frequencies(self) -> Frequencies {
        Frequencies::One(self.frequencies)
    }
}

/// Tensor-grid 2D plan: each axis jittered independently.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePlan2D {
    pub x: SamplePlan,
    pub y: SamplePlan,
}

impl SamplePlan2D {
    /// Total sample count `m_x · m_y`.
    pub fn m(&self) -> usize {
        self.x.m() * self.y.m()
    }

    pub fn into_frequencies(self) -> Frequencies {
        Frequencies::Two {
            x: self.x.frequencies,
            y: self.y.frequencies,
        }
    }
}

fn jittered(m: usize, theta: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let half = (m / 2) as i64;
    (-half..half)
        .map(|k| {
            let eta = if theta > 0.0 {
                rng.random_range(-theta..=theta)
            } else {
                0.0
            };
            k as f64 + eta
        })
        .collect()
}

fn check_plan_args(m: usize, theta: f64) -> Result<()> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "sample count must be even and ≥ 2, got {m}"
        )));
    }
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "jitter radius must be finite and ≥ 0, got {theta}"
        )));
    }
    Ok(())
}

/// Deterministic jittered plan for `(m, θ, seed)`.
pub fn make_plan(m: usize, theta: f64, seed: u64) -> Result<SamplePlan> {
    check_plan_args(m, theta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(SamplePlan {
        m,
        theta,
        seed,
        frequencies: jittered(m, theta, &mut rng),
    })
}

/// Deterministic 2D tensor plan; `m_axis` samples per axis, jitters drawn
/// from one seeded stream (x axis first).
pub fn make_plan_2d(m_axis: usize, theta: f64, seed: u64) -> Result<SamplePlan2D> {
    check_plan_args(m_axis, theta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = jittered(m_axis, theta, &mut rng);
    let y = jittered(m_axis, theta, &mut rng);
    Ok(SamplePlan2D {
        x: SamplePlan {
            m: m_axis,
            theta,
            seed,
            frequencies: x,
        },
        y: SamplePlan {
            m: m_axis,
            theta,
            seed,
            frequencies: y,
        },
    })
}

/// Target noise level `σ = ‖ε‖₂ / ‖f̂_clean‖_∞` with its own seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        Self { sigma: 0.0, seed: 0 }
    }

    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "noise level must be finite and ≥ 0, got {sigma}"
            )));
        }
        Ok(Self { sigma, seed })
    }
}

/// Complex Gaussian noise scaled onto a clean vector so the realized ratio
/// `‖ε‖₂/‖clean‖_∞` equals `σ` exactly.
pub fn add_noise(clean: Vec<Complex64>, noise: &NoiseSpec) -> Result<ComplexVector> {
    if noise.sigma == 0.0 {
        return ComplexVector::new(clean);
    }
    let target = noise.sigma * clean.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if target == 0.0 {
        return ComplexVector::new(clean);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let raw: Vec<Complex64> = (0..clean.len())
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    let raw_norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if raw_norm == 0.0 {
        return ComplexVector::new(clean);
    }
    let scale = target / raw_norm;
    let noisy = clean
        .into_iter()
        .zip(raw)
        .map(|(c, e)| c + e * scale)
        .collect();
    ComplexVector::new(noisy)
}

/// Measurement model `f̂ = A·c + ε`.
pub fn measure(
    operator: &ForwardOperator,
    c_true: &CoefficientVector,
    noise: &NoiseSpec,
) -> Result<ComplexVector> {
    if c_true.len() != operator.cols() {
        return Err(Error::ShapeMismatch {
            what: "coefficients vs forward operator",
            expected: operator.cols(),
            got: c_true.len(),
        });
    }
    add_noise(operator.apply(c_true.values()), noise)
}

/// Write a plan as plain text, one frequency per line with 17 significant
/// digits (exact f64 round trip).
pub fn write_plan(plan: &SamplePlan, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for w in plan.frequencies() {
        writeln!(out, "{w:.16e}")?;
    }
    out.flush()?;
    Ok(())
}

/// Read a plan file written by [`write_plan`].
pub fn read_plan_frequencies(path: &Path) -> Result<Vec<f64>> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for line in file.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        out.push(t.parse::<f64>().map_err(|e| {
            Error::InvalidArgument(format!("bad frequency line {t:?}: {e}"))
        })?);
    }
    Ok(out)
}
