//! Test-signal generators and their closed-form continuous Fourier
//! transforms (used to synthesize measurements with bias, i.e. data that does
//! not lie in the processing subspace).

use num_complex::Complex64;
use std::f64::consts::PI;
use std::path::PathBuf;

use pcm_core::error::{Error, Result};
use pcm_core::grid::{Grid, Grid2D, RealField};
use pcm_core::haar::indicator_fourier;
use pcm_core::pnm::read_pgm;

/// Which test signal an experiment reconstructs.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    PwConst1d,
    PwLinear1d,
    TwoSquares2d,
    Phantom2d,
    File(PathBuf),
}

impl Signal {
    pub fn parse(name: &str, file: Option<&str>) -> Result<Self> {
        match name {
            "pwconst1d" => Ok(Signal::PwConst1d),
            "pwlinear1d" => Ok(Signal::PwLinear1d),
            "twosquares2d" => Ok(Signal::TwoSquares2d),
            "phantom2d" => Ok(Signal::Phantom2d),
            "file" => match file {
                Some(path) => Ok(Signal::File(PathBuf::from(path))),
                None => Err(Error::InvalidArgument(
                    "signal=file needs a `file=` path".to_string(),
                )),
            },
            other => Err(Error::InvalidArgument(format!(
                "unknown signal {other:?} (expected pwconst1d, pwlinear1d, twosquares2d, phantom2d, file)"
            ))),
        }
    }

    pub fn is_2d(&self) -> bool {
        !matches!(self, Signal::PwConst1d | Signal::PwLinear1d)
    }

    /// Whether a closed-form continuous Fourier transform is available.
    pub fn has_analytic_fourier(&self) -> bool {
        matches!(
            self,
            Signal::PwConst1d | Signal::PwLinear1d | Signal::TwoSquares2d
        )
    }

    /// Evaluate the truth on the experiment grid.
    pub fn sample(&self, grid: &Grid) -> Result<RealField> {
        match (self, grid) {
            (Signal::PwConst1d, Grid::One(g)) => {
                RealField::new(g.clone(), g.nodes().map(pwconst_value).collect())
            }
            (Signal::PwLinear1d, Grid::One(g)) => {
                RealField::new(g.clone(), g.nodes().map(pwlinear_value).collect())
            }
            (Signal::TwoSquares2d, Grid::Two(g)) => {
                RealField::new(g.clone(), sample_2d(g, two_squares_value))
            }
            (Signal::Phantom2d, Grid::Two(g)) => {
                RealField::new(g.clone(), sample_2d(g, phantom_value))
            }
            (Signal::File(path), Grid::Two(g)) => {
                let img = read_pgm(path)?;
                let side = img
                    .grid()
                    .as_2d()
                    .map(Grid2D::side)
                    .unwrap_or(0);
                if side != g.side() {
                    return Err(Error::ShapeMismatch {
                        what: "image file vs configured resolution",
                        expected: g.side(),
                        got: side,
                    });
                }
                Ok(img)
            }
            _ => Err(Error::InvalidArgument(format!(
                "signal {self:?} does not match the grid dimensionality"
            ))),
        }
    }

    /// Continuous Fourier transform at a 1D frequency.
    pub fn fourier_1d(&self, w: f64) -> Result<Complex64> {
        match self {
            Signal::PwConst1d => Ok(pwconst_pieces()
                .iter()
                .map(|&(a, b, v)| indicator_fourier(a, b, w) * v)
                .sum()),
            Signal::PwLinear1d => {
                let mut acc: Complex64 = pwlinear_const_pieces()
                    .iter()
                    .map(|&(a, b, v)| indicator_fourier(a, b, w) * v)
                    .sum();
                acc += linear_piece_fourier(0.5, 0.875, -8.0 / 3.0, 7.0 / 3.0, w);
                Ok(acc)
            }
            _ => Err(Error::InvalidArgument(format!(
                "no 1D transform for signal {self:?}"
            ))),
        }
    }

    /// Continuous Fourier transform at a 2D frequency pair.
    pub fn fourier_2d(&self, wx: f64, wy: f64) -> Result<Complex64> {
        match self {
            Signal::TwoSquares2d => Ok(indicator_fourier(0.25, 0.5, wx)
                * indicator_fourier(0.25, 0.5, wy)
                + indicator_fourier(0.61, 0.83, wx) * indicator_fourier(0.61, 0.83, wy)),
            _ => Err(Error::InvalidArgument(format!(
                "no 2D transform for signal {self:?}"
            ))),
        }
    }
}

fn sample_2d(g: &Grid2D, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let side = g.side();
    let mut values = vec![0.0; g.len()];
    for iy in 0..side {
        for ix in 0..side {
            let (x, y) = g.node(ix, iy);
            values[g.index(ix, iy)] = f(x, y);
        }
    }
    values
}

/// Pieces `(a, b, value)` of the piecewise-constant 1D profile. The first
/// interval starts below zero; on the unit processing grid only its `[0,…)`
/// part is seen, while the continuous transform keeps the full support.
fn pwconst_pieces() -> [(f64, f64, f64); 4] {
    [
        (-0.125, 0.25, -0.5),
        (0.25, 0.5, 1.0),
        (0.5, 0.625, -1.0),
        (0.625, 0.75, 0.5),
    ]
}

pub fn pwconst_value(x: f64) -> f64 {
    for (a, b, v) in pwconst_pieces() {
        if x >= a && x < b {
            return v;
        }
    }
    0.0
}

fn pwlinear_const_pieces() -> [(f64, f64, f64); 3] {
    [
        (0.0625, 0.125, 1.0),
        (0.125, 0.25, -0.5),
        (0.25, 0.5, 1.0),
    ]
}

pub fn pwlinear_value(x: f64) -> f64 {
    for (a, b, v) in pwlinear_const_pieces() {
        if x >= a && x < b {
            return v;
        }
    }
    if (0.5..0.875).contains(&x) {
        return -8.0 / 3.0 * x + 7.0 / 3.0;
    }
    0.0
}

pub fn two_squares_value(x: f64, y: f64) -> f64 {
    let in_sq = |lo: f64, hi: f64, x: f64, y: f64| x >= lo && x <= hi && y >= lo && y <= hi;
    if in_sq(0.25, 0.5, x, y) || in_sq(0.61, 0.83, x, y) {
        1.0
    } else {
        0.0
    }
}

/// Synthetic phantom standing in for a non-redistributable photograph: a
/// dark border (the fractional strips assume Dirichlet data), a broad smooth
/// dome with a secondary bump, and a sharp square and disk on top.
pub fn phantom_value(x: f64, y: f64) -> f64 {
    let bump = |cx: f64, cy: f64, s: f64| {
        let dx = x - cx;
        let dy = y - cy;
        (-(dx * dx + dy * dy) / s).exp()
    };
    let mut v = 0.85 * bump(0.5, 0.52, 0.09) + 0.2 * bump(0.35, 0.7, 0.01);
    if (0.55..=0.75).contains(&x) && (0.55..=0.75).contains(&y) {
        v += 0.35;
    }
    let dx = x - 0.32;
    let dy = y - 0.35;
    if (dx * dx + dy * dy).sqrt() <= 0.1 {
        v -= 0.3;
    }
    v
}

/// `∫_a^b (cx + d)·e^{−2πiwx} dx` in closed form.
fn linear_piece_fourier(a: f64, b: f64, c: f64, d: f64, w: f64) -> Complex64 {
    if w == 0.0 {
        return Complex64::new(c * (b * b - a * a) / 2.0 + d * (b - a), 0.0);
    }
    let theta = 2.0 * PI * w;
    let ea = Complex64::from_polar(1.0, -theta * a);
    let eb = Complex64::from_polar(1.0, -theta * b);
    let i_over_theta = Complex64::new(0.0, 1.0 / theta);
    i_over_theta * ((c * b + d) * eb - (c * a + d) * ea) + (eb - ea) * (c / (theta * theta))
}
