//! Finite Haar wavelet systems on the unit processing domain, fast
//! synthesis/analysis transforms, and the analytically assembled Fourier
//! forward operator.
//!
//! The 1D system of dimension `n = 2^J` is the scaling function (indicator of
//! `[0,1)`) together with `ψ_{j,k} = 2^{j/2} ψ(2^j x − k)` for `0 ≤ j < J`,
//! `0 ≤ k < 2^j`; all basis functions have unit L² norm. The 2D system is the
//! tensor product of two 1D systems with coefficients stored column-major
//! (`x` index fastest), matching the pixel layout in [`crate::grid`].
//!
//! Forward operator entries are exact closed-form Fourier transforms of
//! indicators rather than FFT approximations: the measurement model is the
//! continuous Fourier transform, and analytic assembly keeps the projection
//! stage free of discretization error.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Grid, RealField};
use crate::linalg::CMatrix;

/// Real coefficients over a [`WaveletBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    values: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            values: vec![0.0; dim],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl From<Vec<f64>> for CoefficientVector {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

/// Which tensor rank the basis has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Haar1d,
    Haar2d,
}

/// A finite Haar system spanning the processing subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletBasis {
    kind: BasisKind,
    levels: u32,
}

impl WaveletBasis {
    /// 1D system with `2^levels` functions on `[0,1)`.
    pub fn haar_1d(levels: u32) -> Self {
        Self {
            kind: BasisKind::Haar1d,
            levels,
        }
    }

    /// 2D tensor system with `4^levels` functions on `[0,1)²`.
    pub fn haar_2d(levels: u32) -> Self {
        Self {
            kind: BasisKind::Haar2d,
            levels,
        }
    }

    /// 1D system of the given dimension (must be a power of two).
    pub fn haar_1d_with_dim(dim: usize) -> Result<Self> {
        Ok(Self::haar_1d(levels_for_dim(dim)?))
    }

    /// 2D tensor system with `dim_per_axis²` functions.
    pub fn haar_2d_with_dim(dim_per_axis: usize) -> Result<Self> {
        Ok(Self::haar_2d(levels_for_dim(dim_per_axis)?))
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Maximum refinement level `J`.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Number of basis functions per axis, `2^J`.
    pub fn dim_1d(&self) -> usize {
        1 << self.levels
    }

    /// Total number of basis functions.
    pub fn dim(&self) -> usize {
        match self.kind {
            BasisKind::Haar1d => self.dim_1d(),
            BasisKind::Haar2d => self.dim_1d() * self.dim_1d(),
        }
    }

    /// Width of the finest dyadic cell, `2^{−J}`.
    pub fn finest_scale(&self) -> f64 {
        1.0 / self.dim_1d() as f64
    }

    /// Pointwise value of 1D basis function `idx` at `x`. Index 0 is the
    /// scaling function; index `2^j + k` is `ψ_{j,k}`.
    pub fn eval_1d(&self, idx: usize, x: f64) -> f64 {
        debug_assert!(idx < self.dim_1d());
        if !(0.0..1.0).contains(&x) {
            return 0.0;
        }
        if idx == 0 {
            return 1.0;
        }
        let j = usize::BITS - 1 - idx.leading_zeros();
        let k = idx - (1usize << j);
        let scaled = x * (1u64 << j) as f64 - k as f64;
        let amp = ((1u64 << j) as f64).sqrt();
        if (0.0..0.5).contains(&scaled) {
            amp
        } else if (0.5..1.0).contains(&scaled) {
            -amp
        } else {
            0.0
        }
    }

    /// Pointwise value of 2D basis function `p = jx + n·jy` at `(x, y)`.
    pub fn eval_2d(&self, p: usize, x: f64, y: f64) -> f64 {
        let n = self.dim_1d();
        self.eval_1d(p % n, x) * self.eval_1d(p / n, y)
    }
}

fn levels_for_dim(dim: usize) -> Result<u32> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "basis dimension must be a power of two, got {dim}"
        )));
    }
    Ok(dim.trailing_zeros())
}

const SQRT1_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Inverse Haar steps: coefficients (orthonormal convention) to scaled cell
/// averages `s^{(J)}`, length `2^J`.
fn inverse_steps(c: &[f64], levels: u32) -> Vec<f64> {
    let mut s = vec![c[0]];
    for j in 0..levels {
        let width = 1usize << j;
        let d = &c[width..2 * width];
        let mut next = vec![0.0; 2 * width];
        for i in 0..width {
            next[2 * i] = (s[i] + d[i]) * SQRT1_2;
            next[2 * i + 1] = (s[i] - d[i]) * SQRT1_2;
        }
        s = next;
    }
    s
}

/// Forward Haar steps from scaled cell values `s^{(K)}` down to level 0,
/// keeping details below `levels`; exact inverse of [`inverse_steps`]
/// composed with discarding of finer details.
fn forward_steps(s_top: &[f64], levels: u32) -> Vec<f64> {
    let total = s_top.len().trailing_zeros();
    let mut c = vec![0.0; 1usize << levels];
    let mut s = s_top.to_vec();
    for l in (0..total).rev() {
        let width = 1usize << l;
        let mut s_next = vec![0.0; width];
        for i in 0..width {
            let a = s[2 * i];
            let b = s[2 * i + 1];
            s_next[i] = (a + b) * SQRT1_2;
            if l < levels {
                c[width + i] = (a - b) * SQRT1_2;
            }
        }
        s = s_next;
    }
    c[0] = s[0];
    c
}

/// Piecewise-constant values of `Σ c_j φ_j` on `2^K` equal cells of `[0,1)`,
/// `K ≥ J`. The map is linear and (up to the `2^{K/2}` scaling) orthogonal.
pub fn synth_unit_1d(c: &[f64], levels: u32, out_len: usize) -> Result<Vec<f64>> {
    let n = 1usize << levels;
    if c.len() != n {
        return Err(Error::ShapeMismatch {
            what: "coefficients vs basis dim",
            expected: n,
            got: c.len(),
        });
    }
    if !out_len.is_power_of_two() || out_len < n {
        return Err(Error::InvalidArgument(format!(
            "output length must be a power of two ≥ {n}, got {out_len}"
        )));
    }
    let s = inverse_steps(c, levels);
    let amp = (n as f64).sqrt();
    let rep = out_len / n;
    let mut out = vec![0.0; out_len];
    for (i, &si) in s.iter().enumerate() {
        let v = si * amp;
        for r in 0..rep {
            out[i * rep + r] = v;
        }
    }
    Ok(out)
}

/// Transpose of [`synth_unit_1d`]: `Φᵀ y` for `y` on `2^K` cells.
pub fn synth_adjoint_unit_1d(y: &[f64], levels: u32, in_len: usize) -> Result<Vec<f64>> {
    let n = 1usize << levels;
    if y.len() != in_len {
        return Err(Error::ShapeMismatch {
            what: "grid vector vs grid length",
            expected: in_len,
            got: y.len(),
        });
    }
    if !in_len.is_power_of_two() || in_len < n {
        return Err(Error::InvalidArgument(format!(
            "input length must be a power of two ≥ {n}, got {in_len}"
        )));
    }
    let rep = in_len / n;
    let amp = (n as f64).sqrt();
    let sums: Vec<f64> = y.chunks(rep).map(|ch| ch.iter().sum::<f64>() * amp).collect();
    Ok(forward_steps(&sums, levels))
}

/// L² analysis of a piecewise-constant field sampled on `2^K` equal cells of
/// `[0,1)`: returns the coefficients of its projection onto the span. Exact
/// whenever the field is constant on the cells.
pub fn analyze_unit_1d(values: &[f64], levels: u32) -> Result<Vec<f64>> {
    let len = values.len();
    let n = 1usize << levels;
    if !len.is_power_of_two() || len < n {
        return Err(Error::InvalidArgument(format!(
            "field length must be a power of two ≥ {n}, got {len}"
        )));
    }
    let scale = 1.0 / (len as f64).sqrt();
    let s: Vec<f64> = values.iter().map(|&v| v * scale).collect();
    Ok(forward_steps(&s, levels))
}

/// 2D synthesis onto a `side×side` unit grid (column-major), `side = 2^K`.
pub fn synth_unit_2d(c: &[f64], levels: u32, side: usize) -> Result<Vec<f64>> {
    let n = 1usize << levels;
    if c.len() != n * n {
        return Err(Error::ShapeMismatch {
            what: "coefficients vs 2D basis dim",
            expected: n * n,
            got: c.len(),
        });
    }
    if !side.is_power_of_two() || side < n {
        return Err(Error::InvalidArgument(format!(
            "grid side must be a power of two ≥ {n}, got {side}"
        )));
    }
    // Along x (contiguous columns of the coefficient matrix)...
    let mut tmp = vec![0.0; side * n];
    for jy in 0..n {
        let col = synth_unit_1d(&c[jy * n..(jy + 1) * n], levels, side)?;
        tmp[jy * side..(jy + 1) * side].copy_from_slice(&col);
    }
    // ...then along y (strided rows).
    let mut out = vec![0.0; side * side];
    let mut row = vec![0.0; n];
    for ix in 0..side {
        for jy in 0..n {
            row[jy] = tmp[jy * side + ix];
        }
        let v = synth_unit_1d(&row, levels, side)?;
        for iy in 0..side {
            out[ix + iy * side] = v[iy];
        }
    }
    Ok(out)
}

/// Transpose of [`synth_unit_2d`].
pub fn synth_adjoint_unit_2d(y: &[f64], levels: u32, side: usize) -> Result<Vec<f64>> {
    let n = 1usize << levels;
    if y.len() != side * side {
        return Err(Error::ShapeMismatch {
            what: "grid vector vs 2D grid length",
            expected: side * side,
            got: y.len(),
        });
    }
    // Adjoint along y first (reverse order of the forward composition).
    let mut tmp = vec![0.0; side * n];
    let mut row = vec![0.0; side];
    for ix in 0..side {
        for iy in 0..side {
            row[iy] = y[ix + iy * side];
        }
        let cy = synth_adjoint_unit_1d(&row, levels, side)?;
        for jy in 0..n {
            tmp[jy * side + ix] = cy[jy];
        }
    }
    let mut out = vec![0.0; n * n];
    for jy in 0..n {
        let cx = synth_adjoint_unit_1d(&tmp[jy * side..(jy + 1) * side], levels, side)?;
        out[jy * n..(jy + 1) * n].copy_from_slice(&cx);
    }
    Ok(out)
}

/// 2D analysis of a column-major field on a `side×side` unit grid.
pub fn analyze_unit_2d(values: &[f64], levels: u32, side: usize) -> Result<Vec<f64>> {
    let n = 1usize << levels;
    if values.len() != side * side {
        return Err(Error::ShapeMismatch {
            what: "field vs 2D grid length",
            expected: side * side,
            got: values.len(),
        });
    }
    let mut tmp = vec![0.0; n * side];
    for iy in 0..side {
        let cx = analyze_unit_1d(&values[iy * side..(iy + 1) * side], levels)?;
        tmp[iy * n..(iy + 1) * n].copy_from_slice(&cx);
    }
    let mut out = vec![0.0; n * n];
    let mut col = vec![0.0; side];
    for jx in 0..n {
        for iy in 0..side {
            col[iy] = tmp[iy * n + jx];
        }
        let cy = analyze_unit_1d(&col, levels)?;
        for jy in 0..n {
            out[jx + jy * n] = cy[jy];
        }
    }
    Ok(out)
}

/// Pointwise evaluation of `Σ c_j φ_j` at the grid nodes. Nodes outside the
/// unit domain evaluate to zero.
pub fn synthesize(basis: &WaveletBasis, c: &CoefficientVector, grid: &Grid) -> Result<RealField> {
    if c.len() != basis.dim() {
        return Err(Error::ShapeMismatch {
            what: "coefficients vs basis dim",
            expected: basis.dim(),
            got: c.len(),
        });
    }
    let finest = basis.finest_scale();
    let step = match grid {
        Grid::One(g) => g.step(),
        Grid::Two(g) => g.step(),
    };
    if step > finest + 1e-15 {
        return Err(Error::ResolutionTooCoarse {
            grid_step: step,
            finest_scale: finest,
        });
    }
    match (basis.kind, grid) {
        (BasisKind::Haar1d, Grid::One(g)) => {
            let cells = inverse_steps(c.values(), basis.levels);
            let amp = (basis.dim_1d() as f64).sqrt();
            let n_cells = basis.dim_1d();
            let values = g
                .nodes()
                .map(|x| cell_value(&cells, amp, n_cells, x))
                .collect();
            RealField::new(g.clone(), values)
        }
        (BasisKind::Haar2d, Grid::Two(g)) => {
            let side = g.side();
            let n = basis.dim_1d();
            // Unit grid with power-of-two side hits the fast path.
            if side.is_power_of_two() && side >= n {
                let values = synth_unit_2d(c.values(), basis.levels, side)?;
                return RealField::new(g.clone(), values);
            }
            let mut values = vec![0.0; g.len()];
            let cells = two_d_cells(c.values(), basis.levels);
            let scale = n as f64;
            for iy in 0..side {
                for ix in 0..side {
                    let (x, y) = g.node(ix, iy);
                    let cx = (x * n as f64).floor();
                    let cy = (y * n as f64).floor();
                    values[g.index(ix, iy)] = if (0.0..scale).contains(&cx) && (0.0..scale).contains(&cy)
                    {
                        cells[cx as usize + n * cy as usize]
                    } else {
                        0.0
                    };
                }
            }
            RealField::new(g.clone(), values)
        }
        _ => Err(Error::InvalidArgument(
            "basis kind does not match grid dimensionality".to_string(),
        )),
    }
}

fn cell_value(cells: &[f64], amp: f64, n_cells: usize, x: f64) -> f64 {
    if !(0.0..1.0).contains(&x) {
        return 0.0;
    }
    let i = ((x * n_cells as f64).floor() as usize).min(n_cells - 1);
    cells[i] * amp
}

fn two_d_cells(c: &[f64], levels: u32) -> Vec<f64> {
    let n = 1usize << levels;
    synth_unit_2d(c, levels, n).expect("side = n is always valid")
}

/// Project a node-sampled field on the unit domain onto the basis span.
/// Exact when the field is piecewise constant on its own grid cells.
pub fn analyze(basis: &WaveletBasis, field: &RealField) -> Result<CoefficientVector> {
    match (basis.kind, field.grid()) {
        (BasisKind::Haar1d, Grid::One(g)) => {
            if g.a() != 0.0 || g.b() != 1.0 {
                return Err(Error::InvalidArgument(
                    "analysis requires the unit grid [0,1)".to_string(),
                ));
            }
            Ok(CoefficientVector::new(analyze_unit_1d(
                field.values(),
                basis.levels,
            )?))
        }
        (BasisKind::Haar2d, Grid::Two(g)) => Ok(CoefficientVector::new(analyze_unit_2d(
            field.values(),
            basis.levels,
            g.side(),
        )?)),
        _ => Err(Error::InvalidArgument(
            "basis kind does not match grid dimensionality".to_string(),
        )),
    }
}

/// Exact Fourier transform of the indicator of `[a,b)` at frequency `w`:
/// `(e^{−2πiwa} − e^{−2πiwb})/(2πiw)` with the analytic limit `b−a` at `w=0`.
pub fn indicator_fourier(a: f64, b: f64, w: f64) -> Complex64 {
    if w == 0.0 {
        return Complex64::new(b - a, 0.0);
    }
    let theta = 2.0 * PI * w;
    let phi = theta * (b - a);
    // (1 − e^{−iφ})/(iθ) = (sin φ − i·2sin²(φ/2))/θ, stable for small φ.
    let half = (phi / 2.0).sin();
    let frac = Complex64::new(phi.sin() / theta, -2.0 * half * half / theta);
    Complex64::from_polar(1.0, -theta * a) * frac
}

/// Exact Fourier transforms of every 1D basis function at frequency `w`.
pub fn fourier_of_basis_1d(basis: &WaveletBasis, w: f64) -> Vec<Complex64> {
    let n = basis.dim_1d();
    let mut out = Vec::with_capacity(n);
    out.push(indicator_fourier(0.0, 1.0, w));
    for j in 0..basis.levels {
        let cells = 1usize << j;
        let amp = (cells as f64).sqrt();
        let width = 1.0 / cells as f64;
        for k in 0..cells {
            let a = k as f64 * width;
            let mid = a + width / 2.0;
            let b = a + width;
            let v = (indicator_fourier(a, mid, w) - indicator_fourier(mid, b, w)) * amp;
            out.push(v);
        }
    }
    out
}

/// Exact Fourier transforms of every basis function at `w` (1D) or
/// `(w_x, w_y)` (2D, with the column-major tensor index `p = jx + n·jy`).
pub fn fourier_of_basis(basis: &WaveletBasis, w: (f64, f64)) -> Vec<Complex64> {
    match basis.kind {
        BasisKind::Haar1d => fourier_of_basis_1d(basis, w.0),
        BasisKind::Haar2d => {
            let fx = fourier_of_basis_1d(basis, w.0);
            let fy = fourier_of_basis_1d(basis, w.1);
            let n = basis.dim_1d();
            let mut out = Vec::with_capacity(n * n);
            for vy in &fy {
                for vx in &fx {
                    out.push(vx * vy);
                }
            }
            out
        }
    }
}

/// Frequency layout of a forward operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Frequencies {
    One(Vec<f64>),
    /// Jittered tensor grid; sample `s = ix + len(x)·iy` pairs `(x[ix], y[iy])`.
    Two { x: Vec<f64>, y: Vec<f64> },
}

impl Frequencies {
    pub fn len(&self) -> usize {
        match self {
            Frequencies::One(w) => w.len(),
            Frequencies::Two { x, y } => x.len() * y.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `k`-th sample as an `(w_x, w_y)` pair (`w_y = 0` in 1D).
    pub fn pair(&self, k: usize) -> (f64, f64) {
        match self {
            Frequencies::One(w) => (w[k], 0.0),
            Frequencies::Two { x, y } => (x[k % x.len()], y[k / x.len()]),
        }
    }
}

/// Dense analytic forward operator mapping basis coefficients to Fourier
/// samples; row `k` holds the transforms of every basis function at the
/// `k`-th frequency.
#[derive(Debug, Clone)]
pub struct ForwardOperator {
    matrix: CMatrix,
    frequencies: Frequencies,
    basis: WaveletBasis,
    tensor_normal: Option<TensorNormal>,
}

impl ForwardOperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn frequencies(&self) -> &Frequencies {
        &self.frequencies
    }

    pub fn basis(&self) -> &WaveletBasis {
        &self.basis
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// `A·c` for real coefficients.
    pub fn apply(&self, c: &[f64]) -> Vec<Complex64> {
        self.matrix.matvec_real(c)
    }

    /// `Re(Aᴴ(A·c))` for real `c`. Tensor-grid 2D operators route through the
    /// Kronecker factorization of the Gram matrix, which costs four small
    /// matrix products instead of two passes over the dense matrix; 1D
    /// operators use the dense planes directly.
    pub fn normal_apply(&self, c: &[f64]) -> Vec<f64> {
        match &self.tensor_normal {
            Some(t) => t.apply(c),
            None => self.matrix.normal_apply(c),
        }
    }
}

/// Kronecker factorization of `Re(AᴴA)` for tensor frequency grids:
/// `AᴴA = (AyᴴAy) ⊗ (AxᴴAx)`, so the real normal operator applied to the
/// column-major coefficient image `C` is `Re(Qx·C·Qyᵀ)` with the two complex
/// factor Grams `Q`.
#[derive(Debug, Clone)]
struct TensorNormal {
    n1: usize,
    qx_re: Vec<f64>,
    qx_im: Vec<f64>,
    qy_re: Vec<f64>,
    qy_im: Vec<f64>,
}

impl TensorNormal {
    fn build(basis: &WaveletBasis, wx: &[f64], wy: &[f64]) -> Self {
        let n1 = basis.dim_1d();
        let factor = |ws: &[f64]| -> (Vec<f64>, Vec<f64>) {
            // Gram of the 1D factor matrix at these frequencies.
            let rows: Vec<Vec<Complex64>> =
                ws.iter().map(|&w| fourier_of_basis_1d(basis, w)).collect();
            let mut re = vec![0.0; n1 * n1];
            let mut im = vec![0.0; n1 * n1];
            for i in 0..n1 {
                for j in 0..n1 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for row in &rows {
                        acc += row[i].conj() * row[j];
                    }
                    re[i * n1 + j] = acc.re;
                    im[i * n1 + j] = acc.im;
                }
            }
            (re, im)
        };
        let (qx_re, qx_im) = factor(wx);
        let (qy_re, qy_im) = factor(wy);
        Self {
            n1,
            qx_re,
            qx_im,
            qy_re,
            qy_im,
        }
    }

    /// `Re((Qy ⊗ Qx)·c) = Re(Qx)·C·Re(Qy)ᵀ − Im(Qx)·C·Im(Qy)ᵀ`.
    fn apply(&self, c: &[f64]) -> Vec<f64> {
        let n = self.n1;
        assert_eq!(c.len(), n * n, "tensor normal dimension mismatch");
        let re_part = sandwich(&self.qx_re, c, &self.qy_re, n);
        let im_part = sandwich(&self.qx_im, c, &self.qy_im, n);
        re_part
            .into_iter()
            .zip(im_part)
            .map(|(a, b)| a - b)
            .collect()
    }
}

/// `M·C·Nᵀ` for `n×n` row-major `M`, `N` and column-major `C`.
fn sandwich(m: &[f64], c: &[f64], nmat: &[f64], n: usize) -> Vec<f64> {
    // T = M·C (column-major result): T[:, jy] = M · C[:, jy].
    let mut t = vec![0.0; n * n];
    for jy in 0..n {
        let col = &c[jy * n..(jy + 1) * n];
        let out = &mut t[jy * n..(jy + 1) * n];
        for i in 0..n {
            let mrow = &m[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for k in 0..n {
                acc += mrow[k] * col[k];
            }
            out[i] = acc;
        }
    }
    // Out[:, l] = Σ_jy N[l, jy] · T[:, jy].
    let mut out = vec![0.0; n * n];
    for l in 0..n {
        let nrow = &nmat[l * n..(l + 1) * n];
        let dst = &mut out[l * n..(l + 1) * n];
        for (jy, &w) in nrow.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let src = &t[jy * n..(jy + 1) * n];
            for i in 0..n {
                dst[i] += w * src[i];
            }
        }
    }
    out
}

/// Assemble the dense forward operator for a basis and frequency layout.
/// Construction may run in parallel by rows; the result is bit-deterministic.
pub fn assemble_forward(basis: &WaveletBasis, frequencies: Frequencies) -> Result<ForwardOperator> {
    if frequencies.is_empty() {
        return Err(Error::InvalidArgument(
            "frequency list must be nonempty".to_string(),
        ));
    }
    match (basis.kind, &frequencies) {
        (BasisKind::Haar1d, Frequencies::One(_)) | (BasisKind::Haar2d, Frequencies::Two { .. }) => {}
        _ => {
            return Err(Error::InvalidArgument(
                "frequency layout does not match basis kind".to_string(),
            ))
        }
    }
    let m = frequencies.len();
    let n = basis.dim();
    let freqs = &frequencies;
    let matrix = CMatrix::from_rows(m, n, |k, re, im| {
        let row = fourier_of_basis(basis, freqs.pair(k));
        for (j, v) in row.iter().enumerate() {
            re[j] = v.re;
            im[j] = v.im;
        }
    });
    let tensor_normal = match &frequencies {
        Frequencies::Two { x, y } => Some(TensorNormal::build(basis, x, y)),
        Frequencies::One(_) => None,
    };
    Ok(ForwardOperator {
        matrix,
        frequencies,
        basis: basis.clone(),
        tensor_normal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid1D, Grid2D};
    use proptest::prelude::*;

    #[test]
    fn scaling_only_synthesizes_constant_one() {
        let basis = WaveletBasis::haar_1d(3);
        let mut c = vec![0.0; 8];
        c[0] = 1.0;
        let grid = Grid1D::unit(16).unwrap();
        let f = synthesize(&basis, &CoefficientVector::new(c), &Grid::One(grid)).unwrap();
        assert!(f.values().iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn zero_coefficients_synthesize_zero_field() {
        let basis = WaveletBasis::haar_1d(2);
        let grid = Grid1D::unit(8).unwrap();
        let f = synthesize(&basis, &CoefficientVector::zeros(4), &Grid::One(grid)).unwrap();
        assert!(f.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn synthesis_rejects_coarse_grid() {
        let basis = WaveletBasis::haar_1d(4); // finest scale 1/16
        let grid = Grid1D::unit(8).unwrap();
        let err = synthesize(&basis, &CoefficientVector::zeros(16), &Grid::One(grid));
        assert!(matches!(err, Err(Error::ResolutionTooCoarse { .. })));
    }

    #[test]
    fn synthesis_matches_pointwise_evaluation() {
        let basis = WaveletBasis::haar_1d(3);
        let c: Vec<f64> = (0..8).map(|i| (i as f64 * 0.7).cos()).collect();
        let grid = Grid1D::unit(32).unwrap();
        let fast = synthesize(
            &basis,
            &CoefficientVector::new(c.clone()),
            &Grid::One(grid.clone()),
        )
        .unwrap();
        for (i, x) in grid.nodes().enumerate() {
            let direct: f64 = (0..8).map(|j| c[j] * basis.eval_1d(j, x)).sum();
            assert!(
                (fast.values()[i] - direct).abs() < 1e-12,
                "node {i}: {} vs {}",
                fast.values()[i],
                direct
            );
        }
    }

    #[test]
    fn synthesis_2d_matches_pointwise_evaluation() {
        let basis = WaveletBasis::haar_2d(2);
        let c: Vec<f64> = (0..16).map(|i| ((i * 13 % 7) as f64) - 3.0).collect();
        let grid = Grid2D::new(8).unwrap();
        let fast = synthesize(
            &basis,
            &CoefficientVector::new(c.clone()),
            &Grid::Two(grid.clone()),
        )
        .unwrap();
        for iy in 0..8 {
            for ix in 0..8 {
                let (x, y) = grid.node(ix, iy);
                let direct: f64 = (0..16).map(|p| c[p] * basis.eval_2d(p, x, y)).sum();
                assert!((fast.values()[grid.index(ix, iy)] - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scaling_function_at_zero_frequency_is_one() {
        let basis = WaveletBasis::haar_1d(2);
        let v = fourier_of_basis_1d(&basis, 0.0);
        assert_eq!(v[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn mother_wavelet_has_zero_mean() {
        let basis = WaveletBasis::haar_1d(2);
        let v = fourier_of_basis_1d(&basis, 0.0);
        assert!(v[1].norm() < 1e-15);
        assert!(v[2].norm() < 1e-15);
        assert!(v[3].norm() < 1e-15);
    }

    #[test]
    fn forward_row_at_zero_frequency_is_one_zero() {
        let basis = WaveletBasis::haar_1d(1);
        let a = assemble_forward(&basis, Frequencies::One(vec![0.0])).unwrap();
        assert_eq!(a.matrix().get(0, 0), Complex64::new(1.0, 0.0));
        assert!(a.matrix().get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn operator_row_matches_fourier_of_basis() {
        // Applying the operator to a basis vector is exactly that function's
        // transform at every sampled frequency.
        let basis = WaveletBasis::haar_1d(3);
        let ws = vec![-2.5, 0.0, 0.75, 4.0];
        let a = assemble_forward(&basis, Frequencies::One(ws.clone())).unwrap();
        let mut e3 = vec![0.0; 8];
        e3[3] = 1.0;
        let out = a.apply(&e3);
        for (k, &w) in ws.iter().enumerate() {
            let expect = fourier_of_basis_1d(&basis, w)[3];
            assert!((out[k] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn conjugate_symmetry_between_opposite_frequencies() {
        let basis = WaveletBasis::haar_1d(4);
        for &w in &[0.3, 1.7, 12.25] {
            let plus = fourier_of_basis_1d(&basis, w);
            let minus = fourier_of_basis_1d(&basis, -w);
            for (p, m) in plus.iter().zip(&minus) {
                assert!((p.conj() - m).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn adjoint_of_synthesis_matches_dense_transpose() {
        let levels = 2;
        let n = 4;
        let len = 16;
        // Dense Φ built column by column from the fast synthesis.
        let mut phi = vec![vec![0.0; n]; len];
        for j in 0..n {
            let mut c = vec![0.0; n];
            c[j] = 1.0;
            let col = synth_unit_1d(&c, levels, len).unwrap();
            for (i, v) in col.into_iter().enumerate() {
                phi[i][j] = v;
            }
        }
        let y: Vec<f64> = (0..len).map(|i| (i as f64 * 0.31).sin()).collect();
        let fast = synth_adjoint_unit_1d(&y, levels, len).unwrap();
        for j in 0..n {
            let direct: f64 = (0..len).map(|i| phi[i][j] * y[i]).sum();
            assert!((fast[j] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn adjoint_of_2d_synthesis_matches_dense_transpose() {
        let levels = 1;
        let n = 2;
        let side = 4;
        let dim = n * n;
        let npix = side * side;
        let mut phi = vec![vec![0.0; dim]; npix];
        for p in 0..dim {
            let mut c = vec![0.0; dim];
            c[p] = 1.0;
            let col = synth_unit_2d(&c, levels, side).unwrap();
            for (i, v) in col.into_iter().enumerate() {
                phi[i][p] = v;
            }
        }
        let y: Vec<f64> = (0..npix).map(|i| (i as f64 * 0.47).cos()).collect();
        let fast = synth_adjoint_unit_2d(&y, levels, side).unwrap();
        for p in 0..dim {
            let direct: f64 = (0..npix).map(|i| phi[i][p] * y[i]).sum();
            assert!((fast[p] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_normal_route_matches_dense_normal_apply() {
        let basis = WaveletBasis::haar_2d(2); // 16 coefficients
        let freqs = Frequencies::Two {
            x: vec![-3.2, -1.0, 0.25, 1.9, 2.75, 4.0],
            y: vec![-2.5, -0.75, 0.0, 1.25, 3.3, 5.1],
        };
        let a = assemble_forward(&basis, freqs).unwrap();
        let c: Vec<f64> = (0..16).map(|i| (i as f64 * 0.61).sin()).collect();
        let fast = a.normal_apply(&c);
        let dense = a.matrix().normal_apply(&c);
        let scale: f64 = dense.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (f, d) in fast.iter().zip(&dense) {
            assert!(
                (f - d).abs() < 1e-12 * scale.max(1.0),
                "{f} vs {d}"
            );
        }
    }

    proptest! {
        #[test]
        fn analysis_synthesis_roundtrip_is_exact(
            c in proptest::collection::vec(-10.0f64..10.0, 16)
        ) {
            // Parseval at matched resolution: any field representable in the
            // span round-trips through synthesis and analysis.
            let basis = WaveletBasis::haar_1d(4);
            let grid = Grid1D::unit(64).unwrap();
            let f = synthesize(&basis, &CoefficientVector::new(c.clone()), &Grid::One(grid)).unwrap();
            let back = analyze(&basis, &f).unwrap();
            for (a, b) in c.iter().zip(back.values()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn forward_operator_is_linear(
            c1 in proptest::collection::vec(-5.0f64..5.0, 8),
            c2 in proptest::collection::vec(-5.0f64..5.0, 8),
            alpha in -3.0f64..3.0,
            beta in -3.0f64..3.0,
        ) {
            let basis = WaveletBasis::haar_1d(3);
            let a = assemble_forward(&basis, Frequencies::One(vec![-1.5, 0.0, 2.25])).unwrap();
            let mixed: Vec<f64> = c1.iter().zip(&c2).map(|(x, y)| alpha * x + beta * y).collect();
            let lhs = a.apply(&mixed);
            let y1 = a.apply(&c1);
            let y2 = a.apply(&c2);
            for (k, v) in lhs.iter().enumerate() {
                let rhs = y1[k] * alpha + y2[k] * beta;
                prop_assert!((v - rhs).norm() < 1e-10);
            }
        }

        #[test]
        fn roundtrip_2d_is_exact(
            c in proptest::collection::vec(-4.0f64..4.0, 16)
        ) {
            let basis = WaveletBasis::haar_2d(2);
            let grid = Grid2D::new(8).unwrap();
            let f = synthesize(&basis, &CoefficientVector::new(c.clone()), &Grid::Two(grid)).unwrap();
            let back = analyze(&basis, &f).unwrap();
            for (a, b) in c.iter().zip(back.values()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
