//! Dense complex matrix kernels and small real-vector helpers.
//!
//! The forward operator is stored as split re/im planes in row-major order:
//! the solvers constrain coefficients to be real, so both hot kernels
//! (`matvec_real`, `adjoint_re`) run in pure real arithmetic and stream the
//! planes contiguously.
//!
//! Every kernel reduces over fixed row chunks combined in chunk order, so
//! results are identical bit for bit with and without the `parallel` feature
//! and for any thread count.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Rows per work unit for the dense kernels. Fixed so the floating-point
/// summation tree does not depend on thread scheduling.
const ROW_CHUNK: usize = 64;

/// Dense `m×n` complex matrix, row-major, split into re/im planes.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    m: usize,
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl CMatrix {
    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            re: vec![0.0; m * n],
            im: vec![0.0; m * n],
        }
    }

    /// Build by filling whole rows: `fill(k, re_row, im_row)` writes row `k`.
    /// Rows are disjoint, so parallel construction is bit-deterministic.
    pub fn from_rows(
        m: usize,
        n: usize,
        fill: impl Fn(usize, &mut [f64], &mut [f64]) + Sync,
    ) -> Self {
        let mut a = Self::zeros(m, n);
        if n == 0 {
            return a;
        }
        let (re, im) = (&mut a.re, &mut a.im);
        #[cfg(feature = "parallel")]
        re.par_chunks_mut(n)
            .zip(im.par_chunks_mut(n))
            .enumerate()
            .for_each(|(k, (rr, ri))| fill(k, rr, ri));
        #[cfg(not(feature = "parallel"))]
        re.chunks_mut(n)
            .zip(im.chunks_mut(n))
            .enumerate()
            .for_each(|(k, (rr, ri))| fill(k, rr, ri));
        a
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, j: usize) -> Complex64 {
        let idx = k * self.n + j;
        Complex64::new(self.re[idx], self.im[idx])
    }

    pub fn set(&mut self, k: usize, j: usize, v: Complex64) {
        let idx = k * self.n + j;
        self.re[idx] = v.re;
        self.im[idx] = v.im;
    }

    /// `y = A·x` for real `x`.
    pub fn matvec_real(&self, x: &[f64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        let mut y = vec![Complex64::new(0.0, 0.0); self.m];
        let n = self.n;
        #[cfg(feature = "parallel")]
        y.par_chunks_mut(ROW_CHUNK)
            .zip(self.re.par_chunks(n * ROW_CHUNK))
            .zip(self.im.par_chunks(n * ROW_CHUNK))
            .for_each(|((yc, rc), ic)| matvec_rows(rc, ic, x, yc, n));
        #[cfg(not(feature = "parallel"))]
        y.chunks_mut(ROW_CHUNK)
            .zip(self.re.chunks(n * ROW_CHUNK))
            .zip(self.im.chunks(n * ROW_CHUNK))
            .for_each(|((yc, rc), ic)| matvec_rows(rc, ic, x, yc, n));
        y
    }

    /// Sequential `y = A·x`, kept for benchmarking against the parallel path.
    pub fn matvec_real_seq(&self, x: &[f64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        let mut y = vec![Complex64::new(0.0, 0.0); self.m];
        let n = self.n;
        y.chunks_mut(ROW_CHUNK)
            .zip(self.re.chunks(n * ROW_CHUNK))
            .zip(self.im.chunks(n * ROW_CHUNK))
            .for_each(|((yc, rc), ic)| matvec_rows(rc, ic, x, yc, n));
        y
    }

    /// `z = Re(Aᴴ·y)` — the real part of the adjoint applied to a complex
    /// vector.
    pub fn adjoint_re(&self, y: &[Complex64]) -> Vec<f64> {
        assert_eq!(y.len(), self.m, "adjoint dimension mismatch");
        let n = self.n;
        #[cfg(feature = "parallel")]
        let partials: Vec<Vec<f64>> = self
            .re
            .par_chunks(n * ROW_CHUNK)
            .zip(self.im.par_chunks(n * ROW_CHUNK))
            .zip(y.par_chunks(ROW_CHUNK))
            .map(|((rc, ic), yc)| {
                let mut p = vec![0.0; n];
                adjoint_rows(rc, ic, yc, &mut p);
                p
            })
            .collect();
        #[cfg(not(feature = "parallel"))]
        let partials: Vec<Vec<f64>> = self
            .re
            .chunks(n * ROW_CHUNK)
            .zip(self.im.chunks(n * ROW_CHUNK))
            .zip(y.chunks(ROW_CHUNK))
            .map(|((rc, ic), yc)| {
                let mut p = vec![0.0; n];
                adjoint_rows(rc, ic, yc, &mut p);
                p
            })
            .collect();
        fold_partials(partials, n)
    }

    /// Sequential `z = Re(Aᴴ·y)` with the same chunked summation order as the
    /// parallel path.
    pub fn adjoint_re_seq(&self, y: &[Complex64]) -> Vec<f64> {
        assert_eq!(y.len(), self.m, "adjoint dimension mismatch");
        let n = self.n;
        let partials: Vec<Vec<f64>> = self
            .re
            .chunks(n * ROW_CHUNK)
            .zip(self.im.chunks(n * ROW_CHUNK))
            .zip(y.chunks(ROW_CHUNK))
            .map(|((rc, ic), yc)| {
                let mut p = vec![0.0; n];
                adjoint_rows(rc, ic, yc, &mut p);
                p
            })
            .collect();
        fold_partials(partials, n)
    }

    /// `Re(Aᴴ(A·x))` for real `x`: one application of the real normal
    /// operator.
    pub fn normal_apply(&self, x: &[f64]) -> Vec<f64> {
        let y = self.matvec_real(x);
        self.adjoint_re(&y)
    }
}

fn matvec_rows(re: &[f64], im: &[f64], x: &[f64], y: &mut [Complex64], n: usize) {
    for ((rr, ri), yk) in re.chunks(n).zip(im.chunks(n)).zip(y.iter_mut()) {
        *yk = Complex64::new(dot(rr, x), dot(ri, x));
    }
}

fn adjoint_rows(re: &[f64], im: &[f64], y: &[Complex64], z: &mut [f64]) {
    let n = z.len();
    for ((rr, ri), yk) in re.chunks(n).zip(im.chunks(n)).zip(y) {
        let (yr, yi) = (yk.re, yk.im);
        // Re(conj(a)·y) = a_re·y_re + a_im·y_im
        for j in 0..n {
            z[j] += rr[j] * yr + ri[j] * yi;
        }
    }
}

fn fold_partials(partials: Vec<Vec<f64>>, n: usize) -> Vec<f64> {
    let mut z = vec![0.0; n];
    for p in partials {
        for (zi, pi) in z.iter_mut().zip(p) {
            *zi += pi;
        }
    }
    z
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha·x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Relative change `‖a−b‖ / max(‖b‖, 1)` used by the stopping rules.
pub fn rel_change(a: &[f64], b: &[f64]) -> f64 {
    let mut diff = 0.0;
    let mut base = 0.0;
    for (x, y) in a.iter().zip(b) {
        diff += (x - y) * (x - y);
        base += y * y;
    }
    diff.sqrt() / base.sqrt().max(1.0)
}
