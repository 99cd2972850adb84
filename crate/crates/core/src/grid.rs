//! Core discrete containers: grids, real fields, binary masks, and complex
//! measurement vectors.
//!
//! All types are immutable values after construction and safe to share across
//! threads. 2D data uses a fixed column-major lexicographic layout: pixel
//! `(i_x, i_y)` of an `n×n` image lives at index `i_x + n·i_y`, so the
//! Kronecker identities of the fractional-derivative lifts hold literally.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Equispaced 1D grid with nodes `x_i = (i−1)(b−a)/n + a`, `i = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n_points: usize) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidArgument(format!(
                "grid endpoints must satisfy a < b, got a={a}, b={b}"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 points, got {n_points}"
            )));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite("grid endpoints"));
        }
        Ok(Self { a, b, n_points })
    }

    /// The default grid for the unit processing domain `[0,1)`.
    pub fn unit(n_points: usize) -> Result<Self> {
        Self::new(0.0, 1.0, n_points)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node spacing `(b−a)/n`.
    pub fn step(&self) -> f64 {
        (self.b - self.a) / self.n_points as f64
    }

    /// Node `x_i` for 0-based index `i`.
    pub fn node(&self, i: usize) -> f64 {
        self.a + i as f64 * (self.b - self.a) / self.n_points as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.node(i))
    }
}

/// Square 2D grid over the unit square with `side²` pixels, column-major
/// lexicographic ordering (`i_x` fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    side: usize,
}

impl Grid2D {
    pub fn new(side: usize) -> Result<Self> {
        if side < 2 {
            return Err(Error::InvalidArgument(format!(
                "2D grid side must be at least 2, got {side}"
            )));
        }
        Ok(Self { side })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Total pixel count `N = side²`.
    pub fn len(&self) -> usize {
        self.side * self.side
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        1.0 / self.side as f64
    }

    /// Linear index of pixel `(i_x, i_y)`.
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix + self.side * iy
    }

    /// Spatial coordinates of pixel `(i_x, i_y)`: center convention
    /// `(i + ½)/side`, the usual imaging choice (pixels are cells, so their
    /// centers never sit on dyadic cell boundaries).
    pub fn node(&self, ix: usize, iy: usize) -> (f64, f64) {
        let h = 1.0 / self.side as f64;
        ((ix as f64 + 0.5) * h, (iy as f64 + 0.5) * h)
    }
}

/// Either flavor of grid; fields and masks carry one of these.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    One(Grid1D),
    Two(Grid2D),
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::One(g) => g.len(),
            Grid::Two(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_1d(&self) -> Option<&Grid1D> {
        match self {
            Grid::One(g) => Some(g),
            Grid::Two(_) => None,
        }
    }

    pub fn as_2d(&self) -> Option<&Grid2D> {
        match self {
            Grid::Two(g) => Some(g),
            Grid::One(_) => None,
        }
    }
}

impl From<Grid1D> for Grid {
    fn from(g: Grid1D) -> Self {
        Grid::One(g)
    }
}

impl From<Grid2D> for Grid {
    fn from(g: Grid2D) -> Self {
        Grid::Two(g)
    }
}

/// Real-valued samples over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: impl Into<Grid>, values: Vec<f64>) -> Result<Self> {
        let grid = grid.into();
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                what: "field values vs grid",
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field values"));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: impl Into<Grid>) -> Self {
        let grid = grid.into();
        let values = vec![0.0; grid.len()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
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

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.grid.clone(), values)
    }
}

/// Full-length 0/1 mask aligned with a grid. Masks stay full-length rather
/// than index sets so masked operators keep constant dimensions while the
/// edge region evolves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    side: Option<usize>,
    values: Vec<u8>,
}

impl BinaryMask {
    pub fn new_1d(values: Vec<u8>) -> Result<Self> {
        Self::check(&values)?;
        Ok(Self {
            side: None,
            values,
        })
    }

    pub fn new_2d(side: usize, values: Vec<u8>) -> Result<Self> {
        Self::check(&values)?;
        if values.len() != side * side {
            return Err(Error::ShapeMismatch {
                what: "mask values vs 2D grid",
                expected: side * side,
                got: values.len(),
            });
        }
        Ok(Self {
            side: Some(side),
            values,
        })
    }

    fn check(values: &[u8]) -> Result<()> {
        if values.iter().any(|&v| v > 1) {
            return Err(Error::InvalidArgument(
                "mask entries must be 0 or 1".to_string(),
            ));
        }
        Ok(())
    }

    pub fn ones_1d(n: usize) -> Self {
        Self {
            side: None,
            values: vec![1; n],
        }
    }

    pub fn zeros_1d(n: usize) -> Self {
        Self {
            side: None,
            values: vec![0; n],
        }
    }

    pub fn ones_2d(side: usize) -> Self {
        Self {
            side: Some(side),
            values: vec![1; side * side],
        }
    }

    pub fn zeros_2d(side: usize) -> Self {
        Self {
            side: Some(side),
            values: vec![0; side * side],
        }
    }

    /// Image side for 2D masks, `None` for 1D.
    pub fn side(&self) -> Option<usize> {
        self.side
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of set pixels.
    pub fn count_ones(&self) -> usize {
        self.values.iter().map(|&v| v as usize).sum()
    }

    /// Entrywise `1 − value`.
    pub fn complement(&self) -> BinaryMask {
        BinaryMask {
            side: self.side,
            values: self.values.iter().map(|&v| 1 - v).collect(),
        }
    }
}

/// Complex measurement vector `f̂ ∈ C^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("complex vector entries"));
        }
        Ok(Self { entries })
    }

    pub fn zeros(m: usize) -> Self {
        Self {
            entries: vec![Complex64::new(0.0, 0.0); m],
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Max modulus over entries.
    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Zero a field outside the mask. Restriction is multiplicative masking, not
/// extraction: the length never changes, so masked operators compose with
/// fixed shapes.
pub fn restrict(field: &RealField, mask: &BinaryMask) -> Result<RealField> {
    if field.len() != mask.len() {
        return Err(Error::ShapeMismatch {
            what: "field vs mask",
            expected: field.len(),
            got: mask.len(),
        });
    }
    let values = field
        .values()
        .iter()
        .zip(mask.values())
        .map(|(&v, &m)| if m == 1 { v } else { 0.0 })
        .collect();
    field.with_values(values)
}

/// Entrywise complement of a mask.
pub fn complement(mask: &BinaryMask) -> BinaryMask {
    mask.complement()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid1d_nodes_are_equispaced() {
        let g = Grid1D::new(0.0, 1.0, 4).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes, vec![0.0, 0.25, 0.5, 0.75]);
    }

    #[test]
    fn grid1d_rejects_bad_endpoints() {
        assert!(Grid1D::new(1.0, 0.0, 4).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn grid2d_index_is_column_major() {
        let g = Grid2D::new(3).unwrap();
        // i_x is the fastest-varying index.
        assert_eq!(g.index(0, 0), 0);
        assert_eq!(g.index(1, 0), 1);
        assert_eq!(g.index(0, 1), 3);
        assert_eq!(g.index(2, 2), 8);
    }

    #[test]
    fn restrict_masks_entries() {
        let grid = Grid1D::new(0.0, 1.0, 3).unwrap();
        let f = RealField::new(grid, vec![1.0, 2.0, 3.0]).unwrap();
        let m = BinaryMask::new_1d(vec![1, 0, 1]).unwrap();
        let r = restrict(&f, &m).unwrap();
        assert_eq!(r.values(), &[1.0, 0.0, 3.0]);
    }

    #[test]
    fn restrict_identity_and_annihilator() {
        let grid = Grid1D::new(0.0, 1.0, 3).unwrap();
        let f = RealField::new(grid, vec![0.5, -1.0, 2.0]).unwrap();
        let ones = BinaryMask::ones_1d(3);
        let zeros = BinaryMask::zeros_1d(3);
        assert_eq!(restrict(&f, &ones).unwrap().values(), f.values());
        assert_eq!(restrict(&f, &zeros).unwrap().values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn restrict_rejects_mismatched_shapes() {
        let grid = Grid1D::new(0.0, 1.0, 3).unwrap();
        let f = RealField::new(grid, vec![1.0, 2.0, 3.0]).unwrap();
        let m = BinaryMask::new_1d(vec![1, 0]).unwrap();
        assert!(matches!(
            restrict(&f, &m),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn complement_examples() {
        let m = BinaryMask::new_1d(vec![1, 0, 1]).unwrap();
        assert_eq!(m.complement().values(), &[0, 1, 0]);
        let ones = BinaryMask::ones_1d(4);
        assert_eq!(ones.complement().values(), &[0, 0, 0, 0]);
    }

    #[test]
    fn mask_rejects_non_binary() {
        assert!(BinaryMask::new_1d(vec![0, 2]).is_err());
    }

    #[test]
    fn field_rejects_non_finite() {
        let grid = Grid1D::new(0.0, 1.0, 2).unwrap();
        assert!(RealField::new(grid, vec![1.0, f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn restrict_splits_field_exactly(
            values in proptest::collection::vec(-1e6f64..1e6, 2..64),
            bits in proptest::collection::vec(0u8..=1, 2..64),
        ) {
            let n = values.len().min(bits.len());
            let grid = Grid1D::new(0.0, 1.0, n).unwrap();
            let f = RealField::new(grid, values[..n].to_vec()).unwrap();
            let m = BinaryMask::new_1d(bits[..n].to_vec()).unwrap();
            let a = restrict(&f, &m).unwrap();
            let b = restrict(&f, &complement(&m)).unwrap();
            for i in 0..n {
                // Exact: each entry comes from exactly one side.
                prop_assert_eq!(a.values()[i] + b.values()[i], f.values()[i]);
            }
        }

        #[test]
        fn restrict_is_idempotent(
            values in proptest::collection::vec(-1e3f64..1e3, 2..32),
            bits in proptest::collection::vec(0u8..=1, 2..32),
        ) {
            let n = values.len().min(bits.len());
            let grid = Grid1D::new(0.0, 1.0, n).unwrap();
            let f = RealField::new(grid, values[..n].to_vec()).unwrap();
            let m = BinaryMask::new_1d(bits[..n].to_vec()).unwrap();
            let once = restrict(&f, &m).unwrap();
            let twice = restrict(&once, &m).unwrap();
            prop_assert_eq!(once.values(), twice.values());
        }

        #[test]
        fn complement_is_involution(bits in proptest::collection::vec(0u8..=1, 1..64)) {
            let m = BinaryMask::new_1d(bits).unwrap();
            prop_assert_eq!(complement(&complement(&m)), m);
        }
    }
}
