use crate::error::{Error, Result};

/// Uniform cell-centered grid on `[0, L_x]` or `[0, L_x] × [0, L_y]`.
///
/// Cells are indexed row-major, `j * nx + i`. In one dimension `ny = 1` and
/// the second axis is inert.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    cells: [usize; 2],
    extent: [f64; 2],
    spacing: [f64; 2],
}

pub const MIN_CELLS: usize = 4;

impl Grid {
    pub fn new(dim: usize, cells: &[usize], extent: &[f64]) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::invariant("grid", format!("dimension must be 1 or 2, got {dim}")));
        }
        if cells.len() != dim || extent.len() != dim {
            return Err(Error::invariant(
                "grid",
                format!("expected {dim} cell counts and extents, got {} and {}", cells.len(), extent.len()),
            ));
        }
        for (&c, &l) in cells.iter().zip(extent) {
            if c < MIN_CELLS {
                return Err(Error::invariant("grid", format!("need at least {MIN_CELLS} cells per axis, got {c}")));
            }
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::invariant("grid", format!("extent must be positive, got {l}")));
            }
        }
        let mut c = [1usize; 2];
        let mut e = [1.0; 2];
        c[..dim].copy_from_slice(cells);
        e[..dim].copy_from_slice(extent);
        Ok(Self {
            dim,
            cells: c,
            extent: e,
            spacing: [e[0] / c[0] as f64, e[1] / c[1] as f64],
        })
    }

    pub fn new_1d(nx: usize, lx: f64) -> Result<Self> {
        Self::new(1, &[nx], &[lx])
    }

    pub fn new_2d(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::new(2, &[nx, ny], &[lx, ly])
    }

    /// Same domain with every axis refined by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let cells: Vec<usize> = self.cells[..self.dim].iter().map(|c| c * factor).collect();
        Self::new(self.dim, &cells, &self.extent[..self.dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nx(&self) -> usize {
        self.cells[0]
    }

    pub fn ny(&self) -> usize {
        self.cells[1]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells[..self.dim]
    }

    pub fn extent(&self) -> &[f64] {
        &self.extent[..self.dim]
    }

    pub fn h(&self, axis: usize) -> f64 {
        self.spacing[axis]
    }

    pub fn min_spacing(&self) -> f64 {
        self.spacing[..self.dim].iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn len(&self) -> usize {
        self.cells[0] * self.cells[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `h_x` in 1D, `h_x h_y` in 2D.
    pub fn cell_volume(&self) -> f64 {
        if self.dim == 1 {
            self.spacing[0]
        } else {
            self.spacing[0] * self.spacing[1]
        }
    }

    /// Lebesgue measure of the domain.
    pub fn measure(&self) -> f64 {
        self.extent[..self.dim].iter().product()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.cells[0] + i
    }

    pub fn center(&self, idx: usize) -> [f64; 2] {
        let i = idx % self.cells[0];
        let j = idx / self.cells[0];
        let y = if self.dim == 1 { 0.0 } else { (j as f64 + 0.5) * self.spacing[1] };
        [(i as f64 + 0.5) * self.spacing[0], y]
    }

    pub fn centers(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.len()).map(|k| self.center(k))
    }

    /// Number of x-normal faces, `(nx+1) ny`.
    pub fn x_faces(&self) -> usize {
        (self.cells[0] + 1) * self.cells[1]
    }

    /// Number of y-normal faces, `nx (ny+1)` in 2D and 0 in 1D.
    pub fn y_faces(&self) -> usize {
        if self.dim == 1 {
            0
        } else {
            self.cells[0] * (self.cells[1] + 1)
        }
    }

    #[inline]
    pub fn x_face(&self, i: usize, j: usize) -> usize {
        j * (self.cells[0] + 1) + i
    }

    #[inline]
    pub fn y_face(&self, i: usize, j: usize) -> usize {
        j * self.cells[0] + i
    }
}

/// Cell-centered values at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
    t: f64,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>, t: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invariant(
                "field",
                format!("expected {} values, got {}", grid.len(), values.len()),
            ));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invariant("field", format!("non-finite value at cell {k}")));
        }
        Ok(Self { grid, values, t })
    }

    pub fn constant(grid: Grid, c: f64, t: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
            t,
        }
    }

    pub fn from_fn(grid: Grid, t: f64, f: impl Fn([f64; 2]) -> f64) -> Result<Self> {
        Self::new(grid, grid.centers().map(f).collect(), t)
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

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}
