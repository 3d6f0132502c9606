//! Matrix-free symmetric stencil operators and Jacobi-preconditioned conjugate gradients.

use crate::discretization::Grid;
use crate::error::{Error, Result};

/// Symmetric 3-point (1D) or 5-point (2D) operator
/// `(A u)_c = d_c u_c − Σ_nb w_f u_nb`, with one coupling `w_f ≥ 0` per
/// interior face. Boundary faces only contribute to the diagonal.
#[derive(Debug, Clone)]
pub struct StencilMatrix {
    grid: Grid,
    pub diagonal: Vec<f64>,
    /// Couplings on x-normal faces, indexed like `Grid::x_face`.
    pub coupling_x: Vec<f64>,
    /// Couplings on y-normal faces, indexed like `Grid::y_face`.
    pub coupling_y: Vec<f64>,
}

impl StencilMatrix {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            diagonal: vec![0.0; grid.len()],
            coupling_x: vec![0.0; grid.x_faces()],
            coupling_y: vec![0.0; grid.y_faces()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn apply(&self, u: &[f64], out: &mut [f64]) {
        let g = &self.grid;
        let (nx, ny) = (g.nx(), g.ny());
        for j in 0..ny {
            for i in 0..nx {
                let c = g.index(i, j);
                let mut v = self.diagonal[c] * u[c];
                if i > 0 {
                    v -= self.coupling_x[g.x_face(i, j)] * u[c - 1];
                }
                if i + 1 < nx {
                    v -= self.coupling_x[g.x_face(i + 1, j)] * u[c + 1];
                }
                if g.dim() == 2 {
                    if j > 0 {
                        v -= self.coupling_y[g.y_face(i, j)] * u[c - nx];
                    }
                    if j + 1 < ny {
                        v -= self.coupling_y[g.y_face(i, j + 1)] * u[c + nx];
                    }
                }
                out[c] = v;
            }
        }
    }

    /// Dense copy, for small reference computations.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.grid.len();
        let mut dense = vec![vec![0.0; n]; n];
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for k in 0..n {
            e[k] = 1.0;
            self.apply(&e, &mut col);
            for (r, v) in col.iter().enumerate() {
                dense[r][k] = *v;
            }
            e[k] = 0.0;
        }
        dense
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgReport {
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve `A x = b` for SPD `A`, starting from the contents of `x`.
///
/// Stops when `‖b − A x‖₂ ≤ tol ‖b‖₂`.
pub fn conjugate_gradient(a: &StencilMatrix, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> Result<CgReport> {
    let n = b.len();
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(CgReport {
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    if let Some(k) = a.diagonal.iter().position(|d| !(*d > 0.0)) {
        return Err(Error::Numerical(format!("non-positive diagonal {} at row {k}", a.diagonal[k])));
    }
    let inv_diag: Vec<f64> = a.diagonal.iter().map(|d| 1.0 / d).collect();
    let mut r = vec![0.0; n];
    a.apply(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let target = tol * b_norm;
    for it in 0..=max_iter {
        let r_norm = dot(&r, &r).sqrt();
        if r_norm <= target {
            return Ok(CgReport {
                iterations: it,
                relative_residual: r_norm / b_norm,
            });
        }
        if it == max_iter {
            break;
        }
        a.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) || !pap.is_finite() {
            return Err(Error::Numerical(format!("conjugate gradient breakdown (pᵀAp = {pap:e}) at iteration {it}")));
        }
        let alpha = rz / pap;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        for k in 0..n {
            z[k] = r[k] * inv_diag[k];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    let r_norm = dot(&r, &r).sqrt();
    Err(Error::Numerical(format!(
        "conjugate gradient reached {max_iter} iterations with relative residual {:e}",
        r_norm / b_norm
    )))
}
