use std::sync::atomic::{AtomicBool, Ordering};

use super::boundary::BoundaryFrame;
use super::grid::{Grid, ScalarField};
use crate::constitutive::ConstitutiveLaw;
use crate::error::Result;

/// Largest gradient magnitude passed to the constitutive law.
pub const XI_CLAMP: f64 = 1e12;

static CLAMP_WARNED: AtomicBool = AtomicBool::new(false);

/// Values on x-normal faces (`(nx+1) ny`, index `j(nx+1)+i`) and y-normal
/// faces (`nx (ny+1)`, index `j nx + i`; empty in 1D).
#[derive(Debug, Clone, PartialEq)]
pub struct FaceField {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl FaceField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            x: vec![0.0; grid.x_faces()],
            y: vec![0.0; grid.y_faces()],
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            x: self.x.iter().map(|&v| f(v)).collect(),
            y: self.y.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.x.iter().chain(self.y.iter())
    }
}

/// Face gradient split into the face-normal difference and the reconstructed
/// tangential component.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceGradient {
    pub normal: FaceField,
    pub tangential: FaceField,
}

impl FaceGradient {
    pub fn magnitude(&self) -> FaceField {
        FaceField {
            x: self.normal.x.iter().zip(&self.tangential.x).map(|(n, t)| n.hypot(*t)).collect(),
            y: self.normal.y.iter().zip(&self.tangential.y).map(|(n, t)| n.hypot(*t)).collect(),
        }
    }
}

/// Cell-centered derivative along `axis`: central differences inside, and at
/// boundary cells the derivative of the quadratic through the boundary value
/// and the two nearest cells.
pub fn cell_derivative(field: &ScalarField, frame: &BoundaryFrame, axis: usize) -> Vec<f64> {
    let grid = field.grid();
    let p = field.values();
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = vec![0.0; grid.len()];
    if axis == 1 && grid.dim() == 1 {
        return out;
    }
    let h = grid.h(axis);
    for j in 0..ny {
        for i in 0..nx {
            let (k, n) = if axis == 0 { (i, nx) } else { (j, ny) };
            let at = |kk: usize| if axis == 0 { p[grid.index(kk, j)] } else { p[grid.index(i, kk)] };
            let d = if k == 0 {
                let psi = if axis == 0 { frame.west[j] } else { frame.south[i] };
                (-4.0 / 3.0 * psi + at(0) + at(1) / 3.0) / h
            } else if k == n - 1 {
                let psi = if axis == 0 { frame.east[j] } else { frame.north[i] };
                (4.0 / 3.0 * psi - at(n - 1) - at(n - 2) / 3.0) / h
            } else {
                (at(k + 1) - at(k - 1)) / (2.0 * h)
            };
            out[grid.index(i, j)] = d;
        }
    }
    out
}

/// Cell-centered gradient vectors.
pub fn cell_gradient(field: &ScalarField, frame: &BoundaryFrame) -> Vec<[f64; 2]> {
    let dx = cell_derivative(field, frame, 0);
    let dy = cell_derivative(field, frame, 1);
    dx.into_iter().zip(dy).map(|(a, b)| [a, b]).collect()
}

fn differentiate_cells(grid: &Grid, v: &[f64], axis: usize) -> Vec<f64> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let h = grid.h(axis);
    let mut out = vec![0.0; grid.len()];
    for j in 0..ny {
        for i in 0..nx {
            let (k, n) = if axis == 0 { (i, nx) } else { (j, ny) };
            let at = |kk: usize| if axis == 0 { v[grid.index(kk, j)] } else { v[grid.index(i, kk)] };
            out[grid.index(i, j)] = if k == 0 {
                (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
            } else if k == n - 1 {
                (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h)
            } else {
                (at(k + 1) - at(k - 1)) / (2.0 * h)
            };
        }
    }
    out
}

/// Cell Hessian entries `(xx, xy, yy)` by differentiating the cell gradient.
pub fn cell_hessian(field: &ScalarField, frame: &BoundaryFrame) -> Vec<[f64; 3]> {
    let grid = field.grid();
    let gx = cell_derivative(field, frame, 0);
    let xx = differentiate_cells(grid, &gx, 0);
    if grid.dim() == 1 {
        return xx.into_iter().map(|v| [v, 0.0, 0.0]).collect();
    }
    let gy = cell_derivative(field, frame, 1);
    let xy1 = differentiate_cells(grid, &gx, 1);
    let xy2 = differentiate_cells(grid, &gy, 0);
    let yy = differentiate_cells(grid, &gy, 1);
    (0..grid.len())
        .map(|k| [xx[k], 0.5 * (xy1[k] + xy2[k]), yy[k]])
        .collect()
}

/// Face gradients. Normal components are neighbor differences over `h`
/// (over `h/2` at boundary faces, against the boundary value). Tangential
/// components average the adjacent cell derivatives inside the domain and
/// difference `ψ` along the side on boundary faces.
pub fn gradient(field: &ScalarField, frame: &BoundaryFrame) -> FaceGradient {
    let grid = field.grid();
    let p = field.values();
    let (nx, ny) = (grid.nx(), grid.ny());
    let (hx, hy) = (grid.h(0), grid.h(1));
    let two_d = grid.dim() == 2;
    let mut normal = FaceField::zeros(grid);
    let mut tangential = FaceField::zeros(grid);

    let dy = if two_d { cell_derivative(field, frame, 1) } else { Vec::new() };
    for j in 0..ny {
        for i in 0..=nx {
            let f = grid.x_face(i, j);
            normal.x[f] = if i == 0 {
                (p[grid.index(0, j)] - frame.west[j]) / (0.5 * hx)
            } else if i == nx {
                (frame.east[j] - p[grid.index(nx - 1, j)]) / (0.5 * hx)
            } else {
                (p[grid.index(i, j)] - p[grid.index(i - 1, j)]) / hx
            };
            if two_d {
                tangential.x[f] = if i == 0 {
                    (frame.west_nodes[j + 1] - frame.west_nodes[j]) / hy
                } else if i == nx {
                    (frame.east_nodes[j + 1] - frame.east_nodes[j]) / hy
                } else {
                    0.5 * (dy[grid.index(i - 1, j)] + dy[grid.index(i, j)])
                };
            }
        }
    }
    if two_d {
        let dx = cell_derivative(field, frame, 0);
        for j in 0..=ny {
            for i in 0..nx {
                let f = grid.y_face(i, j);
                normal.y[f] = if j == 0 {
                    (p[grid.index(i, 0)] - frame.south[i]) / (0.5 * hy)
                } else if j == ny {
                    (frame.north[i] - p[grid.index(i, ny - 1)]) / (0.5 * hy)
                } else {
                    (p[grid.index(i, j)] - p[grid.index(i, j - 1)]) / hy
                };
                tangential.y[f] = if j == 0 {
                    (frame.south_nodes[i + 1] - frame.south_nodes[i]) / hx
                } else if j == ny {
                    (frame.north_nodes[i + 1] - frame.north_nodes[i]) / hx
                } else {
                    0.5 * (dx[grid.index(i, j - 1)] + dx[grid.index(i, j)])
                };
            }
        }
    }
    FaceGradient { normal, tangential }
}

fn clamp_xi(xi: f64) -> f64 {
    if xi > XI_CLAMP {
        if !CLAMP_WARNED.swap(true, Ordering::Relaxed) {
            log::warn!("gradient magnitude {xi:e} clamped to {XI_CLAMP:e} before evaluating K");
        }
        XI_CLAMP
    } else {
        xi
    }
}

/// `K(|∇p|)` at every face.
pub fn face_coefficients(grad: &FaceGradient, law: &ConstitutiveLaw) -> Result<FaceField> {
    let mag = grad.magnitude();
    let eval = |v: &[f64]| -> Result<Vec<f64>> { v.iter().map(|&xi| law.coefficient(clamp_xi(xi))).collect() };
    Ok(FaceField {
        x: eval(&mag.x)?,
        y: eval(&mag.y)?,
    })
}

/// Darcy–Forchheimer flux `−K(|∇p|) ∂p/∂n` on every face.
pub fn nonlinear_flux(field: &ScalarField, law: &ConstitutiveLaw, frame: &BoundaryFrame) -> Result<FaceField> {
    let grad = gradient(field, frame);
    let k = face_coefficients(&grad, law)?;
    Ok(FaceField {
        x: k.x.iter().zip(&grad.normal.x).map(|(k, g)| -k * g).collect(),
        y: k.y.iter().zip(&grad.normal.y).map(|(k, g)| -k * g).collect(),
    })
}

/// Conservative face-difference divergence.
pub fn divergence(grid: &Grid, flux: &FaceField) -> Vec<f64> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (hx, hy) = (grid.h(0), grid.h(1));
    let mut out = vec![0.0; grid.len()];
    for j in 0..ny {
        for i in 0..nx {
            let mut d = (flux.x[grid.x_face(i + 1, j)] - flux.x[grid.x_face(i, j)]) / hx;
            if grid.dim() == 2 {
                d += (flux.y[grid.y_face(i, j + 1)] - flux.y[grid.y_face(i, j)]) / hy;
            }
            out[grid.index(i, j)] = d;
        }
    }
    out
}

/// `∇_h · (K(|∇_h p|) ∇_h p)` at every cell.
pub fn apply_operator(field: &ScalarField, law: &ConstitutiveLaw, frame: &BoundaryFrame) -> Result<Vec<f64>> {
    let flux = nonlinear_flux(field, law, frame)?;
    Ok(divergence(field.grid(), &flux).into_iter().map(|v| -v).collect())
}

fn face_weights(grid: &Grid) -> (f64, f64, f64, f64) {
    let (hx, hy) = (grid.h(0), grid.h(1));
    if grid.dim() == 1 {
        (hx, 0.5 * hx, 0.0, 0.0)
    } else {
        (hx * hy, 0.5 * hx * hy, hx * hy, 0.5 * hx * hy)
    }
}

/// Weighted face inner product under which `divergence` and `gradient` are
/// negative adjoints: interior faces carry `h_⊥ · area`, boundary faces half that.
pub fn face_inner(grid: &Grid, f: &FaceField, g: &FaceField) -> f64 {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (wx, wbx, wy, wby) = face_weights(grid);
    let mut sum = 0.0;
    for j in 0..ny {
        for i in 0..=nx {
            let k = grid.x_face(i, j);
            let w = if i == 0 || i == nx { wbx } else { wx };
            sum += w * f.x[k] * g.x[k];
        }
    }
    if grid.dim() == 2 {
        for j in 0..=ny {
            for i in 0..nx {
                let k = grid.y_face(i, j);
                let w = if j == 0 || j == ny { wby } else { wy };
                sum += w * f.y[k] * g.y[k];
            }
        }
    }
    sum
}

/// `∮ ψ F·n` over the boundary.
pub fn boundary_term(grid: &Grid, f: &FaceField, frame: &BoundaryFrame) -> f64 {
    let (nx, ny) = (grid.nx(), grid.ny());
    if grid.dim() == 1 {
        return f.x[nx] * frame.east[0] - f.x[0] * frame.west[0];
    }
    let (hx, hy) = (grid.h(0), grid.h(1));
    let mut sum = 0.0;
    for j in 0..ny {
        sum += hy * (f.x[grid.x_face(nx, j)] * frame.east[j] - f.x[grid.x_face(0, j)] * frame.west[j]);
    }
    for i in 0..nx {
        sum += hx * (f.y[grid.y_face(i, ny)] * frame.north[i] - f.y[grid.y_face(i, 0)] * frame.south[i]);
    }
    sum
}

/// Cell inner product `Σ u v h^n`.
pub fn cell_inner(grid: &Grid, u: &[f64], v: &[f64]) -> f64 {
    grid.cell_volume() * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()
}

/// `|∇p|` on boundary faces from one-sided second-order normal differences
/// and tangential differences of `ψ`, in the order west, east, south, north.
pub fn boundary_gradient_magnitudes(field: &ScalarField, frame: &BoundaryFrame) -> Vec<f64> {
    let grid = field.grid();
    let p = field.values();
    let (nx, ny) = (grid.nx(), grid.ny());
    let (hx, hy) = (grid.h(0), grid.h(1));
    let two_d = grid.dim() == 2;
    let one_sided = |psi: f64, p0: f64, p1: f64, h: f64| (-8.0 / 3.0 * psi + 3.0 * p0 - p1 / 3.0) / h;
    let mut out = Vec::with_capacity(2 * ny + 2 * nx);
    for j in 0..ny {
        let n = one_sided(frame.west[j], p[grid.index(0, j)], p[grid.index(1, j)], hx);
        let t = if two_d { (frame.west_nodes[j + 1] - frame.west_nodes[j]) / hy } else { 0.0 };
        out.push(n.hypot(t));
    }
    for j in 0..ny {
        let n = one_sided(frame.east[j], p[grid.index(nx - 1, j)], p[grid.index(nx - 2, j)], hx);
        let t = if two_d { (frame.east_nodes[j + 1] - frame.east_nodes[j]) / hy } else { 0.0 };
        out.push(n.hypot(t));
    }
    if two_d {
        for i in 0..nx {
            let n = one_sided(frame.south[i], p[grid.index(i, 0)], p[grid.index(i, 1)], hy);
            let t = (frame.south_nodes[i + 1] - frame.south_nodes[i]) / hx;
            out.push(n.hypot(t));
        }
        for i in 0..nx {
            let n = one_sided(frame.north[i], p[grid.index(i, ny - 1)], p[grid.index(i, ny - 2)], hy);
            let t = (frame.north_nodes[i + 1] - frame.north_nodes[i]) / hx;
            out.push(n.hypot(t));
        }
    }
    out
}
