use crate::discretization::{
    boundary_gradient_magnitudes, cell_gradient, BoundaryFrame, Grid, ScalarField,
};

/// Midpoint-rule `(Σ |v|^α h^n)^{1/α}`; `α = ∞` gives the max norm.
pub fn lp_values(grid: &Grid, values: &[f64], alpha: f64) -> f64 {
    if alpha.is_infinite() {
        return values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    (grid.cell_volume() * values.iter().map(|v| v.abs().powf(alpha)).sum::<f64>()).powf(1.0 / alpha)
}

/// `Σ v h^n`.
pub fn integral(grid: &Grid, values: &[f64]) -> f64 {
    grid.cell_volume() * values.iter().sum::<f64>()
}

pub fn lp_norm(field: &ScalarField, alpha: f64) -> f64 {
    lp_values(field.grid(), field.values(), alpha)
}

pub fn sup_norm(field: &ScalarField) -> f64 {
    field.max_abs()
}

/// `|∇p|` at cell centers.
pub fn gradient_magnitudes(field: &ScalarField, frame: &BoundaryFrame) -> Vec<f64> {
    cell_gradient(field, frame).iter().map(|g| g[0].hypot(g[1])).collect()
}

/// `‖∇p‖_{L^s}` from cell-centered gradients.
pub fn grad_ls_norm(field: &ScalarField, frame: &BoundaryFrame, s: f64) -> f64 {
    lp_values(field.grid(), &gradient_magnitudes(field, frame), s)
}

/// `sup_Γ |∇p|` from one-sided second-order boundary differences.
pub fn boundary_sup_grad(field: &ScalarField, frame: &BoundaryFrame) -> f64 {
    boundary_gradient_magnitudes(field, frame).into_iter().fold(0.0, f64::max)
}

/// Midpoints of the boundary faces: west, east, south, north.
pub fn boundary_points(grid: &Grid) -> Vec<[f64; 2]> {
    let lx = grid.extent()[0];
    if grid.dim() == 1 {
        return vec![[0.0, 0.0], [lx, 0.0]];
    }
    let ly = grid.extent()[1];
    let (hx, hy) = (grid.h(0), grid.h(1));
    let mut pts = Vec::with_capacity(2 * (grid.nx() + grid.ny()));
    for j in 0..grid.ny() {
        pts.push([0.0, (j as f64 + 0.5) * hy]);
    }
    for j in 0..grid.ny() {
        pts.push([lx, (j as f64 + 0.5) * hy]);
    }
    for i in 0..grid.nx() {
        pts.push([(i as f64 + 0.5) * hx, 0.0]);
    }
    for i in 0..grid.nx() {
        pts.push([(i as f64 + 0.5) * hx, ly]);
    }
    pts
}
