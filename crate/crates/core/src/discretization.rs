//! Uniform rectangular grids, cell-centered fields, Dirichlet data and the
//! finite-volume operators of the pressure equation.

mod boundary;
mod grid;
mod operators;

pub use boundary::{BoundaryData, BoundaryExpressions, BoundaryFrame, Derivative, SpaceTimeFn};
pub use grid::{Grid, ScalarField, MIN_CELLS};
pub use operators::{
    apply_operator, boundary_gradient_magnitudes, boundary_term, cell_derivative, cell_gradient,
    cell_hessian, cell_inner, divergence, face_coefficients, face_inner, gradient, nonlinear_flux,
    FaceField, FaceGradient, XI_CLAMP,
};
