//! Norms, boundary-data functionals, exponent families and the per-step
//! functional series recorded by the solver.

mod brackets;
mod data;
mod exponents;
mod norms;
mod series;
mod tracker;

pub use brackets::{d0_and_D, double_bracket, lambda_quantity, weighted_bracket, SpaceTimeSamples};
pub use data::{compute_A, compute_G, compute_a_from, compute_g_from, DataSamples, GFunctional};
pub use exponents::{alpha_star, exponent_bundle, mu0, r0, rho, s_tilde, sobolev_star, ExponentBundle};
pub use norms::{
    boundary_points, boundary_sup_grad, grad_ls_norm, gradient_magnitudes, integral, lp_norm, lp_values, sup_norm,
};
pub use series::{compute_beta, env, slope_jump, tail_window, FunctionalSeries};
pub use tracker::{all_columns, grad_ls_id, requirements, FunctionalParams, Tracker};
