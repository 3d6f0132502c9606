pub mod cli;
pub mod config;
pub mod constitutive;
pub mod discretization;
pub mod estimates;
pub mod error;
pub mod expr;
pub mod functionals;
pub mod linalg;
pub mod solver;

pub use error::{Error, Result};
