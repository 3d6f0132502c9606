//! Time integration of the pressure equation and run persistence.

mod config;
mod record;
mod run;
mod step;

pub use config::{cfl_limit, FullEquation, Scheme, SnapshotCadence, SolverConfig};
pub use record::{read_series, RunRecord};
pub use run::{
    manufactured_error, manufactured_source, run_full_equation, run_ibvp, run_manufactured, run_with_source,
    solver_echo, ConvergenceReport, ConvergenceRow, ManufacturedStudy, RunOptions,
};
pub use step::{step_explicit, step_explicit_with, step_implicit, step_implicit_with, step_with, Problem, StepOutcome};
