//! Evolutionary optimizers with Deb's constraint handling.

pub mod bbbc;
pub mod convergence;
pub mod deb;
pub mod ga;
pub mod operators;
pub mod run;

pub use bbbc::{run_bbbc, BbbcParams};
pub use convergence::{detect_convergence, ConvergenceWindow};
pub use deb::{deb_compare, deb_compare_fitness, Individual};
pub use ga::{run_ga, GaParams};
pub use operators::CrunchMode;
pub use run::{evaluate_population, Algorithm, OptimizerRun};
