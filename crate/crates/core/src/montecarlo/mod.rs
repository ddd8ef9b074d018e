//! Simulation studies: bias, variance and RMSE sweeps, empirical sampling
//! covariances, and analytic asymptotic-variance sweeps.

mod config;
pub mod recipes;
mod sweep;

pub use config::{linspace, SweepConfig, MIN_REPLICATES};
pub use sweep::{
    cell_seed, coordinate_metrics, empirical_sampling_covariance, replicate_estimates, run_avar_sweep, run_metric_sweep,
    AvarRow, MetricsRow,
};
