//! Closed-form moment and covariance catalogs of both families, and their
//! Monte Carlo verification.

mod catalog;
mod check;
mod id;
mod raw;

pub use catalog::{
    catalog, dirichlet_basic_moments, dirichlet_catalog, dirichlet_covariance, mgamma_catalog, mgamma_covariance,
    BasicMoments, CatalogEntry,
};
pub use check::{check_catalog, CheckRow, CheckTolerance};
pub use id::{Factor, MomentId};
pub use raw::{covariance_from_raw, dirichlet_raw_moment, mgamma_raw_moment, raw_moment, MAX_LOG_POWER, MAX_POWER};
