//! Parameter and sample types, samplers, densities, exponential-family
//! representation, and the transforms linking the two families.

mod density;
mod params;
mod rng;
mod sample;
mod sampler;
mod transform;

pub use density::{log_density_dirichlet, log_density_mgamma, log_partition_dirichlet, log_partition_mgamma, sufficient_stats};
pub use params::{DirichletParams, MGammaParams, Params};
pub use rng::RngSpec;
pub use sample::{check_point, Family, SampleMatrix, RENORMALIZE_TOL, SIMPLEX_TOL};
pub use sampler::{sample_dirichlet, sample_gamma_increments, sample_mgamma};
pub use transform::{delta_row, delta_transform, dirichlet_projection};

