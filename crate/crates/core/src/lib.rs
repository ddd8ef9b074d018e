pub mod avar;
pub mod error;
pub mod estimators;
pub mod model;
pub mod montecarlo;
pub mod moments;
pub mod specialfn;

pub use error::{Error, Result};
