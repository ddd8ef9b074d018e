//! Point estimators of both families: moment (ME), score-adjusted moment
//! (SAME) and maximum likelihood (MLE) estimators, the unbiased-corrected
//! SAME, and the Dirichlet-based estimators of the multivariate Gamma.

mod dirichlet;
mod mgamma;
mod newton;
mod summary;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Family, SampleMatrix};

pub use dirichlet::{dirichlet_me, dirichlet_mle, dirichlet_mle_from_stats, dirichlet_same};
pub use mgamma::{mgamma_dirichlet_based, mgamma_me, mgamma_mle, mgamma_mle_from_stats, mgamma_same};
pub use summary::{DirichletSummary, GammaSummary};

/// Estimator tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Me,
    Same,
    Mle,
    DirMe,
    DirSame,
    SameUnbiased,
}

impl Method {
    pub const ALL: [Method; 6] = [Method::Me, Method::Same, Method::Mle, Method::DirMe, Method::DirSame, Method::SameUnbiased];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Me => "me",
            Method::Same => "same",
            Method::Mle => "mle",
            Method::DirMe => "dir_me",
            Method::DirSame => "dir_same",
            Method::SameUnbiased => "same_unbiased",
        }
    }

    pub fn supports(self, family: Family) -> bool {
        matches!(self, Method::Me | Method::Same | Method::Mle) || family == Family::MGamma
    }

    /// Methods available for `family`, in tag order.
    pub fn for_family(family: Family) -> Vec<Method> {
        Self::ALL.into_iter().filter(|m| m.supports(family)).collect()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown estimator '{s}' (expected one of me, same, mle, dir_me, dir_same, same_unbiased)")))
    }
}

/// Why an estimate does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Failure {
    /// A coordinate has zero sample variance.
    ZeroVariance,
    /// The plug-in value lies outside the parameter space.
    NonPositiveEstimate,
    /// The shared denominator of the score-adjusted estimator is not positive.
    NonPositiveDenominator,
    /// The solver ran out of iterations.
    NonConvergence,
    /// The solver produced a non-finite value or could not reduce the residual.
    Divergence,
    /// The Dirichlet estimator underlying a Dirichlet-based estimate failed.
    BaseEstimator,
}

impl Failure {
    pub fn as_str(self) -> &'static str {
        match self {
            Failure::ZeroVariance => "zero_variance",
            Failure::NonPositiveEstimate => "non_positive_estimate",
            Failure::NonPositiveDenominator => "non_positive_denominator",
            Failure::NonConvergence => "non_convergence",
            Failure::Divergence => "divergence",
            Failure::BaseEstimator => "base_estimator",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings of the damped Newton solver behind the MLEs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Convergence threshold on the largest absolute score component.
    pub tolerance: f64,
    pub max_iter: usize,
    /// Smallest step factor tried before the solve is abandoned.
    pub min_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iter: 100, min_step: 2f64.powi(-30) }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!("solver tolerance {} must be positive", self.tolerance)));
        }
        if self.max_iter < 1 {
            return Err(Error::Config("solver needs at least one iteration".into()));
        }
        if !(self.min_step > 0.0 && self.min_step < 1.0) {
            return Err(Error::Config(format!("minimum step {} must lie in (0, 1)", self.min_step)));
        }
        Ok(())
    }
}

/// Result of one estimation.
///
/// `estimate` is `(α)` for the Dirichlet family and `(α, β)` for the
/// multivariate Gamma. It is present exactly when `exists` is true, and
/// `reason` is present exactly when it is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub method: Method,
    pub family: Family,
    pub estimate: Option<Vec<f64>>,
    pub exists: bool,
    pub reason: Option<Failure>,
    /// Newton iterations (MLE only).
    pub iterations: Option<usize>,
    /// Largest absolute score component at the returned point (MLE only).
    pub score_norm: Option<f64>,
    pub n: usize,
}

impl EstimateReport {
    pub(crate) fn found(method: Method, family: Family, n: usize, estimate: Vec<f64>) -> Self {
        if estimate.iter().all(|v| v.is_finite() && *v > 0.0) {
            Self { method, family, estimate: Some(estimate), exists: true, reason: None, iterations: None, score_norm: None, n }
        } else {
            Self::failed(method, family, n, Failure::NonPositiveEstimate)
        }
    }

    pub(crate) fn failed(method: Method, family: Family, n: usize, reason: Failure) -> Self {
        Self { method, family, estimate: None, exists: false, reason: Some(reason), iterations: None, score_norm: None, n }
    }

    pub(crate) fn with_solver(mut self, iterations: usize, score_norm: f64) -> Self {
        self.iterations = Some(iterations);
        self.score_norm = Some(score_norm);
        self
    }

    /// Shape estimates, when the estimate exists.
    pub fn alpha(&self) -> Option<&[f64]> {
        let est = self.estimate.as_deref()?;
        Some(match self.family {
            Family::Dirichlet => est,
            Family::MGamma => &est[..est.len() - 1],
        })
    }

    /// Scale estimate of a multivariate Gamma fit.
    pub fn beta(&self) -> Option<f64> {
        match self.family {
            Family::Dirichlet => None,
            Family::MGamma => self.estimate.as_ref().and_then(|e| e.last().copied()),
        }
    }
}

pub(crate) fn require(sample: &SampleMatrix, family: Family) -> Result<()> {
    if sample.family() != family {
        return Err(Error::InvalidSample(format!("expected a {family} sample, got a {} sample", sample.family())));
    }
    if sample.n() < 2 {
        return Err(Error::InvalidSample(format!("estimation needs at least 2 observations, got {}", sample.n())));
    }
    Ok(())
}

/// Runs `method` on `sample`. Non-existence is reported in the result,
/// never as an error; errors mean the request itself is invalid.
pub fn estimate(method: Method, sample: &SampleMatrix, config: &SolverConfig) -> Result<EstimateReport> {
    let family = sample.family();
    if !method.supports(family) {
        return Err(Error::Config(format!("estimator {method} is not defined for the {family} family")));
    }
    match (family, method) {
        (Family::Dirichlet, Method::Me) => dirichlet_me(sample),
        (Family::Dirichlet, Method::Same) => dirichlet_same(sample),
        (Family::Dirichlet, Method::Mle) => dirichlet_mle(sample, config),
        (Family::MGamma, Method::Me) => mgamma_me(sample),
        (Family::MGamma, Method::Same) => mgamma_same(sample, false),
        (Family::MGamma, Method::SameUnbiased) => mgamma_same(sample, true),
        (Family::MGamma, Method::Mle) => mgamma_mle(sample, config),
        (Family::MGamma, Method::DirMe) => mgamma_dirichlet_based(sample, Method::Me),
        (Family::MGamma, Method::DirSame) => mgamma_dirichlet_based(sample, Method::Same),
        _ => unreachable!("support checked above"),
    }
}
