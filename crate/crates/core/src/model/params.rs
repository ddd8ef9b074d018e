use serde::{Deserialize, Serialize};

use super::sample::Family;
use crate::error::{Error, Result};

fn check_shapes(alpha: &[f64]) -> Result<()> {
    if let Some((i, a)) = alpha.iter().enumerate().find(|(_, a)| !(a.is_finite() && **a > 0.0)) {
        return Err(Error::InvalidParams(format!(
            "shape parameter alpha{} = {a} must be positive and finite",
            i + 1
        )));
    }
    Ok(())
}

/// Shape vector `α` of a Dirichlet distribution `D_k(α)`, `k ≥ 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DirichletParams {
    alpha: Vec<f64>,
    alpha0: f64,
}

impl DirichletParams {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(Error::InvalidParams(format!(
                "a Dirichlet distribution needs k >= 2 components, got {}",
                alpha.len()
            )));
        }
        check_shapes(&alpha)?;
        let alpha0 = alpha.iter().sum();
        Ok(Self { alpha, alpha0 })
    }

    #[inline]
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    #[inline]
    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.alpha.len()
    }
}

impl TryFrom<Vec<f64>> for DirichletParams {
    type Error = Error;

    fn try_from(alpha: Vec<f64>) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<DirichletParams> for Vec<f64> {
    fn from(p: DirichletParams) -> Self {
        p.alpha
    }
}

/// Shapes `α` and common scale `β` of the multivariate Gamma `MG_k(α, β)`,
/// the law of the partial sums of independent `G(αᵢ, β)` variates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MGammaParams {
    alpha: Vec<f64>,
    beta: f64,
    #[serde(skip)]
    alpha0: f64,
}

impl MGammaParams {
    pub fn new(alpha: Vec<f64>, beta: f64) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidParams("a multivariate Gamma needs k >= 1 shapes".into()));
        }
        check_shapes(&alpha)?;
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParams(format!(
                "scale parameter beta = {beta} must be positive and finite"
            )));
        }
        let alpha0 = alpha.iter().sum();
        Ok(Self { alpha, beta, alpha0 })
    }

    /// Inverse of [`MGammaParams::natural`]: `η = (α, −1/β)`.
    pub fn from_natural(eta: &[f64]) -> Result<Self> {
        let Some((&lambda, alpha)) = eta.split_last() else {
            return Err(Error::InvalidParams("empty natural parameter".into()));
        };
        if !(lambda < 0.0) {
            return Err(Error::InvalidParams(format!(
                "natural scale parameter {lambda} must be negative"
            )));
        }
        Self::new(alpha.to_vec(), -1.0 / lambda)
    }

    #[inline]
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.alpha.len()
    }

    /// Natural parameter `(α₁, …, α_k, −1/β)`.
    pub fn natural(&self) -> Vec<f64> {
        let mut eta = self.alpha.clone();
        eta.push(-1.0 / self.beta);
        eta
    }

    /// Shapes of the Dirichlet law of `W = ΔX / X_k`.
    pub fn dirichlet(&self) -> Option<DirichletParams> {
        DirichletParams::new(self.alpha.clone()).ok()
    }

    /// Parameter vector `(α₁, …, α_k, β)`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut theta = self.alpha.clone();
        theta.push(self.beta);
        theta
    }
}

/// Parameters of either family.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Dirichlet(DirichletParams),
    MGamma(MGammaParams),
}

impl Params {
    pub fn family(&self) -> Family {
        match self {
            Params::Dirichlet(_) => Family::Dirichlet,
            Params::MGamma(_) => Family::MGamma,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Params::Dirichlet(p) => p.k(),
            Params::MGamma(p) => p.k(),
        }
    }

    pub fn alpha(&self) -> &[f64] {
        match self {
            Params::Dirichlet(p) => p.alpha(),
            Params::MGamma(p) => p.alpha(),
        }
    }

    /// `α` for Dirichlet, `(α, β)` for multivariate Gamma.
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            Params::Dirichlet(p) => p.alpha().to_vec(),
            Params::MGamma(p) => p.to_vec(),
        }
    }

    /// Inverse of [`Params::to_vec`].
    pub fn from_vec(family: Family, theta: &[f64]) -> Result<Self> {
        match family {
            Family::Dirichlet => DirichletParams::new(theta.to_vec()).map(Params::Dirichlet),
            Family::MGamma => match theta.split_last() {
                Some((&beta, alpha)) => MGammaParams::new(alpha.to_vec(), beta).map(Params::MGamma),
                None => Err(Error::InvalidParams("empty parameter vector".into())),
            },
        }
    }

    /// Number of free parameters.
    pub fn dim(&self) -> usize {
        match self {
            Params::Dirichlet(p) => p.k(),
            Params::MGamma(p) => p.k() + 1,
        }
    }
}

impl From<DirichletParams> for Params {
    fn from(p: DirichletParams) -> Self {
        Params::Dirichlet(p)
    }
}

impl From<MGammaParams> for Params {
    fn from(p: MGammaParams) -> Self {
        Params::MGamma(p)
    }
}
