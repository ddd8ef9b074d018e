use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{Method, SolverConfig};
use crate::model::{Family, Params};

/// A sweep over one parameter coordinate. `base` is `(α)` or `(α, β)`;
/// the coordinate `param_index` (1-based, `k + 1` is `β`) is replaced by
/// each grid value in turn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: Family,
    pub base: Vec<f64>,
    pub param_index: usize,
    pub grid: Vec<f64>,
    pub ns: Vec<usize>,
    pub m: usize,
    pub methods: Vec<Method>,
    pub seed: u64,
    #[serde(default)]
    pub solver: SolverConfig,
}

pub const MIN_REPLICATES: usize = 100;

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        Params::from_vec(self.family, &self.base)?;
        if self.param_index == 0 || self.param_index > self.base.len() {
            return Err(Error::Config(format!(
                "parameter index {} is outside 1..={}",
                self.param_index,
                self.base.len()
            )));
        }
        if self.grid.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if let Some(v) = self.grid.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Config(format!("grid value {v} is not a positive number")));
        }
        if self.m < MIN_REPLICATES {
            return Err(Error::Config(format!("replicate count {} is below {MIN_REPLICATES}", self.m)));
        }
        if let Some(n) = self.ns.iter().find(|&&n| n < 2) {
            return Err(Error::Config(format!("sample size {n} is below 2")));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no estimators selected".into()));
        }
        if let Some(m) = self.methods.iter().find(|m| !m.supports(self.family)) {
            return Err(Error::Config(format!("estimator {m} is not defined for the {} family", self.family)));
        }
        if self.family == Family::MGamma
            && self.base.len() < 3
            && self.methods.iter().any(|m| matches!(m, Method::DirMe | Method::DirSame))
        {
            return Err(Error::Config("Dirichlet-based estimators need k >= 2".into()));
        }
        self.solver.validate()
    }

    /// Parameters at grid value `v`.
    pub fn params_at(&self, v: f64) -> Result<Params> {
        let mut theta = self.base.clone();
        theta[self.param_index - 1] = v;
        Params::from_vec(self.family, &theta)
    }

    pub fn k(&self) -> usize {
        match self.family {
            Family::Dirichlet => self.base.len(),
            Family::MGamma => self.base.len() - 1,
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
