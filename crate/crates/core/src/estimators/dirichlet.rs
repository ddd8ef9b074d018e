use super::newton::{solve, RankOneSystem};
use super::summary::DirichletSummary;
use super::{require, EstimateReport, Failure, Method, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{Family, SampleMatrix};
use crate::specialfn::{digamma_diff_pos, trigamma_pos};

const D: Family = Family::Dirichlet;

/// `α̃ᵢ = mean(Xᵢ)(mean(Xᵢ) − mean(Xᵢ²)) / (mean(Xᵢ²) − mean(Xᵢ)²)`.
pub fn dirichlet_me(sample: &SampleMatrix) -> Result<EstimateReport> {
    require(sample, D)?;
    Ok(me_from(&DirichletSummary::new(sample)))
}

pub(crate) fn me_from(s: &DirichletSummary) -> EstimateReport {
    if s.var.iter().any(|v| !(*v > 0.0)) {
        return EstimateReport::failed(Method::Me, D, s.n, Failure::ZeroVariance);
    }
    let alpha = s.mean.iter().zip(&s.var).map(|(m, v)| m * (m * (1.0 - m) - v) / v).collect();
    EstimateReport::found(Method::Me, D, s.n, alpha)
}

/// `ᾰᵢ = (k − 1) mean(Xᵢ) / Σⱼ [mean(Xⱼ log Xⱼ) − mean(Xⱼ) mean(log Xⱼ)]`.
pub fn dirichlet_same(sample: &SampleMatrix) -> Result<EstimateReport> {
    require(sample, D)?;
    Ok(same_from(&DirichletSummary::new(sample)))
}

pub(crate) fn same_from(s: &DirichletSummary) -> EstimateReport {
    let denom: f64 = s.cov_x_log.iter().sum();
    if !(denom > 0.0) {
        return EstimateReport::failed(Method::Same, D, s.n, Failure::NonPositiveDenominator);
    }
    let scale = (s.k() - 1) as f64 / denom;
    EstimateReport::found(Method::Same, D, s.n, s.mean.iter().map(|m| scale * m).collect())
}

// Ψ(αᵢ, α₀) − mean(log Xᵢ), with Jacobian diag ψ₁(αᵢ) − ψ₁(α₀)·11ᵀ.
struct Score<'a> {
    mean_log: &'a [f64],
}

impl RankOneSystem for Score<'_> {
    fn residual(&self, alpha: &[f64], out: &mut [f64]) {
        let a0: f64 = alpha.iter().sum();
        for ((o, a), t) in out.iter_mut().zip(alpha).zip(self.mean_log) {
            *o = digamma_diff_pos(*a, a0) - t;
        }
    }

    fn jacobian(&self, alpha: &[f64], diag: &mut [f64]) -> f64 {
        for (d, a) in diag.iter_mut().zip(alpha) {
            *d = trigamma_pos(*a);
        }
        -trigamma_pos(alpha.iter().sum())
    }
}

/// Maximum likelihood estimate: the root of `Ψ(α̂ᵢ, α̂₀) = mean(log Xᵢ)`,
/// started from the SAME, else the ME, else all ones.
pub fn dirichlet_mle(sample: &SampleMatrix, config: &SolverConfig) -> Result<EstimateReport> {
    require(sample, D)?;
    Ok(mle_from(&DirichletSummary::new(sample), config))
}

pub(crate) fn mle_from(s: &DirichletSummary, config: &SolverConfig) -> EstimateReport {
    let init = same_from(s).estimate.or_else(|| me_from(s).estimate).unwrap_or_else(|| vec![1.0; s.k()]);
    solve_mle(&s.mean_log, init, s.n, config)
}

fn solve_mle(mean_log: &[f64], init: Vec<f64>, n: usize, config: &SolverConfig) -> EstimateReport {
    match solve(&Score { mean_log }, init, config) {
        Ok(sol) => EstimateReport::found(Method::Mle, D, n, sol.x).with_solver(sol.iterations, sol.residual),
        Err(e) => EstimateReport::failed(Method::Mle, D, n, e.reason).with_solver(e.iterations, e.residual),
    }
}

/// Maximum likelihood estimate from the sufficient statistics
/// `mean(log Xᵢ)` alone, started from `init` (all ones by default).
pub fn dirichlet_mle_from_stats(mean_log: &[f64], init: Option<&[f64]>, config: &SolverConfig) -> Result<EstimateReport> {
    config.validate()?;
    if mean_log.len() < 2 {
        return Err(Error::InvalidSample("a Dirichlet fit needs k >= 2".into()));
    }
    if let Some(v) = mean_log.iter().find(|v| !(v.is_finite() && **v < 0.0)) {
        return Err(Error::InvalidSample(format!("mean log-coordinate {v} must be negative and finite")));
    }
    let init = match init {
        Some(a) if a.len() == mean_log.len() && a.iter().all(|v| *v > 0.0) => a.to_vec(),
        Some(_) => return Err(Error::Config("initial point must be positive with k coordinates".into())),
        None => vec![1.0; mean_log.len()],
    };
    Ok(solve_mle(mean_log, init, 0, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_dirichlet, DirichletParams, RngSpec};

    fn two_points() -> SampleMatrix {
        SampleMatrix::from_rows(D, &[[0.25, 0.75], [0.75, 0.25]]).unwrap()
    }

    #[test]
    fn me_fixture() {
        let r = dirichlet_me(&two_points()).unwrap();
        assert!(r.exists);
        for a in r.estimate.unwrap() {
            assert!((a - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn same_fixture() {
        let r = dirichlet_same(&two_points()).unwrap();
        // each coordinate contributes 0.25·log(3)/2 to the denominator
        let want = 2.0 / 3f64.ln();
        for a in r.estimate.unwrap() {
            assert!((a - want).abs() < 1e-12, "{a}");
        }
    }

    #[test]
    fn constant_column_has_no_moment_estimate() {
        let s = SampleMatrix::from_rows(D, &[[0.5, 0.25, 0.25], [0.5, 0.3, 0.2]]).unwrap();
        let r = dirichlet_me(&s).unwrap();
        assert!(!r.exists);
        assert_eq!(r.reason, Some(Failure::ZeroVariance));
        assert!(r.estimate.is_none());
    }

    #[test]
    fn same_ratios_follow_means() {
        let p = DirichletParams::new(vec![0.7, 2.0, 4.0]).unwrap();
        let s = sample_dirichlet(&p, 300, RngSpec::new(1, 0)).unwrap();
        let sum = DirichletSummary::new(&s);
        let a = dirichlet_same(&s).unwrap().estimate.unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let want = sum.mean[i] / sum.mean[j];
            assert!((a[i] / a[j] - want).abs() <= 1e-15 * want);
        }
    }

    #[test]
    fn mle_constructed_fixed_point() {
        let r = dirichlet_mle_from_stats(&[-1.0, -1.0], None, &SolverConfig::default()).unwrap();
        assert_eq!(r.estimate.unwrap(), vec![1.0, 1.0]);
        let target = [0.5, 2.0, 3.5];
        let t: Vec<f64> = target.iter().map(|a| digamma_diff_pos(*a, 6.0)).collect();
        let r = dirichlet_mle_from_stats(&t, None, &SolverConfig::default()).unwrap();
        for (a, b) in r.estimate.unwrap().iter().zip(target) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!(dirichlet_mle_from_stats(&[-1.0, 0.5], None, &SolverConfig::default()).is_err());
    }

    #[test]
    fn large_sample_accuracy() {
        let alpha = [1.0, 0.2, 1.0, 2.0, 5.0];
        let p = DirichletParams::new(alpha.to_vec()).unwrap();
        let s = sample_dirichlet(&p, 100_000, RngSpec::new(2, 0)).unwrap();
        for r in [dirichlet_me(&s).unwrap(), dirichlet_same(&s).unwrap(), dirichlet_mle(&s, &SolverConfig::default()).unwrap()] {
            let est = r.estimate.as_ref().unwrap();
            for (a, b) in est.iter().zip(alpha) {
                assert!((a - b).abs() / b < 0.05, "{}: {a} vs {b}", r.method);
            }
        }
        let p = DirichletParams::new(vec![2.0, 3.0]).unwrap();
        let s = sample_dirichlet(&p, 100_000, RngSpec::new(3, 0)).unwrap();
        let r = dirichlet_mle(&s, &SolverConfig::default()).unwrap();
        assert!(r.score_norm.unwrap() <= 1e-8);
        for (a, b) in r.estimate.unwrap().iter().zip([2.0, 3.0]) {
            assert!((a - b).abs() / b < 0.05);
        }
    }
}
