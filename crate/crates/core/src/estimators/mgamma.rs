use super::dirichlet;
use super::newton::{solve, RankOneSystem};
use super::summary::{DirichletSummary, GammaSummary};
use super::{require, EstimateReport, Failure, Method, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{dirichlet_projection, Family, SampleMatrix};
use crate::specialfn::{digamma_pos, trigamma_pos};

const G: Family = Family::MGamma;

fn with_beta(alpha: impl Iterator<Item = f64>, beta: f64) -> Vec<f64> {
    alpha.chain(std::iter::once(beta)).collect()
}

/// `β̃ = (1/k) Σⱼ (mean(Zⱼ²) − mean(Zⱼ)²) / mean(Zⱼ)`, `α̃ᵢ = mean(Zᵢ) / β̃`.
pub fn mgamma_me(sample: &SampleMatrix) -> Result<EstimateReport> {
    require(sample, G)?;
    Ok(me_from(&GammaSummary::new(sample)))
}

pub(crate) fn me_from(s: &GammaSummary) -> EstimateReport {
    let beta = s.var.iter().zip(&s.mean).map(|(v, m)| v / m).sum::<f64>() / s.k() as f64;
    if !(beta > 0.0) {
        return EstimateReport::failed(Method::Me, G, s.n, Failure::ZeroVariance);
    }
    EstimateReport::found(Method::Me, G, s.n, with_beta(s.mean.iter().map(|m| m / beta), beta))
}

/// `β̆ = (1/k) Σⱼ [mean(Zⱼ log Zⱼ) − mean(Zⱼ) mean(log Zⱼ)]`,
/// `ᾰᵢ = mean(Zᵢ) / β̆`. With `unbiased`, reports `n β̆ / (n − 1)` and
/// `(n − 1) ᾰᵢ / n`, whose reciprocal is the corrected `n ᾰᵢ⁻¹ / (n − 1)`.
pub fn mgamma_same(sample: &SampleMatrix, unbiased: bool) -> Result<EstimateReport> {
    require(sample, G)?;
    Ok(same_from(&GammaSummary::new(sample), unbiased))
}

pub(crate) fn same_from(s: &GammaSummary, unbiased: bool) -> EstimateReport {
    let method = if unbiased { Method::SameUnbiased } else { Method::Same };
    let beta = s.cov_z_log.iter().sum::<f64>() / s.k() as f64;
    if !(beta > 0.0) {
        return EstimateReport::failed(method, G, s.n, Failure::NonPositiveEstimate);
    }
    let alpha = s.mean.iter().map(|m| m / beta);
    let est = if unbiased {
        let n = s.n as f64;
        let f = (n - 1.0) / n;
        with_beta(alpha.map(|a| a * f), beta / f)
    } else {
        with_beta(alpha, beta)
    };
    EstimateReport::found(method, G, s.n, est)
}

// With β = mean(X_k)/α₀ substituted: ψ(αᵢ) − log α₀ + log mean(X_k) − mean(log Zᵢ),
// whose Jacobian is diag ψ₁(αᵢ) − (1/α₀)·11ᵀ.
struct ProfileScore<'a> {
    mean_log: &'a [f64],
    log_mean_total: f64,
}

impl RankOneSystem for ProfileScore<'_> {
    fn residual(&self, alpha: &[f64], out: &mut [f64]) {
        let shift = self.log_mean_total - alpha.iter().sum::<f64>().ln();
        for ((o, a), t) in out.iter_mut().zip(alpha).zip(self.mean_log) {
            *o = digamma_pos(*a) + shift - t;
        }
    }

    fn jacobian(&self, alpha: &[f64], diag: &mut [f64]) -> f64 {
        for (d, a) in diag.iter_mut().zip(alpha) {
            *d = trigamma_pos(*a);
        }
        -1.0 / alpha.iter().sum::<f64>()
    }
}

fn solve_mle(mean_log: &[f64], mean_total: f64, init: Vec<f64>, n: usize, config: &SolverConfig) -> EstimateReport {
    let sys = ProfileScore { mean_log, log_mean_total: mean_total.ln() };
    match solve(&sys, init, config) {
        Ok(sol) => {
            let beta = mean_total / sol.x.iter().sum::<f64>();
            EstimateReport::found(Method::Mle, G, n, with_beta(sol.x.into_iter(), beta)).with_solver(sol.iterations, sol.residual)
        }
        Err(e) => EstimateReport::failed(Method::Mle, G, n, e.reason).with_solver(e.iterations, e.residual),
    }
}

/// Maximum likelihood estimate: `α̂₀ β̂ = mean(X_k)` and
/// `mean(log Zᵢ) = ψ(α̂ᵢ) + log β̂`, solved with β profiled out and
/// started from the SAME, else the ME, else all ones.
pub fn mgamma_mle(sample: &SampleMatrix, config: &SolverConfig) -> Result<EstimateReport> {
    require(sample, G)?;
    Ok(mle_from(&GammaSummary::new(sample), config))
}

pub(crate) fn mle_from(s: &GammaSummary, config: &SolverConfig) -> EstimateReport {
    let k = s.k();
    let init = same_from(s, false)
        .estimate
        .or_else(|| me_from(s).estimate)
        .map(|mut e| {
            e.truncate(k);
            e
        })
        .unwrap_or_else(|| vec![1.0; k]);
    solve_mle(&s.mean_log, s.mean_total, init, s.n, config)
}

/// Maximum likelihood estimate from the sufficient statistics
/// `mean(log Zᵢ)` and `mean(X_k)`, started from `init` (all ones by default).
pub fn mgamma_mle_from_stats(
    mean_log: &[f64],
    mean_total: f64,
    init: Option<&[f64]>,
    config: &SolverConfig,
) -> Result<EstimateReport> {
    config.validate()?;
    if mean_log.is_empty() {
        return Err(Error::InvalidSample("a multivariate Gamma fit needs k >= 1".into()));
    }
    if !(mean_total.is_finite() && mean_total > 0.0) || mean_log.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSample("sufficient statistics must be finite with a positive mean total".into()));
    }
    let init = match init {
        Some(a) if a.len() == mean_log.len() && a.iter().all(|v| *v > 0.0) => a.to_vec(),
        Some(_) => return Err(Error::Config("initial point must be positive with k coordinates".into())),
        None => vec![1.0; mean_log.len()],
    };
    Ok(solve_mle(mean_log, mean_total, init, 0, config))
}

/// Dirichlet-based estimate: `α̃` from the ME or SAME of the projected
/// sample `W = ΔX / X_k`, and `β̃ = mean(X_k) / Σ α̃ᵢ`.
pub fn mgamma_dirichlet_based(sample: &SampleMatrix, base: Method) -> Result<EstimateReport> {
    require(sample, G)?;
    let w = dirichlet_projection(sample)?;
    let s = DirichletSummary::new(&w);
    let mean_total = sample.rows().map(|r| r[sample.k() - 1]).sum::<f64>() / sample.n() as f64;
    Ok(dirichlet_based_from(&s, mean_total, base)?)
}

pub(crate) fn dirichlet_based_from(w: &DirichletSummary, mean_total: f64, base: Method) -> Result<EstimateReport> {
    let (method, inner) = match base {
        Method::Me => (Method::DirMe, dirichlet::me_from(w)),
        Method::Same => (Method::DirSame, dirichlet::same_from(w)),
        other => return Err(Error::Config(format!("Dirichlet-based estimators use me or same, not {other}"))),
    };
    Ok(match inner.estimate {
        Some(alpha) => {
            let beta = mean_total / alpha.iter().sum::<f64>();
            EstimateReport::found(method, G, w.n, with_beta(alpha.into_iter(), beta))
        }
        None => EstimateReport::failed(method, G, w.n, Failure::BaseEstimator),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_mgamma, MGammaParams, RngSpec};

    fn fixture() -> SampleMatrix {
        SampleMatrix::from_rows(G, &[[1.0, 3.0], [2.0, 4.0]]).unwrap()
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        for (a, b) in got.iter().zip(want) {
            assert!((a - b).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn me_fixture() {
        let r = mgamma_me(&fixture()).unwrap();
        assert_close(&r.estimate.unwrap(), &[18.0, 24.0, 1.0 / 12.0], 1e-12);
    }

    #[test]
    fn same_fixture() {
        let r = mgamma_same(&fixture(), false).unwrap();
        assert_close(&r.estimate.unwrap(), &[17.3124, 23.0831, 0.0866434], 1e-4);
        let r = mgamma_same(&fixture(), true).unwrap();
        assert_eq!(r.method, Method::SameUnbiased);
        let e = r.estimate.unwrap();
        assert!((e[2] - 0.1732868).abs() < 1e-6);
        assert!((e[0] - 17.3124 / 2.0).abs() < 1e-4);
    }

    #[test]
    fn dirichlet_based_fixture() {
        let r = mgamma_dirichlet_based(&fixture(), Method::Me).unwrap();
        assert_eq!(r.method, Method::DirMe);
        assert_close(&r.estimate.unwrap(), &[85.0 / 6.0, 119.0 / 6.0, 7.0 / 68.0], 1e-12);
        assert!(mgamma_dirichlet_based(&fixture(), Method::Mle).is_err());
    }

    #[test]
    fn constant_increments_have_no_estimate() {
        let s = SampleMatrix::from_rows(G, &[[1.0, 3.0], [1.0, 3.0], [1.0, 3.0]]).unwrap();
        assert_eq!(mgamma_me(&s).unwrap().reason, Some(Failure::ZeroVariance));
        assert!(!mgamma_same(&s, false).unwrap().exists);
        let r = mgamma_dirichlet_based(&s, Method::Same).unwrap();
        assert_eq!(r.reason, Some(Failure::BaseEstimator));
    }

    #[test]
    fn mle_constructed_fixed_point() {
        let r = mgamma_mle_from_stats(&[digamma_pos(1.0)], 1.0, None, &SolverConfig::default()).unwrap();
        assert_close(&r.estimate.unwrap(), &[1.0, 1.0], 1e-10);
        let (alpha, beta) = ([0.4, 2.5, 1.0], 2.0);
        let t: Vec<f64> = alpha.iter().map(|a| digamma_pos(*a) + f64::ln(beta)).collect();
        let r = mgamma_mle_from_stats(&t, 3.9 * beta, None, &SolverConfig::default()).unwrap();
        assert_close(&r.estimate.unwrap(), &[0.4, 2.5, 1.0, 2.0], 1e-10);
    }

    #[test]
    fn large_sample_accuracy() {
        let cases: [(&[f64], f64, Method); 4] = [
            (&[0.2, 1.0, 2.0, 5.0], 2.0, Method::Me),
            (&[0.2, 1.0, 2.0, 5.0], 2.0, Method::Same),
            (&[1.0, 2.0], 3.0, Method::Mle),
            (&[1.0, 2.0, 5.0], 0.5, Method::DirSame),
        ];
        for (t, (alpha, beta, method)) in cases.into_iter().enumerate() {
            let p = MGammaParams::new(alpha.to_vec(), beta).unwrap();
            let s = sample_mgamma(&p, 100_000, RngSpec::new(10, t as u64)).unwrap();
            let r = super::super::estimate(method, &s, &SolverConfig::default()).unwrap();
            let est = r.estimate.as_ref().unwrap();
            for (a, b) in est.iter().zip(p.to_vec()) {
                assert!((a - b).abs() / b < 0.05, "{method}: {a} vs {b}");
            }
            if method == Method::Mle {
                assert!(r.score_norm.unwrap() <= 1e-8);
            }
        }
    }

    #[test]
    fn mle_satisfies_both_equations() {
        let p = MGammaParams::new(vec![0.6, 1.5, 3.0], 1.3).unwrap();
        let s = sample_mgamma(&p, 500, RngSpec::new(11, 0)).unwrap();
        let sum = GammaSummary::new(&s);
        let r = mgamma_mle(&s, &SolverConfig::default()).unwrap();
        let est = r.estimate.unwrap();
        let (alpha, beta) = (&est[..3], est[3]);
        assert!((alpha.iter().sum::<f64>() * beta - sum.mean_total).abs() <= 1e-8 * sum.mean_total);
        for (a, t) in alpha.iter().zip(&sum.mean_log) {
            assert!((digamma_pos(*a) + beta.ln() - t).abs() <= 1e-8);
        }
    }
}
