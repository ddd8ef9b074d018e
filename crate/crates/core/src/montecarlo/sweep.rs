use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SweepConfig;
use crate::avar::avar;
use crate::error::{Error, Result};
use crate::estimators::{estimate, Method, SolverConfig};
use crate::model::{sample_dirichlet, sample_mgamma, Family, Params, RngSpec, SampleMatrix};

/// Bias, variance and RMSE of one parameter coordinate at one sweep cell.
/// Replicates without an estimate are left out and counted in `failures`;
/// the statistics are NaN when none survive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub family: Family,
    pub estimator: Method,
    pub param_index: usize,
    pub sweep_value: f64,
    pub n: usize,
    pub m_effective: usize,
    pub failures: usize,
    pub bias: f64,
    pub variance: f64,
    pub rmse: f64,
}

/// Analytic asymptotic variance of one coordinate at one grid value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvarRow {
    pub family: Family,
    pub estimator: Method,
    pub param_index: usize,
    pub sweep_value: f64,
    pub avar: f64,
}

fn draw(params: &Params, n: usize, rng: RngSpec) -> Result<SampleMatrix> {
    match params {
        Params::Dirichlet(p) => sample_dirichlet(p, n, rng),
        Params::MGamma(p) => sample_mgamma(p, n, rng),
    }
}

/// Per-cell seed; replicate `r` of the cell reads substream `r`.
pub fn cell_seed(master: u64, cell: u64) -> u64 {
    master ^ cell.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Estimates of every method on `m` replicate samples of size `n`, indexed
/// `[replicate][method]`. All methods see the same samples. The output is
/// independent of the number of worker threads.
pub fn replicate_estimates(
    params: &Params,
    methods: &[Method],
    n: usize,
    m: usize,
    seed: u64,
    solver: &SolverConfig,
) -> Result<Vec<Vec<Option<Vec<f64>>>>> {
    (0..m as u64)
        .into_par_iter()
        .map(|r| {
            let sample = draw(params, n, RngSpec::new(seed, r))?;
            methods.iter().map(|&method| Ok(estimate(method, &sample, solver)?.estimate)).collect()
        })
        .collect()
}

/// Bias, variance (divisor `m_effective`) and RMSE of the `c`-th coordinate.
pub fn coordinate_metrics<'a>(estimates: impl Iterator<Item = &'a [f64]> + Clone, c: usize, truth: f64) -> (usize, f64, f64, f64) {
    let count = estimates.clone().count();
    if count == 0 {
        return (0, f64::NAN, f64::NAN, f64::NAN);
    }
    let cf = count as f64;
    let mean = estimates.clone().map(|e| e[c]).sum::<f64>() / cf;
    let variance = estimates.clone().map(|e| (e[c] - mean).powi(2)).sum::<f64>() / cf;
    let mse = estimates.map(|e| (e[c] - truth).powi(2)).sum::<f64>() / cf;
    (count, mean - truth, variance, mse.sqrt())
}

/// Bias, variance and RMSE for every (grid value, n, estimator,
/// coordinate), in that nesting order.
pub fn run_metric_sweep(config: &SweepConfig) -> Result<Vec<MetricsRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for (gi, &value) in config.grid.iter().enumerate() {
        let params = config.params_at(value)?;
        let theta = params.to_vec();
        for (ni, &n) in config.ns.iter().enumerate() {
            let seed = cell_seed(config.seed, (gi * config.ns.len() + ni) as u64);
            let reps = replicate_estimates(&params, &config.methods, n, config.m, seed, &config.solver)?;
            for (mi, &method) in config.methods.iter().enumerate() {
                let found = reps.iter().filter_map(|r| r[mi].as_deref());
                for (c, &truth) in theta.iter().enumerate() {
                    let (m_effective, bias, variance, rmse) = coordinate_metrics(found.clone(), c, truth);
                    rows.push(MetricsRow {
                        family: config.family,
                        estimator: method,
                        param_index: c + 1,
                        sweep_value: value,
                        n,
                        m_effective,
                        failures: config.m - m_effective,
                        bias,
                        variance,
                        rmse,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Sample covariance (divisor `m_effective − 1`) of `√n (θ̂ − θ)` over the
/// replicates where the estimate exists, with the survivor count.
pub fn empirical_sampling_covariance(
    params: &Params,
    method: Method,
    n: usize,
    m: usize,
    seed: u64,
    solver: &SolverConfig,
) -> Result<(DMatrix<f64>, usize)> {
    if !method.supports(params.family()) {
        return Err(Error::Config(format!("estimator {method} is not defined for the {} family", params.family())));
    }
    if n < 2 {
        return Err(Error::Config(format!("sample size {n} is below 2")));
    }
    let reps = replicate_estimates(params, &[method], n, m, seed, solver)?;
    let found: Vec<&[f64]> = reps.iter().filter_map(|r| r[0].as_deref()).collect();
    if found.len() < 10 {
        return Err(Error::InsufficientData { needed: 10, got: found.len() });
    }
    let theta = params.to_vec();
    let d = theta.len();
    let scale = (n as f64).sqrt();
    let data = DMatrix::from_fn(found.len(), d, |r, c| scale * (found[r][c] - theta[c]));
    let mean = data.row_mean();
    let centered = DMatrix::from_fn(found.len(), d, |r, c| data[(r, c)] - mean[c]);
    let cov = centered.transpose() * &centered / (found.len() - 1) as f64;
    Ok(((&cov + cov.transpose()) * 0.5, found.len()))
}

/// Analytic asymptotic variances over the grid; no sampling.
pub fn run_avar_sweep(config: &SweepConfig) -> Result<Vec<AvarRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &value in &config.grid {
        let params = config.params_at(value)?;
        for &method in &config.methods {
            let a = avar(method, &params)?;
            for c in 0..a.dim() {
                rows.push(AvarRow {
                    family: config.family,
                    estimator: method,
                    param_index: c + 1,
                    sweep_value: value,
                    avar: a.matrix[(c, c)],
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DirichletParams, MGammaParams};

    fn small(methods: Vec<Method>) -> SweepConfig {
        SweepConfig {
            family: Family::Dirichlet,
            base: vec![1.0, 0.2, 2.0],
            param_index: 1,
            grid: vec![0.5, 2.0],
            ns: vec![10, 30],
            m: 200,
            methods,
            seed: 42,
            solver: SolverConfig::default(),
        }
    }

    #[test]
    fn rows_are_complete_and_consistent() {
        let config = small(vec![Method::Me, Method::Same, Method::Mle]);
        let rows = run_metric_sweep(&config).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3 * 3);
        for r in &rows {
            assert_eq!(r.m_effective + r.failures, config.m);
            if r.m_effective > 0 {
                let lhs = r.rmse * r.rmse;
                let rhs = r.bias * r.bias + r.variance;
                assert!((lhs - rhs).abs() <= 1e-10 * lhs, "{r:?}");
            }
        }
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let config = small(vec![Method::Me, Method::Mle]);
        let a = run_metric_sweep(&config).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| run_metric_sweep(&config)).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        let c = run_metric_sweep(&SweepConfig { seed: 43, ..config }).unwrap();
        assert_ne!(format!("{a:?}"), format!("{c:?}"));
    }

    #[test]
    fn failures_are_counted() {
        // shapes this small underflow to the clamp value, so columns repeat
        let config = SweepConfig {
            base: vec![0.005, 0.005, 0.005],
            grid: vec![0.005],
            ns: vec![2],
            methods: vec![Method::Me],
            ..small(vec![])
        };
        let rows = run_metric_sweep(&config).unwrap();
        assert!(rows.iter().any(|r| r.failures > 0));
        assert!(rows.iter().all(|r| r.m_effective + r.failures == 200));
    }

    #[test]
    fn covariance_is_symmetric() {
        let p = Params::MGamma(MGammaParams::new(vec![1.0, 2.0], 1.5).unwrap());
        let (cov, used) = empirical_sampling_covariance(&p, Method::Same, 100, 300, 3, &SolverConfig::default()).unwrap();
        assert_eq!(cov.shape(), (3, 3));
        assert_eq!(cov, cov.transpose());
        assert!(used > 290);
    }

    #[test]
    fn too_few_survivors() {
        let p = Params::Dirichlet(DirichletParams::new(vec![1.0, 1.0]).unwrap());
        let err = empirical_sampling_covariance(&p, Method::Me, 2, 5, 3, &SolverConfig::default());
        assert!(matches!(err, Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn avar_rows_positive() {
        let rows = run_avar_sweep(&small(vec![Method::Me, Method::Same, Method::Mle])).unwrap();
        assert_eq!(rows.len(), 2 * 3 * 3);
        assert!(rows.iter().all(|r| r.avar > 0.0));
    }
}
