use super::{Failure, SolverConfig};

/// Outcome of a converged solve.
#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Failed solve, with the last iterate's diagnostics.
#[derive(Debug, Clone)]
pub(crate) struct Unsolved {
    pub reason: Failure,
    pub iterations: usize,
    pub residual: f64,
}

/// A system `F(x) = 0` on `(0, ∞)^k` whose Jacobian is `diag(d) + c·11ᵀ`.
pub(crate) trait RankOneSystem {
    fn residual(&self, x: &[f64], out: &mut [f64]);
    /// The diagonal `d` and rank-one weight `c` of the Jacobian at `x`.
    fn jacobian(&self, x: &[f64], diag: &mut [f64]) -> f64;
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Solves `(diag(d) + c·11ᵀ) δ = r` in place by Sherman–Morrison.
fn solve_rank_one(diag: &[f64], c: f64, r: &mut [f64]) -> bool {
    let s_inv: f64 = diag.iter().map(|d| 1.0 / d).sum();
    let s_r: f64 = r.iter().zip(diag).map(|(r, d)| r / d).sum();
    let denom = 1.0 + c * s_inv;
    if !(denom.is_finite() && denom != 0.0) {
        return false;
    }
    let shift = c * s_r / denom;
    for (ri, d) in r.iter_mut().zip(diag) {
        *ri = (*ri - shift) / d;
    }
    r.iter().all(|v| v.is_finite())
}

/// Damped Newton iteration. A step is halved while the trial point leaves
/// the positive orthant or fails to reduce `‖F‖₂`; once the step factor
/// drops below `config.min_step` the solve is abandoned.
pub(crate) fn solve(sys: &impl RankOneSystem, x0: Vec<f64>, config: &SolverConfig) -> Result<Solution, Unsolved> {
    let k = x0.len();
    let mut x = x0;
    let mut f = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut trial = vec![0.0; k];
    let mut f_trial = vec![0.0; k];
    sys.residual(&x, &mut f);
    for iter in 0..=config.max_iter {
        let res = max_abs(&f);
        if !res.is_finite() {
            return Err(Unsolved { reason: Failure::Divergence, iterations: iter, residual: res });
        }
        if res <= config.tolerance {
            return Ok(Solution { x, iterations: iter, residual: res });
        }
        if iter == config.max_iter {
            return Err(Unsolved { reason: Failure::NonConvergence, iterations: iter, residual: res });
        }
        let c = sys.jacobian(&x, &mut diag);
        let mut step = f.clone();
        if !solve_rank_one(&diag, c, &mut step) {
            return Err(Unsolved { reason: Failure::Divergence, iterations: iter, residual: res });
        }
        let merit = sum_sq(&f);
        let mut t = 1.0;
        loop {
            for ((xt, xi), s) in trial.iter_mut().zip(&x).zip(&step) {
                *xt = xi - t * s;
            }
            if trial.iter().all(|v| v.is_finite() && *v > 0.0) {
                sys.residual(&trial, &mut f_trial);
                let m = sum_sq(&f_trial);
                if m.is_finite() && m < merit {
                    break;
                }
            }
            t *= 0.5;
            if t < config.min_step {
                // no decrease is possible at working precision
                return Err(Unsolved { reason: Failure::Divergence, iterations: iter, residual: res });
            }
        }
        std::mem::swap(&mut x, &mut trial);
        std::mem::swap(&mut f, &mut f_trial);
    }
    unreachable!("loop returns at max_iter")
}

#[cfg(test)]
mod tests {
    use super::*;

    // F(x)ᵢ = xᵢ² − 2 + (Σx − Σx*) with Jacobian diag(2x) + 11ᵀ.
    struct Quadratic(Vec<f64>);

    impl RankOneSystem for Quadratic {
        fn residual(&self, x: &[f64], out: &mut [f64]) {
            let shift: f64 = x.iter().sum::<f64>() - self.0.iter().sum::<f64>();
            for ((o, xi), ti) in out.iter_mut().zip(x).zip(&self.0) {
                *o = xi * xi - ti * ti + shift;
            }
        }
        fn jacobian(&self, x: &[f64], diag: &mut [f64]) -> f64 {
            for (d, xi) in diag.iter_mut().zip(x) {
                *d = 2.0 * xi;
            }
            1.0
        }
    }

    #[test]
    fn sherman_morrison_matches_dense_solve() {
        let d = [2.0, 3.0, 5.0];
        let c = -0.7;
        let mut r = [1.0, -1.0, 0.5];
        let orig = r;
        assert!(solve_rank_one(&d, c, &mut r));
        let s: f64 = r.iter().sum();
        for i in 0..3 {
            assert!((d[i] * r[i] + c * s - orig[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn converges_to_root() {
        let target = vec![0.5, 2.0, 3.0];
        let sol = solve(&Quadratic(target.clone()), vec![1.0; 3], &SolverConfig::default()).unwrap();
        for (a, b) in sol.x.iter().zip(&target) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(sol.iterations < 20);
    }

    #[test]
    fn iteration_budget_is_reported() {
        let config = SolverConfig { max_iter: 1, ..SolverConfig::default() };
        let err = solve(&Quadratic(vec![0.5, 2.0, 3.0]), vec![10.0; 3], &config).unwrap_err();
        assert_eq!(err.reason, Failure::NonConvergence);
        assert_eq!(err.iterations, 1);
    }
}
