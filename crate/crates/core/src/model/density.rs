use super::params::{DirichletParams, MGammaParams};
use super::sample::{check_point, Family};
use crate::error::{Error, Result};
use crate::specialfn::ln_gamma_pos;

fn support(family: Family, x: &[f64]) -> Result<()> {
    check_point(family, x).map_err(|reason| Error::Support { row: 1, reason })
}

fn check_len(k: usize, x: &[f64]) -> Result<()> {
    if x.len() != k {
        return Err(Error::InvalidSample(format!("point has {} coordinates, expected {k}", x.len())));
    }
    Ok(())
}

/// Log-density of `D_k(α)` with respect to Lebesgue measure on the simplex.
pub fn log_density_dirichlet(params: &DirichletParams, x: &[f64]) -> Result<f64> {
    check_len(params.k(), x)?;
    support(Family::Dirichlet, x)?;
    let kernel: f64 = params.alpha().iter().zip(x).map(|(a, x)| (a - 1.0) * x.ln()).sum();
    Ok(kernel - log_partition_dirichlet(params))
}

/// Log-density of `MG_k(α, β)` on the wedge `0 < x₁ < … < x_k`.
pub fn log_density_mgamma(params: &MGammaParams, x: &[f64]) -> Result<f64> {
    check_len(params.k(), x)?;
    support(Family::MGamma, x)?;
    let mut prev = 0.0;
    let mut kernel = 0.0;
    for (a, &xi) in params.alpha().iter().zip(x) {
        kernel += (a - 1.0) * (xi - prev).ln();
        prev = xi;
    }
    kernel -= prev / params.beta();
    Ok(kernel - log_partition_mgamma(params))
}

/// Sufficient statistic `T(x)`: `log x` for the Dirichlet family and
/// `(log Δx, x_k)` for the multivariate Gamma family.
pub fn sufficient_stats(family: Family, x: &[f64]) -> Result<Vec<f64>> {
    support(family, x)?;
    Ok(match family {
        Family::Dirichlet => x.iter().map(|v| v.ln()).collect(),
        Family::MGamma => {
            let mut t: Vec<f64> = super::transform::delta_row(x).map(f64::ln).collect();
            t.push(x[x.len() - 1]);
            t
        }
    })
}

/// `A(α) = Σ log Γ(αᵢ) − log Γ(α₀)`.
pub fn log_partition_dirichlet(params: &DirichletParams) -> f64 {
    params.alpha().iter().map(|&a| ln_gamma_pos(a)).sum::<f64>() - ln_gamma_pos(params.alpha0())
}

/// `A(α, β) = Σ log Γ(αᵢ) + α₀ log β`.
pub fn log_partition_mgamma(params: &MGammaParams) -> f64 {
    params.alpha().iter().map(|&a| ln_gamma_pos(a)).sum::<f64>() + params.alpha0() * params.beta().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::digamma_diff_pos;

    fn dir(a: &[f64]) -> DirichletParams {
        DirichletParams::new(a.to_vec()).unwrap()
    }

    #[test]
    fn dirichlet_density_values() {
        assert!(log_density_dirichlet(&dir(&[1.0, 1.0]), &[0.3, 0.7]).unwrap().abs() < 1e-15);
        let v = log_density_dirichlet(&dir(&[2.0, 2.0]), &[0.5, 0.5]).unwrap();
        assert!((v - 1.5f64.ln()).abs() < 1e-14);
        assert!(matches!(
            log_density_dirichlet(&dir(&[1.0, 1.0]), &[0.0, 1.0]),
            Err(Error::Support { .. })
        ));
        assert!(log_density_dirichlet(&dir(&[1.0, 1.0, 1.0]), &[0.3, 0.7]).is_err());
    }

    #[test]
    fn mgamma_density_values() {
        let p = MGammaParams::new(vec![1.0], 1.0).unwrap();
        assert!((log_density_mgamma(&p, &[1.0]).unwrap() + 1.0).abs() < 1e-15);
        let p = MGammaParams::new(vec![1.0, 1.0], 1.0).unwrap();
        assert!((log_density_mgamma(&p, &[1.0, 2.0]).unwrap() + 2.0).abs() < 1e-15);
        assert!(matches!(log_density_mgamma(&p, &[2.0, 1.0]), Err(Error::Support { .. })));
    }

    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / n as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
        }
        s * h / 3.0
    }

    // Split at x = 1/2 and substitute x = t^{8/α₁} on the left and
    // 1 − x = t^{8/α₂} on the right; the endpoint factors become t⁷.
    fn integrate_k2(a1: f64, a2: f64) -> f64 {
        let p = dir(&[a1, a2]);
        // x and 1 − x are passed separately: near a vertex one of them
        // rounds to 1 and the support check would drop real mass
        let log_b = log_partition_dirichlet(&p);
        let dens = |x: f64, y: f64| {
            if x > 0.0 && y > 0.0 {
                ((a1 - 1.0) * x.ln() + (a2 - 1.0) * y.ln() - log_b).exp()
            } else {
                0.0
            }
        };
        let (q1, q2) = (8.0 / a1, 8.0 / a2);
        let left = |t: f64| {
            let x = t.powf(q1);
            dens(x, 1.0 - x) * q1 * t.powf(q1 - 1.0)
        };
        let right = |t: f64| {
            let y = t.powf(q2);
            dens(1.0 - y, y) * q2 * t.powf(q2 - 1.0)
        };
        let half = 0.5f64;
        simpson(left, 0.0, half.powf(1.0 / q1), 4000) + simpson(right, 0.0, half.powf(1.0 / q2), 4000)
    }

    #[test]
    fn k2_density_integrates_to_one() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let a1 = rng.random_range(0.2..5.0);
            let a2 = rng.random_range(0.2..5.0);
            let total = integrate_k2(a1, a2);
            assert!((total - 1.0).abs() < 1e-6, "α = ({a1}, {a2}): {total}");
        }
    }

    #[test]
    fn sufficient_statistics() {
        let t = sufficient_stats(Family::Dirichlet, &[0.5, 0.5]).unwrap();
        assert_eq!(t, vec![0.5f64.ln(), 0.5f64.ln()]);
        let t = sufficient_stats(Family::MGamma, &[1.0, 3.0]).unwrap();
        assert_eq!(t, vec![0.0, 2.0f64.ln(), 3.0]);
        assert_eq!(sufficient_stats(Family::MGamma, &[1.0, 2.0, 4.0]).unwrap().len(), 4);
        assert!(sufficient_stats(Family::MGamma, &[3.0, 1.0]).is_err());
    }

    #[test]
    fn log_partition_values() {
        assert!(log_partition_dirichlet(&dir(&[1.0, 1.0])).abs() < 1e-15);
        assert_eq!(log_partition_mgamma(&MGammaParams::new(vec![1.0], 1.0).unwrap()), 0.0);
    }

    #[test]
    fn dirichlet_log_partition_gradient_is_mean_log() {
        let alpha = [0.7, 2.0, 3.3];
        let h = 1e-5;
        for i in 0..3 {
            let mut up = alpha;
            let mut dn = alpha;
            up[i] += h;
            dn[i] -= h;
            let fd = (log_partition_dirichlet(&dir(&up)) - log_partition_dirichlet(&dir(&dn))) / (2.0 * h);
            let want = digamma_diff_pos(alpha[i], alpha.iter().sum());
            assert!((fd - want).abs() < 1e-6, "{fd} vs {want}");
        }
    }

    #[test]
    fn mgamma_log_partition_gradient_is_mean_stat() {
        let p = MGammaParams::new(vec![0.8, 2.5], 1.7).unwrap();
        let eta = p.natural();
        let a = |e: &[f64]| log_partition_mgamma(&MGammaParams::from_natural(e).unwrap());
        let mut want: Vec<f64> = p.alpha().iter().map(|&a| crate::specialfn::digamma_pos(a) + p.beta().ln()).collect();
        want.push(p.alpha0() * p.beta());
        for i in 0..eta.len() {
            let h = 1e-5 * eta[i].abs().max(1.0);
            let mut up = eta.clone();
            let mut dn = eta.clone();
            up[i] += h;
            dn[i] -= h;
            let fd = (a(&up) - a(&dn)) / (2.0 * h);
            assert!((fd - want[i]).abs() < 1e-6, "{i}: {fd} vs {}", want[i]);
        }
    }
}
