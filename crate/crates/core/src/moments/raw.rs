use super::id::{Factor, MomentId};
use crate::error::{Error, Result};
use crate::model::{DirichletParams, Family, MGammaParams, Params};
use crate::specialfn::{digamma_diff_pos, digamma_pos, ln_gamma_pos, trigamma_diff_pos, trigamma_pos};

/// Largest power of a single coordinate (or of `X_k`) in the catalog.
pub const MAX_POWER: u32 = 8;
/// Largest total order of the logarithmic part of a Dirichlet monomial,
/// and of a single coordinate of a multivariate Gamma monomial.
pub const MAX_LOG_POWER: u32 = 2;

const LOG_SPACE_ABOVE: f64 = 30.0;

pub(super) fn rising(a: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, j| acc * (a + j as f64))
}

fn ln_rising(a: f64, m: u32) -> f64 {
    if m <= 8 {
        (0..m).map(|j| (a + j as f64).ln()).sum()
    } else {
        ln_gamma_pos(a + m as f64) - ln_gamma_pos(a)
    }
}

fn check_family(id: &MomentId, family: Family, k: usize) -> Result<()> {
    if id.family() != family {
        return Err(Error::Catalog(format!("{id} is a {} moment, not a {family} moment", id.family())));
    }
    id.check_indices(k)?;
    if let Some(f) = id.factors().iter().find(|f| f.power > MAX_POWER) {
        return Err(Error::Catalog(format!("power {} exceeds the catalog limit {MAX_POWER}", f.power)));
    }
    if id.total_power() > MAX_POWER {
        return Err(Error::Catalog(format!("power {} of X_k exceeds the catalog limit {MAX_POWER}", id.total_power())));
    }
    Ok(())
}

/// `E(∏ Xᵢ^pᵢ log^qᵢ Xᵢ)` under `D_k(α)`, for `Σ qᵢ ≤ 2`.
///
/// The power part tilts the law to `D_k(α + p)` with weight
/// `∏ (αᵢ)_{pᵢ} / (α₀)_{P}`; the logarithmic part is then a first or second
/// moment of `log X` under the tilted law.
pub fn dirichlet_raw_moment(params: &DirichletParams, id: &MomentId) -> Result<f64> {
    check_family(id, Family::Dirichlet, params.k())?;
    if id.log_degree() > MAX_LOG_POWER {
        return Err(Error::Catalog(format!("{id}: logarithmic order above {MAX_LOG_POWER} is not in the catalog")));
    }
    let alpha = params.alpha();
    let a0 = params.alpha0();
    let p_total: u32 = id.factors().iter().map(|f| f.power).sum();
    let weight = if a0 + p_total as f64 > LOG_SPACE_ABOVE {
        let num: f64 = id.factors().iter().map(|f| ln_rising(alpha[f.index], f.power)).sum();
        (num - ln_rising(a0, p_total)).exp()
    } else {
        id.factors().iter().map(|f| rising(alpha[f.index], f.power)).product::<f64>() / rising(a0, p_total)
    };
    let b = a0 + p_total as f64;
    let tilted = |f: &Factor| alpha[f.index] + f.power as f64;
    let logs: Vec<&Factor> = id.factors().iter().filter(|f| f.log_power > 0).collect();
    let log_part = match logs.as_slice() {
        [] => 1.0,
        [f] if f.log_power == 1 => digamma_diff_pos(tilted(f), b),
        [f] => {
            let psi = digamma_diff_pos(tilted(f), b);
            psi * psi + trigamma_diff_pos(tilted(f), b)
        }
        [f, g] => digamma_diff_pos(tilted(f), b) * digamma_diff_pos(tilted(g), b) - trigamma_pos(b),
        _ => unreachable!("log degree checked above"),
    };
    Ok(weight * log_part)
}

/// `E(Z^p log^q Z)` for `Z ~ G(a, β)`, `q ≤ 2`.
fn gamma_moment(a: f64, beta: f64, p: u32, q: u32) -> f64 {
    let scale = if a + p as f64 > LOG_SPACE_ABOVE {
        (p as f64 * beta.ln() + ln_rising(a, p)).exp()
    } else {
        beta.powi(p as i32) * rising(a, p)
    };
    let shifted = a + p as f64;
    let l = digamma_pos(shifted) + beta.ln();
    scale
        * match q {
            0 => 1.0,
            1 => l,
            _ => trigamma_pos(shifted) + l * l,
        }
}

fn independent_product(params: &MGammaParams, factors: &[Factor]) -> f64 {
    factors
        .iter()
        .map(|f| gamma_moment(params.alpha()[f.index], params.beta(), f.power, f.log_power))
        .product()
}

// Calls `visit` with every composition of `t` into `parts` non-negative parts.
fn compositions(t: u32, parts: usize, prefix: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if prefix.len() + 1 == parts {
        prefix.push(t);
        visit(prefix);
        prefix.pop();
        return;
    }
    for c in 0..=t {
        prefix.push(c);
        compositions(t - c, parts, prefix, visit);
        prefix.pop();
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `E(∏ Zᵢ^pᵢ log^qᵢ Zᵢ · X_k^t)` under `MG_k(α, β)`, with `qᵢ ≤ 2` per
/// coordinate. The increments are independent Gamma variates; a power of
/// `X_k = Σ Zⱼ` alongside other factors is expanded multinomially.
pub fn mgamma_raw_moment(params: &MGammaParams, id: &MomentId) -> Result<f64> {
    check_family(id, Family::MGamma, params.k())?;
    if let Some(f) = id.factors().iter().find(|f| f.log_power > MAX_LOG_POWER) {
        return Err(Error::Catalog(format!(
            "{id}: logarithmic order {} of one coordinate is not in the catalog",
            f.log_power
        )));
    }
    let t = id.total_power();
    if t == 0 {
        return Ok(independent_product(params, id.factors()));
    }
    if id.factors().is_empty() {
        return Ok(gamma_moment(params.alpha0(), params.beta(), t, 0));
    }
    let k = params.k();
    let mut sum = 0.0;
    compositions(t, k, &mut Vec::with_capacity(k), &mut |c| {
        let coeff = factorial(t) / c.iter().map(|&ci| factorial(ci)).product::<f64>();
        let mut m = MomentId::one(Family::MGamma);
        for f in id.factors() {
            m = m.with(f.index, f.power, f.log_power);
        }
        for (j, &cj) in c.iter().enumerate() {
            m = m.with(j, cj, 0);
        }
        sum += coeff * independent_product(params, m.factors());
    });
    Ok(sum)
}

/// Raw moment under either family.
pub fn raw_moment(params: &Params, id: &MomentId) -> Result<f64> {
    match params {
        Params::Dirichlet(p) => dirichlet_raw_moment(p, id),
        Params::MGamma(p) => mgamma_raw_moment(p, id),
    }
}

/// `C(U, V) = E(UV) − E(U) E(V)` from the raw catalog.
pub fn covariance_from_raw(params: &Params, u: &MomentId, v: &MomentId) -> Result<f64> {
    let uv = u.product(v)?;
    Ok(raw_moment(params, &uv)? - raw_moment(params, u)? * raw_moment(params, v)?)
}
