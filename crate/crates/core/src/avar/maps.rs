use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::model::{Family, Params};
use crate::moments::{raw_moment, MomentId};

const D: Family = Family::Dirichlet;
const G: Family = Family::MGamma;

/// The moment functions `h` behind an estimator, as monomials. For the
/// Dirichlet-based estimators the first block is evaluated on the
/// projection `W` (a Dirichlet vector) and the last entry is `X_k`.
pub fn moment_functions(method: Method, family: Family, k: usize) -> Result<Vec<MomentId>> {
    let block = |f: Family, p: u32, q: u32| (0..k).map(move |i| MomentId::factor(f, i, p, q));
    Ok(match (family, method) {
        (Family::Dirichlet, Method::Me) => block(D, 1, 0).chain(block(D, 2, 0)).collect(),
        (Family::Dirichlet, Method::Same) => block(D, 1, 0).chain(block(D, 0, 1)).chain(block(D, 1, 1)).collect(),
        (Family::Dirichlet, Method::Mle) => block(D, 0, 1).collect(),
        (Family::MGamma, Method::Me) => block(G, 1, 0).chain(block(G, 2, 0)).collect(),
        (Family::MGamma, Method::Same | Method::SameUnbiased) => {
            block(G, 1, 0).chain(block(G, 0, 1)).chain(block(G, 1, 1)).collect()
        }
        (Family::MGamma, Method::Mle) => block(G, 0, 1).chain(std::iter::once(MomentId::total(1))).collect(),
        (Family::MGamma, Method::DirMe) => {
            block(D, 1, 0).chain(block(D, 2, 0)).chain(std::iter::once(MomentId::total(1))).collect()
        }
        (Family::MGamma, Method::DirSame) => block(D, 1, 0)
            .chain(block(D, 0, 1))
            .chain(block(D, 1, 1))
            .chain(std::iter::once(MomentId::total(1)))
            .collect(),
        _ => return Err(Error::Config(format!("estimator {method} is not defined for the {family} family"))),
    })
}

/// `μ = E h(X)` at the given parameters.
pub fn moment_vector(method: Method, params: &Params) -> Result<Vec<f64>> {
    let hs = moment_functions(method, params.family(), params.k())?;
    let dir = match params {
        Params::MGamma(p) if matches!(method, Method::DirMe | Method::DirSame) => {
            Some(Params::Dirichlet(p.dirichlet().ok_or_else(|| {
                Error::InvalidParams("Dirichlet-based estimators need k >= 2".into())
            })?))
        }
        _ => None,
    };
    hs.iter()
        .map(|h| match (&dir, h.family()) {
            (Some(d), Family::Dirichlet) => raw_moment(d, h),
            _ => raw_moment(params, h),
        })
        .collect()
}

fn dirichlet_me_map(k: usize, y: &[f64]) -> Vec<f64> {
    (0..k).map(|i| y[i] * (y[i] - y[k + i]) / (y[k + i] - y[i] * y[i])).collect()
}

fn dirichlet_same_map(k: usize, y: &[f64]) -> Vec<f64> {
    let c: f64 = (0..k).map(|j| y[2 * k + j] - y[j] * y[k + j]).sum();
    (0..k).map(|i| (k - 1) as f64 * y[i] / c).collect()
}

fn with_scale(k: usize, y: &[f64], beta: f64) -> Vec<f64> {
    (0..k).map(|i| y[i] / beta).chain(std::iter::once(beta)).collect()
}

/// The map `g` with `θ̃ = g(mean h(X))` for the closed-form estimators.
/// The MLEs have no explicit map and are rejected.
pub fn estimator_map(method: Method, family: Family, k: usize, y: &[f64]) -> Result<Vec<f64>> {
    let want = moment_functions(method, family, k)?.len();
    if y.len() != want {
        return Err(Error::Config(format!("{method} moment vector has {want} entries, got {}", y.len())));
    }
    let kf = k as f64;
    Ok(match (family, method) {
        (Family::Dirichlet, Method::Me) => dirichlet_me_map(k, y),
        (Family::Dirichlet, Method::Same) => dirichlet_same_map(k, y),
        (Family::MGamma, Method::Me) => {
            let beta = (0..k).map(|j| (y[k + j] - y[j] * y[j]) / y[j]).sum::<f64>() / kf;
            with_scale(k, y, beta)
        }
        (Family::MGamma, Method::Same) => {
            let beta = (0..k).map(|j| y[2 * k + j] - y[j] * y[k + j]).sum::<f64>() / kf;
            with_scale(k, y, beta)
        }
        (Family::MGamma, Method::DirMe | Method::DirSame) => {
            let (inner, last) = y.split_at(y.len() - 1);
            let mut alpha = if method == Method::DirMe {
                dirichlet_me_map(k, inner)
            } else {
                dirichlet_same_map(k, inner)
            };
            let a0: f64 = alpha.iter().sum();
            alpha.push(last[0] / a0);
            alpha
        }
        _ => return Err(Error::Config(format!("{method} has no closed-form estimator map"))),
    })
}
