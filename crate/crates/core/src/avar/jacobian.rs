use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::model::{DirichletParams, MGammaParams, Params};
use crate::specialfn::{digamma_diff_pos, digamma_pos};

use super::maps::{estimator_map, moment_vector};

fn dirichlet_me(p: &DirichletParams) -> DMatrix<f64> {
    let (k, a0) = (p.k(), p.alpha0());
    let mut g = DMatrix::zeros(k, 2 * k);
    for (i, &a) in p.alpha().iter().enumerate() {
        let r = a0 / (a0 - a);
        g[(i, i)] = r * (2.0 * a0 + 1.0) * (a + 1.0);
        g[(i, k + i)] = -r * (a0 + 1.0).powi(2);
    }
    g
}

fn dirichlet_same(p: &DirichletParams) -> DMatrix<f64> {
    let (k, a0, alpha) = (p.k(), p.alpha0(), p.alpha());
    let km1 = (k - 1) as f64;
    let mut g = DMatrix::zeros(k, 3 * k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = a0 * alpha[i] * digamma_diff_pos(alpha[j], a0) / km1 + if i == j { a0 } else { 0.0 };
            g[(i, k + j)] = alpha[i] * alpha[j] / km1;
            g[(i, 2 * k + j)] = -a0 * alpha[i] / km1;
        }
    }
    g
}

fn mgamma_me(p: &MGammaParams) -> DMatrix<f64> {
    let (k, b, alpha) = (p.k(), p.beta(), p.alpha());
    let kf = k as f64;
    let mut g = DMatrix::zeros(k + 1, 2 * k);
    for j in 0..k {
        let aj = alpha[j];
        for i in 0..k {
            g[(i, j)] = alpha[i] / (kf * b) * (2.0 + 1.0 / aj) + if i == j { 1.0 / b } else { 0.0 };
            g[(i, k + j)] = -alpha[i] / (kf * aj * b * b);
        }
        g[(k, j)] = -(2.0 + 1.0 / aj) / kf;
        g[(k, k + j)] = 1.0 / (kf * aj * b);
    }
    g
}

fn mgamma_same(p: &MGammaParams) -> DMatrix<f64> {
    let (k, b, alpha) = (p.k(), p.beta(), p.alpha());
    let kf = k as f64;
    let mut g = DMatrix::zeros(k + 1, 3 * k);
    for j in 0..k {
        let aj = alpha[j];
        let psi = digamma_pos(aj) + b.ln();
        for i in 0..k {
            g[(i, j)] = alpha[i] / (kf * b) * psi + if i == j { 1.0 / b } else { 0.0 };
            g[(i, k + j)] = alpha[i] * aj / kf;
            g[(i, 2 * k + j)] = -alpha[i] / (kf * b);
        }
        g[(k, j)] = -psi / kf;
        g[(k, k + j)] = -aj * b / kf;
        g[(k, 2 * k + j)] = 1.0 / kf;
    }
    g
}

fn dirichlet_based(p: &MGammaParams, base: Method) -> Result<DMatrix<f64>> {
    let d = p
        .dirichlet()
        .ok_or_else(|| Error::InvalidParams("Dirichlet-based estimators need k >= 2".into()))?;
    let gd = if base == Method::DirMe { dirichlet_me(&d) } else { dirichlet_same(&d) };
    let (k, m) = (gd.nrows(), gd.ncols());
    let mut g = DMatrix::zeros(k + 1, m + 1);
    g.view_mut((0, 0), (k, m)).copy_from(&gd);
    let scale = -p.beta() / p.alpha0();
    for c in 0..m {
        g[(k, c)] = scale * gd.column(c).sum();
    }
    g[(k, m)] = 1.0 / p.alpha0();
    Ok(g)
}

/// Analytic Jacobian `G = ∂g/∂y` at `y = E h(X)` for the closed-form
/// estimators.
pub fn analytic_jacobian(method: Method, params: &Params) -> Result<DMatrix<f64>> {
    Ok(match (params, method) {
        (Params::Dirichlet(p), Method::Me) => dirichlet_me(p),
        (Params::Dirichlet(p), Method::Same) => dirichlet_same(p),
        (Params::MGamma(p), Method::Me) => mgamma_me(p),
        (Params::MGamma(p), Method::Same | Method::SameUnbiased) => mgamma_same(p),
        (Params::MGamma(p), Method::DirMe | Method::DirSame) => dirichlet_based(p, method)?,
        _ => {
            return Err(Error::Config(format!(
                "{method} has no closed-form Jacobian for the {} family",
                params.family()
            )))
        }
    })
}

/// Central-difference Jacobian of the estimator map at `E h(X)`, with a
/// step of `rel · max(|yᵢ|, 1e-3)` in each coordinate.
pub fn numeric_jacobian(method: Method, params: &Params, rel: f64) -> Result<DMatrix<f64>> {
    let method = if method == Method::SameUnbiased { Method::Same } else { method };
    let (family, k) = (params.family(), params.k());
    let y = moment_vector(method, params)?;
    let rows = estimator_map(method, family, k, &y)?.len();
    let mut jac = DMatrix::zeros(rows, y.len());
    for c in 0..y.len() {
        let h = rel * y[c].abs().max(1e-3);
        let mut up = y.clone();
        let mut dn = y.clone();
        up[c] += h;
        dn[c] -= h;
        let fu = estimator_map(method, family, k, &up)?;
        let fd = estimator_map(method, family, k, &dn)?;
        for r in 0..rows {
            jac[(r, c)] = (fu[r] - fd[r]) / (2.0 * h);
        }
    }
    Ok(jac)
}
