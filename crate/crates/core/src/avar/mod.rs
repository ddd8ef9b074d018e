//! Asymptotic covariance `Σ` of `√N (θ̃ − θ)` for every estimator.
//!
//! The closed-form estimators use the sandwich `G V Gᵀ` with `V = Cov h(X)`
//! assembled from the moment catalog. The MLEs invert the Fisher
//! information in closed form.

mod jacobian;
mod maps;

use nalgebra::{DMatrix, DVector};

pub use jacobian::{analytic_jacobian, numeric_jacobian};
pub use maps::{estimator_map, moment_functions, moment_vector};

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::model::{DirichletParams, MGammaParams, Params};
use crate::moments::covariance_from_raw;
use crate::specialfn::trigamma_pos;

/// How an asymptotic covariance was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Derivation {
    Sandwich { g: DMatrix<f64>, v: DMatrix<f64> },
    /// `information` is assembled from the moment catalog; the matrix
    /// itself comes from the closed-form inverse.
    InverseInformation { information: DMatrix<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvarMatrix {
    pub method: Method,
    pub params: Params,
    pub matrix: DMatrix<f64>,
    pub derivation: Derivation,
}

impl AvarMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Parameter labels in matrix order: `alpha1 … alphak [beta]`.
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = (1..=self.params.k()).map(|i| format!("alpha{i}")).collect();
        if self.dim() > self.params.k() {
            out.push("beta".into());
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.clone().symmetric_eigen().eigenvalues.min()
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }
}

/// `Cov h(X)` for the moment functions of `method`, one covariance per
/// pair taken from the raw-moment catalog. For the Dirichlet-based
/// estimators `W` and `X_k` are independent, so the off-diagonal block is
/// zero.
pub fn moment_covariance(method: Method, params: &Params) -> Result<DMatrix<f64>> {
    let hs = moment_functions(method, params.family(), params.k())?;
    let dirichlet_based = matches!(method, Method::DirMe | Method::DirSame);
    let dir = match params {
        Params::MGamma(p) if dirichlet_based => Some(Params::Dirichlet(
            p.dirichlet()
                .ok_or_else(|| Error::InvalidParams("Dirichlet-based estimators need k >= 2".into()))?,
        )),
        _ => None,
    };
    let m = hs.len();
    let mut v = DMatrix::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let c = match &dir {
                Some(_) if (a == m - 1) != (b == m - 1) => 0.0,
                Some(d) if b < m - 1 => covariance_from_raw(d, &hs[a], &hs[b])?,
                _ => covariance_from_raw(params, &hs[a], &hs[b])?,
            };
            v[(a, b)] = c;
            v[(b, a)] = c;
        }
    }
    Ok(v)
}

fn sandwich(method: Method, params: &Params) -> Result<AvarMatrix> {
    let g = analytic_jacobian(method, params)?;
    let v = moment_covariance(method, params)?;
    let s = &g * &v * g.transpose();
    let matrix = (&s + s.transpose()) * 0.5;
    Ok(AvarMatrix { method, params: params.clone(), matrix, derivation: Derivation::Sandwich { g, v } })
}

/// `(diag d − c 11ᵀ)⁻¹ = D⁻¹ + c uuᵀ / (1 − c Σ 1/dᵢ)` with `u = D⁻¹ 1`.
fn dirichlet_information_inverse(p: &DirichletParams) -> Result<DMatrix<f64>> {
    let u = DVector::from_iterator(p.k(), p.alpha().iter().map(|&a| 1.0 / trigamma_pos(a)));
    let c = trigamma_pos(p.alpha0());
    let denom = 1.0 - c * u.sum();
    if !(denom > 0.0) {
        return Err(Error::Numeric("Dirichlet information is not positive definite".into()));
    }
    Ok(DMatrix::from_diagonal(&u) + &u * u.transpose() * (c / denom))
}

/// Block inverse of `[[diag d, b 1], [b 1ᵀ, c]]` through the Schur
/// complement `s = c − b² Σ 1/dᵢ` of the scalar corner.
fn mgamma_information_inverse(p: &MGammaParams) -> Result<DMatrix<f64>> {
    let k = p.k();
    let beta = p.beta();
    let u = DVector::from_iterator(k, p.alpha().iter().map(|&a| 1.0 / trigamma_pos(a)));
    let b = 1.0 / beta;
    let s = (p.alpha0() - u.sum()) * b * b;
    if !(s > 0.0) {
        return Err(Error::Numeric("multivariate Gamma information is not positive definite".into()));
    }
    let mut inv = DMatrix::zeros(k + 1, k + 1);
    let top = DMatrix::from_diagonal(&u) + &u * u.transpose() * (b * b / s);
    inv.view_mut((0, 0), (k, k)).copy_from(&top);
    for i in 0..k {
        inv[(i, k)] = -b * u[i] / s;
        inv[(k, i)] = inv[(i, k)];
    }
    inv[(k, k)] = 1.0 / s;
    Ok(inv)
}

/// Fisher information of one observation, assembled from the catalog
/// covariances of the sufficient statistic. For the multivariate Gamma
/// family it is expressed in `(α, β)`.
pub fn fisher_information(params: &Params) -> Result<DMatrix<f64>> {
    let mut info = moment_covariance(Method::Mle, params)?;
    if let Params::MGamma(p) = params {
        let k = p.k();
        let s = 1.0 / (p.beta() * p.beta());
        for i in 0..=k {
            info[(i, k)] *= s;
            info[(k, i)] *= s;
        }
    }
    Ok(info)
}

fn inverse_information(params: &Params) -> Result<AvarMatrix> {
    let matrix = match params {
        Params::Dirichlet(p) => dirichlet_information_inverse(p)?,
        Params::MGamma(p) => mgamma_information_inverse(p)?,
    };
    let information = fisher_information(params)?;
    Ok(AvarMatrix {
        method: Method::Mle,
        params: params.clone(),
        matrix,
        derivation: Derivation::InverseInformation { information },
    })
}

/// Asymptotic covariance of `method` at `params`. The bias-corrected SAME
/// shares its limit with the plain one.
pub fn avar(method: Method, params: &Params) -> Result<AvarMatrix> {
    if !method.supports(params.family()) {
        return Err(Error::Config(format!(
            "estimator {method} is not defined for the {} family",
            params.family()
        )));
    }
    match method {
        Method::Mle => inverse_information(params),
        Method::SameUnbiased => {
            let mut a = sandwich(Method::Same, params)?;
            a.method = Method::SameUnbiased;
            Ok(a)
        }
        _ => sandwich(method, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn dir(a: &[f64]) -> Params {
        Params::Dirichlet(DirichletParams::new(a.to_vec()).unwrap())
    }

    fn mg(a: &[f64], b: f64) -> Params {
        Params::MGamma(MGammaParams::new(a.to_vec(), b).unwrap())
    }

    #[test]
    fn uniform_dirichlet_mle() {
        let a = avar(Method::Mle, &dir(&[1.0, 1.0])).unwrap();
        assert!((a.matrix[(0, 0)] - 1.712152716138406).abs() < 1e-12);
        assert!((a.matrix[(0, 1)] - 1.104225614284379).abs() < 1e-12);
        let sym = avar(Method::Mle, &dir(&[2.5, 2.5, 2.5])).unwrap();
        let m = &sym.matrix;
        assert!((m[(0, 0)] - m[(2, 2)]).abs() < 1e-14 && (m[(0, 1)] - m[(1, 2)]).abs() < 1e-14);
    }

    #[test]
    fn exponential_mle() {
        let a = avar(Method::Mle, &mg(&[1.0], 1.0)).unwrap();
        let (d, o) = (1.5505460967304304, -1.5505460967304304);
        let want = [[d, o], [o, d + 1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((a.matrix[(i, j)] - want[i][j]).abs() < 1e-12);
            }
        }
        assert_eq!(a.labels(), vec!["alpha1", "beta"]);
    }

    #[test]
    fn mle_inverse_times_information_is_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let k = rng.random_range(1..=6);
            let alpha: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..10.0)).collect();
            let mut cases = vec![mg(&alpha, rng.random_range(0.2..5.0))];
            if k >= 2 {
                cases.push(dir(&alpha));
            }
            for p in cases {
                let a = avar(Method::Mle, &p).unwrap();
                let Derivation::InverseInformation { information } = &a.derivation else { panic!() };
                let prod = &a.matrix * information;
                let err = (prod - DMatrix::identity(a.dim(), a.dim())).amax();
                assert!(err < 1e-9, "{:?}: {err}", p.to_vec());
            }
        }
    }

    #[test]
    fn matrices_are_symmetric_and_positive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let k = rng.random_range(2..=5);
            let alpha: Vec<f64> = (0..k).map(|_| rng.random_range(0.3..5.0)).collect();
            let beta = rng.random_range(0.3..5.0);
            for p in [dir(&alpha), mg(&alpha, beta)] {
                for method in Method::for_family(p.family()) {
                    let a = avar(method, &p).unwrap();
                    assert_eq!(a.asymmetry(), 0.0);
                    assert!(a.min_eigenvalue() > -1e-10 * a.matrix.amax(), "{method} {:?}", p.to_vec());
                }
            }
        }
    }

    #[test]
    fn mgamma_moment_covariance_blocks() {
        let p = mg(&[0.5, 2.0, 3.0], 1.5);
        let v = moment_covariance(Method::Same, &p).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                if a % 3 != b % 3 {
                    assert_eq!(v[(a, b)], 0.0, "({a}, {b})");
                }
            }
        }
        let v = moment_covariance(Method::DirSame, &p).unwrap();
        for a in 0..9 {
            assert_eq!(v[(a, 9)], 0.0);
        }
        assert!((v[(9, 9)] - 5.5 * 1.5 * 1.5).abs() < 1e-12);
    }

    #[test]
    fn mle_is_most_efficient() {
        let p = mg(&[0.7, 2.0, 4.0], 2.0);
        let mle = avar(Method::Mle, &p).unwrap();
        for method in [Method::Me, Method::Same, Method::DirMe, Method::DirSame] {
            let other = avar(method, &p).unwrap();
            let gap = &other.matrix - &mle.matrix;
            assert!(gap.symmetric_eigen().eigenvalues.min() > -1e-8, "{method}");
        }
    }

    #[test]
    fn unbiased_same_shares_limit() {
        let p = mg(&[1.0, 2.0], 1.0);
        let a = avar(Method::Same, &p).unwrap();
        let b = avar(Method::SameUnbiased, &p).unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(b.method, Method::SameUnbiased);
    }

    #[test]
    fn foreign_method_rejected() {
        assert!(avar(Method::DirMe, &dir(&[1.0, 1.0])).is_err());
    }
}
