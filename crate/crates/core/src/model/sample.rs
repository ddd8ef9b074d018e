use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `|Σx − 1|` for a Dirichlet observation.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Looser tolerance accepted when ingested rows are renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Dirichlet,
    #[serde(rename = "mgamma")]
    MGamma,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Dirichlet => "dirichlet",
            Family::MGamma => "mgamma",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Family::Dirichlet),
            "mgamma" => Ok(Family::MGamma),
            other => Err(Error::Config(format!("unknown family `{other}`"))),
        }
    }
}

/// Checks one observation against the support of `family`.
pub fn check_point(family: Family, x: &[f64]) -> std::result::Result<(), String> {
    match family {
        Family::Dirichlet => {
            if x.len() < 2 {
                return Err(format!("a Dirichlet observation needs at least 2 coordinates, got {}", x.len()));
            }
            if let Some((j, v)) = x.iter().enumerate().find(|(_, v)| !(**v > 0.0 && **v < 1.0)) {
                return Err(format!("x{} = {v} is outside the open interval (0, 1)", j + 1));
            }
            let sum: f64 = x.iter().sum();
            if (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(format!("coordinates sum to {sum}, not 1"));
            }
        }
        Family::MGamma => {
            if x.is_empty() {
                return Err("empty observation".into());
            }
            if !(x[0] > 0.0 && x[0].is_finite()) {
                return Err(format!("x1 = {} must be positive", x[0]));
            }
            if let Some(j) = x.windows(2).position(|w| !(w[1] > w[0] && w[1].is_finite())) {
                return Err(format!(
                    "coordinates must be strictly increasing, but x{} = {} and x{} = {}",
                    j + 1,
                    x[j],
                    j + 2,
                    x[j + 1]
                ));
            }
        }
    }
    Ok(())
}

/// An `N × k` matrix of observations whose rows all lie in the support of
/// one family. Stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    family: Family,
    k: usize,
    data: Vec<f64>,
}

impl SampleMatrix {
    /// Validates every row against the support of `family`.
    pub fn new(family: Family, k: usize, data: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSample("zero columns".into()));
        }
        if data.len() % k != 0 {
            return Err(Error::InvalidSample(format!(
                "{} values do not fill rows of width {k}",
                data.len()
            )));
        }
        for (row, x) in data.chunks_exact(k).enumerate() {
            check_point(family, x).map_err(|reason| Error::Support { row: row + 1, reason })?;
        }
        Ok(Self { family, k, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(family: Family, rows: &[R]) -> Result<Self> {
        let k = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(k * rows.len());
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != k {
                return Err(Error::InvalidSample(format!(
                    "row {} has {} columns, expected {k}",
                    i + 1,
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(family, k, data)
    }

    /// Dirichlet rows whose sums are within [`RENORMALIZE_TOL`] of one are
    /// rescaled onto the simplex before validation.
    pub fn dirichlet_renormalized(k: usize, mut data: Vec<f64>) -> Result<Self> {
        if k == 0 || data.len() % k != 0 {
            return Self::new(Family::Dirichlet, k, data);
        }
        for (row, x) in data.chunks_exact_mut(k).enumerate() {
            let sum: f64 = x.iter().sum();
            if (sum - 1.0).abs() > RENORMALIZE_TOL {
                return Err(Error::Support {
                    row: row + 1,
                    reason: format!("coordinates sum to {sum}, too far from 1 to renormalize"),
                });
            }
            x.iter_mut().for_each(|v| *v /= sum);
        }
        Self::new(Family::Dirichlet, k, data)
    }

    /// Skips validation; callers construct rows that are in the support.
    pub(crate) fn new_unchecked(family: Family, k: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len() % k, 0);
        Self { family, k, data }
    }

    #[inline]
    pub fn family(&self) -> Family {
        self.family
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.data.len() / self.k
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.k)
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Per-column means of `f(x_ij)`, divided by `N`.
    pub fn column_means(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut acc = vec![0.0; self.k];
        for row in self.rows() {
            for (a, &x) in acc.iter_mut().zip(row) {
                *a += f(x);
            }
        }
        let n = self.n() as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        acc
    }

    /// Every coordinate multiplied by `c > 0`; only meaningful for the
    /// multivariate Gamma family, whose support is a cone.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if self.family != Family::MGamma {
            return Err(Error::InvalidSample("only multivariate Gamma samples can be rescaled".into()));
        }
        Self::new(self.family, self.k, self.data.iter().map(|x| x * c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_support() {
        assert!(SampleMatrix::from_rows(Family::Dirichlet, &[[0.3, 0.7]]).is_ok());
        let err = SampleMatrix::from_rows(Family::Dirichlet, &[[0.3, 0.7], [0.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::Support { row: 2, .. }));
        let err = SampleMatrix::from_rows(Family::Dirichlet, &[[0.5, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::Support { row: 1, .. }));
        assert!(SampleMatrix::from_rows(Family::Dirichlet, &[[0.3, 0.7 + 1e-10]]).is_ok());
        assert!(SampleMatrix::from_rows(Family::Dirichlet, &[[0.3, 0.7 + 1e-8]]).is_err());
        assert!(SampleMatrix::from_rows(Family::Dirichlet, &[[1.0]]).is_err());
    }

    #[test]
    fn renormalization() {
        let s = SampleMatrix::dirichlet_renormalized(2, vec![0.3, 0.7 + 5e-7]).unwrap();
        assert!((s.row(0).iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(SampleMatrix::dirichlet_renormalized(2, vec![0.3, 0.71]).is_err());
        // boundary values are rejected even after rescaling
        assert!(SampleMatrix::dirichlet_renormalized(2, vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn mgamma_support() {
        assert!(SampleMatrix::from_rows(Family::MGamma, &[[1.0, 3.0, 6.0]]).is_ok());
        assert!(SampleMatrix::from_rows(Family::MGamma, &[[2.0, 1.0]]).is_err());
        assert!(SampleMatrix::from_rows(Family::MGamma, &[[1.0, 1.0]]).is_err());
        assert!(SampleMatrix::from_rows(Family::MGamma, &[[-1.0, 1.0]]).is_err());
        assert!(SampleMatrix::from_rows(Family::MGamma, &[[0.5]]).is_ok());
    }

    #[test]
    fn ragged_rows() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![1.0]];
        assert!(SampleMatrix::from_rows(Family::MGamma, &rows).is_err());
    }

    #[test]
    fn column_means_divide_by_n() {
        let s = SampleMatrix::from_rows(Family::Dirichlet, &[[0.25, 0.75], [0.75, 0.25]]).unwrap();
        assert_eq!(s.column_means(|x| x), vec![0.5, 0.5]);
        assert_eq!(s.column_means(|x| x * x), vec![0.3125, 0.3125]);
    }
}
