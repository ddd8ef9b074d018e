use rayon::prelude::*;

use super::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::model::{sample_dirichlet, sample_gamma_increments, Params, RngSpec};

/// Acceptance thresholds of a catalog check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckTolerance {
    /// Largest admissible `|z|` of a derived value against Monte Carlo.
    pub z_max: f64,
    /// Largest admissible relative gap between printed and derived values
    /// for entries that are not flagged.
    pub printed_rel: f64,
}

impl Default for CheckTolerance {
    fn default() -> Self {
        Self { z_max: 4.0, printed_rel: 1e-9 }
    }
}

/// Outcome of checking one catalog entry against simulated draws.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub kind: &'static str,
    pub printed: Option<f64>,
    pub derived: f64,
    pub mc: f64,
    pub se: f64,
    /// `(derived − mc) / se`.
    pub z: f64,
    /// `(printed − mc) / se`, where a printed form exists.
    pub z_printed: Option<f64>,
    pub flagged: bool,
    pub pass: bool,
}

/// Simulated draws with their logarithms, row-major.
struct Draws {
    k: usize,
    values: Vec<f64>,
    logs: Vec<f64>,
    totals: Vec<f64>,
}

impl Draws {
    fn new(params: &Params, n: usize, rng: RngSpec) -> Result<Self> {
        let (k, values) = match params {
            Params::Dirichlet(p) => (p.k(), sample_dirichlet(p, n, rng)?.into_vec()),
            // the increments are drawn directly so that log Z is not
            // distorted by differencing partial sums
            Params::MGamma(p) => (p.k(), sample_gamma_increments(p, n, rng)?),
        };
        let logs = values.iter().map(|v| v.ln()).collect();
        let totals = values.chunks_exact(k).map(|r| r.iter().sum()).collect();
        Ok(Self { k, values, logs, totals })
    }

    fn column(&self, id: &super::MomentId) -> Vec<f64> {
        self.values
            .chunks_exact(self.k)
            .zip(self.logs.chunks_exact(self.k))
            .zip(&self.totals)
            .map(|((v, l), &t)| id.eval(v, l, t))
            .collect()
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

// Mean and standard error of the mean.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn estimate(draws: &Draws, entry: &CatalogEntry) -> (f64, f64) {
    let u = draws.column(&entry.u);
    match &entry.v {
        None => mean_se(&u),
        Some(v) => {
            let v = draws.column(v);
            let (mu, mv) = (mean(&u), mean(&v));
            // the standard error follows from the influence terms of the
            // sample covariance
            let terms: Vec<f64> = u.iter().zip(&v).map(|(a, b)| (a - mu) * (b - mv)).collect();
            mean_se(&terms)
        }
    }
}

/// Compares every entry with a Monte Carlo estimate from `draws`
/// simulated observations. Entries are evaluated in parallel; the result
/// does not depend on the thread count.
pub fn check_catalog(
    params: &Params,
    entries: &[CatalogEntry],
    draws: usize,
    rng: RngSpec,
    tol: CheckTolerance,
) -> Result<Vec<CheckRow>> {
    if draws < 2 {
        return Err(Error::Config("a Monte Carlo check needs at least 2 draws".into()));
    }
    let sim = Draws::new(params, draws, rng)?;
    Ok(entries
        .par_iter()
        .map(|e| {
            let (mc, se) = estimate(&sim, e);
            let z = (e.derived - mc) / se;
            let z_printed = e.printed.map(|p| (p - mc) / se);
            let printed_ok = e.flagged || e.printed_discrepancy().is_none_or(|d| d <= tol.printed_rel);
            CheckRow {
                name: e.name(),
                kind: e.kind,
                printed: e.printed,
                derived: e.derived,
                mc,
                se,
                z,
                z_printed,
                flagged: e.flagged,
                pass: z.abs() <= tol.z_max && printed_ok,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DirichletParams, MGammaParams};
    use crate::moments::catalog;

    #[test]
    fn small_dirichlet_check_passes() {
        let p = Params::Dirichlet(DirichletParams::new(vec![2.0, 3.0]).unwrap());
        let entries = catalog(&p).unwrap();
        let rows = check_catalog(&p, &entries, 200_000, RngSpec::new(1, 0), CheckTolerance::default()).unwrap();
        assert_eq!(rows.len(), entries.len());
        for r in &rows {
            assert!(r.pass, "{} z = {}", r.name, r.z);
        }
    }

    #[test]
    fn corrupted_value_is_detected() {
        let p = Params::MGamma(MGammaParams::new(vec![2.0], 0.5).unwrap());
        let mut entries = catalog(&p).unwrap();
        entries[0].derived *= 1.05;
        let rows = check_catalog(&p, &entries, 200_000, RngSpec::new(2, 0), CheckTolerance::default()).unwrap();
        assert!(!rows[0].pass);
        assert!(rows[1..].iter().all(|r| r.pass));
    }

    #[test]
    fn typo_entry_is_adjudicated_by_simulation() {
        let p = Params::MGamma(MGammaParams::new(vec![2.0], 0.5).unwrap());
        let entries = catalog(&p).unwrap();
        let rows = check_catalog(&p, &entries, 1_000_000, RngSpec::new(3, 0), CheckTolerance::default()).unwrap();
        let r = rows.iter().find(|r| r.name == "C(Z1, Z1 log Z1)").unwrap();
        assert!(r.pass && r.z.abs() <= 4.0);
        assert!(r.z_printed.unwrap().abs() > 4.0, "printed form z = {:?}", r.z_printed);
    }

    #[test]
    fn deterministic() {
        let p = Params::Dirichlet(DirichletParams::new(vec![0.5, 1.0, 2.0]).unwrap());
        let entries = catalog(&p).unwrap();
        let a = check_catalog(&p, &entries[..10], 5000, RngSpec::new(4, 1), CheckTolerance::default()).unwrap();
        let b = check_catalog(&p, &entries[..10], 5000, RngSpec::new(4, 1), CheckTolerance::default()).unwrap();
        assert_eq!(a, b);
    }
}
