use crate::model::{delta_row, SampleMatrix};

/// Divide-by-N sample moments of the coordinates `V` of a sample: means of
/// `V` and `log V`, and the centered `var(V)` and `cov(V, log V)`.
#[derive(Debug, Clone, PartialEq)]
struct Moments {
    mean: Vec<f64>,
    var: Vec<f64>,
    mean_log: Vec<f64>,
    cov_log: Vec<f64>,
}

fn moments<'a>(k: usize, n: usize, rows: impl Iterator<Item = &'a [f64]> + Clone) -> Moments {
    let nf = n as f64;
    let mut mean = vec![0.0; k];
    let mut mean_log = vec![0.0; k];
    for row in rows.clone() {
        for j in 0..k {
            mean[j] += row[j];
            mean_log[j] += row[j].ln();
        }
    }
    mean.iter_mut().chain(mean_log.iter_mut()).for_each(|m| *m /= nf);
    let mut var = vec![0.0; k];
    let mut cov_log = vec![0.0; k];
    for row in rows {
        for j in 0..k {
            let d = row[j] - mean[j];
            var[j] += d * d;
            cov_log[j] += d * (row[j].ln() - mean_log[j]);
        }
    }
    var.iter_mut().chain(cov_log.iter_mut()).for_each(|m| *m /= nf);
    Moments { mean, var, mean_log, cov_log }
}

/// Sample moments of a Dirichlet sample used by its estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSummary {
    pub n: usize,
    /// `mean(Xᵢ)`.
    pub mean: Vec<f64>,
    /// `mean(Xᵢ²) − mean(Xᵢ)²`.
    pub var: Vec<f64>,
    /// `mean(log Xᵢ)`.
    pub mean_log: Vec<f64>,
    /// `mean(Xᵢ log Xᵢ) − mean(Xᵢ) mean(log Xᵢ)`.
    pub cov_x_log: Vec<f64>,
}

impl DirichletSummary {
    pub fn new(sample: &SampleMatrix) -> Self {
        let m = moments(sample.k(), sample.n(), sample.as_slice().chunks_exact(sample.k()));
        Self { n: sample.n(), mean: m.mean, var: m.var, mean_log: m.mean_log, cov_x_log: m.cov_log }
    }

    pub fn k(&self) -> usize {
        self.mean.len()
    }
}

/// Sample moments of the increments `Z = ΔX` of a multivariate Gamma
/// sample, plus the mean of `X_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSummary {
    pub n: usize,
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
    pub mean_log: Vec<f64>,
    /// `mean(Zᵢ log Zᵢ) − mean(Zᵢ) mean(log Zᵢ)`.
    pub cov_z_log: Vec<f64>,
    /// `mean(X_k)`.
    pub mean_total: f64,
}

impl GammaSummary {
    pub fn new(sample: &SampleMatrix) -> Self {
        let k = sample.k();
        let z: Vec<f64> = sample.rows().flat_map(delta_row).collect();
        let m = moments(k, sample.n(), z.chunks_exact(k));
        let mean_total = sample.rows().map(|r| r[k - 1]).sum::<f64>() / sample.n() as f64;
        Self { n: sample.n(), mean: m.mean, var: m.var, mean_log: m.mean_log, cov_z_log: m.cov_log, mean_total }
    }

    pub fn k(&self) -> usize {
        self.mean.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Family;

    #[test]
    fn dirichlet_summary_of_two_points() {
        let s = SampleMatrix::from_rows(Family::Dirichlet, &[[0.25, 0.75], [0.75, 0.25]]).unwrap();
        let m = DirichletSummary::new(&s);
        assert_eq!(m.mean, vec![0.5, 0.5]);
        assert_eq!(m.var, vec![0.0625, 0.0625]);
        let half_gap = (0.75f64.ln() - 0.25f64.ln()) / 2.0;
        assert!((m.cov_x_log[0] - 0.25 * half_gap).abs() < 1e-16);
    }

    #[test]
    fn gamma_summary_uses_increments() {
        let s = SampleMatrix::from_rows(Family::MGamma, &[[1.0, 3.0], [2.0, 4.0]]).unwrap();
        let m = GammaSummary::new(&s);
        assert_eq!(m.mean, vec![1.5, 2.0]);
        assert_eq!(m.var, vec![0.25, 0.0]);
        assert_eq!(m.cov_z_log[1], 0.0);
        assert_eq!(m.mean_total, 3.5);
    }
}
