use super::sample::{Family, SampleMatrix};
use super::sampler::clamp_open_unit;
use crate::error::{Error, Result};

/// First differences `(x₁, x₂ − x₁, …, x_k − x_{k−1})` of one row.
pub fn delta_row(x: &[f64]) -> impl Iterator<Item = f64> + '_ {
    x.iter().scan(0.0, |prev, &xi| {
        let z = xi - *prev;
        *prev = xi;
        Some(z)
    })
}

fn require_mgamma(sample: &SampleMatrix) -> Result<()> {
    if sample.family() != Family::MGamma {
        return Err(Error::InvalidSample(format!(
            "expected a multivariate Gamma sample, got {}",
            sample.family()
        )));
    }
    Ok(())
}

/// The increments `Z = ΔX`, row-major `N × k`. Every entry is positive
/// because validated rows are strictly increasing.
pub fn delta_transform(sample: &SampleMatrix) -> Result<Vec<f64>> {
    require_mgamma(sample)?;
    Ok(sample.rows().flat_map(delta_row).collect())
}

/// The projection `W = ΔX / X_k` onto the simplex, which is `D_k(α)`
/// distributed and independent of `X_k`.
pub fn dirichlet_projection(sample: &SampleMatrix) -> Result<SampleMatrix> {
    require_mgamma(sample)?;
    let k = sample.k();
    if k < 2 {
        return Err(Error::InvalidSample("projection onto the simplex needs k >= 2".into()));
    }
    let mut data = Vec::with_capacity(sample.as_slice().len());
    for row in sample.rows() {
        let total = row[k - 1];
        data.extend(delta_row(row).map(|z| clamp_open_unit(z / total)));
    }
    SampleMatrix::new(Family::Dirichlet, k, data)
}
