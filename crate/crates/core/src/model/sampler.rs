use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::params::{DirichletParams, MGammaParams};
use super::rng::RngSpec;
use super::sample::{Family, SampleMatrix};
use crate::error::{Error, Result};

fn gammas(alpha: &[f64], scale: f64) -> Vec<Gamma<f64>> {
    alpha
        .iter()
        .map(|&a| Gamma::new(a, scale).expect("validated shape and scale"))
        .collect()
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Config("sample size must be at least 1".into()));
    }
    Ok(())
}

/// Keeps a normalized coordinate inside the open unit interval when the
/// other coordinates are below the rounding threshold.
#[inline]
pub(crate) fn clamp_open_unit(x: f64) -> f64 {
    x.clamp(f64::MIN_POSITIVE, 1.0f64.next_down())
}

pub(crate) fn fill_dirichlet_row<R: Rng + ?Sized>(dists: &[Gamma<f64>], rng: &mut R, row: &mut [f64]) {
    let mut sum = 0.0;
    for (x, d) in row.iter_mut().zip(dists) {
        *x = d.sample(rng);
        sum += *x;
    }
    row.iter_mut().for_each(|x| *x = clamp_open_unit(*x / sum));
}

/// `n` draws from `D_k(α)` by normalizing independent `G(αᵢ, 1)` variates.
pub fn sample_dirichlet(params: &DirichletParams, n: usize, rng: RngSpec) -> Result<SampleMatrix> {
    check_count(n)?;
    let k = params.k();
    let dists = gammas(params.alpha(), 1.0);
    let mut rng = rng.rng();
    let mut data = vec![0.0; n * k];
    for row in data.chunks_exact_mut(k) {
        fill_dirichlet_row(&dists, &mut rng, row);
    }
    Ok(SampleMatrix::new_unchecked(Family::Dirichlet, k, data))
}

pub(crate) fn fill_mgamma_row<R: Rng + ?Sized>(dists: &[Gamma<f64>], rng: &mut R, row: &mut [f64]) {
    let mut acc = 0.0f64;
    for (x, d) in row.iter_mut().zip(dists) {
        let next = acc + d.sample(rng);
        // an increment below half an ulp of the running sum still moves it
        acc = if next > acc { next } else { acc.next_up() };
        *x = acc;
    }
}

/// `n` draws from `MG_k(α, β)` as cumulative sums of independent
/// `G(αᵢ, β)` increments.
pub fn sample_mgamma(params: &MGammaParams, n: usize, rng: RngSpec) -> Result<SampleMatrix> {
    check_count(n)?;
    let k = params.k();
    let dists = gammas(params.alpha(), params.beta());
    let mut rng = rng.rng();
    let mut data = vec![0.0; n * k];
    for row in data.chunks_exact_mut(k) {
        fill_mgamma_row(&dists, &mut rng, row);
    }
    Ok(SampleMatrix::new_unchecked(Family::MGamma, k, data))
}

/// `n` rows of the independent increments `Z ~ ∏ G(αᵢ, β)` directly,
/// without forming partial sums. Row-major, `n × k`.
pub fn sample_gamma_increments(params: &MGammaParams, n: usize, rng: RngSpec) -> Result<Vec<f64>> {
    check_count(n)?;
    let dists = gammas(params.alpha(), params.beta());
    let mut rng = rng.rng();
    let mut data = Vec::with_capacity(n * params.k());
    for _ in 0..n {
        data.extend(dists.iter().map(|d| d.sample(&mut rng)));
    }
    Ok(data)
}
