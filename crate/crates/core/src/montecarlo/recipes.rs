use super::config::{linspace, SweepConfig};
use crate::error::{Error, Result};
use crate::estimators::{Method, SolverConfig};
use crate::model::Family;

/// Grid points of the finite-sample figures.
pub const METRIC_GRID_POINTS: usize = 8;
/// Grid points of the asymptotic-variance figures.
pub const AVAR_GRID_POINTS: usize = 25;
pub const DESK_REPLICATES: usize = 10_000;

const MGAMMA_METHODS: [Method; 5] = [Method::Me, Method::Same, Method::DirMe, Method::DirSame, Method::Mle];

fn config(family: Family, base: &[f64], param_index: usize, points: usize, methods: &[Method], m: usize, seed: u64) -> SweepConfig {
    SweepConfig {
        family,
        base: base.to_vec(),
        param_index,
        grid: linspace(0.2, 5.0, points),
        ns: vec![20, 50],
        m,
        methods: methods.to_vec(),
        seed,
        solver: SolverConfig::default(),
    }
}

/// Sweep configurations that regenerate the data of figure `figure`
/// (1 to 5). Figures 1, 3 and 4 are Monte Carlo sweeps with `m`
/// replicates; figures 2 and 5 are analytic and ignore `m` and `n`.
pub fn figure(figure: u8, m: usize, seed: u64) -> Result<Vec<SweepConfig>> {
    use Family::{Dirichlet, MGamma};
    let dir = [Method::Me, Method::Same, Method::Mle];
    let a = AVAR_GRID_POINTS;
    Ok(match figure {
        1 => vec![config(Dirichlet, &[1.0, 0.2, 1.0, 2.0, 5.0], 1, METRIC_GRID_POINTS, &dir, m, seed)],
        2 => vec![
            config(Dirichlet, &[1.0, 1.0, 5.0], 1, a, &dir, m, seed),
            config(Dirichlet, &[1.0, 0.2, 1.0, 2.0, 5.0], 1, a, &dir, m, seed),
        ],
        3 => vec![config(MGamma, &[1.0, 1.0, 2.0, 5.0, 1.0], 1, METRIC_GRID_POINTS, &MGAMMA_METHODS, m, seed)],
        4 => vec![config(MGamma, &[0.2, 1.0, 2.0, 5.0, 1.0], 5, METRIC_GRID_POINTS, &MGAMMA_METHODS, m, seed)],
        5 => vec![
            config(MGamma, &[1.0, 5.0, 1.0], 1, a, &MGAMMA_METHODS, m, seed),
            config(MGamma, &[1.0, 1.0, 2.0, 5.0, 1.0], 1, a, &MGAMMA_METHODS, m, seed),
            config(MGamma, &[1.0, 5.0, 1.0], 3, a, &MGAMMA_METHODS, m, seed),
            config(MGamma, &[0.2, 1.0, 2.0, 5.0, 1.0], 5, a, &MGAMMA_METHODS, m, seed),
        ],
        _ => return Err(Error::Config(format!("unknown figure {figure} (expected 1 to 5)"))),
    })
}

/// Whether figure `figure` is an analytic (asymptotic variance) figure.
pub fn is_analytic(figure: u8) -> bool {
    matches!(figure, 2 | 5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipes_validate() {
        for f in 1..=5 {
            for c in figure(f, DESK_REPLICATES, 1).unwrap() {
                c.validate().unwrap();
            }
        }
        assert!(figure(6, DESK_REPLICATES, 1).is_err());
        assert_eq!(figure(5, 100, 1).unwrap().len(), 4);
    }
}
