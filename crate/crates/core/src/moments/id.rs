use std::fmt;

use crate::error::{Error, Result};
use crate::model::Family;

/// One factor `Vᵢ^power · log^log_power Vᵢ`, where `V` is the observation
/// `X` for the Dirichlet family and the increment `Z = ΔX` for the
/// multivariate Gamma family. `index` is zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub index: usize,
    pub power: u32,
    pub log_power: u32,
}

/// A monomial moment `E(∏ Vᵢ^pᵢ log^qᵢ Vᵢ · X_k^t)`. The total `X_k^t`
/// exists only for the multivariate Gamma family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MomentId {
    family: Family,
    factors: Vec<Factor>,
    total_power: u32,
}

impl MomentId {
    /// The constant monomial 1.
    pub fn one(family: Family) -> Self {
        Self { family, factors: Vec::new(), total_power: 0 }
    }

    /// `Vᵢ^power log^log_power Vᵢ`.
    pub fn factor(family: Family, index: usize, power: u32, log_power: u32) -> Self {
        Self::one(family).with(index, power, log_power)
    }

    /// `Vᵢ^m`.
    pub fn pow(family: Family, index: usize, m: u32) -> Self {
        Self::factor(family, index, m, 0)
    }

    /// `log Vᵢ`.
    pub fn log(family: Family, index: usize) -> Self {
        Self::factor(family, index, 0, 1)
    }

    /// `X_k^t` of a multivariate Gamma observation.
    pub fn total(t: u32) -> Self {
        Self { family: Family::MGamma, factors: Vec::new(), total_power: t }
    }

    /// Multiplies in another factor on coordinate `index`.
    pub fn with(mut self, index: usize, power: u32, log_power: u32) -> Self {
        match self.factors.binary_search_by_key(&index, |f| f.index) {
            Ok(pos) => {
                self.factors[pos].power += power;
                self.factors[pos].log_power += log_power;
            }
            Err(pos) => self.factors.insert(pos, Factor { index, power, log_power }),
        }
        self.factors.retain(|f| f.power > 0 || f.log_power > 0);
        self
    }

    pub fn product(&self, other: &MomentId) -> Result<MomentId> {
        if self.family != other.family {
            return Err(Error::Catalog(format!("cannot multiply a {} moment by a {} moment", self.family, other.family)));
        }
        let mut out = self.clone();
        for f in &other.factors {
            out = out.with(f.index, f.power, f.log_power);
        }
        out.total_power += other.total_power;
        Ok(out)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Factors sorted by coordinate, none of them trivial.
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn total_power(&self) -> u32 {
        self.total_power
    }

    pub fn log_degree(&self) -> u32 {
        self.factors.iter().map(|f| f.log_power).sum()
    }

    pub(crate) fn check_indices(&self, k: usize) -> Result<()> {
        match self.factors.iter().find(|f| f.index >= k) {
            Some(f) => Err(Error::Catalog(format!("coordinate {} is out of range for k = {k}", f.index + 1))),
            None => Ok(()),
        }
    }

    /// Value of the monomial at one observation, given its coordinates,
    /// their logarithms, and (multivariate Gamma) the total `X_k`.
    #[inline]
    pub fn eval(&self, v: &[f64], log_v: &[f64], total: f64) -> f64 {
        let mut acc = 1.0;
        for f in &self.factors {
            if f.power > 0 {
                acc *= v[f.index].powi(f.power as i32);
            }
            if f.log_power > 0 {
                acc *= log_v[f.index].powi(f.log_power as i32);
            }
        }
        if self.total_power > 0 {
            acc *= total.powi(self.total_power as i32);
        }
        acc
    }
}

fn sup(p: u32) -> String {
    if p == 1 { String::new() } else { format!("^{p}") }
}

impl fmt::Display for MomentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.family {
            Family::Dirichlet => "X",
            Family::MGamma => "Z",
        };
        let mut parts = Vec::new();
        for fac in &self.factors {
            if fac.power > 0 {
                parts.push(format!("{var}{}{}", fac.index + 1, sup(fac.power)));
            }
        }
        if self.total_power > 0 {
            parts.push(format!("X_k{}", sup(self.total_power)));
        }
        for fac in &self.factors {
            if fac.log_power > 0 {
                parts.push(format!("log{} {var}{}", sup(fac.log_power), fac.index + 1));
            }
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: Family = Family::Dirichlet;

    #[test]
    fn display_names() {
        assert_eq!(MomentId::pow(D, 0, 2).to_string(), "X1^2");
        assert_eq!(MomentId::factor(D, 1, 1, 1).to_string(), "X2 log X2");
        assert_eq!(MomentId::factor(D, 0, 1, 0).with(1, 1, 1).with(0, 0, 1).to_string(), "X1 X2 log X1 log X2");
        assert_eq!(MomentId::factor(Family::MGamma, 2, 0, 2).to_string(), "log^2 Z3");
        assert_eq!(MomentId::total(2).to_string(), "X_k^2");
        assert_eq!(MomentId::one(D).to_string(), "1");
    }

    #[test]
    fn products_merge_factors() {
        let u = MomentId::factor(D, 0, 1, 1);
        let p = u.product(&u).unwrap();
        assert_eq!(p, MomentId::factor(D, 0, 2, 2));
        assert_eq!(p.log_degree(), 2);
        assert!(u.product(&MomentId::total(1)).is_err());
        assert_eq!(MomentId::one(D).with(3, 0, 0).factors().len(), 0);
    }

    #[test]
    fn evaluation() {
        let x = [0.2, 0.8];
        let lx = [0.2f64.ln(), 0.8f64.ln()];
        let m = MomentId::factor(D, 0, 2, 0).with(1, 0, 1);
        assert!((m.eval(&x, &lx, 0.0) - 0.04 * 0.8f64.ln()).abs() < 1e-16);
        assert_eq!(MomentId::total(2).eval(&[1.0], &[0.0], 3.0), 9.0);
    }
}
