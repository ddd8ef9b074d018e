use super::id::MomentId;
use super::raw::{covariance_from_raw, raw_moment, rising};
use crate::error::Result;
use crate::model::{DirichletParams, Family, MGammaParams, Params};
use crate::specialfn::{digamma_diff_pos, digamma_pos, trigamma_diff_pos, trigamma_pos};

/// One closed-form catalog entry: a raw moment `E(U)` or a covariance
/// `C(U, V)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    /// Formula family with generic indices, e.g. `C(Xi, Xj log Xj)`.
    pub kind: &'static str,
    pub u: MomentId,
    pub v: Option<MomentId>,
    /// Value of the closed form as printed, where one exists.
    pub printed: Option<f64>,
    /// Value from the raw-moment derivation path. Authoritative.
    pub derived: f64,
    /// The printed form is known to disagree with the derivation.
    pub flagged: bool,
}

impl CatalogEntry {
    pub fn name(&self) -> String {
        match &self.v {
            None => format!("E({})", self.u),
            Some(v) if *v == self.u => format!("V({})", self.u),
            Some(v) => format!("C({}, {})", self.u, v),
        }
    }

    /// `|printed − derived|` relative to the larger of the two, with an
    /// absolute floor for entries that vanish.
    pub fn printed_discrepancy(&self) -> Option<f64> {
        self.printed.map(|p| {
            let scale = p.abs().max(self.derived.abs()).max(1e-4);
            (p - self.derived).abs() / scale
        })
    }
}

struct Builder<'a> {
    params: &'a Params,
    entries: Vec<CatalogEntry>,
}

impl Builder<'_> {
    fn push(&mut self, kind: &'static str, u: MomentId, v: Option<MomentId>, printed: Option<f64>, flagged: bool) -> Result<()> {
        let derived = match &v {
            None => raw_moment(self.params, &u)?,
            Some(v) => covariance_from_raw(self.params, &u, v)?,
        };
        self.entries.push(CatalogEntry { kind, u, v, printed, derived, flagged });
        Ok(())
    }

    fn raw(&mut self, kind: &'static str, u: MomentId, printed: Option<f64>) -> Result<()> {
        self.push(kind, u, None, printed, false)
    }

    fn cov(&mut self, kind: &'static str, u: MomentId, v: MomentId, printed: Option<f64>) -> Result<()> {
        self.push(kind, u, Some(v), printed, false)
    }
}

/// The four basic Dirichlet moments of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicMoments {
    pub mean: f64,
    pub var: f64,
    pub mean_log: f64,
    pub cov_x_log: f64,
}

/// `E(Xᵢ)`, `V(Xᵢ)`, `E(log Xᵢ)` and `C(Xᵢ, log Xᵢ)` for coordinate `i`
/// (zero-based).
pub fn dirichlet_basic_moments(params: &DirichletParams, i: usize) -> Result<BasicMoments> {
    if i >= params.k() {
        return Err(crate::Error::Catalog(format!("coordinate {} is out of range for k = {}", i + 1, params.k())));
    }
    let a = params.alpha()[i];
    let a0 = params.alpha0();
    Ok(BasicMoments {
        mean: a / a0,
        var: a * (a0 - a) / (a0 * a0 * (a0 + 1.0)),
        mean_log: digamma_diff_pos(a, a0),
        cov_x_log: (a0 - a) / (a0 * a0),
    })
}

/// Covariance of two Dirichlet monomials through the raw catalog.
pub fn dirichlet_covariance(params: &DirichletParams, u: &MomentId, v: &MomentId) -> Result<f64> {
    covariance_from_raw(&Params::Dirichlet(params.clone()), u, v)
}

/// Covariance of two multivariate Gamma monomials through the raw catalog.
pub fn mgamma_covariance(params: &MGammaParams, u: &MomentId, v: &MomentId) -> Result<f64> {
    covariance_from_raw(&Params::MGamma(params.clone()), u, v)
}

/// Every Dirichlet catalog entry for every coordinate and ordered pair of
/// distinct coordinates, with its printed closed form.
pub fn dirichlet_catalog(params: &DirichletParams) -> Result<Vec<CatalogEntry>> {
    const D: Family = Family::Dirichlet;
    let wrapped = Params::Dirichlet(params.clone());
    let mut b = Builder { params: &wrapped, entries: Vec::new() };
    let alpha = params.alpha();
    let a0 = params.alpha0();
    let k = params.k();
    let x = |i| MomentId::pow(D, i, 1);
    let x2 = |i| MomentId::pow(D, i, 2);
    let lx = |i| MomentId::log(D, i);
    let xlx = |i| MomentId::factor(D, i, 1, 1);
    let psi = digamma_diff_pos;
    let psi1 = trigamma_diff_pos;
    let ratio = |a: f64, m: u32| rising(a, m) / rising(a0, m);

    for i in 0..k {
        let ai = alpha[i];
        let bi = a0 - ai;
        let basic = dirichlet_basic_moments(params, i)?;
        b.raw("E(Xi)", x(i), Some(basic.mean))?;
        b.cov("V(Xi)", x(i), x(i), Some(basic.var))?;
        b.raw("E(log Xi)", lx(i), Some(basic.mean_log))?;
        b.cov("C(Xi, log Xi)", x(i), lx(i), Some(basic.cov_x_log))?;

        for m in 2..=4 {
            b.raw("E(Xi^m)", MomentId::pow(D, i, m), Some(ratio(ai, m)))?;
        }
        b.raw("E(Xi log Xi)", xlx(i), Some(ai / a0 * psi(ai + 1.0, a0 + 1.0)))?;
        b.raw(
            "E(Xi^2 log Xi)",
            MomentId::factor(D, i, 2, 1),
            Some(ratio(ai, 2) * psi(ai + 2.0, a0 + 2.0)),
        )?;
        let p1 = psi(ai + 1.0, a0 + 1.0);
        b.raw(
            "E(Xi log^2 Xi)",
            MomentId::factor(D, i, 1, 2),
            Some(ai / a0 * (p1 * p1 + psi1(ai + 1.0, a0 + 1.0))),
        )?;
        let p2 = psi(ai + 2.0, a0 + 2.0);
        b.raw(
            "E(Xi^2 log^2 Xi)",
            MomentId::factor(D, i, 2, 2),
            Some(ratio(ai, 2) * (p2 * p2 + psi1(ai + 2.0, a0 + 2.0))),
        )?;
        b.raw("E(log^2 Xi)", MomentId::factor(D, i, 0, 2), None)?;

        b.cov("V(Xi^2)", x2(i), x2(i), Some(ratio(ai, 4) - ratio(ai, 2).powi(2)))?;
        b.cov("V(log Xi)", lx(i), lx(i), Some(psi1(ai, a0)))?;
        b.cov(
            "C(Xi, Xi^2)",
            x(i),
            x2(i),
            Some(2.0 * ai * bi * (ai + 1.0) / (a0 * a0 * (a0 + 1.0) * (a0 + 2.0))),
        )?;
        b.cov(
            "C(Xi, Xi log Xi)",
            x(i),
            xlx(i),
            Some(ai * bi / (a0 * a0 * (a0 + 1.0)) * (psi(ai + 1.0, a0 + 2.0) + 1.0)),
        )?;
        b.cov(
            "C(log Xi, Xi log Xi)",
            lx(i),
            xlx(i),
            Some(bi / (a0 * a0) * p1 + ai / a0 * psi1(ai + 1.0, a0 + 1.0)),
        )?;
        b.cov("V(Xi log Xi)", xlx(i), xlx(i), None)?;
    }

    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            let (ai, aj) = (alpha[i], alpha[j]);
            for (mi, mj) in [(1, 1), (1, 2), (2, 2)] {
                let printed = rising(ai, mi) * rising(aj, mj) / rising(a0, mi + mj);
                b.raw("E(Xi^mi Xj^mj)", MomentId::pow(D, i, mi).with(j, mj, 0), Some(printed))?;
            }
            b.raw("E(Xi log Xj)", x(i).with(j, 0, 1), Some(ai / a0 * psi(aj, a0 + 1.0)))?;
            let w = ai * aj / (a0 * (a0 + 1.0));
            b.raw("E(Xi Xj log Xj)", x(i).with(j, 1, 1), Some(w * psi(aj + 1.0, a0 + 2.0)))?;
            b.raw(
                "E(log Xi log Xj)",
                lx(i).with(j, 0, 1),
                Some(psi(ai, a0) * psi(aj, a0) - trigamma_pos(a0)),
            )?;
            b.raw(
                "E(Xi log Xi log Xj)",
                xlx(i).with(j, 0, 1),
                Some(ai / a0 * (psi(ai + 1.0, a0 + 1.0) * psi(aj, a0 + 1.0) - trigamma_pos(a0 + 1.0))),
            )?;
            b.raw(
                "E(Xi Xj log Xi log Xj)",
                xlx(i).with(j, 1, 1),
                Some(w * (psi(ai + 1.0, a0 + 2.0) * psi(aj + 1.0, a0 + 2.0) - trigamma_pos(a0 + 2.0))),
            )?;

            let d = a0 * a0 * (a0 + 1.0);
            b.cov("C(Xi, Xj)", x(i), x(j), Some(-ai * aj / d))?;
            b.cov("C(Xi, Xj^2)", x(i), x2(j), Some(-2.0 * ai * aj * (aj + 1.0) / (d * (a0 + 2.0))))?;
            b.cov(
                "C(Xi^2, Xj^2)",
                x2(i),
                x2(j),
                Some(
                    -2.0 * ai * (ai + 1.0) * aj * (aj + 1.0) * (2.0 * a0 + 3.0)
                        / (d * (a0 + 1.0) * (a0 + 2.0) * (a0 + 3.0)),
                ),
            )?;
            b.cov("C(Xi, log Xj)", x(i), lx(j), Some(-ai / (a0 * a0)))?;
            b.cov("C(log Xi, log Xj)", lx(i), lx(j), Some(-trigamma_pos(a0)))?;
            b.cov(
                "C(Xi, Xj log Xj)",
                x(i),
                xlx(j),
                Some(-ai * aj / d * (psi(aj + 1.0, a0 + 2.0) + 1.0)),
            )?;
            b.cov(
                "C(log Xi, Xj log Xj)",
                lx(i),
                xlx(j),
                Some(-aj / (a0 * a0) * psi(aj + 1.0, a0 + 1.0) - aj / a0 * trigamma_pos(a0 + 1.0)),
            )?;
            b.cov("C(Xi log Xi, Xj log Xj)", xlx(i), xlx(j), None)?;
        }
    }
    Ok(b.entries)
}

/// Every multivariate Gamma catalog entry for the increments `Z = ΔX` and
/// the total `X_k`, with its printed closed form.
pub fn mgamma_catalog(params: &MGammaParams) -> Result<Vec<CatalogEntry>> {
    const G: Family = Family::MGamma;
    let wrapped = Params::MGamma(params.clone());
    let mut b = Builder { params: &wrapped, entries: Vec::new() };
    let beta = params.beta();
    let lb = beta.ln();
    let a0 = params.alpha0();
    let k = params.k();
    let z = |i| MomentId::pow(G, i, 1);
    let z2 = |i| MomentId::pow(G, i, 2);
    let lz = |i| MomentId::log(G, i);
    let zlz = |i| MomentId::factor(G, i, 1, 1);
    let xk = MomentId::total(1);

    b.raw("E(X_k)", xk.clone(), Some(a0 * beta))?;
    b.cov("V(X_k)", xk.clone(), xk.clone(), Some(a0 * beta * beta))?;

    for i in 0..k {
        let a = params.alpha()[i];
        b.raw("E(Zi)", z(i), Some(a * beta))?;
        b.cov("V(Zi)", z(i), z(i), Some(a * beta * beta))?;
        b.cov("C(Zi, log Zi)", z(i), lz(i), Some(beta))?;
        b.raw("E(log Zi)", lz(i), Some(digamma_pos(a) + lb))?;

        for m in 0..=4u32 {
            let bm = beta.powi(m as i32) * rising(a, m);
            let l = digamma_pos(a + m as f64) + lb;
            if m >= 2 {
                b.raw("E(Zi^m)", MomentId::pow(G, i, m), Some(bm))?;
            }
            if m <= 2 {
                b.raw("E(Zi^m log Zi)", MomentId::factor(G, i, m, 1), Some(bm * l))?;
                b.raw(
                    "E(Zi^m log^2 Zi)",
                    MomentId::factor(G, i, m, 2),
                    Some(bm * (trigamma_pos(a + m as f64) + l * l)),
                )?;
            }
        }

        let l0 = digamma_pos(a) + lb;
        let l1 = digamma_pos(a + 1.0) + lb;
        let l2 = digamma_pos(a + 2.0) + lb;
        let b2 = beta * beta;
        b.cov(
            "V(Zi^2)",
            z2(i),
            z2(i),
            Some(2.0 * a * (a + 1.0) * (2.0 * a + 3.0) * b2 * b2),
        )?;
        b.cov("V(log Zi)", lz(i), lz(i), Some(trigamma_pos(a)))?;
        b.cov(
            "V(Zi log Zi)",
            zlz(i),
            zlz(i),
            Some(a * (a + 1.0) * b2 * (trigamma_pos(a + 2.0) + l2 * l2) - a * a * b2 * l1 * l1),
        )?;
        b.cov("C(Zi, Zi^2)", z(i), z2(i), Some(2.0 * a * (a + 1.0) * b2 * beta))?;
        b.push(
            "C(Zi, Zi log Zi)",
            z(i),
            Some(zlz(i)),
            Some(a * (a + 1.0) * b2 * l2 * l2 - a * a * b2 * l1),
            true,
        )?;
        b.cov(
            "C(log Zi, Zi log Zi)",
            lz(i),
            zlz(i),
            Some(a * beta * (trigamma_pos(a + 1.0) + l1 * l1) - a * beta * l0 * l1),
        )?;
        b.cov("C(log Zi, X_k)", lz(i), xk.clone(), Some(beta))?;
        b.cov("C(Zi, X_k)", z(i), xk.clone(), Some(a * b2))?;
    }

    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            b.cov("C(Zi, Zj)", z(i), z(j), Some(0.0))?;
            b.cov("C(log Zi, log Zj)", lz(i), lz(j), Some(0.0))?;
            b.cov("C(Zi log Zi, Zj log Zj)", zlz(i), zlz(j), Some(0.0))?;
        }
    }
    Ok(b.entries)
}

/// The catalog of either family.
pub fn catalog(params: &Params) -> Result<Vec<CatalogEntry>> {
    match params {
        Params::Dirichlet(p) => dirichlet_catalog(p),
        Params::MGamma(p) => mgamma_catalog(p),
    }
}
