use std::io::Write;
use std::path::{Path, PathBuf};

use momentype::avar::avar as analytic_avar;
use momentype::estimators::{estimate, Method, SolverConfig};
use momentype::model::{sample_dirichlet, sample_mgamma, Family, Params, RngSpec};
use momentype::moments::{catalog, check_catalog, CheckTolerance};
use momentype::montecarlo::{linspace, recipes, run_avar_sweep, run_metric_sweep, SweepConfig};
use serde_json::json;

use crate::io::{g17, open_input, open_output, read_sample, write_sample};
use crate::{AvarArgs, CheckArgs, Fail, FitArgs, GridArgs, ParamArgs, SampleArgs, SweepArgs};

fn params(a: &ParamArgs) -> Result<Params, Fail> {
    let mut theta = a.alpha.clone();
    match (a.family, a.beta) {
        (Family::Dirichlet, Some(_)) => return Err(Fail::input("--beta applies to mgamma only".into())),
        (Family::MGamma, None) => return Err(Fail::input("mgamma needs --beta".into())),
        (Family::MGamma, Some(b)) => theta.push(b),
        (Family::Dirichlet, None) => {}
    }
    Ok(Params::from_vec(a.family, &theta)?)
}

fn finish(mut out: Box<dyn Write>) -> Result<(), Fail> {
    out.flush().map_err(|e| Fail::input(format!("write failed: {e}")))
}

pub fn fit(a: FitArgs) -> Result<u8, Fail> {
    let method = match (a.method, a.unbiased) {
        (Method::Same, true) => Method::SameUnbiased,
        (m, false) => m,
        (m, true) => return Err(Fail::input(format!("--unbiased applies to the same estimator, not {m}"))),
    };
    let solver = SolverConfig { tolerance: a.tolerance, max_iter: a.max_iter, ..SolverConfig::default() };
    solver.validate()?;
    let sample = read_sample(open_input(&a.input)?, a.family, a.renormalize)?;
    let report = estimate(method, &sample, &solver)?;
    let out = json!({
        "family": report.family,
        "method": report.method,
        "estimate": report.estimate,
        "exists": report.exists,
        "reason": report.reason,
        "diagnostics": { "iterations": report.iterations, "score_norm": report.score_norm },
        "n": report.n,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(if report.exists { 0 } else { Fail::NO_ESTIMATE })
}

pub fn sample(a: SampleArgs) -> Result<u8, Fail> {
    let p = params(&a.params)?;
    let rng = RngSpec::new(a.seed, 0);
    let sample = match &p {
        Params::Dirichlet(d) => sample_dirichlet(d, a.n, rng)?,
        Params::MGamma(g) => sample_mgamma(g, a.n, rng)?,
    };
    let out = open_output(a.output.as_deref())?;
    write_sample(out, &sample)?;
    Ok(0)
}

fn opt(x: Option<f64>) -> String {
    x.map(g17).unwrap_or_default()
}

pub fn moments_check(a: CheckArgs) -> Result<u8, Fail> {
    let p = params(&a.params)?;
    let mut entries = catalog(&p)?;
    if let Some(name) = &a.corrupt_entry {
        let e = entries
            .iter_mut()
            .find(|e| &e.name() == name)
            .ok_or_else(|| Fail::input(format!("no catalog entry named '{name}'")))?;
        e.derived *= 1.05;
    }
    let rows = check_catalog(&p, &entries, a.draws, RngSpec::new(a.seed, 0), CheckTolerance::default())?;
    let mut w = csv::Writer::from_writer(open_output(a.output.as_deref())?);
    w.write_record(["entry", "kind", "printed", "derived", "mc", "se", "z", "z_printed", "flagged", "pass"])
        .map_err(Fail::io)?;
    for r in &rows {
        w.write_record([
            r.name.clone(),
            r.kind.to_string(),
            opt(r.printed),
            g17(r.derived),
            g17(r.mc),
            g17(r.se),
            g17(r.z),
            opt(r.z_printed),
            r.flagged.to_string(),
            r.pass.to_string(),
        ])
        .map_err(Fail::io)?;
    }
    w.flush().map_err(|e| Fail::input(format!("write failed: {e}")))?;
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        eprintln!("{} entries checked, all pass", rows.len());
        Ok(0)
    } else {
        eprintln!("{} of {} entries fail: {}", failed.len(), rows.len(), failed.join("; "));
        Ok(Fail::VERIFICATION)
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Fail> {
    let bad = || Fail::input(format!("grid '{spec}' is neither lo:hi:count nor a comma-separated list"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [lo, hi, count] => {
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let count: usize = count.trim().parse().map_err(|_| bad())?;
            Ok(linspace(lo, hi, count))
        }
        [list] => list.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect(),
        _ => Err(bad()),
    }
}

/// The configurations behind a sweep or avar command, one per panel.
fn configs(g: &GridArgs, ns: Vec<usize>, m: usize, seed: u64, analytic: bool) -> Result<Vec<SweepConfig>, Fail> {
    if let Some(f) = g.figure {
        if recipes::is_analytic(f) != analytic {
            let cmd = if analytic { "sweep" } else { "avar" };
            return Err(Fail::input(format!("figure {f} is produced by the {cmd} command")));
        }
        let mut out = recipes::figure(f, m, seed)?;
        if !analytic {
            out.iter_mut().for_each(|c| c.ns = ns.clone());
        }
        return Ok(out);
    }
    let family = g.family.expect("required without --figure");
    let p = params(&ParamArgs { family, alpha: g.alpha.clone(), beta: g.beta })?;
    let base = p.to_vec();
    let grid = match &g.grid {
        Some(s) => parse_grid(s)?,
        None => vec![base.get(g.param_index.wrapping_sub(1)).copied().unwrap_or(f64::NAN)],
    };
    let methods = if g.methods.is_empty() {
        Method::for_family(family).into_iter().filter(|m| *m != Method::SameUnbiased).collect()
    } else {
        g.methods.clone()
    };
    Ok(vec![SweepConfig {
        family,
        base,
        param_index: g.param_index,
        grid,
        ns,
        m,
        methods,
        seed,
        solver: SolverConfig::default(),
    }])
}

fn panel_path(path: Option<&Path>, panel: usize, panels: usize) -> Option<PathBuf> {
    let p = path?;
    if panels == 1 || p.as_os_str() == "-" {
        return Some(p.to_path_buf());
    }
    let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match p.extension() {
        Some(ext) => format!("{stem}_p{}.{}", panel + 1, ext.to_string_lossy()),
        None => format!("{stem}_p{}", panel + 1),
    };
    Some(p.with_file_name(name))
}

pub fn sweep(a: SweepArgs) -> Result<u8, Fail> {
    let configs = configs(&a.grid, a.n.clone(), a.m, a.seed, false)?;
    for c in &configs {
        c.validate()?;
    }
    for (i, c) in configs.iter().enumerate() {
        let rows = run_metric_sweep(c)?;
        let path = panel_path(a.grid.output.as_deref(), i, configs.len());
        let mut w = csv::Writer::from_writer(open_output(path.as_deref())?);
        w.write_record(["family", "estimator", "param_index", "sweep_value", "n", "m_effective", "failures", "bias", "variance", "rmse"])
            .map_err(Fail::io)?;
        for r in rows {
            w.write_record([
                r.family.to_string(),
                r.estimator.to_string(),
                r.param_index.to_string(),
                g17(r.sweep_value),
                r.n.to_string(),
                r.m_effective.to_string(),
                r.failures.to_string(),
                g17(r.bias),
                g17(r.variance),
                g17(r.rmse),
            ])
            .map_err(Fail::io)?;
        }
        w.flush().map_err(|e| Fail::input(format!("write failed: {e}")))?;
        if let Some(p) = path {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(0)
}

pub fn avar(a: AvarArgs) -> Result<u8, Fail> {
    let g = &a.grid;
    if g.figure.is_none() && g.grid.is_none() {
        return avar_point(g);
    }
    let configs = configs(g, vec![2], recipes::DESK_REPLICATES, 0, true)?;
    for c in &configs {
        c.validate()?;
    }
    for (i, c) in configs.iter().enumerate() {
        let rows = run_avar_sweep(c)?;
        let path = panel_path(g.output.as_deref(), i, configs.len());
        let mut w = csv::Writer::from_writer(open_output(path.as_deref())?);
        w.write_record(["family", "estimator", "param_index", "sweep_value", "avar"]).map_err(Fail::io)?;
        for r in rows {
            w.write_record([
                r.family.to_string(),
                r.estimator.to_string(),
                r.param_index.to_string(),
                g17(r.sweep_value),
                g17(r.avar),
            ])
            .map_err(Fail::io)?;
        }
        w.flush().map_err(|e| Fail::input(format!("write failed: {e}")))?;
        if let Some(p) = path {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(0)
}

/// Full matrices at one parameter point, as JSON.
fn avar_point(g: &GridArgs) -> Result<u8, Fail> {
    let family = g.family.expect("required without --figure");
    let p = params(&ParamArgs { family, alpha: g.alpha.clone(), beta: g.beta })?;
    let methods = if g.methods.is_empty() {
        Method::for_family(family).into_iter().filter(|m| *m != Method::SameUnbiased).collect()
    } else {
        g.methods.clone()
    };
    let mut out = Vec::new();
    for m in methods {
        let a = analytic_avar(m, &p)?;
        out.push(json!({
            "family": family,
            "method": m,
            "params": p.to_vec(),
            "labels": a.labels(),
            "matrix": a.rows(),
        }));
    }
    let mut w = open_output(g.output.as_deref())?;
    writeln!(w, "{}", serde_json::to_string_pretty(&out).expect("serializable"))
        .map_err(|e| Fail::input(format!("write failed: {e}")))?;
    finish(w)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid("0.2:5:3").unwrap(), vec![0.2, 2.6, 5.0]);
        assert_eq!(parse_grid("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn panel_suffixes() {
        let p = Path::new("out/fig.csv");
        assert_eq!(panel_path(Some(p), 0, 1).unwrap(), PathBuf::from("out/fig.csv"));
        assert_eq!(panel_path(Some(p), 1, 4).unwrap(), PathBuf::from("out/fig_p2.csv"));
        assert!(panel_path(None, 0, 2).is_none());
    }
}
