//! Artifact writers: front log, snapshots, ledger and x-t plot columns,
//! curve documents and verification reports. Everything is data-only
//! text or JSON; rendering belongs to external tools.

use std::path::Path;

use anyhow::Result;

use fronttrack::config::{CurveRequest, ModelHandle, RunConfig};
use fronttrack::riemann::CurveBuilder;
use fronttrack::structure::{
    extract_approx_subcurves, verify_jump_point, ApproxSubCurve, LimitCurve,
};
use fronttrack::tracker::{sample_solution, snapshot_to_text, wave_balance, FrontLog};

/// Suffix for per-resolution files: "" for single runs.
fn tag(eps: Option<f64>) -> String {
    match eps {
        Some(e) => format!("_eps{e}"),
        None => String::new(),
    }
}

/// An x-range generously covering everything the run ever did.
pub fn domain_span(log: &FrontLog) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for f in &log.fronts {
        let t1 = f.death_time.unwrap_or(log.params.t_end);
        lo = lo.min(f.birth_x.min(f.position(t1)));
        hi = hi.max(f.birth_x.max(f.position(t1)));
    }
    if !lo.is_finite() {
        (-1.0, 1.0)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

pub fn write_run_artifacts(
    cfg: &RunConfig,
    model: &ModelHandle,
    log: &FrontLog,
    out: &Path,
    eps_tag: Option<f64>,
) -> Result<()> {
    let t = tag(eps_tag);
    std::fs::write(out.join(format!("frontlog{t}.txt")), log.to_text())?;

    // Ledger time series (plot-ready columns).
    let mut ledger = String::from("# t V Q Upsilon np_mass\n");
    for p in &log.ledger {
        ledger.push_str(&format!(
            "{:.12e} {:.12e} {:.12e} {:.12e} {:.12e}\n",
            p.time,
            p.v,
            p.q,
            log.upsilon(p),
            p.np_mass
        ));
    }
    std::fs::write(out.join(format!("ledger{t}.txt")), ledger)?;

    // x-t front diagram columns.
    let mut xt = String::from("# id family kind t0 x0 t1 x1 strength\n");
    for f in &log.fronts {
        let t1 = f.death_time.unwrap_or(log.params.t_end);
        xt.push_str(&format!(
            "{} {} {} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e}\n",
            f.id,
            f.family + 1,
            f.kind.code(),
            f.birth_time,
            f.birth_x,
            t1,
            f.position(t1),
            f.strength
        ));
    }
    std::fs::write(out.join(format!("xt_fronts{t}.txt")), xt)?;

    if let Some(times) = &cfg.snapshot_times {
        for &st in times {
            let prof = sample_solution(log, st);
            std::fs::write(
                out.join(format!("snapshot{t}_t{st}.txt")),
                snapshot_to_text(&prof, st),
            )?;
        }
    }

    // Single-log analysis requests.
    if let Some(analysis) = &cfg.analysis {
        let builder = CurveBuilder::new(model.as_flux(), cfg.numerics.clone());
        for req in &analysis.curves {
            let curves =
                extract_approx_subcurves(log, &builder, req.eps, req.family - 1, req.region)?;
            write_subcurves(&curves, req, out, &t)?;
        }
        for (k, vq) in analysis.verify.iter().enumerate() {
            let path = out.join(format!("verify{t}_{k}.txt"));
            match verify_jump_point(
                log,
                &builder,
                (vq.t, vq.x),
                vq.strength_floor,
                vq.atom_threshold,
            ) {
                Ok(rep) => std::fs::write(path, rep.to_text())?,
                Err(e) => std::fs::write(path, format!("error {e}\n"))?,
            }
        }
        for (k, b) in analysis.balance.iter().enumerate() {
            let rep = wave_balance(log, &b.polygon)?;
            let mut text = String::from("# wave balance\n");
            text.push_str(&format!("mu_i {:.9e}\nmu_ic {:.9e}\n", rep.mu_i, rep.mu_ic));
            for (fam, fb) in rep.families.iter().enumerate() {
                text.push_str(&format!(
                    "family {} in+ {:.9e} in- {:.9e} out+ {:.9e} out- {:.9e}\n",
                    fam + 1,
                    fb.in_plus,
                    fb.in_minus,
                    fb.out_plus,
                    fb.out_minus
                ));
            }
            text.push_str(&format!(
                "net_constant {:.6e}\nsigned_constant {:.6e}\n",
                rep.net_constant, rep.signed_constant
            ));
            std::fs::write(out.join(format!("balance{t}_{k}.txt")), text)?;
        }
    }
    Ok(())
}

/// One JSON document per curve family, as a tree: family → curves →
/// segments with substrengths.
fn write_subcurves(
    curves: &[ApproxSubCurve],
    req: &CurveRequest,
    out: &Path,
    t: &str,
) -> Result<()> {
    let doc = serde_json::json!({
        "family": req.family,
        "region": req.region,
        "eps": req.eps,
        "count": curves.len(),
        "curves": curves,
    });
    std::fs::write(
        out.join(format!(
            "curves{t}_f{}_r{}_eps{}.json",
            req.family, req.region, req.eps
        )),
        serde_json::to_string_pretty(&doc)?,
    )?;
    Ok(())
}

pub fn write_limit_curves(curves: &[LimitCurve], req: &CurveRequest, out: &Path) -> Result<()> {
    let doc = serde_json::json!({
        "family": req.family,
        "region": req.region,
        "eps": req.eps,
        "count": curves.len(),
        "curves": curves,
    });
    std::fs::write(
        out.join(format!(
            "limit_curves_f{}_r{}_eps{}.json",
            req.family, req.region, req.eps
        )),
        serde_json::to_string_pretty(&doc)?,
    )?;
    Ok(())
}

pub fn write_analysis(
    cfg: &RunConfig,
    model: &ModelHandle,
    logs: &[FrontLog],
    out: &Path,
) -> Result<()> {
    let finest = logs.last().expect("≥1 log");
    write_run_artifacts(cfg, model, finest, out, Some(finest.params.eps))?;
    if logs.len() >= 3 {
        if let Some(analysis) = &cfg.analysis {
            let builder = CurveBuilder::new(model.as_flux(), cfg.numerics.clone());
            let refs: Vec<&FrontLog> = logs.iter().collect();
            for req in &analysis.curves {
                let lims =
                    fronttrack::structure::limit_subcurves(&refs, &builder, req.eps, req.family - 1, req.region)?;
                write_limit_curves(&lims, req, out)?;
            }
        }
    }
    Ok(())
}
