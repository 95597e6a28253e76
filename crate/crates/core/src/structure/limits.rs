//! Limits across an ε_ν-sequence of runs: matching of approximate
//! subdiscontinuity curves by uniform distance, and clustering of the
//! interaction/cancellation measure atoms.

use serde::Serialize;

use crate::error::{FtError, Result};
use crate::riemann::CurveBuilder;
use crate::tracker::FrontLog;

use super::curves::{extract_approx_subcurves, ApproxSubCurve};

/// A limit curve with its per-ν provenance.
#[derive(Clone, Debug, Serialize)]
pub struct LimitCurve {
    pub family: usize,
    pub region: usize,
    pub eps: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    /// Polyline of the finest run's curve.
    pub polyline: Vec<(f64, f64)>,
    /// Uniform distances between successive matched curves.
    pub distances: Vec<f64>,
    /// Set when two candidates matched within tolerance; both lineages
    /// are kept.
    pub ambiguous: bool,
}

impl LimitCurve {
    pub fn position_at(&self, t: f64) -> Option<f64> {
        if self.polyline.is_empty() || t < self.t_lo || t > self.t_hi {
            return None;
        }
        let mut prev = self.polyline[0];
        for &p in &self.polyline[1..] {
            if t <= p.0 {
                if p.0 == prev.0 {
                    return Some(p.1);
                }
                let th = (t - prev.0) / (p.0 - prev.0);
                return Some(prev.1 + th * (p.1 - prev.1));
            }
            prev = p;
        }
        Some(prev.1)
    }
}

/// Uniform (sup) distance on the overlap of time domains, sampled on the
/// union of node times. Returns None when the domains are disjoint.
fn sup_distance(a: &ApproxSubCurve, b: &ApproxSubCurve) -> Option<f64> {
    let lo = a.t_lo().max(b.t_lo());
    let hi = a.t_hi().min(b.t_hi());
    if hi <= lo {
        return None;
    }
    let mut ts: Vec<f64> = a
        .nodes()
        .iter()
        .chain(b.nodes().iter())
        .map(|p| p.0)
        .filter(|t| *t >= lo && *t <= hi)
        .collect();
    ts.push(lo);
    ts.push(hi);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut d = 0.0f64;
    for t in ts {
        if let (Some(xa), Some(xb)) = (a.position_at(t), b.position_at(t)) {
            d = d.max((xa - xb).abs());
        }
    }
    Some(d)
}

/// Matches curves across ≥ 3 logs with decreasing ε_ν by greedy
/// nearest-neighbor assignment in uniform distance; emits a LimitCurve
/// when successive distances decrease and the last is within tolerance.
pub fn limit_subcurves(
    logs: &[&FrontLog],
    builder: &CurveBuilder<'_>,
    eps: f64,
    family: usize,
    region: usize,
) -> Result<Vec<LimitCurve>> {
    if logs.len() < 3 {
        return Err(FtError::Config(
            "limit_subcurves needs at least 3 logs with decreasing eps".into(),
        ));
    }
    for w in logs.windows(2) {
        if w[1].params.eps >= w[0].params.eps {
            return Err(FtError::Config("eps sequence must be decreasing".into()));
        }
    }
    let per_log: Vec<Vec<ApproxSubCurve>> = logs
        .iter()
        .map(|log| extract_approx_subcurves(log, builder, eps, family, region))
        .collect::<Result<_>>()?;

    // Lineages: start from the coarsest run's curves, follow nearest
    // neighbors down the sequence.
    let lambda_hat = logs[0].params.lambda_hat;
    let mut out = Vec::new();
    for seed in &per_log[0] {
        let mut lineage: Vec<&ApproxSubCurve> = vec![seed];
        let mut distances = Vec::new();
        let mut ambiguous = false;
        let mut ok = true;
        for (nu, log) in logs.iter().enumerate().skip(1) {
            let tol = 10.0 * log.params.eps * (lambda_hat + 1.0);
            let cur = lineage.last().unwrap();
            let mut best: Option<(f64, &ApproxSubCurve)> = None;
            let mut second: Option<f64> = None;
            for cand in &per_log[nu] {
                if let Some(d) = sup_distance(cur, cand) {
                    match best {
                        None => best = Some((d, cand)),
                        Some((bd, _)) if d < bd => {
                            second = Some(bd);
                            best = Some((d, cand));
                        }
                        Some((bd, _)) => {
                            second = Some(second.map_or(d, |s| s.min(d)));
                            let _ = bd;
                        }
                    }
                }
            }
            match best {
                Some((d, cand)) if d <= tol => {
                    if let Some(s) = second {
                        if s <= tol {
                            ambiguous = true;
                        }
                    }
                    distances.push(d);
                    lineage.push(cand);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // Monotone-decreasing distances certify convergence; tolerate a
        // single plateau from the discrete geometry.
        let decreasing = distances.windows(2).filter(|w| w[1] > w[0] * 1.5).count() == 0;
        if !decreasing {
            continue;
        }
        let finest = lineage.last().unwrap();
        out.push(LimitCurve {
            family,
            region,
            eps,
            t_lo: finest.t_lo(),
            t_hi: finest.t_hi(),
            polyline: finest.nodes(),
            distances,
            ambiguous,
        });
    }
    Ok(out)
}

/// A clustered atom of the interaction measures across runs.
#[derive(Clone, Debug, Serialize)]
pub struct AtomCluster {
    pub t: f64,
    pub x: f64,
    /// Total μ^I mass per log (same order as the input).
    pub mass_i: Vec<f64>,
    /// Total μ^IC mass per log.
    pub mass_ic: Vec<f64>,
}

impl AtomCluster {
    /// True when the μ^IC mass stays bounded away from zero across runs.
    pub fn stable_positive(&self, floor: f64) -> bool {
        self.mass_ic.iter().all(|m| *m > floor)
    }
}

/// Clusters interaction nodes of all runs by space-time proximity
/// (greedy, mass-weighted seeds). Clusters with stable positive mass
/// approximate atoms of the limit measures.
pub fn measure_atoms(logs: &[&FrontLog], window_radius: f64) -> Vec<AtomCluster> {
    #[derive(Clone)]
    struct Item {
        nu: usize,
        t: f64,
        x: f64,
        mi: f64,
        mic: f64,
    }
    let mut items: Vec<Item> = Vec::new();
    for (nu, log) in logs.iter().enumerate() {
        for n in &log.nodes {
            items.push(Item {
                nu,
                t: n.time,
                x: n.x,
                mi: n.amount,
                mic: n.mu_ic(),
            });
        }
    }
    items.sort_by(|a, b| {
        b.mic
            .total_cmp(&a.mic)
            .then(a.t.total_cmp(&b.t))
            .then(a.x.total_cmp(&b.x))
    });
    let mut clusters: Vec<AtomCluster> = Vec::new();
    for it in items {
        let found = clusters.iter_mut().find(|c| {
            (c.t - it.t).abs() <= window_radius && (c.x - it.x).abs() <= window_radius
        });
        match found {
            Some(c) => {
                c.mass_i[it.nu] += it.mi;
                c.mass_ic[it.nu] += it.mic;
            }
            None => {
                let mut mass_i = vec![0.0; logs.len()];
                let mut mass_ic = vec![0.0; logs.len()];
                mass_i[it.nu] = it.mi;
                mass_ic[it.nu] = it.mic;
                clusters.push(AtomCluster {
                    t: it.t,
                    x: it.x,
                    mass_i,
                    mass_ic,
                });
            }
        }
    }
    clusters
}
