//! Wave-strength balance across a polygonal region of the (t, x) plane:
//! entering/exiting i-wave amounts against the interaction and
//! interaction-cancellation measures inside.

use crate::error::{FtError, Result};

use super::{Front, FrontLog};

#[derive(Clone, Copy, Debug, Default)]
pub struct FamilyBalance {
    pub in_plus: f64,
    pub in_minus: f64,
    pub out_plus: f64,
    pub out_minus: f64,
}

impl FamilyBalance {
    pub fn net_in(&self) -> f64 {
        self.in_plus - self.in_minus
    }
    pub fn net_out(&self) -> f64 {
        self.out_plus - self.out_minus
    }
}

#[derive(Clone, Debug)]
pub struct BalanceReport {
    pub families: Vec<FamilyBalance>,
    pub mu_i: f64,
    pub mu_ic: f64,
    /// max over families of |W_out − W_in| / max(μ^I, floor).
    pub net_constant: f64,
    /// max over families and signs of |W^±_out − W^±_in| / max(μ^IC, floor).
    pub signed_constant: f64,
}

/// Vertices of the polygon as (t, x) pairs, in order (closed implicitly).
pub fn wave_balance(log: &FrontLog, polygon: &[(f64, f64)]) -> Result<BalanceReport> {
    if polygon.len() < 3 {
        return Err(FtError::Config("balance polygon needs ≥ 3 vertices".into()));
    }
    let n_fam = log.dim;
    let mut families = vec![FamilyBalance::default(); n_fam];
    for f in &log.fronts {
        if !f.is_physical() {
            continue;
        }
        let t1 = f.death_time.unwrap_or(log.params.t_end);
        if t1 <= f.birth_time {
            continue;
        }
        for (edge_idx, edge) in edges(polygon).into_iter().enumerate() {
            if let Some((tc, entering)) = front_edge_crossing(f, t1, edge, polygon) {
                let _ = tc;
                // Transversality: the front's direction must not be
                // parallel to the edge.
                let fam = &mut families[f.family];
                let (pos, neg) = if f.strength >= 0.0 {
                    (f.strength, 0.0)
                } else {
                    (0.0, -f.strength)
                };
                if entering {
                    fam.in_plus += pos;
                    fam.in_minus += neg;
                } else {
                    fam.out_plus += pos;
                    fam.out_minus += neg;
                }
                let _ = edge_idx;
            }
        }
    }
    let mut mu_i = 0.0;
    let mut mu_ic = 0.0;
    for node in &log.nodes {
        if point_in_polygon((node.time, node.x), polygon) {
            mu_i += node.amount;
            mu_ic += node.mu_ic();
        }
    }
    let floor = 1e-14;
    let mut net_c = 0.0f64;
    let mut signed_c = 0.0f64;
    for fam in &families {
        net_c = net_c.max((fam.net_out() - fam.net_in()).abs() / mu_i.max(floor));
        signed_c = signed_c.max((fam.out_plus - fam.in_plus).abs() / mu_ic.max(floor));
        signed_c = signed_c.max((fam.out_minus - fam.in_minus).abs() / mu_ic.max(floor));
    }
    Ok(BalanceReport {
        families,
        mu_i,
        mu_ic,
        net_constant: net_c,
        signed_constant: signed_c,
    })
}

type Edge = ((f64, f64), (f64, f64));

fn edges(polygon: &[(f64, f64)]) -> Vec<Edge> {
    (0..polygon.len())
        .map(|k| (polygon[k], polygon[(k + 1) % polygon.len()]))
        .collect()
}

/// Crossing of the front's space-time segment with a polygon edge.
/// Returns (crossing time, entering?) when they intersect transversally.
fn front_edge_crossing(
    f: &Front,
    t1: f64,
    edge: Edge,
    polygon: &[(f64, f64)],
) -> Option<(f64, bool)> {
    // Front segment: P(s) = (t0 + s·dt, x0 + s·dt·speed), s in [0, 1].
    let p0 = (f.birth_time, f.position(f.birth_time));
    let p1 = (t1, f.position(t1));
    let (a, b) = edge;
    let d1 = (p1.0 - p0.0, p1.1 - p0.1);
    let d2 = (b.0 - a.0, b.1 - a.1);
    let denom = d1.0 * d2.1 - d1.1 * d2.0;
    let scale = (d1.0.abs() + d1.1.abs()) * (d2.0.abs() + d2.1.abs());
    if denom.abs() < 1e-12 * scale.max(1e-300) {
        return None;
    }
    let rel = (a.0 - p0.0, a.1 - p0.1);
    let s = (rel.0 * d2.1 - rel.1 * d2.0) / denom;
    let u = (rel.0 * d1.1 - rel.1 * d1.0) / denom;
    if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&u) {
        return None;
    }
    let tc = p0.0 + s * d1.0;
    // Entering when the position just after the crossing is inside.
    let eps = 1e-9 * (t1 - f.birth_time).max(1e-12);
    let t_after = (tc + eps).min(t1);
    let inside_after = point_in_polygon((t_after, f.position(t_after)), polygon);
    Some((tc, inside_after))
}

fn point_in_polygon(p: (f64, f64), polygon: &[(f64, f64)]) -> bool {
    let mut inside = false;
    let n = polygon.len();
    let mut j = n - 1;
    for i in 0..n {
        let (yi, xi) = polygon[i];
        let (yj, xj) = polygon[j];
        if ((yi > p.0) != (yj > p.0)) && p.1 < (xj - xi) * (p.0 - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}
