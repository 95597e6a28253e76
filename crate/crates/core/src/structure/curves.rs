//! (ε,i,k)-approximate subdiscontinuity curves: maximal polygonal chains
//! of qualifying subfronts linked through interaction nodes, with the
//! left-incoming selection rule at merge nodes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::riemann::CurveBuilder;
use crate::tracker::{Front, FrontId, FrontLog};

use super::subfront::{decompose_substrengths, SubFrontRecord};

/// One straight segment of a chain (the lifetime of one parent front).
#[derive(Clone, Debug, Serialize)]
pub struct CurveSegment {
    pub front: FrontId,
    pub t0: f64,
    pub x0: f64,
    pub t1: f64,
    pub x1: f64,
    pub substrength: f64,
}

/// A maximal (ε,i,k)-approximate subdiscontinuity curve.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxSubCurve {
    pub family: usize,
    pub region: usize,
    pub eps: f64,
    pub segments: Vec<CurveSegment>,
}

impl ApproxSubCurve {
    pub fn t_lo(&self) -> f64 {
        self.segments.first().map(|s| s.t0).unwrap_or(0.0)
    }

    pub fn t_hi(&self) -> f64 {
        self.segments.last().map(|s| s.t1).unwrap_or(0.0)
    }

    /// Interaction-point nodes (t_0,x_0)…(t_n,x_n) of the polygonal line.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        if let Some(first) = self.segments.first() {
            out.push((first.t0, first.x0));
        }
        for s in &self.segments {
            out.push((s.t1, s.x1));
        }
        out
    }

    pub fn position_at(&self, t: f64) -> Option<f64> {
        for s in &self.segments {
            if t >= s.t0 && t <= s.t1 {
                if s.t1 == s.t0 {
                    return Some(s.x0);
                }
                let th = (t - s.t0) / (s.t1 - s.t0);
                return Some(s.x0 + th * (s.x1 - s.x0));
            }
        }
        None
    }

    pub fn max_substrength(&self) -> f64 {
        self.segments
            .iter()
            .fold(0.0f64, |m, s| m.max(s.substrength.abs()))
    }
}

/// Per-front subfront decompositions for one log, computed once and
/// reused across (ε, i, k) queries.
pub struct SubfrontIndex {
    pub records: BTreeMap<FrontId, Vec<SubFrontRecord>>,
}

impl SubfrontIndex {
    pub fn build(log: &FrontLog, builder: &CurveBuilder<'_>) -> Result<SubfrontIndex> {
        let mut records = BTreeMap::new();
        for f in &log.fronts {
            if f.is_physical() {
                records.insert(f.id, decompose_substrengths(builder, f)?);
            }
        }
        Ok(SubfrontIndex { records })
    }

    /// The (i,k)-substrength of a front, 0 when it has none.
    pub fn substrength(&self, id: FrontId, family: usize, region: usize) -> f64 {
        self.records
            .get(&id)
            .map(|rs| {
                rs.iter()
                    .filter(|r| r.family == family && r.region == region)
                    .map(|r| r.substrength)
                    .sum()
            })
            .unwrap_or(0.0)
    }
}

/// Extracts all maximal (ε,i,k)-approximate subdiscontinuity curves.
/// The sign of ε selects the wave orientation: segments need
/// s_i^k ≥ ε/2 (≤ ε/2 for ε < 0) and the chain must contain one segment
/// beyond ε itself.
pub fn extract_approx_subcurves(
    log: &FrontLog,
    builder: &CurveBuilder<'_>,
    eps: f64,
    family: usize,
    region: usize,
) -> Result<Vec<ApproxSubCurve>> {
    let index = SubfrontIndex::build(log, builder)?;
    Ok(extract_with_index(log, &index, eps, family, region))
}

pub fn extract_with_index(
    log: &FrontLog,
    index: &SubfrontIndex,
    eps: f64,
    family: usize,
    region: usize,
) -> Vec<ApproxSubCurve> {
    assert!(eps != 0.0, "eps must be nonzero");
    let qualifies = |id: FrontId| -> bool {
        let s = index.substrength(id, family, region);
        if eps > 0.0 {
            s >= eps / 2.0
        } else {
            s <= eps / 2.0
        }
    };
    let strong = |id: FrontId| -> bool {
        let s = index.substrength(id, family, region);
        if eps > 0.0 {
            s >= eps
        } else {
            s <= eps
        }
    };

    // Successor links through nodes: at most one qualifying outgoing per
    // node (Lemma: an interaction generates at most one subdiscontinuity
    // front per (i,k)); at a merge of two qualifying incomings the
    // left-incoming continues.
    let mut succ: BTreeMap<FrontId, FrontId> = BTreeMap::new();
    let mut has_pred: BTreeMap<FrontId, bool> = BTreeMap::new();
    for node in &log.nodes {
        let in_q: Vec<FrontId> = node
            .incoming
            .iter()
            .copied()
            .filter(|&id| qualifies(id))
            .collect();
        if in_q.is_empty() {
            continue;
        }
        let out_q: Vec<FrontId> = node
            .outgoing
            .iter()
            .copied()
            .filter(|&id| qualifies(id))
            .collect();
        let Some(&next) = out_q.first() else {
            continue;
        };
        // node.incoming is [left, right]; the left one wins the link.
        let winner = in_q[0];
        succ.insert(winner, next);
        has_pred.insert(next, true);
    }

    let mut out = Vec::new();
    for f in &log.fronts {
        if !qualifies(f.id) || *has_pred.get(&f.id).unwrap_or(&false) {
            continue;
        }
        // Walk the chain.
        let mut segs = Vec::new();
        let mut cur = f.id;
        loop {
            let fr: &Front = log.front(cur);
            let t1 = fr.death_time.unwrap_or(log.params.t_end);
            segs.push(CurveSegment {
                front: cur,
                t0: fr.birth_time,
                x0: fr.birth_x,
                t1,
                x1: fr.position(t1),
                substrength: index.substrength(cur, family, region),
            });
            match succ.get(&cur) {
                Some(&next) => cur = next,
                None => break,
            }
        }
        if segs.iter().any(|s| {
            let id = s.front;
            strong(id)
        }) {
            out.push(ApproxSubCurve {
                family,
                region,
                eps,
                segments: segs,
            });
        }
    }
    out
}
