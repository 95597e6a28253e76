//! Generalized i-characteristics of an approximate solution: backward
//! polygonal paths whose slope stays between the one-sided
//! characteristic speeds, with the minimal/maximal side selection at
//! fronts of the own family.

use serde::Serialize;

use crate::error::{FtError, Result};
use crate::flux::FluxModel;
use crate::tracker::FrontLog;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Minimal,
    Maximal,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacteristicPath {
    pub family: usize,
    pub direction: Direction,
    /// Points in decreasing time, starting at the anchor.
    pub points: Vec<(f64, f64)>,
}

impl CharacteristicPath {
    pub fn position_at(&self, t: f64) -> Option<f64> {
        // points run backward in time.
        if self.points.is_empty() {
            return None;
        }
        if t > self.points[0].0 || t < self.points.last().unwrap().0 {
            return None;
        }
        let mut prev = self.points[0];
        for &p in &self.points[1..] {
            if t >= p.0 {
                if prev.0 == p.0 {
                    return Some(p.1);
                }
                let th = (t - p.0) / (prev.0 - p.0);
                return Some(p.1 + th * (prev.1 - p.1));
            }
            prev = p;
        }
        Some(prev.1)
    }

    pub fn t_stop(&self) -> f64 {
        self.points.last().map(|p| p.0).unwrap_or(0.0)
    }
}

/// Traces the minimal (maximal) generalized i-characteristic backward
/// from the anchor to t = 0: straight at slope λ_i(u) inside constant
/// states, refracting through fronts of other families, detaching on the
/// admissible side at own-family fronts.
pub fn generalized_characteristic(
    log: &FrontLog,
    model: &dyn FluxModel,
    anchor: (f64, f64),
    family: usize,
    direction: Direction,
) -> Result<CharacteristicPath> {
    let (t_anchor, x_anchor) = anchor;
    if t_anchor <= 0.0 || t_anchor > log.params.t_end {
        return Err(FtError::AnchorOutsideWindow);
    }
    // Event times descending below the anchor.
    let mut event_times: Vec<f64> = log.nodes.iter().map(|n| n.time).collect();
    event_times.push(0.0);
    event_times.sort_by(f64::total_cmp);
    event_times.dedup();

    let mut points = vec![(t_anchor, x_anchor)];
    let mut t = t_anchor;
    let mut x = x_anchor;
    let tol_x = 1e-12 * (1.0 + x_anchor.abs() + log.params.lambda_hat * t_anchor);
    let mut guard = 0usize;

    while t > 1e-14 {
        guard += 1;
        if guard > 100_000 {
            return Err(FtError::Other("characteristic tracing stalled".into()));
        }
        // The interval (t_floor, t] has a fixed alive set.
        let t_floor = event_times
            .iter()
            .rev()
            .find(|&&et| et < t - 1e-15)
            .copied()
            .unwrap_or(0.0);
        let t_mid = 0.5 * (t_floor + t);
        let alive = log.alive_at(t_mid);

        // Locate x among front positions at time t.
        let mut left_idx: Option<usize> = None;
        let mut on_front: Option<usize> = None;
        for (k, f) in alive.iter().enumerate() {
            let p = f.position(t);
            if (p - x).abs() <= tol_x {
                on_front = Some(k);
            } else if p < x {
                left_idx = Some(k);
            }
        }

        // On an own-family front whose side characteristics converge
        // into it backward (a rarefaction-type front), the generalized
        // characteristic slides along the front down to its birth node.
        if let Some(k) = on_front {
            let f = alive[k];
            if f.family == family && f.is_physical() {
                let lam_l = model.eigen(&f.u_left)?.lambdas[family];
                let lam_r = model.eigen(&f.u_right)?.lambdas[family];
                let tol_s = 1e-10 * (1.0 + f.speed.abs());
                if lam_l <= f.speed + tol_s && f.speed <= lam_r + tol_s {
                    let t_next = f.birth_time.max(0.0);
                    if t - t_next > 1e-14 {
                        t = t_next;
                        x = f.position(t);
                        points.push((t, x));
                        continue;
                    }
                }
            }
        }

        // State whose speed drives the step.
        let state = if let Some(k) = on_front {
            match direction {
                Direction::Minimal => alive[k].u_left.clone(),
                Direction::Maximal => alive[k].u_right.clone(),
            }
        } else {
            match left_idx {
                Some(k) => alive[k].u_right.clone(),
                None => alive
                    .first()
                    .map(|f| f.u_left.clone())
                    .unwrap_or_else(|| log.fronts[0].u_left.clone()),
            }
        };
        let slope = model.eigen(&state)?.lambdas[family];

        // Nudge off a front before stepping.
        if on_front.is_some() {
            let shift = 2.0 * tol_x;
            x += match direction {
                Direction::Minimal => -shift,
                Direction::Maximal => shift,
            };
        }

        // Backward step: to the interval floor or the first front hit.
        let mut dt = t - t_floor;
        for f in &alive {
            let p = f.position(t);
            let rel = slope - f.speed;
            if p < x - tol_x && rel > 1e-13 {
                dt = dt.min((x - p) / rel);
            } else if p > x + tol_x && rel < -1e-13 {
                dt = dt.min((x - p) / rel);
            }
        }
        let dt = dt.max(1e-15);
        t -= dt;
        x -= slope * dt;
        points.push((t, x));
    }

    Ok(CharacteristicPath {
        family,
        direction,
        points,
    })
}
