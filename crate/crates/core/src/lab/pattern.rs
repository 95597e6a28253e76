//! Shock presence/absence extraction on the line x = 0 for the transport
//! scenarios: the standing shock is the family-2 jump mass carried by
//! (near-)zero-speed fronts near the origin. During the rarefaction and
//! compression phases that mass is spread across fast fan pieces, so the
//! indicator drops within O(ε) of the phase boundaries.

use serde::Serialize;

use crate::error::Result;
use crate::numerics::Numerics;
use crate::tracker::{self, FrontLog};

use super::cantor::CantorSpec;
use super::coupled::CoupledModel;
use super::scenarios;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PatternParams {
    /// Spatial window |x| ≤ window around the origin.
    pub window: f64,
    /// Fronts count as standing when |speed| ≤ v_still.
    pub v_still: f64,
    /// Presence needs standing mass ≥ theta · nominal jump.
    pub theta: f64,
    /// Sampling step in t.
    pub dt: f64,
}

impl PatternParams {
    /// Defaults tied to the run resolution: window 10ε, stillness ε.
    pub fn for_eps(eps: f64) -> PatternParams {
        PatternParams {
            window: 10.0 * eps,
            v_still: eps,
            theta: 0.5,
            dt: 0.5 * eps,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShockPattern {
    pub params: PatternParams,
    pub nominal_jump: f64,
    /// Maximal closed intervals of shock presence.
    pub present: Vec<(f64, f64)>,
    /// Maximal open intervals of absence between them.
    pub absent: Vec<(f64, f64)>,
}

impl ShockPattern {
    pub fn present_at(&self, t: f64) -> bool {
        self.present.iter().any(|(a, b)| t >= *a && t <= *b)
    }
}

/// Standing family-2 jump mass near x = 0 at time t.
fn standing_mass(log: &FrontLog, t: f64, p: &PatternParams) -> f64 {
    log.alive_at(t)
        .iter()
        .filter(|f| {
            f.family == 1
                && f.is_physical()
                && f.position(t).abs() <= p.window
                && f.speed.abs() <= p.v_still
        })
        .map(|f| f.strength.abs())
        .sum()
}

/// Scans the run and returns the presence/absence pattern on x = 0.
pub fn shock_pattern(log: &FrontLog, nominal_jump: f64, params: &PatternParams) -> ShockPattern {
    let t_end = log.params.t_end;
    let n = (t_end / params.dt).ceil() as usize;
    let mut present = Vec::new();
    let mut absent = Vec::new();
    let mut run_start = 0.0;
    let mut prev = true;
    for k in 0..=n {
        let t = (t_end * k as f64 / n as f64).min(t_end);
        let is_present = standing_mass(log, t, params) >= params.theta * nominal_jump;
        if k == 0 {
            prev = is_present;
            continue;
        }
        if is_present != prev {
            let edge = t - 0.5 * t_end / n as f64;
            if prev {
                present.push((run_start, edge));
            } else {
                absent.push((run_start, edge));
            }
            run_start = edge;
            prev = is_present;
        }
    }
    if prev {
        present.push((run_start, t_end));
    } else {
        absent.push((run_start, t_end));
    }
    ShockPattern {
        params: *params,
        nominal_jump,
        present,
        absent,
    }
}

/// Compares measured absence intervals with the expected B_m shadow:
/// every expected interval must match one measured absence with both
/// edges within `tol`, and no unmatched absences may remain.
pub fn match_shadow(
    pattern: &ShockPattern,
    shadow: &[(f64, f64)],
    tol: f64,
) -> (bool, f64) {
    let mut worst = 0.0f64;
    let mut used = vec![false; pattern.absent.len()];
    for (lo, hi) in shadow {
        let mut found = false;
        for (k, (a, b)) in pattern.absent.iter().enumerate() {
            if used[k] {
                continue;
            }
            let e = (a - lo).abs().max((b - hi).abs());
            if e <= tol {
                used[k] = true;
                worst = worst.max(e);
                found = true;
                break;
            }
        }
        if !found {
            return (false, f64::INFINITY);
        }
    }
    // Spurious extra absence intervals longer than the tolerance fail.
    for (k, (a, b)) in pattern.absent.iter().enumerate() {
        if !used[k] && (b - a) > tol {
            return (false, f64::INFINITY);
        }
    }
    (true, worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct CantorReport {
    pub m: usize,
    pub eps_list: Vec<f64>,
    pub expected_shadow: Vec<(f64, f64)>,
    /// Pattern of the finest run.
    pub pattern: ShockPattern,
    pub matches: bool,
    pub max_edge_error: f64,
}

/// Runs the generation-m Cantor scenario at the given resolutions and
/// verifies the shock pattern on x = 0 against the complement of the
/// B_m shadow at resolution 10·ε_finest.
pub fn cantor_shock_scenario(
    model: &CoupledModel,
    spec: &CantorSpec,
    u_l: f64,
    u_r: f64,
    eps_list: &[f64],
    num: &Numerics,
) -> Result<(CantorReport, Vec<FrontLog>)> {
    let sc = scenarios::cantor(model, spec, u_l, u_r, 64.0)?;
    let mut logs = Vec::new();
    for &eps in eps_list {
        logs.push(tracker::run(model, num.clone(), &sc.data, eps, sc.t_end, None, 0)?);
    }
    let eps_finest = *eps_list.last().unwrap();
    let nominal = (u_l - u_r).abs();
    let params = PatternParams::for_eps(eps_finest);
    let pattern = shock_pattern(logs.last().unwrap(), nominal, &params);
    let shadow = spec.shadow();
    let tol = 10.0 * eps_finest;
    let (matches, max_edge_error) = match_shadow(&pattern, &shadow, tol);
    Ok((
        CantorReport {
            m: spec.m,
            eps_list: eps_list.to_vec(),
            expected_shadow: shadow,
            pattern,
            matches,
            max_edge_error,
        },
        logs,
    ))
}
