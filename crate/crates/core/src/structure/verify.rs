//! Numerical verification of the structure theorem's conclusions at a
//! sampled jump point: left/right limits, the Rankine-Hugoniot identity,
//! Liu stability margins and the composed-jump intermediate states.

use serde::Serialize;

use crate::error::{FtError, Result};
use crate::riemann::{hugoniot_speed, CurveBuilder};
use crate::state::State;
use crate::tracker::{sample_solution, FrontLog};

#[derive(Clone, Debug, Serialize)]
pub struct JumpReport {
    pub t: f64,
    pub x: f64,
    pub family: usize,
    /// Number of covering curves (fronts with significant strength
    /// through the point).
    pub p: usize,
    pub slopes: Vec<f64>,
    pub common_slope: f64,
    pub slope_spread: f64,
    pub u_left: Vec<f64>,
    pub u_right: Vec<f64>,
    pub rh_residual: f64,
    /// min over the sampled Hugoniot curve of σ̂(τ) − ẏ.
    pub liu_margin: f64,
    pub intermediate_states: Vec<Vec<f64>>,
    /// Oscillation of the windowed left/right limits per shrinking radius.
    pub oscillation: Vec<f64>,
    /// μ^IC mass inside the screening window.
    pub window_mass: f64,
    /// Set when coincident traces make the multiplicity undecidable.
    pub multiplicity_undetermined: bool,
}

impl JumpReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("t {:.12e}\n", self.t));
        s.push_str(&format!("x {:.12e}\n", self.x));
        s.push_str(&format!("family {}\n", self.family + 1));
        s.push_str(&format!("p {}\n", self.p));
        s.push_str(&format!("common_slope {:.12e}\n", self.common_slope));
        s.push_str(&format!("slope_spread {:.3e}\n", self.slope_spread));
        s.push_str(&format!(
            "u_left {}\n",
            self.u_left
                .iter()
                .map(|v| format!("{v:.12e}"))
                .collect::<Vec<_>>()
                .join(" ")
        ));
        s.push_str(&format!(
            "u_right {}\n",
            self.u_right
                .iter()
                .map(|v| format!("{v:.12e}"))
                .collect::<Vec<_>>()
                .join(" ")
        ));
        s.push_str(&format!("rh_residual {:.3e}\n", self.rh_residual));
        s.push_str(&format!("liu_margin {:.3e}\n", self.liu_margin));
        s.push_str(&format!("window_mass {:.3e}\n", self.window_mass));
        s.push_str(&format!(
            "multiplicity_undetermined {}\n",
            self.multiplicity_undetermined
        ));
        s
    }
}

/// Verifies the theorem's jump-point conclusions at (t₀, x₀) of the
/// finest log. `strength_floor` filters which covering fronts count as
/// curves; `atom_threshold` rejects points carrying interaction mass.
pub fn verify_jump_point(
    log: &FrontLog,
    builder: &CurveBuilder<'_>,
    point: (f64, f64),
    strength_floor: f64,
    atom_threshold: f64,
) -> Result<JumpReport> {
    let (t0, x0) = point;
    let eps = log.params.eps;
    let lambda_hat = log.params.lambda_hat;
    let r_cover = 4.0 * eps * (lambda_hat + 1.0);

    // Screen for interaction atoms inside the window.
    let mut window_mass = 0.0;
    for n in &log.nodes {
        if (n.time - t0).abs() <= r_cover && (n.x - x0).abs() <= r_cover {
            window_mass += n.mu_ic();
        }
    }
    if window_mass > atom_threshold {
        return Err(FtError::InteractionPoint(window_mass));
    }

    // Covering fronts: alive at t0, passing within the window, strong.
    let alive = log.alive_at(t0);
    let covering: Vec<_> = alive
        .iter()
        .filter(|f| {
            f.is_physical()
                && (f.position(t0) - x0).abs() <= r_cover
                && f.strength.abs() >= strength_floor
        })
        .collect();
    if covering.is_empty() {
        return Err(FtError::Other(format!(
            "no covering front within {r_cover:.3e} of ({t0}, {x0})"
        )));
    }
    let family = covering[0].family;
    // Curve multiplicity p: each covering front contributes one curve per
    // (i,k)-subfront; a composed jump carried by one front still counts
    // its coincident subdiscontinuity curves.
    let mut slopes: Vec<f64> = Vec::new();
    for f in &covering {
        let n_sub = super::subfront::decompose_substrengths(builder, f)?
            .len()
            .max(1);
        for _ in 0..n_sub {
            slopes.push(f.speed);
        }
    }
    let common_slope = slopes.iter().sum::<f64>() / slopes.len() as f64;
    let slope_spread = slopes
        .iter()
        .fold(0.0f64, |m, s| m.max((s - common_slope).abs()));

    // Windowed limits left of the leftmost / right of the rightmost
    // covering front, with the oscillation trend over shrinking radii.
    let radii = [8.0, 4.0, 2.0, 1.0].map(|k| k * eps * (lambda_hat + 1.0));
    let prof = sample_solution(log, t0);
    let x_left_edge = covering
        .iter()
        .map(|f| f.position(t0))
        .fold(f64::INFINITY, f64::min);
    let x_right_edge = covering
        .iter()
        .map(|f| f.position(t0))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut lefts: Vec<State> = Vec::new();
    let mut rights: Vec<State> = Vec::new();
    for r in radii {
        lefts.push(prof.eval(x_left_edge - r).clone());
        rights.push(prof.eval(x_right_edge + r).clone());
    }
    let mut oscillation = Vec::new();
    for w in lefts.windows(2).chain(rights.windows(2)) {
        oscillation.push((&w[1] - &w[0]).norm());
    }
    let u_left = lefts.last().unwrap().clone();
    let u_right = rights.last().unwrap().clone();

    // RH residual with the common slope.
    let du = &u_right - &u_left;
    let df = &builder.model.flux(&u_right)? - &builder.model.flux(&u_left)?;
    let mut rh = df.clone();
    rh.add_scaled(-common_slope, &du);
    let rh_residual = rh.norm();

    // Liu margins along the wave curve from u_left.
    let e = builder.model.eigen(&u_left)?;
    let s_total = e.left[family].dot(&du);
    let mut liu_margin = f64::INFINITY;
    if s_total.abs() > builder.num.strength_floor {
        let curve = builder.build(&u_left, s_total, family)?;
        for k in 1..=24 {
            let w = curve.width() * k as f64 / 25.0;
            let u = curve.state_at_w(w);
            if (&u - &u_left).norm() < 1e-12 {
                continue;
            }
            let (sig, _) = hugoniot_speed(builder.model, &u_left, &u)?;
            liu_margin = liu_margin.min(sig - common_slope);
        }
    }
    if !liu_margin.is_finite() {
        liu_margin = 0.0;
    }

    // Intermediate states between separated covering fronts; coincident
    // traces (within one front, or fronts closer than the resolution)
    // flag the multiplicity as undetermined.
    let mut intermediate_states = Vec::new();
    let mut separated = 1;
    let mut sorted = covering.clone();
    sorted.sort_by(|a, b| a.position(t0).total_cmp(&b.position(t0)));
    for w in sorted.windows(2) {
        let gap = w[1].position(t0) - w[0].position(t0);
        if gap > 4.0 * eps {
            let mid = 0.5 * (w[0].position(t0) + w[1].position(t0));
            intermediate_states.push(prof.eval(mid).as_slice().to_vec());
            separated += 1;
        }
    }
    let multiplicity_undetermined = slopes.len() > separated;

    Ok(JumpReport {
        t: t0,
        x: x0,
        family,
        p: slopes.len(),
        slopes,
        common_slope,
        slope_spread,
        u_left: u_left.as_slice().to_vec(),
        u_right: u_right.as_slice().to_vec(),
        rh_residual,
        liu_margin,
        intermediate_states,
        oscillation,
        window_mass,
        multiplicity_undetermined,
    })
}
