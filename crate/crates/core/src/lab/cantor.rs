//! Cantor-set initial data: the interval families B⁻_{m,n}, B⁺_{m,n},
//! the transported v profile, and the corrected u profile that kills the
//! spurious interface waves.

use crate::error::{FtError, Result};
use crate::state::State;
use crate::tracker::PiecewiseConstant;

use super::coupled::CoupledModel;

/// Generation-m Cantor data parameters: amplitudes a_n = a0·decay^n.
#[derive(Clone, Copy, Debug)]
pub struct CantorSpec {
    pub m: usize,
    pub h: f64,
    pub a0: f64,
    pub decay: f64,
}

/// One removed interval: (lo, mid, hi) = 6h·((3n+1), (3n+3/2), (3n+2))/3^m
/// with its amplitude.
#[derive(Clone, Copy, Debug)]
pub struct CantorInterval {
    pub lo: f64,
    pub mid: f64,
    pub hi: f64,
    pub amplitude: f64,
}

impl CantorSpec {
    pub fn intervals(&self) -> Vec<CantorInterval> {
        let scale = 6.0 * self.h / 3f64.powi(self.m as i32);
        let count = 3usize.pow(self.m.saturating_sub(1) as u32);
        (0..count)
            .map(|n| {
                let base = 3.0 * n as f64;
                CantorInterval {
                    lo: scale * (base + 1.0),
                    mid: scale * (base + 1.5),
                    hi: scale * (base + 2.0),
                    amplitude: self.a0 * self.decay.powi(n as i32),
                }
            })
            .collect()
    }

    /// The shadow of B_m on the t-axis at x = 0: union of (lo, hi).
    pub fn shadow(&self) -> Vec<(f64, f64)> {
        self.intervals().iter().map(|b| (b.lo, b.hi)).collect()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.intervals().iter().map(|b| b.amplitude).collect()
    }
}

/// Builds the (u₀, v₀) data: v₀ = -a_n on B⁻ (rarefaction phase first at
/// x = 0) and +a_n on B⁺; u₀ is the two-state step with the correction
/// states applied greedily left-to-right at every v interface so that
/// each interface carries a pure transport jump.
pub fn build_cantor_data(
    model: &CoupledModel,
    spec: &CantorSpec,
    u_l: f64,
    u_r: f64,
    tv_bound: f64,
) -> Result<PiecewiseConstant> {
    if spec.m == 0 {
        // No v perturbation: pure two-state step.
        return Ok(PiecewiseConstant::new(
            State::new(&[u_l, 0.0]),
            vec![(0.0, State::new(&[u_r, 0.0]))],
        ));
    }
    let intervals = spec.intervals();
    let mut breaks: Vec<(f64, State)> = vec![(0.0, State::new(&[u_r, 0.0]))];
    let mut u = u_r;
    let mut v = 0.0;
    let mut tv = (u_l - u_r).abs();
    for b in &intervals {
        for (x, v_next) in [(b.lo, -b.amplitude), (b.mid, b.amplitude), (b.hi, 0.0)] {
            let c = model.transport_invariant(u, v)?;
            let u_next = model.invert_transport(c, v_next)?;
            tv += (u_next - u).abs() + (v_next - v).abs();
            if tv > tv_bound {
                return Err(FtError::TvBound {
                    tv,
                    bound: tv_bound,
                    context: format!("cantor amplitude a_n = {}", b.amplitude),
                });
            }
            u = u_next;
            v = v_next;
            breaks.push((x, State::new(&[u, v])));
        }
    }
    Ok(PiecewiseConstant::new(State::new(&[u_l, 0.0]), breaks))
}
