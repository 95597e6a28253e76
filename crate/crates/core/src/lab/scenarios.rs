//! Canonical scenario data: the Burgers suite, the two-inflection merge
//! picture, the multi-wave subcurve stress case and the §6 transport
//! scenarios. All initial data is piecewise constant and pinned here so
//! every test and the CLI presets agree bit-for-bit.

use crate::error::Result;
use crate::state::State;
use crate::tracker::PiecewiseConstant;

use super::cantor::{build_cantor_data, CantorSpec};
use super::coupled::CoupledModel;

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub data: PiecewiseConstant,
    pub t_end: f64,
}

fn scalar_steps(left: f64, steps: &[(f64, f64)]) -> PiecewiseConstant {
    PiecewiseConstant::new(
        State::scalar(left),
        steps.iter().map(|(x, u)| (*x, State::scalar(*u))).collect(),
    )
}

pub fn burgers_shock() -> Scenario {
    Scenario {
        name: "burgers_shock",
        data: scalar_steps(1.0, &[(0.0, 0.0)]),
        t_end: 2.0,
    }
}

pub fn burgers_rarefaction() -> Scenario {
    Scenario {
        name: "burgers_rarefaction",
        data: scalar_steps(0.0, &[(0.0, 1.0)]),
        t_end: 2.0,
    }
}

/// Two shocks that collide and merge.
pub fn burgers_collision() -> Scenario {
    Scenario {
        name: "burgers_collision",
        data: scalar_steps(1.0, &[(0.0, 0.4), (1.0, -0.6)]),
        t_end: 4.0,
    }
}

/// Head-on shock and rarefaction with partial cancellation.
pub fn burgers_cancellation() -> Scenario {
    Scenario {
        name: "burgers_cancellation",
        data: scalar_steps(0.8, &[(0.0, -0.4), (1.0, 0.3)]),
        t_end: 4.0,
    }
}

/// Eight mixed jumps; produces a healthy stream of interactions.
pub fn burgers_multistep() -> Scenario {
    Scenario {
        name: "burgers_multistep",
        data: scalar_steps(
            0.8,
            &[
                (-2.0, -0.3),
                (-1.5, 0.5),
                (-1.0, -0.6),
                (-0.5, 0.2),
                (0.0, 0.9),
                (0.5, -0.8),
                (1.0, 0.4),
                (1.5, -0.1),
            ],
        ),
        t_end: 3.0,
    }
}

/// The two-inflection merge picture: shocks [u₁,u₂] and [u₃,u₄] close on
/// a centered rarefaction, decelerate as they eat it, and combine into a
/// single standing shock at P ≈ (0, t_P). The outer states sit near the
/// roots ±√3 of f, leaving a small positive gap between the merged chord
/// and f(0); the shocks therefore arrive at P with nearly equal speeds
/// and the final interaction amount is bounded by the gap area.
pub fn fig2_merge() -> Scenario {
    let (u1, u2, u3, u4) = fig2_states();
    Scenario {
        name: "fig2_merge",
        data: scalar_steps(u1, &[(-0.1, u2), (0.0, u3), (0.1, u4)]),
        t_end: 4.0,
    }
}

/// The two-inflection states of the merge picture.
pub fn fig2_states() -> (f64, f64, f64, f64) {
    (-1.7393, -0.5, 0.5, 1.7393)
}

/// Dense multi-wave data on the two-inflection flux, rich in subfronts
/// of every (i, k); the subcurve-count stress scenario.
pub fn multiwave() -> Scenario {
    Scenario {
        name: "multiwave",
        data: scalar_steps(
            1.8,
            &[
                (-2.0, -1.6),
                (-1.5, 0.7),
                (-1.0, -1.9),
                (-0.5, 1.5),
                (0.0, -0.6),
                (0.5, 1.9),
                (1.0, -1.3),
                (1.5, 0.9),
            ],
        ),
        t_end: 0.25,
    }
}

/// §6 single-interval transport scenario: a standing shock at x = 0 is
/// opened into a rarefaction by the −a phase and refocused by the +a
/// phase. Identical to Cantor generation m = 1 at scale h.
pub fn single_interval(
    model: &CoupledModel,
    a: f64,
    h: f64,
    u_l: f64,
    u_r: f64,
    tv_bound: f64,
) -> Result<Scenario> {
    let spec = CantorSpec {
        m: 1,
        h,
        a0: a,
        decay: 1.0,
    };
    Ok(Scenario {
        name: "coupled_single_interval",
        data: build_cantor_data(model, &spec, u_l, u_r, tv_bound)?,
        t_end: 7.0 * h,
    })
}

/// Generation-m Cantor scenario data.
pub fn cantor(
    model: &CoupledModel,
    spec: &CantorSpec,
    u_l: f64,
    u_r: f64,
    tv_bound: f64,
) -> Result<Scenario> {
    Ok(Scenario {
        name: "coupled_cantor",
        data: build_cantor_data(model, spec, u_l, u_r, tv_bound)?,
        t_end: 7.0 * spec.h,
    })
}

/// The standard lab parameters used by the Cantor acceptance scenarios:
/// (a0, u_l, u_r).
pub fn cantor_defaults() -> (f64, f64, f64) {
    (1.0, 0.2, -0.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::{two_inflection, ScalarFlux};

    #[test]
    fn fig2_shock_speeds_symmetric() {
        let m = two_inflection();
        let f = |u: f64| m.flux_fn().f(u);
        let (u1, u2, u3, u4) = fig2_states();
        let s_left = (f(u2) - f(u1)) / (u2 - u1);
        let s_right = (f(u4) - f(u3)) / (u4 - u3);
        assert!((s_left + s_right).abs() < 1e-12);
        assert!(s_left > 0.1);
        // Merged chord has speed 0 and stays strictly below f inside,
        // with only a small gap at u = 0 (the near-tangent merge).
        assert!((f(u4) - f(u1)).abs() < 1e-12);
        let gap = f(0.0) - f(u4);
        assert!(gap > 0.0 && gap < 0.06, "gap = {gap}");
        for k in 1..200 {
            let u = u1 + (u4 - u1) * k as f64 / 200.0;
            assert!(f(u) > f(u1), "chord not below f at {u}");
        }
    }
}
