//! The event-driven front-tracking engine: front list, interaction
//! scheduling, the accurate/simplified/crude threshold rule, and the
//! Glimm functionals V, Q, Υ with the interaction and cancellation
//! measures.

mod amount;
mod balance;
mod engine;
mod export;
mod glimm;
mod sample;

pub use amount::{interaction_amount, same_family_amount};
pub use balance::{wave_balance, BalanceReport, FamilyBalance};
pub use engine::{next_interaction, run, FrontMotion, Tracker};
pub use glimm::sigma_overlap_integral;
pub use export::{snapshot_from_text, snapshot_to_text};
pub use sample::{l1_distance, sample_solution, total_variation, PiecewiseConstant};

use crate::riemann::FrontKind;
use crate::state::State;

pub type FrontId = u32;

/// Compressed monotone speed profile: segments (Δw, σ_left, σ_right).
pub type SpeedProfile = Vec<(f64, f64, f64)>;

/// A moving discontinuity segment in the (x, t) plane.
#[derive(Clone, Debug)]
pub struct Front {
    pub id: FrontId,
    /// 0-based family; equals the model dimension N for nonphysical
    /// fronts (the "N+1-th field").
    pub family: usize,
    pub kind: FrontKind,
    pub birth_time: f64,
    pub birth_x: f64,
    /// Interaction time at which the front was consumed; None while it
    /// survives to the horizon.
    pub death_time: Option<f64>,
    pub speed: f64,
    pub u_left: State,
    pub u_right: State,
    /// Signed strength; 0 for nonphysical fronts, whose size is the jump.
    pub strength: f64,
    pub generation: u32,
    /// Monotone σ profile of the front's own elementary wave.
    pub profile: SpeedProfile,
}

impl Front {
    pub fn position(&self, t: f64) -> f64 {
        self.birth_x + self.speed * (t - self.birth_time)
    }

    pub fn jump(&self) -> f64 {
        (&self.u_right - &self.u_left).norm()
    }

    pub fn is_physical(&self) -> bool {
        self.kind != FrontKind::Nonphysical
    }

    /// Strength entering the Glimm functionals: |s| for physical fronts,
    /// the jump size for nonphysical ones.
    pub fn glimm_weight(&self) -> f64 {
        if self.is_physical() {
            self.strength.abs()
        } else {
            self.jump()
        }
    }

    pub fn alive_at(&self, t: f64) -> bool {
        t >= self.birth_time && self.death_time.map_or(true, |d| t < d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Accurate,
    Simplified,
    Crude,
}

impl SolverKind {
    pub fn code(&self) -> &'static str {
        match self {
            SolverKind::Accurate => "A",
            SolverKind::Simplified => "S",
            SolverKind::Crude => "C",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "A" => Some(SolverKind::Accurate),
            "S" => Some(SolverKind::Simplified),
            "C" => Some(SolverKind::Crude),
            _ => None,
        }
    }
}

/// One interaction event: exactly two incoming fronts, speed-sorted
/// outgoing fronts, and the measure atoms attached to the point.
#[derive(Clone, Debug)]
pub struct InteractionNode {
    pub id: u32,
    pub time: f64,
    pub x: f64,
    pub incoming: [FrontId; 2],
    pub outgoing: Vec<FrontId>,
    /// Interaction amount 𝓘 (the μ^I atom).
    pub amount: f64,
    /// Same-family strength cancellation |s'|+|s''|-|s'+s''|.
    pub cancellation: f64,
    pub solver: SolverKind,
    /// Ledger movements measured at this node.
    pub dv: f64,
    pub dq: f64,
}

impl InteractionNode {
    /// μ^IC atom: 𝓘 plus the cancellation for same-family collisions.
    pub fn mu_ic(&self) -> f64 {
        self.amount + self.cancellation
    }
}

/// A ledger sample immediately after an event (or at t = 0).
#[derive(Clone, Copy, Debug)]
pub struct LedgerPoint {
    pub time: f64,
    pub v: f64,
    pub q: f64,
    /// Total nonphysical jump mass (tracked separately from V).
    pub np_mass: f64,
}

#[derive(Clone, Debug)]
pub struct RunParams {
    pub model: String,
    pub eps: f64,
    pub rho: f64,
    pub lambda_hat: f64,
    pub seed: u64,
    pub t_end: f64,
}

/// The complete, replayable event history of one ε-run.
#[derive(Clone, Debug)]
pub struct FrontLog {
    pub params: RunParams,
    pub dim: usize,
    pub fronts: Vec<Front>,
    pub nodes: Vec<InteractionNode>,
    pub ledger: Vec<LedgerPoint>,
    /// Frozen Glimm constant C₀ calibrated from the run's own interaction
    /// estimates; Υ(t) = V(t) + C₀·Q(t).
    pub c0: f64,
    pub warnings: Vec<String>,
}

impl FrontLog {
    pub fn front(&self, id: FrontId) -> &Front {
        &self.fronts[id as usize]
    }

    pub fn alive_at(&self, t: f64) -> Vec<&Front> {
        let mut out: Vec<&Front> = self.fronts.iter().filter(|f| f.alive_at(t)).collect();
        out.sort_by(|a, b| {
            a.position(t)
                .total_cmp(&b.position(t))
                .then(a.speed.total_cmp(&b.speed))
                .then(a.id.cmp(&b.id))
        });
        out
    }

    pub fn upsilon(&self, p: &LedgerPoint) -> f64 {
        p.v + self.c0 * p.q
    }

    /// (time, Υ) series over the whole run.
    pub fn upsilon_series(&self) -> Vec<(f64, f64)> {
        self.ledger
            .iter()
            .map(|p| (p.time, self.upsilon(p)))
            .collect()
    }
}
