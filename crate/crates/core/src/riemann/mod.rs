//! Elementary curves via the envelope fixed point, general Riemann
//! solutions by the wave map, and the accurate / simplified / crude
//! approximate solvers.

mod curve;
mod path;
mod solve;

pub use curve::{CurveBuilder, ElementaryCurve, PieceKind, WavePiece};
pub use path::CurvePath;
pub use solve::{
    accurate_solver, classify_front, crude_solver, discretize_rarefaction, hugoniot_speed,
    liu_admissible, simplified_solver, solve_riemann, FrontSpec, LiuReport, WaveFan,
};

use serde::{Deserialize, Serialize};

/// The three kinds of physical wave-fronts, plus the bookkeeping fronts
/// of the simplified solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrontKind {
    Discontinuity,
    Rarefaction,
    Mixed,
    Nonphysical,
}

impl FrontKind {
    pub fn code(&self) -> &'static str {
        match self {
            FrontKind::Discontinuity => "D",
            FrontKind::Rarefaction => "R",
            FrontKind::Mixed => "M",
            FrontKind::Nonphysical => "N",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "D" => Some(FrontKind::Discontinuity),
            "R" => Some(FrontKind::Rarefaction),
            "M" => Some(FrontKind::Mixed),
            "N" => Some(FrontKind::Nonphysical),
            _ => None,
        }
    }
}
