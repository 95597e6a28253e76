//! Post-processing of front logs: (i,k)-substrength decomposition,
//! approximate subdiscontinuity curves, limit extraction across ε-runs,
//! generalized characteristics and jump-point verification.

mod characteristic;
mod curves;
mod limits;
mod subfront;
mod verify;

pub use characteristic::{generalized_characteristic, CharacteristicPath, Direction};
pub use curves::{extract_approx_subcurves, ApproxSubCurve, CurveSegment};
pub use limits::{limit_subcurves, measure_atoms, AtomCluster, LimitCurve};
pub use subfront::{decompose_substrengths, SubFrontRecord};
pub use verify::{verify_jump_point, JumpReport};
