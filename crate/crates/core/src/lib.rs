//! Event-driven wave-front tracking for one-dimensional strictly
//! hyperbolic systems of conservation laws with piecewise genuinely
//! nonlinear fields, plus the analysis tooling that extracts the
//! discontinuity structure of the approximate solutions.

pub mod config;
pub mod envelope;
pub mod error;
pub mod flux;
pub mod lab;
pub mod numerics;
pub mod riemann;
pub mod rk;
pub mod state;
pub mod structure;
pub mod tracker;

pub use error::{FtError, Result};
pub use numerics::Numerics;
pub use state::{Mat, State};
