//! Scalar flux with two inflection points at u = ±1:
//!
//!   f(u) = u²/2 + u⁴/3 − u⁶/6,   f''(u) = −5(u²−1)(u²+1/5),
//!
//! concave for |u| > 1 and convex on (−1, 1). Upward jumps across the
//! concave regions are admissible shocks while the middle region carries
//! rarefactions, which is exactly the shape needed for the two-shock
//! merge scenario.

use super::scalar::{ScalarFlux, ScalarModel};

pub struct TwoInflectionFlux {
    inflections: [f64; 2],
}

impl ScalarFlux for TwoInflectionFlux {
    fn f(&self, u: f64) -> f64 {
        let u2 = u * u;
        0.5 * u2 + u2 * u2 / 3.0 - u2 * u2 * u2 / 6.0
    }
    fn df(&self, u: f64) -> f64 {
        let u2 = u * u;
        u * (1.0 + 4.0 * u2 / 3.0 - u2 * u2)
    }
    fn d2f(&self, u: f64) -> f64 {
        let u2 = u * u;
        1.0 + 4.0 * u2 - 5.0 * u2 * u2
    }
    fn inflections(&self) -> &[f64] {
        &self.inflections
    }
}

pub type TwoInflection = ScalarModel<TwoInflectionFlux>;

pub fn two_inflection() -> TwoInflection {
    ScalarModel::new(
        "two_inflection",
        TwoInflectionFlux {
            inflections: [-1.0, 1.0],
        },
        -2.2,
        2.2,
    )
}
