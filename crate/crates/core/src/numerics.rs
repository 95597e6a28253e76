//! All tunable tolerances in one place, with the defaults the rest of the
//! crate assumes. Every field can be overridden from the `[numerics]`
//! section of a run config.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct Numerics {
    /// Base node count for elementary-curve grids.
    pub curve_grid: usize,
    /// Upper limit for curve-grid doubling.
    pub curve_grid_max: usize,
    /// Endpoint agreement target when doubling the curve grid.
    pub curve_refine_tol: f64,
    /// Fixed-point stop: D(γ_{n+1}, γ_n) < fp_tol·(1+|s|).
    pub fp_tol: f64,
    pub fp_max_iter: usize,
    /// Newton residual target for Riemann inversion.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub newton_max_halvings: usize,
    /// Contact tolerance factor: tol = contact_tol·(1 + max|f̃|).
    pub contact_tol: f64,
    /// Membership threshold for the zero manifolds Z_i^j.
    pub manifold_tol: f64,
    /// Minimal eigenvalue gap treated as strictly hyperbolic.
    pub hyperbolicity_gap: f64,
    /// Parameter tolerance for envelope contact-point bisection.
    pub envelope_bisect_tol: f64,
    /// Local error target per unit parameter for curve/ODE integration.
    pub ode_tol: f64,
    /// Deterministic event-ordering perturbation scale (per front rank).
    pub tie_break_eta: f64,
    /// Guard band for duplicate crossing times.
    pub event_guard: f64,
    /// Total-variation smallness bound; exceeding it sets a warning flag.
    pub tv_bound: f64,
    /// Hard cap on simultaneous live fronts.
    pub front_cap: usize,
    /// Strengths below this are treated as zero waves.
    pub strength_floor: f64,
    /// Finite-difference step scale for fallback Jacobians.
    pub fd_step: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            curve_grid: 256,
            curve_grid_max: 2048,
            curve_refine_tol: 1e-9,
            fp_tol: 1e-11,
            fp_max_iter: 200,
            newton_tol: 1e-10,
            newton_max_iter: 60,
            newton_max_halvings: 8,
            contact_tol: 1e-10,
            manifold_tol: 1e-9,
            hyperbolicity_gap: 1e-8,
            envelope_bisect_tol: 1e-12,
            ode_tol: 1e-10,
            tie_break_eta: 1e-12,
            event_guard: 1e-13,
            tv_bound: 0.5,
            front_cap: 400_000,
            strength_floor: 1e-13,
            fd_step: 1e-6,
        }
    }
}
