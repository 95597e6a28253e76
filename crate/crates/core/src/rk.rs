//! Embedded Dormand–Prince 5(4) integration for the small ODEs in this
//! crate: rarefaction curves, elementary-curve paths and the flux-table ODE.
//!
//! States are the crate's own `State` vectors; right-hand sides may fail
//! (for example when a curve leaves Ω), so the RHS returns a `Result`.

use crate::error::{FtError, Result};
use crate::state::State;

/// One accepted integration node with its derivative, enough for cubic
/// Hermite dense output between nodes.
#[derive(Clone, Debug)]
pub struct OdeNode {
    pub x: f64,
    pub y: State,
    pub dy: State,
}

#[derive(Clone, Debug)]
pub struct OdeSolution {
    pub nodes: Vec<OdeNode>,
}

impl OdeSolution {
    pub fn last(&self) -> &OdeNode {
        self.nodes.last().expect("empty solution")
    }

    /// Cubic Hermite evaluation at x; clamps to the integration range.
    pub fn eval(&self, x: f64) -> State {
        let nodes = &self.nodes;
        if nodes.len() == 1 || x <= nodes[0].x.min(self.last().x) && nodes[0].x == self.last().x {
            return nodes[0].y.clone();
        }
        let forward = self.last().x >= nodes[0].x;
        // Locate the bracketing interval.
        let mut lo = 0;
        let mut hi = nodes.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let before = if forward { nodes[mid].x <= x } else { nodes[mid].x >= x };
            if before {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = &nodes[lo];
        let b = &nodes[hi];
        let h = b.x - a.x;
        if h == 0.0 {
            return a.y.clone();
        }
        let t = ((x - a.x) / h).clamp(0.0, 1.0);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let mut out = &a.y * h00;
        out.add_scaled(h10 * h, &a.dy);
        out.add_scaled(h01, &b.y);
        out.add_scaled(h11 * h, &b.dy);
        out
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 4th-order embedded weights.
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;

/// Integrates dy/dx = f(x, y) from x0 to x1 (either direction) with local
/// error tolerance `tol` per unit step, recording every accepted node.
pub fn integrate<F>(f: F, y0: State, x0: f64, x1: f64, tol: f64) -> Result<OdeSolution>
where
    F: Fn(f64, &State) -> Result<State>,
{
    let span = x1 - x0;
    let mut nodes = Vec::new();
    let dy0 = f(x0, &y0)?;
    nodes.push(OdeNode {
        x: x0,
        y: y0,
        dy: dy0,
    });
    if span == 0.0 {
        return Ok(OdeSolution { nodes });
    }
    let dir = span.signum();
    let mut h = (span.abs() / 16.0).max(1e-12) * dir;
    let mut x = x0;
    let mut steps = 0usize;
    while (x1 - x) * dir > 0.0 {
        steps += 1;
        if steps > 1_000_000 {
            return Err(FtError::Other("ode integration step cap exceeded".into()));
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let cur = nodes.last().unwrap().clone();
        let k1 = cur.dy.clone();
        let mut y = cur.y.clone();
        y.add_scaled(h * A21, &k1);
        let k2 = f(x + h / 5.0, &y)?;
        let mut y = cur.y.clone();
        y.add_scaled(h * A31, &k1);
        y.add_scaled(h * A32, &k2);
        let k3 = f(x + 3.0 * h / 10.0, &y)?;
        let mut y = cur.y.clone();
        y.add_scaled(h * A41, &k1);
        y.add_scaled(h * A42, &k2);
        y.add_scaled(h * A43, &k3);
        let k4 = f(x + 4.0 * h / 5.0, &y)?;
        let mut y = cur.y.clone();
        y.add_scaled(h * A51, &k1);
        y.add_scaled(h * A52, &k2);
        y.add_scaled(h * A53, &k3);
        y.add_scaled(h * A54, &k4);
        let k5 = f(x + 8.0 * h / 9.0, &y)?;
        let mut y = cur.y.clone();
        y.add_scaled(h * A61, &k1);
        y.add_scaled(h * A62, &k2);
        y.add_scaled(h * A63, &k3);
        y.add_scaled(h * A64, &k4);
        y.add_scaled(h * A65, &k5);
        let k6 = f(x + h, &y)?;
        let mut y5 = cur.y.clone();
        y5.add_scaled(h * B1, &k1);
        y5.add_scaled(h * B3, &k3);
        y5.add_scaled(h * B4, &k4);
        y5.add_scaled(h * B5, &k5);
        y5.add_scaled(h * B6, &k6);
        let k7 = f(x + h, &y5)?;
        let mut y4 = cur.y.clone();
        y4.add_scaled(h * E1, &k1);
        y4.add_scaled(h * E3, &k3);
        y4.add_scaled(h * E4, &k4);
        y4.add_scaled(h * E5, &k5);
        y4.add_scaled(h * E6, &k6);
        y4.add_scaled(h * E7, &k7);
        let err = (&y5 - &y4).norm_inf();
        let scale = tol * h.abs().max(1e-16) * (1.0 + y5.norm_inf());
        if err <= scale || h.abs() < 1e-14 {
            x += h;
            nodes.push(OdeNode { x, y: y5, dy: k7 });
            let grow = if err > 0.0 {
                (scale / err).powf(0.2).min(4.0)
            } else {
                4.0
            };
            h *= 0.9 * grow.max(0.2);
        } else {
            h *= 0.9 * (scale / err).powf(0.25).max(0.1);
        }
    }
    Ok(OdeSolution { nodes })
}

/// Classical fixed-step RK4, used as an independent oracle in tests and
/// for the refinement cross-checks of the flux table.
pub fn rk4_fixed<F>(f: F, y0: State, x0: f64, x1: f64, steps: usize) -> Result<State>
where
    F: Fn(f64, &State) -> Result<State>,
{
    let h = (x1 - x0) / steps as f64;
    let mut y = y0;
    let mut x = x0;
    for _ in 0..steps {
        let k1 = f(x, &y)?;
        let mut t = y.clone();
        t.add_scaled(h / 2.0, &k1);
        let k2 = f(x + h / 2.0, &t)?;
        let mut t = y.clone();
        t.add_scaled(h / 2.0, &k2);
        let k3 = f(x + h / 2.0, &t)?;
        let mut t = y.clone();
        t.add_scaled(h, &k3);
        let k4 = f(x + h, &t)?;
        y.add_scaled(h / 6.0, &k1);
        y.add_scaled(h / 3.0, &k2);
        y.add_scaled(h / 3.0, &k3);
        y.add_scaled(h / 6.0, &k4);
        x += h;
    }
    Ok(y)
}
