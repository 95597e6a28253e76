//! Piecewise-constant profiles: initial data, solution samples, total
//! variation and L¹ distances.

use crate::state::State;

use super::FrontLog;

/// A piecewise-constant function of x: `left` before the first
/// breakpoint, then the state to the right of each breakpoint.
#[derive(Clone, Debug)]
pub struct PiecewiseConstant {
    pub left: State,
    pub breaks: Vec<(f64, State)>,
}

impl PiecewiseConstant {
    pub fn constant(u: State) -> Self {
        PiecewiseConstant {
            left: u,
            breaks: Vec::new(),
        }
    }

    pub fn new(left: State, breaks: Vec<(f64, State)>) -> Self {
        debug_assert!(breaks.windows(2).all(|w| w[0].0 <= w[1].0));
        PiecewiseConstant { left, breaks }
    }

    pub fn eval(&self, x: f64) -> &State {
        let mut cur = &self.left;
        for (bx, u) in &self.breaks {
            if x >= *bx {
                cur = u;
            } else {
                break;
            }
        }
        cur
    }

    pub fn right_state(&self) -> &State {
        self.breaks.last().map(|(_, u)| u).unwrap_or(&self.left)
    }

    /// Drops zero jumps (within tol in the Euclidean norm).
    pub fn simplified(&self, tol: f64) -> PiecewiseConstant {
        let mut out = PiecewiseConstant {
            left: self.left.clone(),
            breaks: Vec::new(),
        };
        let mut cur = self.left.clone();
        for (x, u) in &self.breaks {
            if (u - &cur).norm() > tol {
                out.breaks.push((*x, u.clone()));
                cur = u.clone();
            }
        }
        out
    }

    pub fn total_variation(&self) -> f64 {
        let mut tv = 0.0;
        let mut cur = &self.left;
        for (_, u) in &self.breaks {
            tv += (u - cur).norm();
            cur = u;
        }
        tv
    }
}

/// TV of a profile (sum of Euclidean jump sizes).
pub fn total_variation(p: &PiecewiseConstant) -> f64 {
    p.total_variation()
}

/// L¹ distance of two profiles over [xa, xb] (Euclidean norm pointwise).
pub fn l1_distance(p1: &PiecewiseConstant, p2: &PiecewiseConstant, xa: f64, xb: f64) -> f64 {
    let mut xs: Vec<f64> = vec![xa, xb];
    for (x, _) in p1.breaks.iter().chain(p2.breaks.iter()) {
        if *x > xa && *x < xb {
            xs.push(*x);
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut total = 0.0;
    for w in xs.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        total += (p1.eval(mid) - p2.eval(mid)).norm() * (w[1] - w[0]);
    }
    total
}

/// The approximate solution at time t (at t+ when t is an event time):
/// ordered breakpoints with exactly the live fronts as jumps.
pub fn sample_solution(log: &FrontLog, t: f64) -> PiecewiseConstant {
    let alive = log.alive_at(t);
    if alive.is_empty() {
        // Constant data: reconstruct from the initial fronts if any ever
        // existed, else from nothing; fall back to the first front's
        // left state or a zero state of the right dimension.
        let left = log
            .fronts
            .first()
            .map(|f| f.u_left.clone())
            .unwrap_or_else(|| State::zeros(log.dim));
        return PiecewiseConstant::constant(left);
    }
    let left = alive[0].u_left.clone();
    let breaks = alive
        .iter()
        .map(|f| (f.position(t), f.u_right.clone()))
        .collect();
    PiecewiseConstant { left, breaks }
}
