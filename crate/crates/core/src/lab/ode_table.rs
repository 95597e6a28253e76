//! The ODE-defined flux F(u, a) of the coupled counterexample system:
//!
//!   dF/du = (1 − G)/(2G − 1),   G = √(1 + 2e^{-1/a}(F + u)),   F(0, a) = 0,
//!
//! integrated per parameter slice together with the parameter derivative
//! F_a (whose linear ODE follows by differentiating the right-hand side),
//! so the coupled flux gets ∂f/∂v without cross-slice differencing.

use crate::error::{FtError, Result};
use crate::rk;
use crate::state::State;

/// One parameter slice of the table on a uniform u-grid.
#[derive(Clone, Debug)]
pub struct OdeSlice {
    pub a: f64,
    pub u_lo: f64,
    pub u_hi: f64,
    pub us: Vec<f64>,
    pub f: Vec<f64>,
    pub fa: Vec<f64>,
}

/// Point values with analytic partials reconstructed from F itself.
#[derive(Clone, Copy, Debug)]
pub struct FluxPoint {
    pub f: f64,
    pub f_u: f64,
    pub f_uu: f64,
    pub f_a: f64,
}

fn exp_coeff(a: f64) -> f64 {
    (-1.0 / a).exp()
}

fn g_of(f: f64, u: f64, a: f64) -> Result<f64> {
    let q = exp_coeff(a);
    let rad = 1.0 + 2.0 * q * (f + u);
    if rad <= 0.0 {
        return Err(FtError::NegativeRadicand(rad));
    }
    Ok(rad.sqrt())
}

/// Analytic partials from (F, u, a):
///   F_u = (1-G)/(2G-1),  F_uu = -e^{-1/a}/(2G-1)³.
pub fn partials_from_f(f: f64, u: f64, a: f64) -> Result<(f64, f64)> {
    let g = g_of(f, u, a)?;
    let denom = 2.0 * g - 1.0;
    if denom < 0.25 {
        return Err(FtError::OdeValidity(denom));
    }
    let q = exp_coeff(a);
    Ok(((1.0 - g) / denom, -q / (denom * denom * denom)))
}

fn rhs(a: f64, u: f64, y: &State) -> Result<State> {
    let (f, fa) = (y[0], y[1]);
    let g = g_of(f, u, a)?;
    let denom = 2.0 * g - 1.0;
    if denom < 0.5 {
        return Err(FtError::OdeValidity(denom));
    }
    let q = exp_coeff(a);
    let df = (1.0 - g) / denom;
    // G_a = e^{-1/a}[(F+u)/a² + F_a]/G;  dF_a/du = -G_a/(2G-1)².
    let g_a = q * ((f + u) / (a * a) + fa) / g;
    let dfa = -g_a / (denom * denom);
    Ok(State::new(&[df, dfa]))
}

impl OdeSlice {
    /// Integrates one slice over [u_lo, u_hi] (both signs from 0) with an
    /// adaptive 4/5-order scheme at local tolerance `tol`, clamping the
    /// range to where 2G−1 ≥ 0.5 holds.
    pub fn build(a: f64, u_lo: f64, u_hi: f64, nodes: usize, tol: f64) -> Result<OdeSlice> {
        if a <= 0.0 {
            return Err(FtError::Config("ODE slice needs a > 0".into()));
        }
        if !(u_lo < 0.0 && u_hi > 0.0) {
            return Err(FtError::Config("slice range must contain u = 0".into()));
        }
        let nodes = nodes.max(512);
        // Validity: 2G-1 ≥ 0.5 fails when e^{-1/a}(F+u) < -7/32, so the
        // negative reach is roughly -0.219·e^{1/a}. Start from the
        // analytic estimate and shrink until the integration goes
        // through.
        let clamp_dir = |target: f64| -> f64 {
            let est = -0.9 * 0.21875 * (1.0 / a).exp();
            let mut goal = if target < 0.0 { target.max(est) } else { target };
            for _ in 0..24 {
                if rk::integrate(|u, y| rhs(a, u, y), State::new(&[0.0, 0.0]), 0.0, goal, tol)
                    .is_ok()
                {
                    return goal;
                }
                goal *= 0.93;
            }
            goal
        };
        let u_hi = clamp_dir(u_hi);
        let u_lo = clamp_dir(u_lo);
        let up = rk::integrate(|u, y| rhs(a, u, y), State::new(&[0.0, 0.0]), 0.0, u_hi, tol)?;
        let dn = rk::integrate(|u, y| rhs(a, u, y), State::new(&[0.0, 0.0]), 0.0, u_lo, tol)?;
        let us: Vec<f64> = (0..=nodes)
            .map(|k| u_lo + (u_hi - u_lo) * k as f64 / nodes as f64)
            .collect();
        let mut f = Vec::with_capacity(us.len());
        let mut fa = Vec::with_capacity(us.len());
        for &u in &us {
            let y = if u >= 0.0 { up.eval(u) } else { dn.eval(u) };
            f.push(y[0]);
            fa.push(y[1]);
        }
        Ok(OdeSlice {
            a,
            u_lo,
            u_hi,
            us,
            f,
            fa,
        })
    }

    fn locate(&self, u: f64) -> (usize, f64, f64) {
        let n = self.us.len() - 1;
        let h = (self.u_hi - self.u_lo) / n as f64;
        let t = ((u - self.u_lo) / h).clamp(0.0, n as f64);
        let j = (t as usize).min(n - 1);
        (j, h, t - j as f64)
    }

    /// F at u by cubic Hermite, with slopes from the ODE right-hand side.
    pub fn eval(&self, u: f64) -> Result<FluxPoint> {
        if u < self.u_lo - 1e-12 || u > self.u_hi + 1e-12 {
            return Err(FtError::OutsideDomain(format!(
                "u = {u} outside slice range [{}, {}]",
                self.u_lo, self.u_hi
            )));
        }
        let (j, h, t) = self.locate(u);
        let hermite = |y0: f64, d0: f64, y1: f64, d1: f64| -> f64 {
            let t2 = t * t;
            let t3 = t2 * t;
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                + (t3 - 2.0 * t2 + t) * h * d0
                + (-2.0 * t3 + 3.0 * t2) * y1
                + (t3 - t2) * h * d1
        };
        let (d0, _) = partials_from_f(self.f[j], self.us[j], self.a)?;
        let (d1, _) = partials_from_f(self.f[j + 1], self.us[j + 1], self.a)?;
        let f = hermite(self.f[j], d0, self.f[j + 1], d1);
        let (f_u, f_uu) = partials_from_f(f, u, self.a)?;
        // F_a by Hermite with its own ODE slope.
        let y0 = State::new(&[self.f[j], self.fa[j]]);
        let y1 = State::new(&[self.f[j + 1], self.fa[j + 1]]);
        let s0 = rhs(self.a, self.us[j], &y0)?[1];
        let s1 = rhs(self.a, self.us[j + 1], &y1)?[1];
        let f_a = hermite(self.fa[j], s0, self.fa[j + 1], s1);
        Ok(FluxPoint { f, f_u, f_uu, f_a })
    }

    /// ODE residual of the tabulated values at a grid node: a centered
    /// difference of the interpolated F against the right-hand side
    /// formula (the probe is shifted inward at boundary nodes so the
    /// difference stays second-order).
    pub fn node_residual(&self, j: usize) -> Result<f64> {
        let h = 1e-5 * (self.u_hi - self.u_lo);
        let u = self.us[j].clamp(self.u_lo + h, self.u_hi - h);
        let d = (self.eval(u + h)?.f - self.eval(u - h)?.f) / (2.0 * h);
        let (fu, _) = partials_from_f(self.eval(u)?.f, u, self.a)?;
        Ok((d - fu).abs())
    }
}

/// Parameter-direction table: slices sorted by a, common u-range.
#[derive(Clone, Debug)]
pub struct OdeFluxTable {
    pub slices: Vec<OdeSlice>,
    pub u_lo: f64,
    pub u_hi: f64,
    pub tol: f64,
}

impl OdeFluxTable {
    /// Builds `count` slices on (a_floor, a_max] spaced uniformly in
    /// q = e^{-1/a} (where the flux is polynomially smooth), inserting
    /// exact slices at every requested parameter value.
    pub fn build(
        a_floor: f64,
        a_max: f64,
        count: usize,
        extra: &[f64],
        u_half_width: f64,
        nodes: usize,
        tol: f64,
    ) -> Result<OdeFluxTable> {
        let q_lo = exp_coeff(a_floor);
        let q_hi = exp_coeff(a_max);
        let mut avals: Vec<f64> = (1..=count)
            .map(|k| {
                let q = q_lo + (q_hi - q_lo) * k as f64 / count as f64;
                -1.0 / q.ln()
            })
            .collect();
        for &a in extra {
            if a > a_floor && a <= a_max {
                avals.push(a);
            }
        }
        avals.sort_by(f64::total_cmp);
        avals.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut slices = Vec::with_capacity(avals.len());
        let mut u_lo = -u_half_width;
        let mut u_hi = u_half_width;
        for a in avals {
            let s = OdeSlice::build(a, -u_half_width, u_half_width, nodes, tol)?;
            u_lo = u_lo.max(s.u_lo);
            u_hi = u_hi.min(s.u_hi);
            slices.push(s);
        }
        if slices.is_empty() {
            return Err(FtError::Config("flux table needs at least one slice".into()));
        }
        Ok(OdeFluxTable {
            slices,
            u_lo,
            u_hi,
            tol,
        })
    }

    pub fn a_max(&self) -> f64 {
        self.slices.last().map(|s| s.a).unwrap_or(0.0)
    }

    pub fn slice_at(&self, a: f64) -> Option<&OdeSlice> {
        self.slices.iter().find(|s| (s.a - a).abs() < 1e-12)
    }

    /// F and partials at (u, a): exact slice when one matches, cubic
    /// Lagrange across the four nearest slices otherwise.
    pub fn eval(&self, u: f64, a: f64) -> Result<FluxPoint> {
        if let Some(s) = self.slice_at(a) {
            return s.eval(u);
        }
        if a > self.a_max() + 1e-12 {
            return Err(FtError::OutsideDomain(format!(
                "a = {a} outside table range"
            )));
        }
        // Lagrange in the q = e^{-1/a} coordinate. Below the first slice
        // the window is anchored by the exact virtual slice F ≡ 0 at
        // q = 0 (the flux vanishes identically in the limit).
        // F is polynomially smooth in q while F_a carries the 1/a²
        // factor, so interpolate (F, F_q) with F_q = F_a·a²/q and map
        // back. At the virtual q = 0 anchor, F ≡ 0 and F_q = -u²/2.
        let q = exp_coeff(a);
        let mut qs: Vec<f64> = Vec::with_capacity(4);
        let mut vals: Vec<(f64, f64)> = Vec::with_capacity(4);
        let slice_node = |s: &OdeSlice| -> Result<(f64, (f64, f64))> {
            let p = s.eval(u)?;
            let qi = exp_coeff(s.a);
            Ok((qi, (p.f, p.f_a * s.a * s.a / qi)))
        };
        if a < self.slices[0].a {
            qs.push(0.0);
            vals.push((0.0, -0.5 * u * u));
            for s in self.slices.iter().take(3) {
                let (qi, v) = slice_node(s)?;
                qs.push(qi);
                vals.push(v);
            }
        } else {
            let pos = self
                .slices
                .partition_point(|s| s.a < a)
                .clamp(1, self.slices.len() - 1);
            let lo = pos.saturating_sub(2).min(self.slices.len().saturating_sub(4));
            for s in &self.slices[lo..(lo + 4).min(self.slices.len())] {
                let (qi, v) = slice_node(s)?;
                qs.push(qi);
                vals.push(v);
            }
        }
        let mut f = 0.0;
        let mut f_q = 0.0;
        for i in 0..qs.len() {
            let mut li = 1.0;
            for j in 0..qs.len() {
                if i != j {
                    li *= (q - qs[j]) / (qs[i] - qs[j]);
                }
            }
            f += li * vals[i].0;
            f_q += li * vals[i].1;
        }
        let f_a = f_q * q / (a * a);
        let (f_u, f_uu) = partials_from_f(f, u, a)?;
        Ok(FluxPoint { f, f_u, f_uu, f_a })
    }

    /// Three-column text (a, u, F) with a tolerance header.
    pub fn to_text(&self) -> String {
        let mut out = format!("# fronttrack ode flux table\n# tol {:.3e}\n# a u F\n", self.tol);
        for s in &self.slices {
            for (u, f) in s.us.iter().zip(s.f.iter()) {
                out.push_str(&format!("{:.17e} {u:.17e} {f:.17e}\n", s.a));
            }
        }
        out
    }

    /// Loads the (a, u, F) format; F_a is rebuilt by re-integration.
    pub fn from_text(text: &str) -> Result<OdeFluxTable> {
        let mut tol = 1e-12;
        let mut rows: Vec<(f64, f64, f64)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("# tol") {
                tol = rest
                    .trim()
                    .parse()
                    .map_err(|_| FtError::Config("bad tol header".into()))?;
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| FtError::Config("bad table row".into())))
                .collect::<Result<_>>()?;
            if v.len() != 3 {
                return Err(FtError::Config("table rows need 3 columns".into()));
            }
            rows.push((v[0], v[1], v[2]));
        }
        if rows.is_empty() {
            return Err(FtError::Config("empty flux table".into()));
        }
        let mut slices: Vec<OdeSlice> = Vec::new();
        let mut u_lo = f64::NEG_INFINITY;
        let mut u_hi = f64::INFINITY;
        let mut k = 0;
        while k < rows.len() {
            let a = rows[k].0;
            let mut us = Vec::new();
            let mut f = Vec::new();
            while k < rows.len() && rows[k].0 == a {
                us.push(rows[k].1);
                f.push(rows[k].2);
                k += 1;
            }
            let (lo, hi) = (us[0], *us.last().unwrap());
            // Rebuild F_a by integrating its linear ODE on the slice grid.
            let rebuilt = OdeSlice::build(a, lo, hi, us.len() - 1, tol)?;
            u_lo = u_lo.max(rebuilt.u_lo);
            u_hi = u_hi.min(rebuilt.u_hi);
            slices.push(rebuilt);
        }
        Ok(OdeFluxTable {
            slices,
            u_lo,
            u_hi,
            tol,
        })
    }
}
