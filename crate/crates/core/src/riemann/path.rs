//! The fixed-point iteration object: a discretized curve
//! γ(ξ) = (u(ξ), v_i(ξ), σ_i(ξ)) in Γ_i(s, u⁻), stored on the internal
//! parameter w = |τ| so that the same lower-convex-envelope code path
//! serves both wave orientations (s < 0 mirrors through w = -τ, where
//! the concave envelope of f̃ on [s,0] becomes the convex envelope of
//! the forward integral g(w) = ∫₀^w λ̃ dω along the reversed path).

use crate::envelope::{lower_convex_envelope, SampledFunction};
use crate::error::{FtError, Result};
use crate::flux::FluxModel;
use crate::state::State;

/// One curve of the admissible set Γ_i(s, u⁻) on a uniform internal grid.
#[derive(Clone, Debug)]
pub struct CurvePath {
    pub family: usize,
    /// Signed strength; the internal grid covers w ∈ [0, |s|].
    pub strength: f64,
    pub u_minus: State,
    /// Left covector l_i(u⁻) fixing the parametrization.
    pub l0: State,
    /// Uniform grid on [0, |s|].
    pub w: Vec<f64>,
    pub u: Vec<State>,
    /// Jump part v_i in the internal frame (≥ 0 at the fixed point).
    pub v: Vec<f64>,
    /// Speed component σ_i per node.
    pub sigma: Vec<f64>,
    /// Forward scalar flux g(w) = ∫₀^w λ̃; physical f̃(τ) = sign-adjusted.
    pub g: Vec<f64>,
}

impl CurvePath {
    pub fn dir(&self) -> f64 {
        if self.strength < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn width(&self) -> f64 {
        self.strength.abs()
    }

    pub fn nodes(&self) -> usize {
        self.w.len()
    }

    /// The scalar flux profile f̃_i(τ; γ) on the physical parameter grid
    /// (ascending in τ, so reversed for s < 0).
    pub fn flux_profile(&self) -> SampledFunction {
        let n = self.nodes();
        if self.strength >= 0.0 {
            SampledFunction {
                grid: self.w.clone(),
                values: self.g.clone(),
            }
        } else {
            let grid: Vec<f64> = (0..n).map(|j| -self.w[n - 1 - j]).collect();
            let values: Vec<f64> = (0..n).map(|j| -self.g[n - 1 - j]).collect();
            SampledFunction { grid, values }
        }
    }

    /// Distance D(γ, γ') = δ₁‖u-u'‖_∞ + ‖v-v'‖_L¹ + ‖vσ-v'σ'‖_L¹.
    pub fn distance(&self, other: &CurvePath, delta1: f64) -> f64 {
        let mut du: f64 = 0.0;
        let mut dv = 0.0;
        let mut dvs = 0.0;
        let n = self.nodes();
        for j in 0..n {
            du = du.max((&self.u[j] - &other.u[j]).norm_inf());
            let weight = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            let h = if n > 1 { self.w[1] - self.w[0] } else { 0.0 };
            dv += weight * h * (self.v[j] - other.v[j]).abs();
            dvs += weight * h * (self.v[j] * self.sigma[j] - other.v[j] * other.sigma[j]).abs();
        }
        delta1 * du + dv + dvs
    }
}

/// Model-side evaluations shared by the iteration and the refinement
/// machinery: the renormalized field r̃_i and the speed λ̃_i.
pub struct FrameEval<'a> {
    pub model: &'a dyn FluxModel,
    pub family: usize,
    pub l0: State,
}

impl<'a> FrameEval<'a> {
    pub fn new(model: &'a dyn FluxModel, family: usize, u_minus: &State) -> Result<Self> {
        let e = model.eigen(u_minus)?;
        Ok(FrameEval {
            model,
            family,
            l0: e.left[family].clone(),
        })
    }

    /// r̃_i(u) = r_i(u) / ⟨l_i⁰, r_i(u)⟩.
    pub fn rtilde(&self, u: &State) -> Result<State> {
        let e = self.model.eigen(u)?;
        let r = &e.right[self.family];
        let den = self.l0.dot(r);
        if den.abs() < 1e-8 {
            return Err(FtError::LeftAdmissibleSet(format!(
                "⟨l⁰, r_{}⟩ = {den:.3e} degenerate",
                self.family
            )));
        }
        Ok(r * (1.0 / den))
    }

    /// λ̃_i(u) = l_i⁰ · Df(u) · r̃_i(u).
    pub fn lambda_tilde(&self, u: &State) -> Result<f64> {
        let a = self.model.jacobian(u)?;
        let rt = self.rtilde(u)?;
        Ok(self.l0.dot(&a.matvec(&rt)))
    }
}

/// Applies the envelope operator 𝒯 once: integrates r̃ along the input
/// path, rebuilds the scalar flux by composite Simpson, and replaces
/// (v, σ) by the envelope gap and envelope slope.
pub fn apply_t_operator(frame: &FrameEval<'_>, path: &CurvePath) -> Result<CurvePath> {
    let n = path.nodes();
    let dir = path.dir();
    let h = if n > 1 { path.w[1] - path.w[0] } else { 0.0 };

    // ǔ: cumulative integral of dir·r̃ along the input path (midpoints by
    // Hermite interpolation of the input nodes).
    let mut rt: Vec<State> = Vec::with_capacity(n);
    for u in &path.u {
        rt.push(frame.rtilde(u)?);
    }
    let mut u_next: Vec<State> = Vec::with_capacity(n);
    u_next.push(path.u_minus.clone());
    for j in 0..n - 1 {
        let umid = hermite_mid(&path.u[j], &rt[j], &path.u[j + 1], &rt[j + 1], dir, h);
        let rmid = frame.rtilde(&umid)?;
        let mut next = u_next[j].clone();
        next.add_scaled(dir * h / 6.0, &rt[j]);
        next.add_scaled(dir * 4.0 * h / 6.0, &rmid);
        next.add_scaled(dir * h / 6.0, &rt[j + 1]);
        if !frame.model.domain().contains(&next) {
            return Err(FtError::CurveLeftDomain(path.w[j + 1] * dir));
        }
        u_next.push(next);
    }

    // g(w) along the fresh path, composite Simpson per cell.
    let mut rt_next: Vec<State> = Vec::with_capacity(n);
    for u in &u_next {
        rt_next.push(frame.rtilde(u)?);
    }
    let mut lam: Vec<f64> = Vec::with_capacity(n);
    for u in &u_next {
        lam.push(frame.lambda_tilde(u)?);
    }
    let mut g = vec![0.0; n];
    for j in 0..n - 1 {
        let umid = hermite_mid(&u_next[j], &rt_next[j], &u_next[j + 1], &rt_next[j + 1], dir, h);
        let lmid = frame.lambda_tilde(&umid)?;
        g[j + 1] = g[j] + h / 6.0 * (lam[j] + 4.0 * lmid + lam[j + 1]);
    }

    // Envelope of (w, g): v̌ = g - conv g, σ̌ = slope of conv g.
    let sf = SampledFunction {
        grid: path.w.clone(),
        values: g.clone(),
    };
    let env = lower_convex_envelope(&sf, 0, n - 1)?;
    let mut v = vec![0.0; n];
    let mut sigma = vec![0.0; n];
    for j in 0..n {
        v[j] = g[j] - env.values[j];
        // Node speed: slope of the cell to the left (right for node 0).
        let cell = if j == 0 { 0 } else { j - 1 };
        sigma[j] = env.slopes[cell.min(env.slopes.len() - 1)];
    }

    Ok(CurvePath {
        family: path.family,
        strength: path.strength,
        u_minus: path.u_minus.clone(),
        l0: path.l0.clone(),
        w: path.w.clone(),
        u: u_next,
        v,
        sigma,
        g,
    })
}

/// Cubic Hermite midpoint of one cell; derivatives are dir·r̃ at the ends.
fn hermite_mid(u0: &State, r0: &State, u1: &State, r1: &State, dir: f64, h: f64) -> State {
    let mut m = u0.lerp(u1, 0.5);
    m.add_scaled(dir * h / 8.0, r0);
    m.add_scaled(-dir * h / 8.0, r1);
    m
}

/// The seed path of the iteration: straight line along r_i(u⁻) with
/// v ≡ 0 and σ ≡ λ_i(u⁻).
pub fn seed_path(
    frame: &FrameEval<'_>,
    u_minus: &State,
    strength: f64,
    nodes: usize,
) -> Result<CurvePath> {
    let model = frame.model;
    let e = model.eigen(u_minus)?;
    let r = e.right[frame.family].clone();
    let lam = e.lambdas[frame.family];
    let width = strength.abs();
    let dir = if strength < 0.0 { -1.0 } else { 1.0 };
    let n = nodes.max(2);
    let w: Vec<f64> = (0..n).map(|j| width * j as f64 / (n - 1) as f64).collect();
    let mut u = Vec::with_capacity(n);
    for wj in &w {
        let mut s = u_minus.clone();
        s.add_scaled(dir * wj, &r);
        u.push(s);
    }
    let g: Vec<f64> = w.iter().map(|wj| lam * wj).collect();
    Ok(CurvePath {
        family: frame.family,
        strength,
        u_minus: u_minus.clone(),
        l0: frame.l0.clone(),
        w,
        u,
        v: vec![0.0; n],
        sigma: vec![lam; n],
        g,
    })
}
