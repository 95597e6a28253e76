//! Fixed-point construction of elementary curves T_i[u⁻](s) and the
//! refined contact/chord piece structure used by every solver.

use crate::error::{FtError, Result};
use crate::flux::FluxModel;
use crate::numerics::Numerics;
use crate::state::State;

use super::path::{apply_t_operator, seed_path, CurvePath, FrameEval};
use super::FrontKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    Contact,
    Chord,
}

/// One maximal contact or chord interval of the envelope structure, with
/// refined boundaries (bisection on the continuous profile).
#[derive(Clone, Copy, Debug)]
pub struct WavePiece {
    pub w_lo: f64,
    pub w_hi: f64,
    pub kind: PieceKind,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
}

impl WavePiece {
    pub fn width(&self) -> f64 {
        self.w_hi - self.w_lo
    }
}

/// A converged elementary curve: the endpoint map s ↦ T_i[u⁻](s) together
/// with its speed profile σ_i[u⁻](s, ·) and flux profile f̃_i[u⁻](s, ·).
#[derive(Clone, Debug)]
pub struct ElementaryCurve {
    pub family: usize,
    pub u_minus: State,
    pub strength: f64,
    pub l0: State,
    /// Internal grid on [0, |s|].
    w: Vec<f64>,
    u_nodes: Vec<State>,
    /// dir·r̃ at the nodes (Hermite slopes of the path).
    du_nodes: Vec<State>,
    lam: Vec<f64>,
    g: Vec<f64>,
    v: Vec<f64>,
    pub pieces: Vec<WavePiece>,
    /// Fixed-point diagnostics.
    pub iterations: usize,
    pub residual: f64,
}

impl ElementaryCurve {
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

    pub fn is_degenerate(&self) -> bool {
        self.pieces.is_empty()
    }

    /// T_i[u⁻](s): the curve endpoint.
    pub fn endpoint(&self) -> State {
        self.u_nodes.last().unwrap().clone()
    }

    fn locate(&self, wq: f64) -> usize {
        let n = self.w.len();
        if n < 2 {
            return 0;
        }
        let h = self.w[1] - self.w[0];
        ((wq / h) as usize).min(n - 2)
    }

    /// State at internal parameter w ∈ [0, |s|] by cubic Hermite.
    pub fn state_at_w(&self, wq: f64) -> State {
        let n = self.w.len();
        if n == 1 {
            return self.u_nodes[0].clone();
        }
        let wq = wq.clamp(0.0, self.width());
        let j = self.locate(wq);
        let h = self.w[j + 1] - self.w[j];
        let t = ((wq - self.w[j]) / h).clamp(0.0, 1.0);
        let t2 = t * t;
        let t3 = t2 * t;
        let mut out = &self.u_nodes[j] * (2.0 * t3 - 3.0 * t2 + 1.0);
        out.add_scaled((t3 - 2.0 * t2 + t) * h, &self.du_nodes[j]);
        out.add_scaled(-2.0 * t3 + 3.0 * t2, &self.u_nodes[j + 1]);
        out.add_scaled((t3 - t2) * h, &self.du_nodes[j + 1]);
        out
    }

    /// State at the signed curve parameter τ (same sign as s).
    pub fn state_at_param(&self, tau: f64) -> State {
        self.state_at_w(tau.abs())
    }

    /// λ̃ at w by linear interpolation of the node samples.
    pub fn lambda_at_w(&self, wq: f64) -> f64 {
        let n = self.w.len();
        if n == 1 {
            return self.lam[0];
        }
        let wq = wq.clamp(0.0, self.width());
        let j = self.locate(wq);
        let h = self.w[j + 1] - self.w[j];
        let t = (wq - self.w[j]) / h;
        self.lam[j] + t * (self.lam[j + 1] - self.lam[j])
    }

    /// f̃ value at w (cubic Hermite with slope λ̃).
    pub fn flux_at_w(&self, wq: f64) -> f64 {
        let n = self.w.len();
        if n == 1 {
            return 0.0;
        }
        let wq = wq.clamp(0.0, self.width());
        let j = self.locate(wq);
        let h = self.w[j + 1] - self.w[j];
        let t = ((wq - self.w[j]) / h).clamp(0.0, 1.0);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.g[j]
            + (t3 - 2.0 * t2 + t) * h * self.lam[j]
            + (-2.0 * t3 + 3.0 * t2) * self.g[j + 1]
            + (t3 - t2) * h * self.lam[j + 1]
    }

    /// The envelope speed σ_i[u⁻](s, τ) at internal parameter w.
    pub fn sigma_at_w(&self, wq: f64) -> f64 {
        if self.pieces.is_empty() {
            return self.lam.first().copied().unwrap_or(0.0);
        }
        let wq = wq.clamp(0.0, self.width());
        for p in &self.pieces {
            if wq <= p.w_hi || std::ptr::eq(p, self.pieces.last().unwrap()) {
                return match p.kind {
                    PieceKind::Chord => p.sigma_lo,
                    PieceKind::Contact => self
                        .lambda_at_w(wq)
                        .clamp(p.sigma_lo.min(p.sigma_hi), p.sigma_lo.max(p.sigma_hi)),
                };
            }
        }
        self.pieces.last().unwrap().sigma_hi
    }

    pub fn sigma_at_param(&self, tau: f64) -> f64 {
        self.sigma_at_w(tau.abs())
    }

    /// (σ at w = 0, σ at w = |s|): the wave's speed span endpoints.
    pub fn sigma_range(&self) -> (f64, f64) {
        if self.pieces.is_empty() {
            let l = self.lam.first().copied().unwrap_or(0.0);
            return (l, l);
        }
        (
            self.pieces.first().unwrap().sigma_lo,
            self.pieces.last().unwrap().sigma_hi,
        )
    }

    /// Smallest w with σ(w) ≥ theta (the min / max selection rule of the
    /// rarefaction discretization, expressed on the internal frame).
    pub fn param_of_speed(&self, theta: f64) -> f64 {
        for p in &self.pieces {
            if theta <= p.sigma_lo {
                return p.w_lo;
            }
            if theta <= p.sigma_hi {
                match p.kind {
                    PieceKind::Chord => return p.w_lo,
                    PieceKind::Contact => {
                        // Bisect λ̃ within the piece (nondecreasing there).
                        let (mut a, mut b) = (p.w_lo, p.w_hi);
                        for _ in 0..60 {
                            let m = 0.5 * (a + b);
                            if self.lambda_at_w(m) >= theta {
                                b = m;
                            } else {
                                a = m;
                            }
                        }
                        return 0.5 * (a + b);
                    }
                }
            }
        }
        self.width()
    }

    /// Measures of the contact and chord parts.
    pub fn kind_measures(&self) -> (f64, f64) {
        let mut contact = 0.0;
        let mut chord = 0.0;
        for p in &self.pieces {
            match p.kind {
                PieceKind::Contact => contact += p.width(),
                PieceKind::Chord => chord += p.width(),
            }
        }
        (contact, chord)
    }

    /// Kind classification per the contact/chord structure.
    pub fn classify(&self) -> FrontKind {
        let (contact, chord) = self.kind_measures();
        let w = self.width().max(1e-300);
        let tol = 1e-9 * w;
        if chord <= tol {
            FrontKind::Rarefaction
        } else if contact <= tol {
            FrontKind::Discontinuity
        } else {
            FrontKind::Mixed
        }
    }

    /// Monotone piecewise-linear compression of the speed profile:
    /// segments (Δw, σ_left, σ_right) covering [0, |s|]. Used by the
    /// Glimm potential integrals.
    pub fn speed_profile(&self, max_ramp_segments: usize) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        if self.pieces.is_empty() {
            return out;
        }
        for p in &self.pieces {
            if p.width() <= 0.0 {
                continue;
            }
            match p.kind {
                PieceKind::Chord => out.push((p.width(), p.sigma_lo, p.sigma_lo)),
                PieceKind::Contact => {
                    let k = max_ramp_segments.max(1);
                    let mut prev_w = p.w_lo;
                    let mut prev_s = p.sigma_lo;
                    for j in 1..=k {
                        let wj = p.w_lo + p.width() * j as f64 / k as f64;
                        let sj = if j == k {
                            p.sigma_hi
                        } else {
                            self.lambda_at_w(wj)
                        };
                        out.push((wj - prev_w, prev_s, sj.max(prev_s)));
                        prev_w = wj;
                        prev_s = sj.max(prev_s);
                    }
                }
            }
        }
        out
    }

    /// Speed profile restricted to [wa, wb] (a discretized sub-wave).
    pub fn speed_profile_restricted(
        &self,
        wa: f64,
        wb: f64,
        max_ramp_segments: usize,
    ) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        for p in &self.pieces {
            let lo = p.w_lo.max(wa);
            let hi = p.w_hi.min(wb);
            if hi <= lo {
                continue;
            }
            match p.kind {
                PieceKind::Chord => out.push((hi - lo, p.sigma_lo, p.sigma_lo)),
                PieceKind::Contact => {
                    let k = max_ramp_segments.max(1);
                    let mut prev_w = lo;
                    let mut prev_s = self.sigma_at_w(lo);
                    for j in 1..=k {
                        let wj = lo + (hi - lo) * j as f64 / k as f64;
                        let sj = self.sigma_at_w(wj).max(prev_s);
                        out.push((wj - prev_w, prev_s, sj));
                        prev_w = wj;
                        prev_s = sj;
                    }
                }
            }
        }
        out
    }

    /// Debug dump: three columns (τ, ⟨l⁰, u(τ)-u⁻⟩, σ(τ)).
    pub fn debug_dump(&self) -> String {
        let mut s = String::from("# tau  <l0,u-um>  sigma\n");
        for (j, wj) in self.w.iter().enumerate() {
            let tau = self.dir() * wj;
            let d = &self.u_nodes[j] - &self.u_minus;
            s.push_str(&format!(
                "{tau:.12e} {:.12e} {:.12e}\n",
                self.l0.dot(&d),
                self.sigma_at_w(*wj)
            ));
        }
        s
    }
}

/// Builds elementary curves for one model with one set of tolerances.
pub struct CurveBuilder<'a> {
    pub model: &'a dyn FluxModel,
    pub num: Numerics,
    delta1: f64,
    lambda_lip: Vec<f64>,
}

impl<'a> CurveBuilder<'a> {
    pub fn new(model: &'a dyn FluxModel, num: Numerics) -> Self {
        // Γ_i constants: δ₁ = 0.1·diam(Ω); C₀ a sampled Lipschitz bound
        // of the characteristic speeds over Ω.
        let delta1 = 0.1 * model.domain().diameter();
        let lambda_lip = estimate_lambda_lipschitz(model);
        CurveBuilder {
            model,
            num,
            delta1,
            lambda_lip,
        }
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    /// The contraction fixed point for T_i[u⁻](s), with the grid doubled
    /// until two successive resolutions agree at the endpoint.
    pub fn build(&self, u_minus: &State, strength: f64, family: usize) -> Result<ElementaryCurve> {
        if !self.model.domain().contains(u_minus) {
            return Err(FtError::OutsideDomain(format!("{u_minus:?}")));
        }
        if strength.abs() > self.model.max_strength() {
            return Err(FtError::StrengthOutOfRange {
                s: strength,
                s_max: self.model.max_strength(),
            });
        }
        let frame = FrameEval::new(self.model, family, u_minus)?;
        if strength.abs() < self.num.strength_floor {
            return Ok(self.degenerate(&frame, u_minus, family));
        }
        let mut n = self.num.curve_grid;
        let mut cur = self.build_at(&frame, u_minus, strength, family, n)?;
        while 2 * n <= self.num.curve_grid_max {
            let fine = self.build_at(&frame, u_minus, strength, family, 2 * n)?;
            let gap = (&fine.endpoint() - &cur.endpoint()).norm();
            cur = fine;
            if gap <= self.num.curve_refine_tol * (1.0 + strength.abs()) {
                break;
            }
            n *= 2;
        }
        Ok(cur)
    }

    fn degenerate(&self, frame: &FrameEval<'_>, u_minus: &State, family: usize) -> ElementaryCurve {
        let e = self.model.eigen(u_minus).expect("eigen at valid state");
        ElementaryCurve {
            family,
            u_minus: u_minus.clone(),
            strength: 0.0,
            l0: frame.l0.clone(),
            w: vec![0.0],
            u_nodes: vec![u_minus.clone()],
            du_nodes: vec![State::zeros(u_minus.dim())],
            lam: vec![e.lambdas[family]],
            g: vec![0.0],
            v: vec![0.0],
            pieces: Vec::new(),
            iterations: 0,
            residual: 0.0,
        }
    }

    fn build_at(
        &self,
        frame: &FrameEval<'_>,
        u_minus: &State,
        strength: f64,
        family: usize,
        nodes: usize,
    ) -> Result<ElementaryCurve> {
        let mut path = seed_path(frame, u_minus, strength, nodes + 1)?;
        let mut residual = f64::INFINITY;
        let mut iterations = 0;
        for it in 1..=self.num.fp_max_iter {
            let next = apply_t_operator(frame, &path)?;
            residual = next.distance(&path, self.delta1);
            path = next;
            iterations = it;
            if it >= 2 && residual < self.num.fp_tol * (1.0 + strength.abs()) {
                break;
            }
            if it == self.num.fp_max_iter {
                return Err(FtError::ContractionFailure {
                    iterations: it,
                    residual,
                });
            }
        }
        self.check_gamma_membership(&path, family)?;
        self.assemble(frame, path, iterations, residual)
    }

    fn check_gamma_membership(&self, path: &CurvePath, family: usize) -> Result<()> {
        // Γ_i bounds with δ₁ widened to the curve width: the paper fixes
        // them for |s| ≤ δ₁ while desk-scale waves can be wider.
        let width = path.width();
        let c0 = self.lambda_lip[family].max(1.0);
        let d_eff = self.delta1.max(width);
        let bound_v = (2.0 * c0 * d_eff * d_eff).max(self.delta1);
        let max_v = path.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !max_v.is_finite() || max_v > bound_v {
            return Err(FtError::LeftAdmissibleSet(format!(
                "|v| = {max_v:.3e} exceeds bound {bound_v:.3e}"
            )));
        }
        let lam0 = self.model.eigen(&path.u_minus)?.lambdas[family];
        let bound_s = 2.0 * c0 * d_eff;
        let max_ds = path
            .sigma
            .iter()
            .fold(0.0f64, |m, s| m.max((s - lam0).abs()));
        if !max_ds.is_finite() || max_ds > bound_s {
            return Err(FtError::LeftAdmissibleSet(format!(
                "|σ-λ_i(u⁻)| = {max_ds:.3e} exceeds 2C₀δ_eff = {bound_s:.3e}"
            )));
        }
        Ok(())
    }

    fn assemble(
        &self,
        frame: &FrameEval<'_>,
        path: CurvePath,
        iterations: usize,
        residual: f64,
    ) -> Result<ElementaryCurve> {
        let dir = path.dir();
        let n = path.nodes();
        let mut du_nodes = Vec::with_capacity(n);
        let mut lam = Vec::with_capacity(n);
        for u in &path.u {
            let rt = frame.rtilde(u)?;
            lam.push(frame.lambda_tilde(u)?);
            du_nodes.push(&rt * dir);
        }
        // At the fixed point du/dw = dir·r̃(u), so the internal scalar
        // flux telescopes exactly: g(w) = dir·⟨l⁰, f(u(w)) − f(u⁻)⟩.
        // This removes the composite-quadrature error from the profile.
        let f0 = self.model.flux(&path.u_minus)?;
        let mut g = Vec::with_capacity(n);
        for u in &path.u {
            let df = &self.model.flux(u)? - &f0;
            g.push(dir * path.l0.dot(&df));
        }
        let v: Vec<f64> = {
            let sf = crate::envelope::SampledFunction {
                grid: path.w.clone(),
                values: g.clone(),
            };
            let env = crate::envelope::lower_convex_envelope(&sf, 0, n - 1)?;
            (0..n).map(|j| g[j] - env.values[j]).collect()
        };
        let mut curve = ElementaryCurve {
            family: path.family,
            u_minus: path.u_minus.clone(),
            strength: path.strength,
            l0: path.l0.clone(),
            w: path.w.clone(),
            u_nodes: path.u.clone(),
            du_nodes,
            lam,
            g,
            v,
            pieces: Vec::new(),
            iterations,
            residual,
        };
        curve.pieces = self.refine_pieces(frame, &curve)?;
        Ok(curve)
    }

    /// Locates the exact chord intervals of the envelope by bisection on
    /// the continuous profile, then tiles [0, |s|] with pieces.
    fn refine_pieces(
        &self,
        frame: &FrameEval<'_>,
        curve: &ElementaryCurve,
    ) -> Result<Vec<WavePiece>> {
        let width = curve.width();
        let n = curve.w.len();
        let tol_v = 1e-10 * (1.0 + curve.g.iter().fold(0.0f64, |m, g| m.max(g.abs())));
        // Raw chord gaps: maximal runs of nodes with v above tolerance.
        let mut gaps: Vec<(usize, usize)> = Vec::new();
        let mut j = 0;
        while j < n {
            if curve.v[j] > tol_v {
                let lo = j;
                while j < n && curve.v[j] > tol_v {
                    j += 1;
                }
                gaps.push((lo.saturating_sub(1), j.min(n - 1)));
            } else {
                j += 1;
            }
        }
        let lam_of = |w: f64| -> Result<f64> { frame.lambda_tilde(&curve.state_at_w(w)) };
        let f0 = self.model.flux(&curve.u_minus)?;
        let dir = curve.dir();
        let g_of = |w: f64| -> Result<f64> {
            let df = &self.model.flux(&curve.state_at_w(w))? - &f0;
            Ok(dir * curve.l0.dot(&df))
        };

        let mut chords: Vec<(f64, f64, f64)> = Vec::new(); // (a, b, slope)
        for (lo, hi) in gaps {
            let mut a = curve.w[lo];
            let mut b = curve.w[hi];
            let a_anchor = lo == 0;
            let b_anchor = hi == n - 1;
            let h = if n > 1 { curve.w[1] - curve.w[0] } else { width };
            for _ in 0..12 {
                let mut moved: f64 = 0.0;
                if !a_anchor {
                    let lo_w = (a - h).max(0.0);
                    let hi_w = (a + h).min(b - 1e-3 * h);
                    if let Some(root) = bisect(
                        |x| {
                            let gb = g_of(b)?;
                            let gx = g_of(x)?;
                            Ok((gb - gx) / (b - x) - lam_of(x)?)
                        },
                        lo_w,
                        hi_w,
                        60,
                    )? {
                        moved = moved.max((root - a).abs());
                        a = root;
                    }
                }
                if !b_anchor {
                    let lo_w = (b - h).max(a + 1e-3 * h);
                    let hi_w = (b + h).min(width);
                    if let Some(root) = bisect(
                        |x| {
                            let ga = g_of(a)?;
                            let gx = g_of(x)?;
                            Ok(lam_of(x)? - (gx - ga) / (x - a))
                        },
                        lo_w,
                        hi_w,
                        60,
                    )? {
                        moved = moved.max((root - b).abs());
                        b = root;
                    }
                }
                if moved < self.num.envelope_bisect_tol * (1.0 + width) {
                    break;
                }
            }
            let slope = (g_of(b)? - g_of(a)?) / (b - a);
            chords.push((a, b, slope));
        }

        // Tile [0, width] alternating contact pieces between the chords.
        let mut pieces = Vec::new();
        let mut pos = 0.0;
        let min_len = 1e-13 * (1.0 + width);
        for (a, b, slope) in chords {
            if a > pos + min_len {
                pieces.push(WavePiece {
                    w_lo: pos,
                    w_hi: a,
                    kind: PieceKind::Contact,
                    sigma_lo: lam_of(pos)?,
                    sigma_hi: lam_of(a)?,
                });
            }
            pieces.push(WavePiece {
                w_lo: a.max(pos),
                w_hi: b,
                kind: PieceKind::Chord,
                sigma_lo: slope,
                sigma_hi: slope,
            });
            pos = b;
        }
        if pos < width - min_len || pieces.is_empty() {
            pieces.push(WavePiece {
                w_lo: pos,
                w_hi: width,
                kind: PieceKind::Contact,
                sigma_lo: lam_of(pos)?,
                sigma_hi: lam_of(width)?,
            });
        }
        // Monotone cleanup of piece boundary speeds (refinement residue).
        for k in 1..pieces.len() {
            if pieces[k].sigma_lo < pieces[k - 1].sigma_hi {
                pieces[k].sigma_lo = pieces[k - 1].sigma_hi;
                if pieces[k].sigma_hi < pieces[k].sigma_lo {
                    pieces[k].sigma_hi = pieces[k].sigma_lo;
                }
            }
        }
        Ok(pieces)
    }
}

fn bisect(
    f: impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    iters: usize,
) -> Result<Option<f64>> {
    if !(lo < hi) {
        return Ok(None);
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    if fa * fb > 0.0 {
        return Ok(None);
    }
    for _ in 0..iters {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(Some(m));
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Sampled Lipschitz bound of u ↦ λ_i(u) over Ω, one entry per family.
fn estimate_lambda_lipschitz(model: &dyn FluxModel) -> Vec<f64> {
    let n = model.dim();
    let dom = model.domain();
    let mut lip = vec![0.0f64; n];
    let samples = 24usize;
    let mut grid = Vec::new();
    // Coordinate-aligned probes through the box center.
    for axis in 0..n {
        for k in 0..=samples {
            let mut u = dom.center();
            u[axis] = dom.lo[axis] + (dom.hi[axis] - dom.lo[axis]) * k as f64 / samples as f64;
            grid.push(u);
        }
    }
    for pts in grid.windows(2) {
        let du = (&pts[1] - &pts[0]).norm();
        if du == 0.0 {
            continue;
        }
        let (Ok(e0), Ok(e1)) = (model.eigen(&pts[0]), model.eigen(&pts[1])) else {
            continue;
        };
        for i in 0..n {
            lip[i] = lip[i].max((e1.lambdas[i] - e0.lambdas[i]).abs() / du);
        }
    }
    lip
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::burgers;

    #[test]
    fn burgers_shock_is_single_chord() {
        let m = burgers();
        let b = CurveBuilder::new(&m, Numerics::default());
        // uL = 1, uR = 0: strength s = -1.
        let c = b.build(&State::scalar(1.0), -1.0, 0).unwrap();
        assert_eq!(c.pieces.len(), 1);
        assert_eq!(c.pieces[0].kind, PieceKind::Chord);
        assert!((c.pieces[0].sigma_lo - 0.5).abs() < 1e-10);
        assert!((c.endpoint()[0] - 0.0).abs() < 1e-10);
    }

    #[test]
    fn burgers_rarefaction_is_contact() {
        let m = burgers();
        let b = CurveBuilder::new(&m, Numerics::default());
        let c = b.build(&State::scalar(0.0), 1.0, 0).unwrap();
        assert_eq!(c.classify(), FrontKind::Rarefaction);
        let (lo, hi) = c.sigma_range();
        assert!((lo - 0.0).abs() < 1e-9);
        assert!((hi - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_strength_degenerates() {
        let m = burgers();
        let b = CurveBuilder::new(&m, Numerics::default());
        let c = b.build(&State::scalar(0.5), 0.0, 0).unwrap();
        assert!(c.is_degenerate());
        assert_eq!(c.endpoint()[0], 0.5);
    }

    #[test]
    fn parametrization_identity() {
        let m = burgers();
        let b = CurveBuilder::new(&m, Numerics::default());
        for s in [0.3, -0.7, 1.2] {
            let c = b.build(&State::scalar(0.2), s, 0).unwrap();
            let d = &c.endpoint() - &c.u_minus;
            assert!((c.l0.dot(&d) - s).abs() < 1e-8, "s={s}");
        }
    }

    #[test]
    fn sigma_nondecreasing() {
        let m = burgers();
        let b = CurveBuilder::new(&m, Numerics::default());
        let c = b.build(&State::scalar(-0.5), 1.4, 0).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=100 {
            let s = c.sigma_at_w(1.4 * k as f64 / 100.0);
            assert!(s >= prev - 1e-12);
            prev = s;
        }
    }
}
