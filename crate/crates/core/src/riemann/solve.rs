//! Riemann solutions by the wave map, wave discretization, and the three
//! approximate solvers of the front-tracking scheme.

use crate::error::{FtError, Result};
use crate::flux::FluxModel;
use crate::state::{Mat, State};

use super::curve::{CurveBuilder, ElementaryCurve};
use super::FrontKind;

/// The self-similar Riemann solution: intermediate states and one
/// elementary composite wave per family.
#[derive(Debug)]
pub struct WaveFan {
    pub left: State,
    pub right: State,
    /// Signed strengths s_1..s_N.
    pub strengths: Vec<f64>,
    /// Intermediate states ω_0 = uL, …, ω_N = uR.
    pub middles: Vec<State>,
    /// Per family: the elementary curve (None when the strength is zero).
    pub waves: Vec<Option<ElementaryCurve>>,
    pub newton_iterations: usize,
    pub residual: f64,
}

/// A wave-front emitted by a solver, before the tracker assigns identity
/// and position.
#[derive(Clone, Debug)]
pub struct FrontSpec {
    pub family: usize,
    pub kind: FrontKind,
    pub speed: f64,
    pub u_left: State,
    pub u_right: State,
    /// Signed strength; 0 for nonphysical fronts.
    pub strength: f64,
    /// Compressed monotone speed profile of the sub-wave.
    pub profile: Vec<(f64, f64, f64)>,
}

impl FrontSpec {
    pub fn jump(&self) -> f64 {
        (&self.u_right - &self.u_left).norm()
    }

    pub fn is_physical(&self) -> bool {
        self.kind != FrontKind::Nonphysical
    }
}

/// Least-squares Rankine-Hugoniot speed and its residual norm.
pub fn hugoniot_speed(model: &dyn FluxModel, u_minus: &State, u_plus: &State) -> Result<(f64, f64)> {
    let df = &model.flux(u_plus)? - &model.flux(u_minus)?;
    let du = u_plus - u_minus;
    let denom = du.dot(&du);
    if denom == 0.0 {
        return Err(FtError::Other("hugoniot_speed needs u⁺ ≠ u⁻".into()));
    }
    let sigma = df.dot(&du) / denom;
    let mut r = df.clone();
    r.add_scaled(-sigma, &du);
    Ok((sigma, r.norm()))
}

/// Liu admissibility check for the i-discontinuity [u⁻, T_i[u⁻](s)].
#[derive(Clone, Copy, Debug)]
pub struct LiuReport {
    pub admissible: bool,
    /// min over sampled τ of σ̂(T(τ), u⁻) − σ̂(u⁺, u⁻); ≥ 0 when
    /// admissible, 0 at a composed-wave boundary tangency.
    pub worst_margin: f64,
}

pub fn liu_admissible(
    builder: &CurveBuilder<'_>,
    u_minus: &State,
    s: f64,
    family: usize,
    samples: usize,
) -> Result<LiuReport> {
    let curve = builder.build(u_minus, s, family)?;
    let u_plus = curve.endpoint();
    let (sig_full, _) = hugoniot_speed(builder.model, u_minus, &u_plus)?;
    let mut worst = f64::INFINITY;
    for k in 1..=samples {
        let w = curve.width() * k as f64 / (samples + 1) as f64;
        let u = curve.state_at_w(w);
        let du = (&u - u_minus).norm();
        if du < 1e-12 {
            continue;
        }
        let (sig_k, _) = hugoniot_speed(builder.model, u_minus, &u)?;
        worst = worst.min(sig_k - sig_full);
    }
    if !worst.is_finite() {
        worst = 0.0;
    }
    let tol = 1e-10 * (1.0 + sig_full.abs());
    Ok(LiuReport {
        admissible: worst >= -tol,
        worst_margin: worst,
    })
}

/// Newton inversion of the wave map s ↦ T_N[…T_1[uL](s_1)…](s_N) = uR.
pub fn solve_riemann(
    builder: &CurveBuilder<'_>,
    u_left: &State,
    u_right: &State,
) -> Result<WaveFan> {
    let model = builder.model;
    let n = model.dim();
    let jump = (u_right - u_left).norm();
    if jump > model.max_strength() {
        return Err(FtError::JumpTooLarge(jump));
    }
    let floor = builder.num.strength_floor;

    // Initial guess from the frozen left eigenbasis.
    let e0 = model.eigen(u_left)?;
    let du = u_right - u_left;
    let mut s: Vec<f64> = (0..n).map(|i| e0.left[i].dot(&du)).collect();

    let eval = |s: &[f64]| -> Result<(Vec<Option<ElementaryCurve>>, Vec<State>, State)> {
        let mut waves = Vec::with_capacity(n);
        let mut middles = vec![u_left.clone()];
        let mut cur = u_left.clone();
        for (i, si) in s.iter().enumerate() {
            if si.abs() < floor {
                waves.push(None);
            } else {
                let c = builder.build(&cur, *si, i)?;
                cur = c.endpoint();
                waves.push(Some(c));
            }
            middles.push(cur.clone());
        }
        let res = &cur - u_right;
        Ok((waves, middles, res))
    };

    let (mut waves, mut middles, mut res) = eval(&s)?;
    let mut res_norm = res.norm();
    let scale = 1.0 + jump;
    let mut iterations = 0;
    while res_norm > builder.num.newton_tol * scale {
        iterations += 1;
        if iterations > builder.num.newton_max_iter {
            return Err(FtError::RiemannInversionFailed {
                residual: res_norm,
                iterations,
            });
        }
        // Approximate Jacobian: column i is r_i at the wave's left state.
        let mut jac = Mat::zeros(n);
        for i in 0..n {
            let ei = model.eigen(&middles[i])?;
            jac.set_col(i, &ei.right[i]);
        }
        let delta = jac
            .solve(&res)
            .ok_or_else(|| FtError::RiemannInversionFailed {
                residual: res_norm,
                iterations,
            })?;
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..=builder.num.newton_max_halvings {
            let trial: Vec<f64> = (0..n).map(|i| s[i] - step * delta[i]).collect();
            match eval(&trial) {
                Ok((w, m, r)) => {
                    let rn = r.norm();
                    if rn < res_norm {
                        s = trial;
                        waves = w;
                        middles = m;
                        res = r;
                        res_norm = rn;
                        improved = true;
                        break;
                    }
                }
                Err(_) => {}
            }
            step *= 0.5;
        }
        if !improved {
            return Err(FtError::RiemannInversionFailed {
                residual: res_norm,
                iterations,
            });
        }
    }
    Ok(WaveFan {
        left: u_left.clone(),
        right: u_right.clone(),
        strengths: s,
        middles,
        waves,
        newton_iterations: iterations,
        residual: res_norm,
    })
}

/// Splits one elementary wave into fronts with speed jumps ≤ eps:
/// p = ⌈span/eps⌉ speed levels ϑ_l, cut parameters s_{i,l} by the
/// min-selection rule, front l traveling at ϑ_l.
pub fn discretize_rarefaction(curve: &ElementaryCurve, eps: f64) -> Vec<FrontSpec> {
    if curve.is_degenerate() {
        return Vec::new();
    }
    let (sig0, sig1) = curve.sigma_range();
    let span = (sig1 - sig0).max(0.0);
    let ratio = span / eps;
    let p = if span <= eps {
        1
    } else if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    };
    let width = curve.width();
    let dir = curve.dir();
    let mut cuts = vec![0.0];
    for l in 1..p {
        let theta = sig0 + span * l as f64 / p as f64;
        let w = curve.param_of_speed(theta).clamp(*cuts.last().unwrap(), width);
        cuts.push(w);
    }
    cuts.push(width);
    let mut out = Vec::with_capacity(p);
    for l in 0..p {
        let (wa, wb) = (cuts[l], cuts[l + 1]);
        if wb - wa < 1e-14 * (1.0 + width) {
            continue;
        }
        let theta = sig0 + span * l as f64 / p as f64;
        let u_left = curve.state_at_w(wa);
        let u_right = curve.state_at_w(wb);
        let kind = sub_kind(curve, wa, wb);
        out.push(FrontSpec {
            family: curve.family,
            kind,
            speed: theta,
            u_left,
            u_right,
            strength: dir * (wb - wa),
            profile: curve.speed_profile_restricted(wa, wb, 8),
        });
    }
    // Telescoping exactness at the wave ends.
    if let Some(first) = out.first_mut() {
        first.u_left = curve.u_minus.clone();
    }
    if let Some(last) = out.last_mut() {
        last.u_right = curve.endpoint();
    }
    out
}

/// Kind of the sub-wave on [wa, wb] from the piece structure.
fn sub_kind(curve: &ElementaryCurve, wa: f64, wb: f64) -> FrontKind {
    let mut contact = 0.0;
    let mut chord = 0.0;
    for p in &curve.pieces {
        let lo = p.w_lo.max(wa);
        let hi = p.w_hi.min(wb);
        if hi > lo {
            match p.kind {
                super::PieceKind::Contact => contact += hi - lo,
                super::PieceKind::Chord => chord += hi - lo,
            }
        }
    }
    let tol = 1e-9 * (wb - wa);
    if chord <= tol {
        FrontKind::Rarefaction
    } else if contact <= tol {
        FrontKind::Discontinuity
    } else {
        FrontKind::Mixed
    }
}

/// Accurate Riemann solver: exact wave fan, each elementary wave
/// discretized at parameter eps, fronts speed-sorted and telescoping
/// exactly from uL to uR.
pub fn accurate_solver(
    builder: &CurveBuilder<'_>,
    u_left: &State,
    u_right: &State,
    eps: f64,
) -> Result<Vec<FrontSpec>> {
    let fan = solve_riemann(builder, u_left, u_right)?;
    let mut out: Vec<FrontSpec> = Vec::new();
    for wave in fan.waves.iter().flatten() {
        out.extend(discretize_rarefaction(wave, eps));
    }
    retie_states(&mut out, u_left, u_right);
    Ok(out)
}

/// Simplified Riemann solver: keeps the incoming families and strengths
/// (merging equal families) and closes the state mismatch with a single
/// nonphysical front at speed λ̂. A same-family merge can leave a
/// composed wave of arbitrary speed span, so that branch re-discretizes
/// at ε; transversally transmitted fronts are never re-split.
#[allow(clippy::too_many_arguments)]
pub fn simplified_solver(
    builder: &CurveBuilder<'_>,
    u_left: &State,
    u_right: &State,
    fam_left: usize,
    s_left: f64,
    fam_right: usize,
    s_right: f64,
    eps: f64,
    lambda_hat: f64,
) -> Result<Vec<FrontSpec>> {
    let floor = builder.num.strength_floor;
    let mut out: Vec<FrontSpec> = Vec::new();
    let mut cur = u_left.clone();
    if fam_left == fam_right {
        let s = s_left + s_right;
        if s.abs() > floor {
            let c = builder.build(&cur, s, fam_left)?;
            cur = c.endpoint();
            out.extend(discretize_rarefaction(&c, eps));
        }
    } else {
        // The left incoming front is the faster one, so fam_left >
        // fam_right; outgoing waves appear in ascending family order.
        let (fam_a, s_a, fam_b, s_b) = if fam_left < fam_right {
            (fam_left, s_left, fam_right, s_right)
        } else {
            (fam_right, s_right, fam_left, s_left)
        };
        for (fam, s) in [(fam_a, s_a), (fam_b, s_b)] {
            if s.abs() > floor {
                let c = builder.build(&cur, s, fam)?;
                cur = c.endpoint();
                out.push(single_front(&c));
            }
        }
    }
    let gap = (u_right - &cur).norm();
    if gap > floor {
        out.push(FrontSpec {
            family: builder.model.dim(), // N+1-th field, 0-based index N
            kind: FrontKind::Nonphysical,
            speed: lambda_hat,
            u_left: cur,
            u_right: u_right.clone(),
            strength: 0.0,
            profile: Vec::new(),
        });
    } else if let Some(last) = out.last_mut() {
        last.u_right = u_right.clone();
    }
    Ok(out)
}

/// Crude Riemann solver for a nonphysical front hitting a physical
/// i-front from the left: emits the approximate i-th elementary wave
/// from uL with the incoming strength, then a nonphysical front at λ̂.
pub fn crude_solver(
    builder: &CurveBuilder<'_>,
    u_left: &State,
    u_right: &State,
    family: usize,
    s: f64,
    eps: f64,
    lambda_hat: f64,
) -> Result<Vec<FrontSpec>> {
    let floor = builder.num.strength_floor;
    let mut out = Vec::new();
    let mut cur = u_left.clone();
    if s.abs() > floor {
        let c = builder.build(u_left, s, family)?;
        cur = c.endpoint();
        out.extend(discretize_rarefaction(&c, eps));
    }
    let gap = (u_right - &cur).norm();
    if gap > floor {
        out.push(FrontSpec {
            family: builder.model.dim(),
            kind: FrontKind::Nonphysical,
            speed: lambda_hat,
            u_left: cur,
            u_right: u_right.clone(),
            strength: 0.0,
            profile: Vec::new(),
        });
    } else if let Some(last) = out.last_mut() {
        last.u_right = u_right.clone();
    } else {
        // s == 0 and no state gap: nothing outgoing.
    }
    Ok(out)
}

/// Classification entry point for a reconstructed front.
pub fn classify_front(curve: &ElementaryCurve) -> FrontKind {
    curve.classify()
}

/// Emits one un-split front for a whole elementary wave (the simplified
/// path never re-discretizes). The speed is σ at the wave's left edge.
fn single_front(curve: &ElementaryCurve) -> FrontSpec {
    let (sig0, _) = curve.sigma_range();
    FrontSpec {
        family: curve.family,
        kind: curve.classify(),
        speed: sig0,
        u_left: curve.u_minus.clone(),
        u_right: curve.endpoint(),
        strength: curve.strength,
        profile: curve.speed_profile(8),
    }
}

/// Makes consecutive fronts share states exactly and pins the outermost
/// states, absorbing the Newton residual into the final jump.
fn retie_states(fronts: &mut [FrontSpec], u_left: &State, u_right: &State) {
    let mut cur = u_left.clone();
    for f in fronts.iter_mut() {
        f.u_left = cur;
        cur = f.u_right.clone();
    }
    if let Some(last) = fronts.last_mut() {
        last.u_right = u_right.clone();
    }
}
