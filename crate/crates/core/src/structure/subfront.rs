//! (i,k)-substrength decomposition: a front's elementary curve is cut at
//! its crossings of the zero manifolds Z_i^j; the parity rule keeps even
//! regions for s > 0 and odd regions for s < 0.

use crate::error::Result;
use crate::riemann::CurveBuilder;
use crate::state::State;
use crate::tracker::{Front, FrontId};

/// One (i,k)-subdiscontinuity front of a parent front.
#[derive(Clone, Debug)]
pub struct SubFrontRecord {
    pub parent: FrontId,
    pub family: usize,
    pub region: usize,
    /// Signed substrength s_i^k = s_{k+1} − s_k.
    pub substrength: f64,
    /// Bracketing parameters on the parent's elementary curve (signed τ).
    pub tau_lo: f64,
    pub tau_hi: f64,
}

/// Crossing parameters of ∇λ_i·r_i sign changes along the curve, refined
/// by bisection, plus the per-segment region memberships.
pub fn decompose_substrengths(
    builder: &CurveBuilder<'_>,
    front: &Front,
) -> Result<Vec<SubFrontRecord>> {
    if !front.is_physical() || front.strength.abs() < builder.num.strength_floor {
        return Ok(Vec::new());
    }
    let model = builder.model;
    let family = front.family;
    if model.linearly_degenerate(family) {
        // No Δ regions: the whole space is the zero manifold.
        return Ok(Vec::new());
    }
    let width = front.strength.abs();
    let dir = front.strength.signum();

    // State along the wave path. For straight families this is a line in
    // the (constant) r̃ direction, otherwise the elementary curve is
    // rebuilt.
    let straight_dir: Option<State> = if model.wave_path_is_straight(family) {
        let e = model.eigen(&front.u_left)?;
        let r = &e.right[family];
        let den = e.left[family].dot(r);
        Some(r * (dir / den))
    } else {
        None
    };
    let curve = if straight_dir.is_none() {
        Some(builder.build(&front.u_left, front.strength, family)?)
    } else {
        None
    };
    let state_at = |w: f64| -> State {
        match (&straight_dir, &curve) {
            (Some(rdir), _) => {
                let mut u = front.u_left.clone();
                u.add_scaled(w, rdir);
                u
            }
            (None, Some(c)) => c.state_at_w(w),
            _ => unreachable!(),
        }
    };

    let indicator = |w: f64| -> Result<f64> { model.gnl_indicator(&state_at(w), family) };

    // Sign-change scan on a fine parameter grid with bisection
    // refinement. A sample landing exactly on a zero of the indicator is
    // itself the crossing (when the flanking signs differ).
    let scan = 256usize;
    let mut crossings: Vec<f64> = Vec::new();
    let mut last_nonzero: Option<(f64, f64)> = None;
    let mut pending_zero: Option<f64> = None;
    for k in 0..=scan {
        let w = width * k as f64 / scan as f64;
        let g = indicator(w)?;
        if g == 0.0 {
            pending_zero = Some(w);
            continue;
        }
        if let Some((pw, pg)) = last_nonzero {
            if pg.signum() != g.signum() {
                if let Some(zw) = pending_zero {
                    crossings.push(zw);
                } else {
                    let (mut a, mut b) = (pw, w);
                    let mut ga = pg;
                    for _ in 0..60 {
                        let m = 0.5 * (a + b);
                        let gm = indicator(m)?;
                        if gm == 0.0 {
                            a = m;
                            b = m;
                            break;
                        }
                        if ga.signum() != gm.signum() {
                            b = m;
                        } else {
                            a = m;
                            ga = gm;
                        }
                    }
                    crossings.push(0.5 * (a + b));
                }
            }
        }
        pending_zero = None;
        last_nonzero = Some((w, g));
    }

    // Segments between crossings (and the curve ends).
    let mut cuts = vec![0.0];
    cuts.extend(crossings.iter().copied());
    cuts.push(width);
    let mut out = Vec::new();
    let want_even = front.strength > 0.0;
    for win in cuts.windows(2) {
        let (wa, wb) = (win[0], win[1]);
        if wb - wa < 1e-12 * (1.0 + width) {
            continue;
        }
        let mid: State = state_at(0.5 * (wa + wb));
        let q = model.region(&mid, family)?;
        let region = if q.on_manifold && q.indicator.abs() < 1e-12 {
            // Flat manifold (the coupled model's v = 0 slab): parity from
            // the strength sign so chains continue across the slab.
            if want_even {
                q.index & !1
            } else {
                q.index | 1
            }
        } else {
            q.index
        };
        let is_even = region % 2 == 0;
        if is_even != want_even {
            continue;
        }
        let (tau_lo, tau_hi) = if dir >= 0.0 {
            (wa, wb)
        } else {
            (-wb, -wa)
        };
        out.push(SubFrontRecord {
            parent: front.id,
            family,
            region,
            substrength: dir * (wb - wa),
            tau_lo,
            tau_hi,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::two_inflection;
    use crate::numerics::Numerics;
    use crate::riemann::FrontKind;

    fn mk_front(strength: f64, ul: f64) -> Front {
        Front {
            id: 7,
            family: 0,
            kind: FrontKind::Discontinuity,
            birth_time: 0.0,
            birth_x: 0.0,
            death_time: None,
            speed: 0.0,
            u_left: State::scalar(ul),
            u_right: State::scalar(ul + strength),
            strength,
            generation: 0,
            profile: Vec::new(),
        }
    }

    #[test]
    fn rarefaction_inside_one_region_empty() {
        let m = two_inflection();
        let b = CurveBuilder::new(&m, Numerics::default());
        // s > 0 inside the convex region (odd index): parity excludes it.
        let recs = decompose_substrengths(&b, &mk_front(0.6, -0.4)).unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn merged_shock_spans_both_even_regions() {
        let m = two_inflection();
        let b = CurveBuilder::new(&m, Numerics::default());
        // The merged Fig. 2 shock [-2, 2] crosses both inflections.
        let recs = decompose_substrengths(&b, &mk_front(4.0, -2.0)).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].region, 0);
        assert_eq!(recs[1].region, 2);
        // Substrengths: [-2,-1] has width 1, [1,2] width 1.
        assert!((recs[0].substrength - 1.0).abs() < 1e-6);
        assert!((recs[1].substrength - 1.0).abs() < 1e-6);
    }

    #[test]
    fn each_manifold_crossed_at_most_once() {
        let m = two_inflection();
        let b = CurveBuilder::new(&m, Numerics::default());
        for (s, ul) in [(3.5, -1.9), (2.0, -1.4), (-3.1, 1.7)] {
            let recs = decompose_substrengths(&b, &mk_front(s, ul)).unwrap();
            // At most one record per region index.
            let mut regions: Vec<usize> = recs.iter().map(|r| r.region).collect();
            regions.sort_unstable();
            regions.dedup();
            assert_eq!(regions.len(), recs.len());
        }
    }
}
