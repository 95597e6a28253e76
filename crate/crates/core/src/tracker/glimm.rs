//! The Glimm wave interaction potential
//!
//!   Q(t) = Σ_{i_α>i_β, x_α<x_β} |s_α s_β|
//!        + (1/4) Σ_{i_α=i_β<N+1} ∬ |σ_β(τ'') − σ_α(τ')| dτ' dτ''
//!
//! evaluated over compressed monotone speed profiles. The same-family
//! double sum runs over ordered pairs including α = β, which makes Q
//! invariant under splitting one composite wave into sub-fronts.

use super::{Front, SpeedProfile};

/// measure{ τ : σ(τ) ≤ x } for a monotone piecewise-linear profile.
fn measure_leq(profile: &SpeedProfile, x: f64) -> f64 {
    let mut m = 0.0;
    for &(len, s0, s1) in profile {
        if x >= s1 {
            m += len;
        } else if x > s0 {
            // Ramp segment; s1 > s0 here.
            m += len * (x - s0) / (s1 - s0);
        }
    }
    m
}

fn total_measure(profile: &SpeedProfile) -> f64 {
    profile.iter().map(|seg| seg.0).sum()
}

/// ∬ |σ_A(τ') − σ_B(τ'')| dτ' dτ'' for monotone piecewise-linear
/// profiles, reduced to a 1D integral over speed:
///   ∫ [ (L_A − m_A(x))·m_B(x) + m_A(x)·(L_B − m_B(x)) ] dx,
/// exactly integrated per breakpoint interval (Simpson; the integrand is
/// piecewise quadratic).
pub fn sigma_overlap_integral(a: &SpeedProfile, b: &SpeedProfile) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let la = total_measure(a);
    let lb = total_measure(b);
    let mut breaks: Vec<f64> = Vec::with_capacity(2 * (a.len() + b.len()));
    for seg in a.iter().chain(b.iter()) {
        breaks.push(seg.1);
        breaks.push(seg.2);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let integrand = |x: f64| -> f64 {
        let ma = measure_leq(a, x);
        let mb = measure_leq(b, x);
        (la - ma) * mb + ma * (lb - mb)
    };
    // The integrand is quadratic inside each breakpoint interval but can
    // jump at atom speeds, so integrate with interior points only (open
    // Newton-Cotes, exact for quadratics).
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 <= x0 {
            continue;
        }
        let h = x1 - x0;
        let f1 = integrand(x0 + 0.25 * h);
        let f2 = integrand(x0 + 0.5 * h);
        let f3 = integrand(x0 + 0.75 * h);
        total += h / 3.0 * (2.0 * f1 - f2 + 2.0 * f3);
    }
    total
}

/// The same-family pair contribution of fronts α, β to Q (both must be
/// physical and of the same family): (1/4)·overlap, doubled for α ≠ β by
/// the caller iterating ordered pairs.
pub fn same_family_term(a: &Front, b: &Front) -> f64 {
    0.25 * sigma_overlap_integral(&a.profile, &b.profile)
}

/// Transversal contribution of the ordered-by-position pair (left, right):
/// |s_α s_β| when the left front belongs to the faster family.
pub fn transversal_term(left: &Front, right: &Front) -> f64 {
    if left.family > right.family {
        left.glimm_weight() * right.glimm_weight()
    } else {
        0.0
    }
}

/// Full Q over an x-ordered list of alive fronts.
pub fn full_q(fronts: &[&Front]) -> f64 {
    let mut q = 0.0;
    for (k, a) in fronts.iter().enumerate() {
        if a.is_physical() {
            q += same_family_term(a, a);
        }
        for b in fronts.iter().skip(k + 1) {
            q += transversal_term(a, b);
            if a.is_physical() && b.is_physical() && a.family == b.family {
                q += 2.0 * same_family_term(a, b);
            }
        }
    }
    q
}

/// Total physical strength V = Σ|s_α| and nonphysical jump mass.
pub fn full_v_np(fronts: &[&Front]) -> (f64, f64) {
    let mut v = 0.0;
    let mut np = 0.0;
    for f in fronts {
        if f.is_physical() {
            v += f.strength.abs();
        } else {
            np += f.jump();
        }
    }
    (v, np)
}
