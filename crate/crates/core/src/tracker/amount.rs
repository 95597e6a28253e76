//! The amount of interaction 𝓘(s', s'') between two colliding fronts:
//! the product of strengths for transversal pairs, and the envelope-
//! difference integrals of the three same-family cases
//! (a) s'' > 0, (b) -s' ≤ s'' < 0, (c) s'' < -s'.
//!
//! Profiles are handled on the internal frame w = |τ|, where opposite
//! wave orientations reduce to the canonical (positive left) layout by
//! profile negation (state-space reflection) and reversal (x mirror).

use crate::envelope::{lower_convex_envelope, upper_concave_envelope, SampledFunction};
use crate::error::Result;
use crate::riemann::{CurveBuilder, ElementaryCurve};
use super::Front;

/// 𝓘 for two adjacent crossing fronts; `left` is s', `right` is s''.
/// Nonphysical fronts count with their jump size as strength.
pub fn interaction_amount(
    builder: &CurveBuilder<'_>,
    left: &Front,
    right: &Front,
) -> Result<f64> {
    if !left.is_physical() || !right.is_physical() || left.family != right.family {
        return Ok(left.glimm_weight() * right.glimm_weight());
    }
    let c_left = builder.build(&left.u_left, left.strength, left.family)?;
    let c_right = builder.build(&right.u_left, right.strength, right.family)?;
    same_family_amount(&c_left, &c_right)
}

/// Same-family amount from prebuilt elementary curves.
pub fn same_family_amount(c_left: &ElementaryCurve, c_right: &ElementaryCurve) -> Result<f64> {
    let s1 = c_left.strength;
    let s2 = c_right.strength;
    let p_left = Profile::from_curve(c_left);
    let p_right = Profile::from_curve(c_right);
    Ok(amount_from_profiles(&p_left, s1, &p_right, s2))
}

pub(crate) fn amount_from_profiles(p_left: &Profile, s1: f64, p_right: &Profile, s2: f64) -> f64 {
    if s1 == 0.0 || s2 == 0.0 {
        return 0.0;
    }
    if s1.signum() == s2.signum() {
        // Case (a) and its negative-orientation twin: merge.
        merge_amount(p_left, p_right)
    } else if s1 > 0.0 {
        // Canonical cancellation: positive wave on the left.
        if s2.abs() <= s1 {
            cancel_amount_b(p_left, s1, s2)
        } else {
            // Case (c): x-mirror swaps the roles; the mirrored right wave
            // becomes the surviving positive one.
            cancel_amount_b(&p_right.reversed(), s2.abs(), -s1)
        }
    } else {
        // s1 < 0 < s2: state-space reflection negates the profiles and
        // strengths, reducing to the canonical layout.
        amount_from_profiles(&p_left.negated(), -s1, &p_right.negated(), -s2)
    }
}

/// Case (a): ∫ |piecewise envelopes − merged envelope| over [0, W'+W''].
fn merge_amount(p1: &Profile, p2: &Profile) -> f64 {
    let union = p1.concat(p2);
    let env_union = union.convex_envelope(0.0, union.width());
    let env_1 = p1.convex_envelope(0.0, p1.width());
    let env_2 = p2.convex_envelope(0.0, p2.width());
    let w1 = p1.width();
    let offset = p1.value_at(w1);
    let piecewise = |w: f64| -> f64 {
        if w <= w1 {
            env_1.eval(w)
        } else {
            offset + env_2.eval(w - w1)
        }
    };
    adaptive_abs_quad(
        &|w| piecewise(w) - env_union.eval(w),
        0.0,
        union.width(),
        1e-11 * (1.0 + union.width()),
    )
}

/// Case (b) on the canonical layout (s' > 0, -s' ≤ s'' < 0): both
/// integrals are taken on the left wave's profile.
fn cancel_amount_b(p: &Profile, s1: f64, s2: f64) -> f64 {
    let survive = s1 + s2;
    let e_full = p.convex_envelope(0.0, s1);
    let mut total = 0.0;
    if survive > 1e-14 * s1 {
        let e_sub = p.convex_envelope(0.0, survive);
        total += adaptive_abs_quad(
            &|w| e_full.eval(w) - e_sub.eval(w),
            0.0,
            survive,
            1e-11 * (1.0 + s1),
        );
    }
    if s1 - survive > 1e-14 * s1 {
        let e_conc = p.concave_envelope(survive, s1);
        total += adaptive_abs_quad(
            &|w| e_full.eval(w) - e_conc.eval(w),
            survive,
            s1,
            1e-11 * (1.0 + s1),
        );
    }
    total
}

/// A scalar flux profile g on a fine uniform grid over [0, W].
pub(crate) struct Profile {
    w: Vec<f64>,
    g: Vec<f64>,
}

const PROFILE_NODES: usize = 1024;

impl Profile {
    pub(crate) fn from_curve(c: &ElementaryCurve) -> Profile {
        let width = c.width();
        let n = PROFILE_NODES;
        let w: Vec<f64> = (0..=n).map(|k| width * k as f64 / n as f64).collect();
        let g: Vec<f64> = w.iter().map(|&x| c.flux_at_w(x)).collect();
        Profile { w, g }
    }

    fn width(&self) -> f64 {
        *self.w.last().unwrap()
    }

    fn value_at(&self, x: f64) -> f64 {
        let n = self.w.len() - 1;
        let width = self.width();
        if width == 0.0 {
            return self.g[0];
        }
        let t = (x / width * n as f64).clamp(0.0, n as f64);
        let j = (t as usize).min(n - 1);
        let u = t - j as f64;
        self.g[j] + u * (self.g[j + 1] - self.g[j])
    }

    fn negated(&self) -> Profile {
        Profile {
            w: self.w.clone(),
            g: self.g.iter().map(|v| -v).collect(),
        }
    }

    /// x-mirrored wave: g(w) ↦ g(W-w) − g(W).
    fn reversed(&self) -> Profile {
        let last = *self.g.last().unwrap();
        let n = self.w.len();
        Profile {
            w: self.w.clone(),
            g: (0..n).map(|j| self.g[n - 1 - j] - last).collect(),
        }
    }

    /// Concatenation g ∪ (g(W) + other).
    fn concat(&self, other: &Profile) -> Profile {
        let w1 = self.width();
        let offset = *self.g.last().unwrap();
        let mut w = self.w.clone();
        let mut g = self.g.clone();
        for (x, v) in other.w.iter().zip(other.g.iter()).skip(1) {
            w.push(w1 + x);
            g.push(offset + v);
        }
        Profile { w, g }
    }

    fn sub_env(&self, a: f64, b: f64, concave: bool) -> LinEnv {
        // Resample the window so envelope endpoints land exactly on a, b.
        let n = 512;
        let w: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
        let g: Vec<f64> = w.iter().map(|&x| self.value_at(x)).collect();
        let sf = SampledFunction {
            grid: w.clone(),
            values: g,
        };
        let env = if concave {
            upper_concave_envelope(&sf, 0, n).expect("valid envelope window")
        } else {
            lower_convex_envelope(&sf, 0, n).expect("valid envelope window")
        };
        LinEnv {
            xs: env.vertices.iter().map(|&v| sf.grid[v]).collect(),
            ys: env.vertices.iter().map(|&v| env.values[v]).collect(),
        }
    }

    fn convex_envelope(&self, a: f64, b: f64) -> LinEnv {
        self.sub_env(a, b, false)
    }

    fn concave_envelope(&self, a: f64, b: f64) -> LinEnv {
        self.sub_env(a, b, true)
    }
}

/// Piecewise-linear envelope through its hull vertices.
struct LinEnv {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl LinEnv {
    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 {
            return self.ys[0];
        }
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.xs[hi] - self.xs[lo];
        if h == 0.0 {
            return self.ys[lo];
        }
        self.ys[lo] + (self.ys[hi] - self.ys[lo]) * (x - self.xs[lo]) / h
    }
}

/// Adaptive Simpson quadrature of |f| (kink-tolerant).
fn adaptive_abs_quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = f(0.5 * (a + m)).abs();
        let rm = f(0.5 * (m + b)).abs();
        let left = simpson(a, fa, m, fm, lm);
        let right = simpson(m, fm, b, fb, rm);
        if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, fa, m, fm, lm, left, tol * 0.5, depth - 1)
                + recurse(f, m, fm, b, fb, rm, right, tol * 0.5, depth - 1)
        }
    }
    if b <= a {
        return 0.0;
    }
    let fa = f(a).abs();
    let fb = f(b).abs();
    let fm = f(0.5 * (a + b)).abs();
    let whole = simpson(a, fa, b, fb, fm);
    recurse(&|x| f(x).abs(), a, fa, b, fb, fm, whole, tol, 24).max(0.0)
}
