//! Shared test-side oracles: the classical scalar envelope construction
//! (independent of the fixed-point solver path), random spline fluxes,
//! and small helpers.

#![allow(dead_code)]

use fronttrack::envelope::SampledFunction;
use fronttrack::flux::{ScalarFlux, ScalarModel, TabulatedScalarFlux};
use rand::Rng;

/// A wave piece of the classical scalar construction, in u-space running
/// from the left state to the right state of the jump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleKind {
    Shock,
    Rarefaction,
}

#[derive(Clone, Debug)]
pub struct OraclePiece {
    pub kind: OracleKind,
    pub u_lo: f64,
    pub u_hi: f64,
    /// Wave speed: the chord slope for shocks, the [f'(u_lo), f'(u_hi)]
    /// span for rarefactions (in traversal order).
    pub speed_lo: f64,
    pub speed_hi: f64,
}

/// Oleinik construction for the scalar Riemann problem (uL, uR): the
/// lower convex envelope of f on [uL, uR] for uR > uL, the upper concave
/// envelope for uR < uL. The envelope is found by an O(M²)-per-node
/// brute-force minimum over chords on a grid, then every contact/chord
/// transition is polished by bisection on the analytic tangency
/// condition, so piece boundaries and speeds are accurate to ~1e-12.
pub fn scalar_oracle(
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    u_left: f64,
    u_right: f64,
    grid: usize,
) -> Vec<OraclePiece> {
    if u_left == u_right {
        return Vec::new();
    }
    // Work on [a, b] with the convex envelope of g, where g = f for
    // uR > uL and g = -f(mirrored) reduces the concave case.
    let increasing = u_right > u_left;
    let (a, b) = if increasing {
        (u_left, u_right)
    } else {
        (u_right, u_left)
    };
    let gf = |u: f64| if increasing { f(u) } else { -f(u) };
    let gdf = |u: f64| if increasing { df(u) } else { -df(u) };

    let m = grid;
    let us: Vec<f64> = (0..=m).map(|k| a + (b - a) * k as f64 / m as f64).collect();
    let fs: Vec<f64> = us.iter().map(|&u| gf(u)).collect();

    // Greatest convex minorant by gift wrapping: from each hull vertex,
    // the supporting chord is the minimum-slope chord to any later node
    // (equivalently the highest chord lying below f), extended through
    // collinear ties.
    let mut hull = vec![0usize];
    let mut cur = 0usize;
    while cur < m {
        let mut best_k = cur + 1;
        let mut best_s = f64::INFINITY;
        for k in (cur + 1)..=m {
            let s = (fs[k] - fs[cur]) / (us[k] - us[cur]);
            let eps = 1e-13 * (1.0 + best_s.abs().min(1e300));
            if s < best_s - eps {
                best_s = s;
                best_k = k;
            } else if (s - best_s).abs() <= eps {
                best_k = k;
            }
        }
        hull.push(best_k);
        cur = best_k;
    }
    let mut env = fs.clone();
    for w in hull.windows(2) {
        let (i, k) = (w[0], w[1]);
        let slope = (fs[k] - fs[i]) / (us[k] - us[i]);
        for j in (i + 1)..k {
            env[j] = fs[i] + slope * (us[j] - us[i]);
        }
    }
    let tol = 1e-10 * (1.0 + fs.iter().fold(0.0f64, |mx, v| mx.max(v.abs())));
    let contact: Vec<bool> = (0..=m).map(|j| (fs[j] - env[j]).abs() <= tol).collect();

    // Maximal chord gaps between contact nodes, refined by tangency
    // bisection with the analytic derivative.
    let mut pieces: Vec<OraclePiece> = Vec::new();
    let mut chords: Vec<(f64, f64)> = Vec::new();
    let mut j = 0;
    while j <= m {
        if !contact[j] {
            let lo = j - 1; // previous contact node
            while j <= m && !contact[j] {
                j += 1;
            }
            let hi = j.min(m);
            chords.push(refine_chord(
                &gf,
                &gdf,
                us[lo],
                us[hi],
                (us[1] - us[0]).abs(),
                lo == 0,
                hi == m,
                a,
                b,
            ));
        } else {
            j += 1;
        }
    }

    // Tile [a, b] with rarefaction pieces between the chords.
    let mut pos = a;
    let eps_len = 1e-12 * (b - a);
    for (ca, cb) in chords {
        if ca > pos + eps_len {
            pieces.push(OraclePiece {
                kind: OracleKind::Rarefaction,
                u_lo: pos,
                u_hi: ca,
                speed_lo: gdf(pos),
                speed_hi: gdf(ca),
            });
        }
        let slope = (gf(cb) - gf(ca)) / (cb - ca);
        pieces.push(OraclePiece {
            kind: OracleKind::Shock,
            u_lo: ca,
            u_hi: cb,
            speed_lo: slope,
            speed_hi: slope,
        });
        pos = cb;
    }
    if pos < b - eps_len {
        pieces.push(OraclePiece {
            kind: OracleKind::Rarefaction,
            u_lo: pos,
            u_hi: b,
            speed_lo: gdf(pos),
            speed_hi: gdf(b),
        });
    }

    if !increasing {
        // Mirror back: traversal from uL = b down to uR = a; u-intervals
        // reverse and the mirrored slopes negate.
        pieces.reverse();
        for p in pieces.iter_mut() {
            let (lo, hi) = (p.u_lo, p.u_hi);
            p.u_lo = hi;
            p.u_hi = lo;
            let (slo, shi) = (p.speed_lo, p.speed_hi);
            p.speed_lo = -shi;
            p.speed_hi = -slo;
        }
    }
    pieces
}

#[allow(clippy::too_many_arguments)]
fn refine_chord(
    gf: &dyn Fn(f64) -> f64,
    gdf: &dyn Fn(f64) -> f64,
    mut ca: f64,
    mut cb: f64,
    h: f64,
    a_anchor: bool,
    b_anchor: bool,
    a: f64,
    b: f64,
) -> (f64, f64) {
    for _ in 0..10 {
        let mut moved: f64 = 0.0;
        if !a_anchor {
            // Tangency at the left end: slope(x→cb) - f'(x) = 0.
            let cond = |x: f64| (gf(cb) - gf(x)) / (cb - x) - gdf(x);
            if let Some(r) = bisect(&cond, (ca - h).max(a), (ca + h).min(cb - 1e-3 * h)) {
                moved = moved.max((r - ca).abs());
                ca = r;
            }
        }
        if !b_anchor {
            let cond = |x: f64| gdf(x) - (gf(x) - gf(ca)) / (x - ca);
            if let Some(r) = bisect(&cond, (cb - h).max(ca + 1e-3 * h), (cb + h).min(b)) {
                moved = moved.max((r - cb).abs());
                cb = r;
            }
        }
        if moved < 1e-14 * (b - a) {
            break;
        }
    }
    (ca, cb)
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    if !(lo < hi) {
        return None;
    }
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo * fhi > 0.0 {
        return None;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Random natural-spline flux on [-1.2, 1.2] with bounded values.
pub fn random_spline_model(rng: &mut impl Rng) -> ScalarModel<TabulatedScalarFlux> {
    let knots = rng.gen_range(6..=10);
    let us: Vec<f64> = (0..knots)
        .map(|k| -1.2 + 2.4 * k as f64 / (knots - 1) as f64)
        .collect();
    let fs: Vec<f64> = (0..knots).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let flux = TabulatedScalarFlux::from_samples(us, fs).unwrap();
    ScalarModel::new("spline", flux, -1.2, 1.2)
}

/// Brute-force greatest convex minorant on grid nodes: min over all
/// bracketing chords (the O(M²)-per-node oracle of the envelope tests).
pub fn brute_convex_minorant(f: &SampledFunction, a: usize, b: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(b - a + 1);
    for j in a..=b {
        let mut best = f.values[j];
        for i in a..j {
            for k in (j + 1)..=b {
                let th = (f.grid[j] - f.grid[i]) / (f.grid[k] - f.grid[i]);
                let c = f.values[i] + th * (f.values[k] - f.values[i]);
                if c < best {
                    best = c;
                }
            }
        }
        out.push(best);
    }
    out
}
