//! Scalar-equivalence checks: the fixed-point Riemann solver against the
//! classical envelope construction, Oleinik speed profiles, solver
//! consistency and the front speed bracket.

mod common;

use common::{scalar_oracle, OracleKind};
use fronttrack::flux::{burgers, FluxModel, ScalarFlux};
use fronttrack::riemann::{
    accurate_solver, discretize_rarefaction, simplified_solver, solve_riemann, CurveBuilder,
    PieceKind,
};
use fronttrack::state::State;
use fronttrack::Numerics;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Compares the solver's single-family wave against the oracle pieces:
/// same pattern (ignoring slivers below `width_floor`) and speeds within
/// `tol`.
fn compare_with_oracle(
    builder: &CurveBuilder<'_>,
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    u_left: f64,
    u_right: f64,
    width_floor: f64,
    tol: f64,
) -> Result<(), String> {
    let fan = solve_riemann(builder, &State::scalar(u_left), &State::scalar(u_right))
        .map_err(|e| format!("solver: {e}"))?;
    let oracle = scalar_oracle(f, df, u_left, u_right, 192);
    let oracle: Vec<_> = oracle
        .iter()
        .filter(|p| (p.u_hi - p.u_lo).abs() > width_floor)
        .collect();
    let wave = match &fan.waves[0] {
        Some(w) => w,
        None => {
            return if oracle.is_empty() {
                Ok(())
            } else {
                Err("solver empty, oracle nonempty".into())
            };
        }
    };
    let dir = wave.dir();
    let pieces: Vec<_> = wave
        .pieces
        .iter()
        .filter(|p| p.width() > width_floor)
        .collect();
    if pieces.len() != oracle.len() {
        return Err(format!(
            "pattern mismatch: solver {} pieces, oracle {}: {:?} vs {:?}",
            pieces.len(),
            oracle.len(),
            pieces,
            oracle
        ));
    }
    for (p, o) in pieces.iter().zip(oracle.iter()) {
        let kind_ok = match o.kind {
            OracleKind::Shock => p.kind == PieceKind::Chord,
            OracleKind::Rarefaction => p.kind == PieceKind::Contact,
        };
        if !kind_ok {
            return Err(format!("kind mismatch: {p:?} vs {o:?}"));
        }
        // u-coordinates of the piece boundaries: u = uL + dir·w.
        // Tangency boundaries only shift speeds at second order, so the
        // location check scales with the wave width.
        let b_tol = 1e-6f64.max(0.02 * (u_right - u_left).abs());
        let u_lo = u_left + dir * p.w_lo;
        let u_hi = u_left + dir * p.w_hi;
        if (u_lo - o.u_lo).abs() > b_tol || (u_hi - o.u_hi).abs() > b_tol {
            return Err(format!(
                "boundary mismatch: [{u_lo}, {u_hi}] vs [{}, {}]",
                o.u_lo, o.u_hi
            ));
        }
        if (p.sigma_lo - o.speed_lo).abs() > tol || (p.sigma_hi - o.speed_hi).abs() > tol {
            return Err(format!(
                "speed mismatch: [{}, {}] vs [{}, {}]",
                p.sigma_lo, p.sigma_hi, o.speed_lo, o.speed_hi
            ));
        }
    }
    Ok(())
}

#[test]
fn oleinik_profile_matches_closed_form() {
    // Burgers: σ(w) of any wave equals the classical construction.
    let m = burgers();
    let b = CurveBuilder::new(&m, Numerics::default());
    for (ul, s) in [(0.3, 1.1), (1.0, -1.7), (-0.9, 0.4)] {
        let c = b.build(&State::scalar(ul), s, 0).unwrap();
        let oracle = scalar_oracle(&|u| 0.5 * u * u, &|u| u, ul, ul + s, 512);
        for o in &oracle {
            let w_mid = (0.5 * (o.u_lo + o.u_hi) - ul).abs();
            let got = c.sigma_at_w(w_mid);
            let want = 0.5 * (o.speed_lo + o.speed_hi);
            assert!((got - want).abs() < 1e-9, "ul={ul} s={s}: {got} vs {want}");
        }
    }
}

#[test]
fn random_spline_riemann_matches_oracle() {
    // Desk-size version of the acceptance sweep (it reruns at 500 cases).
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    for case in 0..60 {
        let model = common::random_spline_model(&mut rng);
        let b = CurveBuilder::new(&model, Numerics::default());
        // Jumps below the strength floor of any ε-run carry sub-grid
        // tangency structure; the sweep pins |Δu| ≥ 0.05.
        let ul: f64 = rng.gen_range(-0.9..0.9);
        let ur: f64 = rng.gen_range(-0.9..0.9);
        if (ul - ur).abs() < 0.05 {
            continue;
        }
        let f = |u: f64| model.flux_fn().f(u);
        let df = |u: f64| model.flux_fn().df(u);
        compare_with_oracle(&b, &f, &df, ul, ur, 1e-4, 1e-9)
            .unwrap_or_else(|e| panic!("case {case} (ul={ul}, ur={ur}): {e}"));
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn solver_consistency_simplified_vs_accurate() {
    // As 𝓘 → 0, the physical endpoint of the simplified solver differs
    // from the accurate fan by O(𝓘): log-log slope ≥ 0.95. Scalar
    // strengths add exactly, so this needs the coupled system: a family-2
    // shock crossed by family-1 contacts of shrinking strength.
    let model = fronttrack::lab::coupled_model(0.8, &[0.5]).unwrap();
    let b = CurveBuilder::new(&model, Numerics::default());
    let mut points = Vec::new();
    for k in 0..40 {
        let dv = 0.5 * (0.85f64).powi(k);
        // Left: family-2 shock at v = 0.5; right: 1-contact dropping v.
        let u_l = State::new(&[0.18, 0.5]);
        let c2 = b.build(&u_l, -0.3, 1).unwrap();
        let u_m = c2.endpoint();
        let e_m = model.eigen(&u_m).unwrap();
        let c1 = b.build(&u_m, dv, 0).unwrap();
        let u_r = c1.endpoint();
        let s1 = e_m.left[0].dot(&(&u_r - &u_m));
        let amount = (0.3 * s1).abs();
        let acc = accurate_solver(&b, &u_l, &u_r, 0.05).unwrap();
        let simp = simplified_solver(&b, &u_l, &u_r, 1, -0.3, 0, s1, 0.05, model.speed_bound()).unwrap();
        let simp_end = simp
            .iter()
            .filter(|s| s.is_physical())
            .last()
            .map(|s| s.u_right.clone())
            .unwrap();
        let acc_end = acc
            .iter()
            .filter(|s| s.is_physical())
            .last()
            .map(|s| s.u_right.clone())
            .unwrap();
        let d = (&simp_end - &acc_end).norm();
        if amount > 1e-12 && d > 1e-12 {
            points.push((amount.ln(), d.ln()));
        }
    }
    assert!(points.len() > 20, "need data, got {}", points.len());
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(slope >= 0.95, "fit exponent {slope} over {} points", points.len());
}

#[test]
fn fronts_respect_speed_bracket() {
    // Every front emitted by the accurate solver satisfies
    // |speed − σ(τ)| ≤ 2ε over its own parameter range.
    let m = burgers();
    let b = CurveBuilder::new(&m, Numerics::default());
    let eps = 0.05;
    let fronts = accurate_solver(&b, &State::scalar(-0.8), &State::scalar(0.9), eps).unwrap();
    for f in fronts {
        let c = b.build(&f.u_left, f.strength, f.family).unwrap();
        for k in 0..=16 {
            let w = c.width() * k as f64 / 16.0;
            assert!(
                (f.speed - c.sigma_at_w(w)).abs() <= 2.0 * eps + 1e-12,
                "front at {} vs sigma {}",
                f.speed,
                c.sigma_at_w(w)
            );
        }
    }
}

#[test]
fn liu_tangency_margin_zero() {
    // Construct an exactly tangent chord on the two-inflection flux by
    // bisection: the Liu margin at the tangency parameter vanishes.
    let m = fronttrack::flux::two_inflection();
    let b = CurveBuilder::new(&m, Numerics::default());
    // Jump from u⁻ = -1.7320508 (≈ -√3) to u⁺ = 0 has σ̂ ≈ f(0)-f(u⁻) → 0
    // tangent to f' at 0: margin ≈ 0.
    let s3 = 3.0f64.sqrt();
    let rep = fronttrack::riemann::liu_admissible(&b, &State::scalar(-s3), s3, 0, 255).unwrap();
    assert!(rep.admissible);
    assert!(
        rep.worst_margin.abs() < 5e-5,
        "margin {} should vanish at the tangency",
        rep.worst_margin
    );
    // A non-tangent jump keeps a positive margin of the chord-gap scale.
    let rep2 = fronttrack::riemann::liu_admissible(&b, &State::scalar(-1.7), 1.4, 0, 63).unwrap();
    assert!(rep2.admissible && rep2.worst_margin > 1e-3);
}

#[test]
fn rarefaction_strength_telescopes() {
    let m = burgers();
    let b = CurveBuilder::new(&m, Numerics::default());
    let c = b.build(&State::scalar(-0.3), 1.3, 0).unwrap();
    let fronts = discretize_rarefaction(&c, 0.07);
    let total: f64 = fronts.iter().map(|f| f.strength).sum();
    assert!((total - 1.3).abs() < 1e-10);
    // Consecutive states telescope exactly.
    for w in fronts.windows(2) {
        assert_eq!(w[0].u_right.as_slice(), w[1].u_left.as_slice());
    }
}
