//! The coupled 2×2 counterexample system
//!
//!   u_t + f(u, v)_x = 0,   v_t − v_x = 0,
//!
//! with f(u,v) = e^{-1/v}u²/2 for v > 0, 0 at v = 0, and the ODE table
//! F(u, -v) for v < 0. The first family is exactly linear transport at
//! speed −1; the second is scalar-like with r₂ = (1, 0)ᵀ tangent to the
//! flat manifold Z₂ = {v = 0}, which is what defeats piecewise genuine
//! nonlinearity.

use crate::error::{FtError, Result};
use crate::flux::{DomainBox, EigenStructure, FluxModel, RegionQuery};
use crate::state::{Mat, State};

use super::ode_table::OdeFluxTable;

/// Below this |v| the exponential factor e^{-1/|v|} is far below f64
/// resolution, so f is exactly zero there.
pub const V_FLOOR: f64 = 5e-3;

pub struct CoupledModel {
    table: OdeFluxTable,
    domain: DomainBox,
    speed_bound: f64,
    fu_min: f64,
    fu_max: f64,
    max_strength: f64,
}

#[derive(Clone, Copy, Debug)]
struct FluxEval {
    f: f64,
    f_u: f64,
    f_uu: f64,
    f_v: f64,
}

impl CoupledModel {
    pub fn new(table: OdeFluxTable) -> Result<CoupledModel> {
        let a_max = table.a_max();
        let (u_lo, u_hi) = (table.u_lo, table.u_hi);
        let domain = DomainBox::new(State::new(&[u_lo, -a_max]), State::new(&[u_hi, a_max]));
        let mut m = CoupledModel {
            table,
            domain,
            speed_bound: 0.0,
            fu_min: 0.0,
            fu_max: 0.0,
            max_strength: (u_hi - u_lo) + 2.0 * a_max,
        };
        // Characteristic speed range of the second family over Ω.
        let mut fu_min = f64::INFINITY;
        let mut fu_max = f64::NEG_INFINITY;
        for i in 0..=40 {
            let u = u_lo + (u_hi - u_lo) * i as f64 / 40.0;
            for j in 0..=40 {
                let v = -a_max + 2.0 * a_max * j as f64 / 40.0;
                let e = m.flux_eval(u, v)?;
                fu_min = fu_min.min(e.f_u);
                fu_max = fu_max.max(e.f_u);
            }
        }
        if fu_min <= -1.0 {
            return Err(FtError::HyperbolicityMargin {
                gap: fu_min + 1.0,
                min: 0.0,
            });
        }
        m.fu_min = fu_min;
        m.fu_max = fu_max;
        m.speed_bound = fu_max.abs().max(fu_min.abs()).max(1.0) + 1.0;
        Ok(m)
    }

    pub fn table(&self) -> &OdeFluxTable {
        &self.table
    }

    fn flux_eval(&self, u: f64, v: f64) -> Result<FluxEval> {
        if v.abs() <= V_FLOOR {
            return Ok(FluxEval {
                f: 0.0,
                f_u: 0.0,
                f_uu: 0.0,
                f_v: 0.0,
            });
        }
        if v > 0.0 {
            let q = (-1.0 / v).exp();
            Ok(FluxEval {
                f: 0.5 * q * u * u,
                f_u: q * u,
                f_uu: q,
                f_v: 0.5 * q * u * u / (v * v),
            })
        } else {
            let p = self.table.eval(u, -v)?;
            // f(u, v) = F(u, a) with a = -v, so ∂f/∂v = -F_a.
            Ok(FluxEval {
                f: p.f,
                f_u: p.f_u,
                f_uu: p.f_uu,
                f_v: -p.f_a,
            })
        }
    }

    /// The u-component of the flux, tested directly in the lab.
    pub fn f_scalar(&self, u: f64, v: f64) -> Result<f64> {
        Ok(self.flux_eval(u, v)?.f)
    }

    /// Transport invariant Φ(u, v) = f(u, v) + u, constant along the
    /// first family's contact curves.
    pub fn transport_invariant(&self, u: f64, v: f64) -> Result<f64> {
        Ok(self.flux_eval(u, v)?.f + u)
    }

    /// Solves f(w, v) + w = c for w (monotone since f_u > -1).
    pub fn invert_transport(&self, c: f64, v: f64) -> Result<f64> {
        let (mut lo, mut hi) = (self.domain.lo[0], self.domain.hi[0]);
        let flo = self.transport_invariant(lo, v)? - c;
        let fhi = self.transport_invariant(hi, v)? - c;
        if flo > 0.0 || fhi < 0.0 {
            return Err(FtError::OutsideDomain(format!(
                "transport inverse of {c} at v={v} leaves the u-range"
            )));
        }
        for _ in 0..90 {
            let mid = 0.5 * (lo + hi);
            if self.transport_invariant(mid, v)? - c <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

impl FluxModel for CoupledModel {
    fn name(&self) -> &str {
        "coupled66"
    }

    fn dim(&self) -> usize {
        2
    }

    fn domain(&self) -> &DomainBox {
        &self.domain
    }

    fn flux(&self, w: &State) -> Result<State> {
        let e = self.flux_eval(w[0], w[1])?;
        Ok(State::new(&[e.f, -w[1]]))
    }

    fn jacobian(&self, w: &State) -> Result<Mat> {
        let e = self.flux_eval(w[0], w[1])?;
        Ok(Mat::from_rows(&[&[e.f_u, e.f_v], &[0.0, -1.0]]))
    }

    fn eigen(&self, w: &State) -> Result<EigenStructure> {
        let e = self.flux_eval(w[0], w[1])?;
        if e.f_u <= -1.0 + 1e-9 {
            return Err(FtError::HyperbolicityMargin {
                gap: e.f_u + 1.0,
                min: 1e-9,
            });
        }
        // λ₁ = -1 with r₁ ∝ (f_v, -(1+f_u)); λ₂ = f_u with r₂ = (1, 0).
        let n1 = (e.f_v * e.f_v + (1.0 + e.f_u) * (1.0 + e.f_u)).sqrt();
        let r1 = State::new(&[e.f_v / n1, -(1.0 + e.f_u) / n1]);
        let r2 = State::new(&[1.0, 0.0]);
        let l1 = State::new(&[0.0, -n1 / (1.0 + e.f_u)]);
        let l2 = State::new(&[1.0, e.f_v / (1.0 + e.f_u)]);
        Ok(EigenStructure {
            lambdas: vec![-1.0, e.f_u],
            right: vec![r1, r2],
            left: vec![l1, l2],
        })
    }

    fn speed_bound(&self) -> f64 {
        self.speed_bound
    }

    fn lambda_checks(&self) -> Vec<f64> {
        vec![
            -self.speed_bound,
            0.5 * (-1.0 + self.fu_min),
            self.speed_bound,
        ]
    }

    fn gnl_indicator(&self, w: &State, family: usize) -> Result<f64> {
        if family == 0 {
            // Linearly degenerate: ∇λ₁·r₁ ≡ 0.
            return Ok(0.0);
        }
        Ok(self.flux_eval(w[0], w[1])?.f_uu)
    }

    fn zero_manifold_count(&self, family: usize) -> usize {
        if family == 0 {
            0
        } else {
            1
        }
    }

    fn region(&self, w: &State, family: usize) -> Result<RegionQuery> {
        if family == 0 {
            return Ok(RegionQuery {
                index: 0,
                on_manifold: true,
                indicator: 0.0,
            });
        }
        let ind = self.flux_eval(w[0], w[1])?.f_uu;
        // f_uu < 0 for v < 0 (even region 0), > 0 for v > 0 (odd region 1);
        // the |v| ≤ floor slab is the flat zero manifold itself.
        Ok(RegionQuery {
            index: if w[1] > 0.0 { 1 } else { 0 },
            on_manifold: w[1].abs() <= V_FLOOR,
            indicator: ind,
        })
    }

    fn linearly_degenerate(&self, family: usize) -> bool {
        family == 0
    }

    fn wave_path_is_straight(&self, family: usize) -> bool {
        // r₂ = (1, 0)ᵀ is constant.
        family == 1
    }

    fn max_strength(&self) -> f64 {
        self.max_strength
    }

    fn as_model(&self) -> &dyn FluxModel {
        self
    }
}

/// Builds the standard lab instance: slices dense enough for the Cantor
/// scenarios, with exact slices at the requested amplitudes.
pub fn coupled_model(a_max: f64, extra_amplitudes: &[f64]) -> Result<CoupledModel> {
    let table = OdeFluxTable::build(V_FLOOR, a_max, 96, extra_amplitudes, 0.6, 512, 1e-12)?;
    CoupledModel::new(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::eval_flux;

    fn model() -> CoupledModel {
        coupled_model(1.0, &[0.5]).unwrap()
    }

    #[test]
    fn flux_value_positive_v() {
        let m = model();
        // f at (0.1, 0.5) = e^{-2}·0.01/2.
        let f = eval_flux(&m, &State::new(&[0.1, 0.5])).unwrap();
        let want = (-2.0f64).exp() * 0.005;
        assert!((f[0] - want).abs() < 1e-15);
        assert!((f[1] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn eigenstructure_matches_paper_form() {
        let m = model();
        let e = m.eigen(&State::new(&[0.1, 0.4])).unwrap();
        assert_eq!(e.lambdas[0], -1.0);
        let q = (-1.0f64 / 0.4).exp();
        assert!((e.lambdas[1] - q * 0.1).abs() < 1e-14);
        assert_eq!(e.right[1].as_slice(), &[1.0, 0.0]);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e.left[j].dot(&e.right[i]) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn f_uu_sign_flips_across_v_zero() {
        let m = model();
        for k in 1..=20 {
            let u = -0.4 + 0.8 * k as f64 / 21.0;
            let up = m.gnl_indicator(&State::new(&[u, 0.3]), 1).unwrap();
            let dn = m.gnl_indicator(&State::new(&[u, -0.3]), 1).unwrap();
            assert!(up > 0.0 && dn < 0.0, "u={u}: {up} {dn}");
        }
    }

    #[test]
    fn strict_hyperbolicity_margin() {
        let m = model();
        for i in 0..=20 {
            for j in 0..=20 {
                let u = m.domain().lo[0] + (m.domain().hi[0] - m.domain().lo[0]) * i as f64 / 20.0;
                let v = -1.0 + 2.0 * j as f64 / 20.0;
                let e = m.eigen(&State::new(&[u, v])).unwrap();
                assert!(e.lambdas[1] > -1.0 + 0.5);
            }
        }
    }

    #[test]
    fn transport_invariant_inverse() {
        let m = model();
        let c = m.transport_invariant(0.15, -0.5).unwrap();
        let w = m.invert_transport(c, -0.5).unwrap();
        assert!((w - 0.15).abs() < 1e-12);
    }

    #[test]
    fn rarefaction_curve_family2_is_horizontal() {
        let m = model();
        let u0 = State::new(&[0.1, 0.3]);
        let out = crate::flux::rarefaction_curve(&m, &u0, 1, 0.05).unwrap();
        assert!((out[0] - 0.15).abs() < 1e-10);
        assert!((out[1] - 0.3).abs() < 1e-12);
    }
}
