//! Flux-function interface: eigenstructure, the piecewise-genuinely-
//! nonlinear partition of state space, and the built-in models.

mod burgers;
mod scalar;
mod tabulated;
mod two_inflection;

pub use burgers::{burgers, Burgers};
pub use scalar::{ScalarFlux, ScalarModel};
pub use tabulated::{tabulated_model, TabulatedScalarFlux};
pub use two_inflection::{two_inflection, TwoInflection};

use crate::error::{FtError, Result};
use crate::rk;
use crate::state::{Mat, State};

/// Bounded working domain Ω, a box.
#[derive(Clone, Debug)]
pub struct DomainBox {
    pub lo: State,
    pub hi: State,
}

impl DomainBox {
    pub fn new(lo: State, hi: State) -> Self {
        DomainBox { lo, hi }
    }

    pub fn scalar(lo: f64, hi: f64) -> Self {
        DomainBox {
            lo: State::scalar(lo),
            hi: State::scalar(hi),
        }
    }

    pub fn contains(&self, u: &State) -> bool {
        (0..u.dim()).all(|k| u[k] >= self.lo[k] && u[k] <= self.hi[k])
    }

    pub fn diameter(&self) -> f64 {
        (&self.hi - &self.lo).norm()
    }

    pub fn center(&self) -> State {
        self.lo.lerp(&self.hi, 0.5)
    }
}

/// Full eigendecomposition at a state: ascending speeds, unit right
/// eigenvectors and the biorthonormal left covectors.
#[derive(Clone, Debug)]
pub struct EigenStructure {
    pub lambdas: Vec<f64>,
    pub right: Vec<State>,
    pub left: Vec<State>,
}

impl EigenStructure {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }
}

/// Result of locating a state within the Δ_i^k partition of one family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionQuery {
    /// Index k of the containing region Δ_i^k. Region labels are aligned
    /// with the sign convention: ∇λ_i·r_i < 0 on even regions.
    pub index: usize,
    /// Set when |∇λ_i·r_i| falls below the boundary tolerance; the caller
    /// decides what to do with near-manifold states.
    pub on_manifold: bool,
    /// The raw indicator value ∇λ_i·r_i(u).
    pub indicator: f64,
}

/// A system of conservation laws u_t + f(u)_x = 0 with the structural
/// data the front-tracking stack needs.
pub trait FluxModel: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    fn domain(&self) -> &DomainBox;

    /// f(u). Pure; errors when u leaves Ω.
    fn flux(&self, u: &State) -> Result<State>;

    /// Df(u); analytic for all built-ins. The default falls back to
    /// central finite differences of `flux`.
    fn jacobian(&self, u: &State) -> Result<Mat> {
        fd_jacobian(self.as_model(), u, 1e-6)
    }

    /// Eigendecomposition with ascending, strictly separated speeds.
    fn eigen(&self, u: &State) -> Result<EigenStructure> {
        let a = self.jacobian(u)?;
        eigen_dense(&a, self.hyperbolicity_gap())
    }

    /// λ̂: strictly larger than every characteristic speed over Ω.
    fn speed_bound(&self) -> f64;

    /// Separators λ̌_0 < λ̌_1 < … < λ̌_N with λ̌_{k-1} < λ_k(u) < λ̌_k.
    fn lambda_checks(&self) -> Vec<f64>;

    /// ∇λ_i·r_i(u). The default takes a directional finite difference of
    /// λ_i along r_i.
    fn gnl_indicator(&self, u: &State, family: usize) -> Result<f64> {
        let e = self.eigen(u)?;
        let r = &e.right[family];
        let h = 1e-6 * (1.0 + u.norm());
        let mut up = u.clone();
        up.add_scaled(h, r);
        let mut dn = u.clone();
        dn.add_scaled(-h, r);
        let lp = self.eigen(&up)?.lambdas[family];
        let ln = self.eigen(&dn)?.lambdas[family];
        Ok((lp - ln) / (2.0 * h))
    }

    /// Number k̄_i of zero manifolds Z_i^j of family i.
    fn zero_manifold_count(&self, family: usize) -> usize;

    /// Which region Δ_i^k contains u.
    fn region(&self, u: &State, family: usize) -> Result<RegionQuery>;

    fn linearly_degenerate(&self, _family: usize) -> bool {
        false
    }

    /// True when the elementary curves of this family are straight lines
    /// in state space (constant r̃), letting analysis walk wave paths
    /// without rebuilding curves.
    fn wave_path_is_straight(&self, _family: usize) -> bool {
        false
    }

    /// Exact contact-discontinuity endpoint for linearly degenerate
    /// families, when the model can provide one in closed form.
    fn contact_state(&self, _u_minus: &State, _family: usize, _s: f64) -> Option<Result<State>> {
        None
    }

    /// Largest wave strength the elementary-curve machinery accepts.
    fn max_strength(&self) -> f64;

    /// Minimal eigenvalue separation treated as strictly hyperbolic.
    fn hyperbolicity_gap(&self) -> f64 {
        1e-8
    }

    fn as_model(&self) -> &dyn FluxModel;
}

/// f(u) with the domain check applied; the entry point the spec calls
/// `eval_flux`.
pub fn eval_flux(model: &dyn FluxModel, u: &State) -> Result<State> {
    if !model.domain().contains(u) {
        return Err(FtError::OutsideDomain(format!("{:?}", u)));
    }
    model.flux(u)
}

/// The i-rarefaction curve R_i[u0](ω): integrates du/dω = r_i(u).
pub fn rarefaction_curve(
    model: &dyn FluxModel,
    u0: &State,
    family: usize,
    omega: f64,
) -> Result<State> {
    if !model.domain().contains(u0) {
        return Err(FtError::OutsideDomain(format!("{:?}", u0)));
    }
    if omega == 0.0 {
        return Ok(u0.clone());
    }
    let sol = rk::integrate(
        |w, u| {
            if !model.domain().contains(u) {
                return Err(FtError::CurveLeftDomain(w));
            }
            Ok(model.eigen(u)?.right[family].clone())
        },
        u0.clone(),
        0.0,
        omega,
        1e-10,
    )?;
    Ok(sol.last().y.clone())
}

/// Central finite-difference Jacobian of the flux.
pub fn fd_jacobian(model: &dyn FluxModel, u: &State, step: f64) -> Result<Mat> {
    let n = model.dim();
    let h = step * (1.0 + u.norm());
    let mut a = Mat::zeros(n);
    for j in 0..n {
        let mut up = u.clone();
        up[j] += h;
        let mut dn = u.clone();
        dn[j] -= h;
        let fp = model.flux(&up)?;
        let fn_ = model.flux(&dn)?;
        for i in 0..n {
            a[(i, j)] = (fp[i] - fn_[i]) / (2.0 * h);
        }
    }
    Ok(a)
}

/// Direct eigendecomposition for N ≤ 2 with real distinct eigenvalues.
/// Left covectors come from inverting the right-eigenvector matrix, so
/// biorthonormality holds to machine precision.
pub fn eigen_dense(a: &Mat, min_gap: f64) -> Result<EigenStructure> {
    match a.dim() {
        1 => Ok(EigenStructure {
            lambdas: vec![a[(0, 0)]],
            right: vec![State::scalar(1.0)],
            left: vec![State::scalar(1.0)],
        }),
        2 => {
            let tr = a[(0, 0)] + a[(1, 1)];
            let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            let disc = tr * tr - 4.0 * det;
            if disc <= 0.0 {
                return Err(FtError::HyperbolicityMargin {
                    gap: if disc <= 0.0 { 0.0 } else { disc.sqrt() },
                    min: min_gap,
                });
            }
            let sq = disc.sqrt();
            if sq < min_gap {
                return Err(FtError::HyperbolicityMargin { gap: sq, min: min_gap });
            }
            let l1 = (tr - sq) / 2.0;
            let l2 = (tr + sq) / 2.0;
            let rvec = |lam: f64| -> State {
                // Rows of A - λI are (a-λ, b) and (c, d-λ); the eigenvector
                // is orthogonal to the better-conditioned row.
                let r1 = State::new(&[a[(0, 1)], lam - a[(0, 0)]]);
                let r2 = State::new(&[lam - a[(1, 1)], a[(1, 0)]]);
                let v = if r1.norm() >= r2.norm() { r1 } else { r2 };
                let v = v.normalized();
                // Deterministic orientation: largest component positive.
                let flip = if v[0].abs() >= v[1].abs() { v[0] } else { v[1] };
                if flip < 0.0 {
                    &v * -1.0
                } else {
                    v
                }
            };
            let r = vec![rvec(l1), rvec(l2)];
            let mut rm = Mat::zeros(2);
            rm.set_col(0, &r[0]);
            rm.set_col(1, &r[1]);
            let lm = rm
                .inverse()
                .ok_or_else(|| FtError::Other("degenerate eigenbasis".into()))?;
            Ok(EigenStructure {
                lambdas: vec![l1, l2],
                right: r,
                left: vec![lm.row(0), lm.row(1)],
            })
        }
        n => Err(FtError::EigenUnsupported(n)),
    }
}

/// Region lookup for a scalar model from its sorted inflection points.
/// `negative_first` records the sign of f'' on the leftmost region so
/// region labels respect the even/odd parity convention.
pub(crate) fn scalar_region(
    u: f64,
    inflections: &[f64],
    indicator: f64,
    negative_first: bool,
    tol: f64,
) -> RegionQuery {
    let below = inflections.iter().filter(|z| u > **z).count();
    let offset = if negative_first { 0 } else { 1 };
    RegionQuery {
        index: offset + below,
        on_manifold: indicator.abs() < tol,
        indicator,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_eigen_biorthonormal() {
        let a = Mat::from_rows(&[&[2.0, 0.5], &[0.3, -1.0]]);
        let e = eigen_dense(&a, 1e-10).unwrap();
        assert!(e.lambdas[0] < e.lambdas[1]);
        for i in 0..2 {
            for j in 0..2 {
                let d = e.left[j].dot(&e.right[i]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-12, "l{j}·r{i} = {d}");
            }
            // A·r = λ·r
            let ar = a.matvec(&e.right[i]);
            let lr = &e.right[i] * e.lambdas[i];
            assert!((&ar - &lr).norm() < 1e-12);
        }
    }
}
