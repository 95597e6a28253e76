//! Generic wrapper turning a scalar flux u ↦ f(u) into a `FluxModel`.

use crate::error::{FtError, Result};
use crate::state::{Mat, State};

use super::{scalar_region, DomainBox, EigenStructure, FluxModel, RegionQuery};

/// A scalar flux with analytic derivatives.
pub trait ScalarFlux: Send + Sync {
    fn f(&self, u: f64) -> f64;
    fn df(&self, u: f64) -> f64;
    fn d2f(&self, u: f64) -> f64;
    /// Zeros of f'' inside the working interval, sorted ascending.
    fn inflections(&self) -> &[f64];
}

pub struct ScalarModel<F: ScalarFlux> {
    name: String,
    flux: F,
    domain: DomainBox,
    speed_bound: f64,
    negative_first: bool,
    manifold_tol: f64,
    max_strength: f64,
}

impl<F: ScalarFlux> ScalarModel<F> {
    pub fn new(name: &str, flux: F, lo: f64, hi: f64) -> Self {
        // λ̂ = max characteristic speed over Ω plus margin 1.0.
        let mut max_speed: f64 = 0.0;
        for k in 0..=4096 {
            let u = lo + (hi - lo) * k as f64 / 4096.0;
            max_speed = max_speed.max(flux.df(u).abs());
        }
        let negative_first = {
            let probe = if flux.inflections().is_empty() {
                0.5 * (lo + hi)
            } else {
                0.5 * (lo + flux.inflections()[0])
            };
            flux.d2f(probe) < 0.0
        };
        ScalarModel {
            name: name.to_string(),
            flux,
            domain: DomainBox::scalar(lo, hi),
            speed_bound: max_speed + 1.0,
            negative_first,
            manifold_tol: 1e-9,
            max_strength: hi - lo,
        }
    }

    pub fn flux_fn(&self) -> &F {
        &self.flux
    }
}

impl<F: ScalarFlux> FluxModel for ScalarModel<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        1
    }

    fn domain(&self) -> &DomainBox {
        &self.domain
    }

    fn flux(&self, u: &State) -> Result<State> {
        if !u.is_finite() {
            return Err(FtError::OutsideDomain("non-finite state".into()));
        }
        Ok(State::scalar(self.flux.f(u[0])))
    }

    fn jacobian(&self, u: &State) -> Result<Mat> {
        let mut m = Mat::zeros(1);
        m[(0, 0)] = self.flux.df(u[0]);
        Ok(m)
    }

    fn eigen(&self, u: &State) -> Result<EigenStructure> {
        Ok(EigenStructure {
            lambdas: vec![self.flux.df(u[0])],
            right: vec![State::scalar(1.0)],
            left: vec![State::scalar(1.0)],
        })
    }

    fn speed_bound(&self) -> f64 {
        self.speed_bound
    }

    fn lambda_checks(&self) -> Vec<f64> {
        vec![-self.speed_bound, self.speed_bound]
    }

    fn gnl_indicator(&self, u: &State, _family: usize) -> Result<f64> {
        Ok(self.flux.d2f(u[0]))
    }

    fn zero_manifold_count(&self, _family: usize) -> usize {
        self.flux.inflections().len()
    }

    fn region(&self, u: &State, _family: usize) -> Result<RegionQuery> {
        Ok(scalar_region(
            u[0],
            self.flux.inflections(),
            self.flux.d2f(u[0]),
            self.negative_first,
            self.manifold_tol,
        ))
    }

    fn max_strength(&self) -> f64 {
        self.max_strength
    }

    fn wave_path_is_straight(&self, _family: usize) -> bool {
        true
    }

    fn as_model(&self) -> &dyn FluxModel {
        self
    }
}
