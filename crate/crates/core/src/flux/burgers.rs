//! Burgers flux f(u) = u²/2, genuinely nonlinear everywhere.

use super::scalar::{ScalarFlux, ScalarModel};

pub struct BurgersFlux;

impl ScalarFlux for BurgersFlux {
    fn f(&self, u: f64) -> f64 {
        0.5 * u * u
    }
    fn df(&self, u: f64) -> f64 {
        u
    }
    fn d2f(&self, _u: f64) -> f64 {
        1.0
    }
    fn inflections(&self) -> &[f64] {
        &[]
    }
}

pub type Burgers = ScalarModel<BurgersFlux>;

pub fn burgers() -> Burgers {
    ScalarModel::new("burgers", BurgersFlux, -3.0, 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::{eval_flux, FluxModel};
    use crate::state::State;

    #[test]
    fn flux_values() {
        let m = burgers();
        assert_eq!(eval_flux(&m, &State::scalar(0.0)).unwrap()[0], 0.0);
        assert_eq!(eval_flux(&m, &State::scalar(2.0)).unwrap()[0], 2.0);
    }

    #[test]
    fn eigen_scalar_case() {
        let m = burgers();
        let e = m.eigen(&State::scalar(3.0)).unwrap();
        assert_eq!(e.lambdas[0], 3.0);
        assert_eq!(e.right[0][0], 1.0);
        assert_eq!(e.left[0][0], 1.0);
    }

    #[test]
    fn outside_domain_rejected() {
        let m = burgers();
        assert!(eval_flux(&m, &State::scalar(5.0)).is_err());
    }

    #[test]
    fn single_region_positive_indicator() {
        let m = burgers();
        let q = m.region(&State::scalar(0.7), 0).unwrap();
        assert!(q.indicator > 0.0);
        assert!(!q.on_manifold);
        // Convex flux: one region whose label has odd parity.
        assert_eq!(q.index % 2, 1);
    }
}
