//! Interface-jump formulas of the counterexample construction: the state
//! a characteristic carries across a v-transport line, and the focusing
//! property the flux ODE was built to satisfy.

use crate::error::{FtError, Result};

use super::ode_table::{partials_from_f, OdeSlice};

/// The state after a characteristic crosses x + t = h from the v = -a
/// side into v = a:
///
///   u⁺ = (−1 + √(1 + 2e^{-1/a}(F(u⁻, a) + u⁻)))/e^{-1/a},
///
/// evaluated in the cancellation-free form 2C/(1 + √(1 + 2qC)) with
/// q = e^{-1/a}, C = F(u⁻, a) + u⁻.
pub fn interface_jump_u_plus(slice: &OdeSlice, u_minus: f64) -> Result<f64> {
    let q = (-1.0 / slice.a).exp();
    let c = slice.eval(u_minus)?.f + u_minus;
    let rad = 1.0 + 2.0 * q * c;
    if rad <= 0.0 {
        return Err(FtError::NegativeRadicand(rad));
    }
    Ok(2.0 * c / (1.0 + rad.sqrt()))
}

/// Distance from (0, 2h) of the traced characteristic: a fan ray for
/// left value u⁻ leaves the origin at slope F_u(u⁻, a), crosses the line
/// x + t = h into the v = a region, and continues at slope e^{-1/a}u⁺.
/// The ODE construction makes the continuation pass through (0, 2h).
pub fn focusing_check(slice: &OdeSlice, u_minus: f64, h: f64) -> Result<f64> {
    let a = slice.a;
    let p = slice.eval(u_minus)?;
    let (fu, _) = partials_from_f(p.f, u_minus, a)?;
    // Ray x = fu·t meets x = h - t.
    let t0 = h / (1.0 + fu);
    let x0 = h * fu / (1.0 + fu);
    let u_plus = interface_jump_u_plus(slice, u_minus)?;
    let q = (-1.0 / a).exp();
    let x_final = x0 + q * u_plus * (2.0 * h - t0);
    Ok(x_final.abs())
}

/// Composition of the two interface maps -a→a and a→0:
/// u ↦ e^{-1/a}u²/2 + u applied to the image of the first crossing.
pub fn composed_interface_map(slice: &OdeSlice, u_minus: f64) -> Result<f64> {
    let u_plus = interface_jump_u_plus(slice, u_minus)?;
    let q = (-1.0 / slice.a).exp();
    Ok(0.5 * q * u_plus * u_plus + u_plus)
}
