//! The counterexample lab: the ODE-defined flux, the coupled 2×2 system,
//! interface-jump formulas, Cantor initial data and the built-in
//! scenarios (including the two-inflection merge picture).

pub mod cantor;
pub mod coupled;
pub mod interface;
pub mod ode_table;
pub mod pattern;
pub mod scenarios;

pub use cantor::{build_cantor_data, CantorInterval, CantorSpec};
pub use coupled::{coupled_model, CoupledModel, V_FLOOR};
pub use interface::{composed_interface_map, focusing_check, interface_jump_u_plus};
pub use ode_table::{partials_from_f, FluxPoint, OdeFluxTable, OdeSlice};
pub use pattern::{cantor_shock_scenario, match_shadow, shock_pattern, CantorReport, PatternParams, ShockPattern};
