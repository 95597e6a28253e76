//! Run configuration: a TOML file selecting the model, initial data
//! (explicit breakpoints, a built-in scenario, or a Cantor spec), the
//! resolution(s), and the analysis requests.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{FtError, Result};
use crate::flux::{burgers, tabulated_model, two_inflection, FluxModel};
use crate::lab::{self, CantorSpec, CoupledModel};
use crate::numerics::Numerics;
use crate::state::State;
use crate::tracker::PiecewiseConstant;

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct RunConfig {
    /// "burgers" | "two_inflection" | "coupled66" | "custom".
    pub model: String,
    /// Tabulated-flux file for model = "custom".
    pub custom_flux: Option<PathBuf>,
    pub eps: Option<f64>,
    /// Strictly decreasing sequence for convergence runs.
    pub eps_sequence: Option<Vec<f64>>,
    /// Threshold override; defaults to eps³.
    pub rho: Option<f64>,
    pub t_end: f64,
    pub seed: Option<u64>,
    pub snapshot_times: Option<Vec<f64>>,
    /// Built-in scenario name (overrides initial_data).
    pub scenario: Option<String>,
    pub initial_data: Option<InitialData>,
    pub coupled: Option<CoupledConfig>,
    pub cantor: Option<CantorConfig>,
    #[serde(default)]
    pub numerics: Numerics,
    pub analysis: Option<AnalysisConfig>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct InitialData {
    pub left: Vec<f64>,
    #[serde(default)]
    pub breaks: Vec<BreakPoint>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BreakPoint {
    pub x: f64,
    pub state: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CoupledConfig {
    pub a_max: f64,
    #[serde(default)]
    pub amplitudes: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CantorConfig {
    pub m: usize,
    pub h: f64,
    pub a0: f64,
    /// Amplitude decay per interval index; a_n = a0·decay^n.
    #[serde(default = "default_decay")]
    pub decay: f64,
    pub u_l: f64,
    pub u_r: f64,
    #[serde(default = "default_cantor_tv")]
    pub tv_bound: f64,
}

fn default_decay() -> f64 {
    0.25
}

fn default_cantor_tv() -> f64 {
    64.0
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
pub struct AnalysisConfig {
    #[serde(default)]
    pub curves: Vec<CurveRequest>,
    #[serde(default)]
    pub verify: Vec<VerifyRequest>,
    #[serde(default)]
    pub balance: Vec<BalanceRequest>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CurveRequest {
    /// 1-based family index.
    pub family: usize,
    pub region: usize,
    pub eps: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct VerifyRequest {
    pub t: f64,
    pub x: f64,
    #[serde(default = "default_strength_floor")]
    pub strength_floor: f64,
    #[serde(default = "default_atom_threshold")]
    pub atom_threshold: f64,
}

fn default_strength_floor() -> f64 {
    0.05
}

fn default_atom_threshold() -> f64 {
    1e-4
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BalanceRequest {
    /// Polygon vertices as (t, x) pairs.
    pub polygon: Vec<(f64, f64)>,
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| FtError::Config(format!("{e}")))
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    /// Resolutions to run: the sequence when present, else the single eps.
    pub fn resolutions(&self) -> Result<Vec<f64>> {
        if let Some(seq) = &self.eps_sequence {
            if seq.len() < 2 {
                return Err(FtError::Config("eps_sequence needs ≥ 2 values".into()));
            }
            if seq.windows(2).any(|w| w[1] >= w[0]) {
                return Err(FtError::Config(
                    "eps_sequence must be strictly decreasing".into(),
                ));
            }
            Ok(seq.clone())
        } else if let Some(e) = self.eps {
            Ok(vec![e])
        } else {
            Err(FtError::Config("config needs eps or eps_sequence".into()))
        }
    }
}

/// A constructed model, keeping the concrete coupled handle when the
/// Cantor machinery needs it.
pub enum ModelHandle {
    Generic(Box<dyn FluxModel>),
    Coupled(CoupledModel),
}

impl ModelHandle {
    pub fn as_flux(&self) -> &dyn FluxModel {
        match self {
            ModelHandle::Generic(m) => m.as_ref(),
            ModelHandle::Coupled(m) => m,
        }
    }

    pub fn as_coupled(&self) -> Option<&CoupledModel> {
        match self {
            ModelHandle::Coupled(m) => Some(m),
            _ => None,
        }
    }
}

pub fn build_model(cfg: &RunConfig) -> Result<ModelHandle> {
    match cfg.model.as_str() {
        "burgers" => Ok(ModelHandle::Generic(Box::new(burgers()))),
        "two_inflection" => Ok(ModelHandle::Generic(Box::new(two_inflection()))),
        "coupled66" => {
            let mut amplitudes: Vec<f64> = cfg
                .coupled
                .as_ref()
                .map(|c| c.amplitudes.clone())
                .unwrap_or_default();
            let mut a_max = cfg.coupled.as_ref().map(|c| c.a_max).unwrap_or(1.2);
            if let Some(c) = &cfg.cantor {
                let spec = cantor_spec(c);
                amplitudes.extend(spec.amplitudes());
                a_max = a_max.max(c.a0 * 1.2);
            }
            Ok(ModelHandle::Coupled(lab::coupled_model(a_max, &amplitudes)?))
        }
        "custom" => {
            let path = cfg.custom_flux.as_ref().ok_or_else(|| {
                FtError::Config("model = \"custom\" needs custom_flux = <path>".into())
            })?;
            Ok(ModelHandle::Generic(Box::new(tabulated_model(path)?)))
        }
        other => Err(FtError::Config(format!(
            "unknown model \"{other}\" (expected burgers | two_inflection | coupled66 | custom)"
        ))),
    }
}

fn cantor_spec(c: &CantorConfig) -> CantorSpec {
    CantorSpec {
        m: c.m,
        h: c.h,
        a0: c.a0,
        decay: c.decay,
    }
}

/// Resolves the initial data: an explicit breakpoint list, a built-in
/// scenario, or the Cantor construction.
pub fn build_initial_data(cfg: &RunConfig, model: &ModelHandle) -> Result<PiecewiseConstant> {
    if let Some(name) = &cfg.scenario {
        use lab::scenarios as sc;
        let s = match name.as_str() {
            "burgers_shock" => sc::burgers_shock(),
            "burgers_rarefaction" => sc::burgers_rarefaction(),
            "burgers_collision" => sc::burgers_collision(),
            "burgers_cancellation" => sc::burgers_cancellation(),
            "burgers_multistep" => sc::burgers_multistep(),
            "fig2_merge" => sc::fig2_merge(),
            "multiwave" => sc::multiwave(),
            other => {
                return Err(FtError::Config(format!("unknown scenario \"{other}\"")));
            }
        };
        return Ok(s.data);
    }
    if let Some(c) = &cfg.cantor {
        let coupled = model.as_coupled().ok_or_else(|| {
            FtError::Config("cantor initial data needs model = \"coupled66\"".into())
        })?;
        let spec = cantor_spec(c);
        return lab::build_cantor_data(coupled, &spec, c.u_l, c.u_r, c.tv_bound);
    }
    let data = cfg
        .initial_data
        .as_ref()
        .ok_or_else(|| FtError::Config("config needs initial_data, scenario, or cantor".into()))?;
    let dim = model.as_flux().dim();
    if data.left.len() != dim {
        return Err(FtError::Config(format!(
            "initial_data.left has {} components, model has dimension {dim}",
            data.left.len()
        )));
    }
    let mut breaks = Vec::new();
    for b in &data.breaks {
        if b.state.len() != dim {
            return Err(FtError::Config(format!(
                "breakpoint at x = {} has {} components, model has dimension {dim}",
                b.x,
                b.state.len()
            )));
        }
        breaks.push((b.x, State::new(&b.state)));
    }
    Ok(PiecewiseConstant::new(State::new(&data.left), breaks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let text = r#"
model = "burgers"
eps = 0.1
t_end = 2.0

[initial_data]
left = [1.0]
breaks = [{ x = 0.0, state = [0.0] }]
"#;
        let cfg = RunConfig::from_text(text).unwrap();
        assert_eq!(cfg.model, "burgers");
        let model = build_model(&cfg).unwrap();
        let data = build_initial_data(&cfg, &model).unwrap();
        assert_eq!(data.breaks.len(), 1);
    }

    #[test]
    fn missing_model_named_in_error() {
        let err = RunConfig::from_text("eps = 0.1\nt_end = 1.0\n").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("model"), "{msg}");
    }

    #[test]
    fn numerics_partial_override() {
        let text = r#"
model = "burgers"
eps = 0.1
t_end = 1.0

[numerics]
tv_bound = 2.5

[initial_data]
left = [0.0]
"#;
        let cfg = RunConfig::from_text(text).unwrap();
        assert_eq!(cfg.numerics.tv_bound, 2.5);
        assert_eq!(cfg.numerics.curve_grid, Numerics::default().curve_grid);
    }

    #[test]
    fn custom_flux_model_from_file() {
        let dir = std::env::temp_dir().join("ft_custom_flux");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("flux.txt");
        let mut table = String::from("# tabulated flux\n");
        for k in 0..=200 {
            let u = -2.0 + 4.0 * k as f64 / 200.0;
            table.push_str(&format!("{u} {}\n", 0.5 * u * u));
        }
        std::fs::write(&path, table).unwrap();
        let text = format!(
            "model = \"custom\"\ncustom_flux = {path:?}\neps = 0.1\nt_end = 1.0\n\n[initial_data]\nleft = [1.0]\nbreaks = [{{ x = 0.0, state = [0.0] }}]\n"
        );
        let cfg = RunConfig::from_text(&text).unwrap();
        let model = build_model(&cfg).unwrap();
        assert_eq!(model.as_flux().name(), "custom");
        let data = build_initial_data(&cfg, &model).unwrap();
        let log = crate::tracker::run(
            model.as_flux(),
            cfg.numerics.clone(),
            &data,
            0.1,
            1.0,
            None,
            0,
        )
        .unwrap();
        assert_eq!(log.fronts.len(), 1);
        assert!((log.fronts[0].speed - 0.5).abs() < 1e-6);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let text = r#"
model = "burgers"
eps = 0.1
t_end = 1.0

[initial_data]
left = [0.0, 1.0]
"#;
        let cfg = RunConfig::from_text(text).unwrap();
        let model = build_model(&cfg).unwrap();
        assert!(build_initial_data(&cfg, &model).is_err());
    }
}
