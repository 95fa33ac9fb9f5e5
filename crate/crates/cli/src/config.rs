//! Run configuration: JSON file plus dotted CLI overrides.
//!
//! A config is resolved in three layers: built-in defaults, then the JSON
//! file named by `--config`, then `--<json.path>=<value>` flags applied onto
//! the JSON tree before the final deserialization. Identical resolved
//! configs always produce identical outputs.

use serde::{Deserialize, Serialize};

use wfp_core::dynamics::{Metric, SgdSpec, SimConfig};
use wfp_core::{
    DiffusionSpec, FrictionConvention, ModelParams, NoiseConvention, Q12Convention, SdeConventions,
};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub d: usize,
    pub omega0: f64,
    pub gamma: f64,
    pub dqq: f64,
    pub dpq: f64,
    pub dpp: f64,
    /// Permit an indefinite diffusion block (Dqq*Dpp < Dpq^2) for
    /// spectral-only runs in the Caldeira-Leggett regime.
    pub allow_indefinite_diffusion: bool,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            d: 1,
            omega0: 1.0,
            gamma: 1.0,
            dqq: 0.0,
            dpq: 0.0,
            dpp: 1.0,
            allow_indefinite_diffusion: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    pub dt: f64,
    pub t_final: f64,
    pub n_particles: usize,
    pub seed: u64,
    pub record_every: usize,
    pub metric: String,
    /// Initial mean, replicated across the d position (x) and momentum (p)
    /// coordinates respectively.
    pub initial_mean_x: f64,
    pub initial_mean_p: f64,
    /// Initial covariance as a multiple of the steady-state covariance;
    /// 0 gives a point mass.
    pub initial_cov_scale: f64,
    pub fit_t_lo: Option<f64>,
    pub fit_t_hi: Option<f64>,
    /// Target epsilon for the mixing-time estimate in summaries.
    pub mixing_epsilon: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_final: 10.0,
            n_particles: 10_000,
            seed: 42,
            record_every: 100,
            metric: "kl".into(),
            initial_mean_x: 0.0,
            initial_mean_p: 0.0,
            initial_cov_scale: 1.0,
            fit_t_lo: None,
            fit_t_hi: None,
            mixing_epsilon: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConventionsSection {
    pub q12: String,
    pub noise: String,
    pub friction: String,
}

impl Default for ConventionsSection {
    fn default() -> Self {
        Self {
            q12: "dqq".into(),
            noise: "two_d".into(),
            friction: "gamma".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// Directory the command writes its files into.
    pub path: String,
    pub format: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            path: "out".into(),
            format: "csv".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub axes: Vec<SweepAxis>,
    /// Overwrite Dpq with -gamma*Dqq in every grid cell.
    pub enforce_equal_q: bool,
    /// Also run the simulator and fit a decay rate per cell.
    pub fit_rates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SgdSection {
    /// Learning rate; if absent the analogy map supplies it.
    pub s: Option<f64>,
    pub hessian_scale: Option<f64>,
    pub d: Option<usize>,
    pub x0: f64,
}

impl Default for SgdSection {
    fn default() -> Self {
        Self {
            s: None,
            hessian_scale: None,
            d: None,
            x0: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub sim: SimSection,
    pub conventions: ConventionsSection,
    pub output: OutputSection,
    pub sweep: SweepSection,
    pub sgd: SgdSection,
}

/// Dotted JSON paths accepted as CLI override flags.
pub const OVERRIDE_FLAGS: &[&str] = &[
    "model.d",
    "model.omega0",
    "model.gamma",
    "model.dqq",
    "model.dpq",
    "model.dpp",
    "model.allow_indefinite_diffusion",
    "sim.dt",
    "sim.t_final",
    "sim.n_particles",
    "sim.seed",
    "sim.record_every",
    "sim.metric",
    "sim.initial_mean_x",
    "sim.initial_mean_p",
    "sim.initial_cov_scale",
    "sim.fit_t_lo",
    "sim.fit_t_hi",
    "sim.mixing_epsilon",
    "conventions.q12",
    "conventions.noise",
    "conventions.friction",
    "output.path",
    "output.format",
    "sweep.enforce_equal_q",
    "sweep.fit_rates",
    "sgd.s",
    "sgd.hessian_scale",
    "sgd.d",
    "sgd.x0",
];

fn set_path(root: &mut serde_json::Value, path: &str, value: serde_json::Value) {
    let mut node = root;
    let parts: Vec<&str> = path.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        if !node.is_object() {
            *node = serde_json::Value::Object(Default::default());
        }
        node = node
            .as_object_mut()
            .unwrap()
            .entry(part.to_string())
            .or_insert(serde_json::Value::Object(Default::default()));
    }
    if !node.is_object() {
        *node = serde_json::Value::Object(Default::default());
    }
    node.as_object_mut()
        .unwrap()
        .insert(parts[parts.len() - 1].to_string(), value);
}

fn parse_override(raw: &str) -> serde_json::Value {
    // numbers and booleans pass through as JSON scalars, the rest as strings
    serde_json::from_str(raw).unwrap_or_else(|_| serde_json::Value::String(raw.to_string()))
}

/// Loads the optional JSON file and applies `(path, value)` overrides.
pub fn load_config(
    file: Option<&std::path::Path>,
    overrides: &[(String, String)],
) -> Result<RunConfig, CliError> {
    let mut tree: serde_json::Value = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("config is not valid JSON: {e}")))?
        }
        None => serde_json::json!({}),
    };
    for (path, raw) in overrides {
        set_path(&mut tree, path, parse_override(raw));
    }
    serde_json::from_value(tree).map_err(|e| CliError::config(format!("invalid config: {e}")))
}

impl RunConfig {
    pub fn model_params(&self) -> Result<ModelParams, CliError> {
        let m = &self.model;
        let diffusion = if m.allow_indefinite_diffusion {
            DiffusionSpec::new_indefinite(m.dqq, m.dpq, m.dpp)
        } else {
            DiffusionSpec::new(m.dqq, m.dpq, m.dpp)
        }
        .map_err(|e| CliError::config(e.to_string()))?;
        ModelParams::new(m.d, m.omega0, m.gamma, diffusion, self.q12_convention()?)
            .map_err(|e| CliError::config(e.to_string()))
    }

    pub fn q12_convention(&self) -> Result<Q12Convention, CliError> {
        match self.conventions.q12.as_str() {
            "dqq" => Ok(Q12Convention::Dqq),
            "dpq" => Ok(Q12Convention::Dpq),
            other => Err(CliError::config(format!(
                "unknown q12 convention `{other}`"
            ))),
        }
    }

    pub fn sde_conventions(&self) -> Result<SdeConventions, CliError> {
        let noise = match self.conventions.noise.as_str() {
            "two_d" => NoiseConvention::TwoD,
            "one_d" => NoiseConvention::OneD,
            other => {
                return Err(CliError::config(format!(
                    "unknown noise convention `{other}`"
                )))
            }
        };
        let friction = match self.conventions.friction.as_str() {
            "gamma" => FrictionConvention::Gamma,
            "two_gamma" => FrictionConvention::TwoGamma,
            other => {
                return Err(CliError::config(format!(
                    "unknown friction convention `{other}`"
                )))
            }
        };
        Ok(SdeConventions { noise, friction })
    }

    pub fn metric(&self) -> Result<Metric, CliError> {
        match self.sim.metric.as_str() {
            "kl" => Ok(Metric::Kl),
            "l2" => Ok(Metric::L2),
            other => Err(CliError::config(format!("unknown metric `{other}`"))),
        }
    }

    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        SimConfig::new(
            self.sim.dt,
            self.sim.t_final,
            self.sim.n_particles,
            self.sim.seed,
            self.sim.record_every,
            self.metric()?,
        )
        .map_err(|e| CliError::config(e.to_string()))
    }

    /// Fit window; defaults to the full run.
    pub fn fit_window(&self) -> (f64, f64) {
        (
            self.sim.fit_t_lo.unwrap_or(0.0),
            self.sim.fit_t_hi.unwrap_or(self.sim.t_final),
        )
    }

    /// SGD spec: explicit section values, falling back to the analogy map.
    pub fn sgd_spec(&self) -> Result<SgdSpec, CliError> {
        let params = self.model_params()?;
        let mapped = wfp_core::dynamics::sgd_analogy_map(&params)
            .map_err(|e| CliError::config(e.to_string()))?;
        SgdSpec::new(
            self.sgd.s.unwrap_or(mapped.sgd.s),
            self.sgd.hessian_scale.unwrap_or(mapped.sgd.hessian_scale),
            self.sgd.d.unwrap_or(mapped.sgd.d),
        )
        .map_err(|e| CliError::config(e.to_string()))
    }
}
