//! The six subcommands: rates, steady-state, simulate, sgd, compare, sweep.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use wfp_core::dynamics::{
    fit_decay_rate, sgd_analogy_map, sgd_sde_simulate, sgd_stationary, simulate_decay, DecayCurve,
    RateFit, SgdSpec,
};
use wfp_core::spectral::{
    dense_spectrum_oracle, eigenvalues_d1, hessian_matrix, kappa_caldeira_leggett, kappa_equal_q,
    kappa_perturbative, kappa_rescaled_general, kappa_unit_frequency, mixing_time, SpectralResult,
};
use wfp_core::steady::{
    exponent_matrix_lyapunov, exponent_matrix_paper, lyapunov_residual, quadratic_form_a,
    reconcile_steady_states, steady_covariance_lyapunov, GaussianState,
};
use wfp_core::{check_lindblad, q_coefficients, ModelParams};

use crate::config::RunConfig;
use crate::output::{curve_to_csv, fmt_f64, fmt_opt, matrix_to_json, write_file, Table};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

const CASE_LABELS: [&str; 6] = [
    "GENERAL_D1",
    "UNIT_FREQUENCY",
    "CALDEIRA_LEGGETT",
    "EQUAL_Q",
    "RESCALED_GENERAL",
    "PERTURBATIVE",
];

fn evaluate_cases(params: &ModelParams) -> Vec<(&'static str, wfp_core::Result<SpectralResult>)> {
    vec![
        ("GENERAL_D1", eigenvalues_d1(params)),
        ("UNIT_FREQUENCY", kappa_unit_frequency(params)),
        ("CALDEIRA_LEGGETT", kappa_caldeira_leggett(params)),
        ("EQUAL_Q", kappa_equal_q(params)),
        ("RESCALED_GENERAL", kappa_rescaled_general(params)),
        ("PERTURBATIVE", kappa_perturbative(params)),
    ]
}

/// Sorted dense Hessian spectrum, when computable at the configured d.
fn dense_audit(params: &ModelParams) -> Option<Vec<f64>> {
    hessian_matrix(params)
        .ok()
        .and_then(|h| dense_spectrum_oracle(&h).ok())
}

struct RatesRow {
    case: &'static str,
    result: Option<SpectralResult>,
    skip_reason: String,
    dense_min: Option<f64>,
    dense_kappa_diff: Option<f64>,
}

fn rates_rows(params: &ModelParams) -> Vec<RatesRow> {
    let dense = dense_audit(params);
    let dense_min = dense.as_ref().and_then(|d| d.first().copied());
    evaluate_cases(params)
        .into_iter()
        .map(|(case, outcome)| match outcome {
            Ok(result) => {
                let diff = if result.spectrum_preserving {
                    dense_min.map(|m| (result.kappa - m).abs())
                } else {
                    None
                };
                RatesRow {
                    case,
                    result: Some(result),
                    skip_reason: String::new(),
                    dense_min,
                    dense_kappa_diff: diff,
                }
            }
            Err(e) => RatesRow {
                case,
                result: None,
                skip_reason: e.to_string(),
                dense_min,
                dense_kappa_diff: None,
            },
        })
        .collect()
}

fn rates_table(config: &RunConfig, params: &ModelParams) -> Table {
    let lindblad = check_lindblad(params);
    let mut table = Table::new(vec![
        "case",
        "status",
        "skip_reason",
        "lambda_plus",
        "lambda_minus",
        "kappa",
        "spectrum_preserving",
        "approximate",
        "lindblad_margin",
        "dense_min",
        "dense_kappa_abs_diff",
        "q12_convention",
        "noise_convention",
        "friction_convention",
    ]);
    for row in rates_rows(params) {
        match row.result {
            Some(r) => table.push_row(vec![
                row.case.into(),
                "ok".into(),
                String::new(),
                fmt_f64(r.lambda_plus),
                fmt_f64(r.lambda_minus),
                fmt_f64(r.kappa),
                r.spectrum_preserving.to_string(),
                r.approximate.to_string(),
                fmt_f64(r.lindblad_margin.unwrap_or(lindblad.margin)),
                fmt_opt(row.dense_min),
                fmt_opt(row.dense_kappa_diff),
                config.conventions.q12.clone(),
                config.conventions.noise.clone(),
                config.conventions.friction.clone(),
            ]),
            None => table.push_row(vec![
                row.case.into(),
                "skipped".into(),
                row.skip_reason.replace(',', ";"),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                fmt_f64(lindblad.margin),
                fmt_opt(row.dense_min),
                String::new(),
                config.conventions.q12.clone(),
                config.conventions.noise.clone(),
                config.conventions.friction.clone(),
            ]),
        }
    }
    table
}

pub fn cmd_rates(config: &RunConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let params = config.model_params()?;
    let table = rates_table(config, &params);
    let dir = Path::new(&config.output.path);
    let path = match config.output.format.as_str() {
        "json" => write_file(dir, "rates.json", &table.to_json())?,
        "csv" => write_file(dir, "rates.csv", &table.to_csv())?,
        other => return Err(CliError::config(format!("unknown format `{other}`"))),
    };
    Ok(vec![path])
}

#[derive(Serialize)]
struct SteadyReport {
    schema_version: u32,
    command: &'static str,
    config: RunConfig,
    q_coefficients: serde_json::Value,
    lindblad: serde_json::Value,
    exponent_paper: serde_json::Value,
    lyapunov: serde_json::Value,
    reconciliation: serde_json::Value,
}

pub fn cmd_steady_state(config: &RunConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let params = config.model_params()?;
    let conv = config.sde_conventions()?;

    let q_json = match q_coefficients(&params) {
        Ok(q) => serde_json::json!({"q11": q.q11, "q12": q.q12, "q22": q.q22, "q": q.q}),
        Err(e) => serde_json::json!({"error": e.to_string()}),
    };
    let lindblad = check_lindblad(&params);
    let lindblad_json =
        serde_json::json!({"satisfied": lindblad.satisfied, "margin": lindblad.margin});
    let exponent_json = match exponent_matrix_paper(&params) {
        Ok(form) => {
            // sanity spot check of the quadratic form against its matrix
            let d = params.d();
            let z = nalgebra::DVector::from_fn(2 * d, |i, _| if i < d { 1.0 } else { 0.5 });
            let a_of_z = quadratic_form_a(&params, &z).ok();
            serde_json::json!({
                "matrix": matrix_to_json(&form.s),
                "a_at_unit_probe": a_of_z,
            })
        }
        Err(e) => serde_json::json!({"error": e.to_string()}),
    };
    let lyapunov_json = match steady_covariance_lyapunov(&params, conv) {
        Ok(state) => {
            let (cxx, cxp, cpp) = state.block_form().expect("lyapunov state is block form");
            let exponent = exponent_matrix_lyapunov(&params, conv)
                .map(|form| matrix_to_json(&form.s))
                .unwrap_or(serde_json::Value::Null);
            serde_json::json!({
                "cxx": cxx,
                "cxp": cxp,
                "cpp": cpp,
                "residual": lyapunov_residual(&params, conv, &state),
                "exponent_matrix": exponent,
            })
        }
        Err(e) => serde_json::json!({"error": e.to_string()}),
    };
    let reconciliation_json = match reconcile_steady_states(&params, conv) {
        Ok(report) => serde_json::json!({
            "sigma_a": matrix_to_json(&report.sigma_a),
            "sigma_l": matrix_to_json(&report.sigma_l),
            "ratio": matrix_to_json(&report.ratio),
            "scalar_mean": report.scalar_mean,
            "max_deviation_from_scalar": report.max_deviation_from_scalar,
        }),
        Err(e) => serde_json::json!({"error": e.to_string()}),
    };

    let report = SteadyReport {
        schema_version: SCHEMA_VERSION,
        command: "steady-state",
        config: config.clone(),
        q_coefficients: q_json,
        lindblad: lindblad_json,
        exponent_paper: exponent_json,
        lyapunov: lyapunov_json,
        reconciliation: reconciliation_json,
    };
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(&report).expect("report serialises")
    );
    Ok(vec![write_file(
        Path::new(&config.output.path),
        "steady.json",
        &text,
    )?])
}

/// Initial Gaussian for the quantum simulation: the configured mean,
/// covariance = initial_cov_scale * Sigma_inf.
fn initial_state(config: &RunConfig, params: &ModelParams) -> Result<GaussianState, CliError> {
    let conv = config.sde_conventions()?;
    let steady = steady_covariance_lyapunov(params, conv).map_err(CliError::numerical)?;
    let (cxx, cxp, cpp) = steady.block_form().expect("lyapunov state is block form");
    let d = params.d();
    let mean = nalgebra::DVector::from_fn(2 * d, |i, _| {
        if i < d {
            config.sim.initial_mean_x
        } else {
            config.sim.initial_mean_p
        }
    });
    let s = config.sim.initial_cov_scale;
    GaussianState::from_block(d, mean, s * cxx, s * cxp, s * cpp).map_err(CliError::numerical)
}

#[derive(Serialize, Deserialize)]
pub struct FitBlock {
    pub rate: f64,
    pub stderr: f64,
    pub n_samples: usize,
    /// Whether the fitted rate is statistically indistinguishable from zero.
    pub flat: bool,
}

impl From<RateFit> for FitBlock {
    fn from(fit: RateFit) -> Self {
        Self {
            rate: fit.rate,
            stderr: fit.stderr,
            n_samples: fit.n_samples,
            flat: fit.rate.abs() < 3.0 * fit.stderr,
        }
    }
}

fn fit_curve(curve: &DecayCurve, window: (f64, f64)) -> (Option<FitBlock>, Option<String>) {
    match fit_decay_rate(curve, window) {
        Ok(fit) => (Some(fit.into()), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

#[derive(Serialize, Deserialize)]
pub struct SimulateSummary {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub analytic_kappa: Option<f64>,
    pub dense_kappa: Option<f64>,
    pub fitted: Option<FitBlock>,
    pub fit_error: Option<String>,
    pub mixing: Option<serde_json::Value>,
    pub curve_file: String,
}

pub fn cmd_simulate(config: &RunConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let params = config.model_params()?;
    let conv = config.sde_conventions()?;
    let sim = config.sim_config()?;
    let initial = initial_state(config, &params)?;
    let (curve, _final_ens) =
        simulate_decay(&params, conv, &sim, &initial).map_err(CliError::numerical)?;

    let (fitted, fit_error) = fit_curve(&curve, config.fit_window());
    let analytic_kappa = eigenvalues_d1(&params).ok().map(|r| r.kappa);
    let dense_kappa = dense_audit(&params).and_then(|d| d.first().copied());
    let mixing = analytic_kappa.and_then(|kappa| {
        let prefactor = curve
            .samples
            .first()
            .map(|s| s.distance)
            .filter(|&c| c > 0.0)?;
        mixing_time(kappa, prefactor, config.sim.mixing_epsilon)
            .ok()
            .map(|m| {
                serde_json::json!({
                    "kappa": m.kappa,
                    "prefactor_c": m.prefactor_c,
                    "epsilon": m.epsilon,
                    "t_mix": m.t_mix,
                })
            })
    });

    let dir = Path::new(&config.output.path);
    let curve_path = write_file(dir, "decay.csv", &curve_to_csv(&curve))?;
    let summary = SimulateSummary {
        schema_version: SCHEMA_VERSION,
        command: "simulate".into(),
        config: config.clone(),
        analytic_kappa,
        dense_kappa,
        fitted,
        fit_error,
        mixing,
        curve_file: "decay.csv".into(),
    };
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(&summary).expect("summary serialises")
    );
    let summary_path = write_file(dir, "summary.json", &text)?;
    Ok(vec![curve_path, summary_path])
}

#[derive(Serialize, Deserialize)]
pub struct SgdSummary {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub spec: serde_json::Value,
    pub stationary_variance: f64,
    pub empirical_variance: Option<f64>,
    pub fitted: Option<FitBlock>,
    pub fit_error: Option<String>,
    pub curve_file: String,
}

fn run_sgd(config: &RunConfig, spec: &SgdSpec) -> Result<(DecayCurve, Option<f64>), CliError> {
    let sim = config.sim_config()?;
    let initial = GaussianState::point_mass(nalgebra::DVector::from_element(spec.d, config.sgd.x0));
    let (curve, ens) = sgd_sde_simulate(spec, &sim, &initial).map_err(CliError::numerical)?;
    let empirical_variance = ens
        .empirical_gaussian()
        .ok()
        .map(|g| g.cov().diagonal().sum() / spec.d as f64);
    Ok((curve, empirical_variance))
}

pub fn cmd_sgd(config: &RunConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let spec = config.sgd_spec()?;
    let (curve, empirical_variance) = run_sgd(config, &spec)?;
    let (fitted, fit_error) = fit_curve(&curve, config.fit_window());
    let stationary = sgd_stationary(&spec);
    let dir = Path::new(&config.output.path);
    let curve_path = write_file(dir, "sgd_decay.csv", &curve_to_csv(&curve))?;
    let summary = SgdSummary {
        schema_version: SCHEMA_VERSION,
        command: "sgd".into(),
        config: config.clone(),
        spec: serde_json::json!({"s": spec.s, "hessian_scale": spec.hessian_scale, "d": spec.d}),
        stationary_variance: if spec.d > 0 {
            stationary.cov()[(0, 0)]
        } else {
            0.0
        },
        empirical_variance,
        fitted,
        fit_error,
        curve_file: "sgd_decay.csv".into(),
    };
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(&summary).expect("summary serialises")
    );
    let summary_path = write_file(dir, "sgd_summary.json", &text)?;
    Ok(vec![curve_path, summary_path])
}

#[derive(Serialize)]
struct CompareReport {
    schema_version: u32,
    command: &'static str,
    config: RunConfig,
    dominance: f64,
    regime: String,
    learning_rate_s: f64,
    objective_coefficient: f64,
    quantum: serde_json::Value,
    classical: serde_json::Value,
}

/// Regime label from the friction-dominance ratio gamma/omega0.
fn regime_label(dominance: f64) -> &'static str {
    if dominance >= 10.0 {
        "friction-dominated regime"
    } else if dominance <= 1.0 {
        "Hamiltonian-dominated regime; analogy weak"
    } else {
        "intermediate regime"
    }
}

pub fn cmd_compare(config: &RunConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let params = config.model_params()?;
    let conv = config.sde_conventions()?;
    let map = sgd_analogy_map(&params).map_err(CliError::numerical)?;
    let dir = Path::new(&config.output.path);
    let mut written = Vec::new();

    // quantum side
    let sim = config.sim_config()?;
    let initial = initial_state(config, &params)?;
    let (quantum_curve, _) =
        simulate_decay(&params, conv, &sim, &initial).map_err(CliError::numerical)?;
    written.push(write_file(
        dir,
        "compare_quantum.csv",
        &curve_to_csv(&quantum_curve),
    )?);
    let (quantum_fit, quantum_fit_err) = fit_curve(&quantum_curve, config.fit_window());
    let quantum_json = serde_json::json!({
        "fitted": quantum_fit,
        "fit_error": quantum_fit_err,
        "analytic_kappa": eigenvalues_d1(&params).ok().map(|r| r.kappa),
    });

    // classical side, skipped when the analog learning rate degenerates
    let classical_json = if map.degenerate {
        serde_json::json!({"skipped": "Dpp = 0 maps to learning rate s = 0 (degenerate)"})
    } else {
        let (classical_curve, empirical_variance) = run_sgd(config, &map.sgd)?;
        written.push(write_file(
            dir,
            "compare_classical.csv",
            &curve_to_csv(&classical_curve),
        )?);
        let (classical_fit, classical_fit_err) = fit_curve(&classical_curve, config.fit_window());
        serde_json::json!({
            "fitted": classical_fit,
            "fit_error": classical_fit_err,
            "stationary_variance": sgd_stationary(&map.sgd).cov()[(0, 0)],
            "empirical_variance": empirical_variance,
        })
    };

    let report = CompareReport {
        schema_version: SCHEMA_VERSION,
        command: "compare",
        config: config.clone(),
        dominance: map.dominance,
        regime: regime_label(map.dominance).to_string(),
        learning_rate_s: map.sgd.s,
        objective_coefficient: map.objective_coefficient,
        quantum: quantum_json,
        classical: classical_json,
    };
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(&report).expect("report serialises")
    );
    written.push(write_file(dir, "compare.json", &text)?);
    Ok(written)
}

const SWEEPABLE: [&str; 6] = [
    "model.d",
    "model.omega0",
    "model.gamma",
    "model.dqq",
    "model.dpq",
    "model.dpp",
];

fn apply_axis(
    model: &mut crate::config::ModelSection,
    param: &str,
    value: f64,
) -> Result<(), String> {
    match param {
        "model.d" => {
            let rounded = value.round();
            if rounded < 1.0 || (value - rounded).abs() > 1e-9 {
                return Err(format!("model.d must be a positive integer, got {value}"));
            }
            model.d = rounded as usize;
        }
        "model.omega0" => model.omega0 = value,
        "model.gamma" => model.gamma = value,
        "model.dqq" => model.dqq = value,
        "model.dpq" => model.dpq = value,
        "model.dpp" => model.dpp = value,
        other => return Err(format!("unknown sweep parameter `{other}`")),
    }
    Ok(())
}

fn sweep_cell_rows(
    config: &RunConfig,
    cell_index: usize,
    assignment: &[(String, f64)],
) -> Vec<Vec<String>> {
    let mut cell_config = config.clone();
    let mut cell_error: Option<String> = None;
    for (param, value) in assignment {
        if let Err(e) = apply_axis(&mut cell_config.model, param, *value) {
            cell_error = Some(e);
        }
    }
    if cell_error.is_none() && config.sweep.enforce_equal_q {
        cell_config.model.dpq = -cell_config.model.gamma * cell_config.model.dqq;
    }

    let m = &cell_config.model;
    let prefix = |case: &str, status: &str, detail: &str| -> Vec<String> {
        vec![
            cell_index.to_string(),
            m.d.to_string(),
            fmt_f64(m.omega0),
            fmt_f64(m.gamma),
            fmt_f64(m.dqq),
            fmt_f64(m.dpq),
            fmt_f64(m.dpp),
            case.into(),
            status.into(),
            detail.replace(',', ";"),
        ]
    };
    let blank_tail = |n: usize| vec![String::new(); n];

    let params = match cell_error.map(Err).unwrap_or_else(|| {
        cell_config
            .model_params()
            .map_err(|e| e.message().to_string())
    }) {
        Ok(p) => p,
        Err(e) => {
            // one error row per case keeps the long format rectangular
            return CASE_LABELS
                .iter()
                .map(|case| {
                    let mut row = prefix(case, "error", &e);
                    row.extend(blank_tail(7));
                    row.push(cell_config.conventions.q12.clone());
                    row.push(cell_config.conventions.noise.clone());
                    row.push(cell_config.conventions.friction.clone());
                    row.extend(blank_tail(2));
                    row
                })
                .collect();
        }
    };

    let lindblad = check_lindblad(&params);
    let fitted: Option<RateFit> = if cell_config.sweep.fit_rates {
        (|| {
            let conv = cell_config.sde_conventions().ok()?;
            let sim = cell_config.sim_config().ok()?;
            let initial = initial_state(&cell_config, &params).ok()?;
            let (curve, _) = simulate_decay(&params, conv, &sim, &initial).ok()?;
            fit_decay_rate(&curve, cell_config.fit_window()).ok()
        })()
    } else {
        None
    };

    rates_rows(&params)
        .into_iter()
        .map(|row| {
            let mut cells = match row.result {
                Some(r) => {
                    let mut cells = prefix(row.case, "ok", "");
                    cells.extend(vec![
                        fmt_f64(r.lambda_plus),
                        fmt_f64(r.lambda_minus),
                        fmt_f64(r.kappa),
                        r.spectrum_preserving.to_string(),
                        fmt_f64(r.lindblad_margin.unwrap_or(lindblad.margin)),
                        fmt_opt(row.dense_min),
                        fmt_opt(row.dense_kappa_diff),
                    ]);
                    cells
                }
                None => {
                    let mut cells = prefix(row.case, "skipped", &row.skip_reason);
                    cells.extend(blank_tail(4));
                    cells.push(fmt_f64(lindblad.margin));
                    cells.push(fmt_opt(row.dense_min));
                    cells.push(String::new());
                    cells
                }
            };
            cells.push(cell_config.conventions.q12.clone());
            cells.push(cell_config.conventions.noise.clone());
            cells.push(cell_config.conventions.friction.clone());
            cells.push(fitted.map(|f| fmt_f64(f.rate)).unwrap_or_default());
            cells.push(fitted.map(|f| fmt_f64(f.stderr)).unwrap_or_default());
            cells
        })
        .collect()
}

pub fn cmd_sweep(config: &RunConfig) -> Result<Vec<std::path::PathBuf>, CliError> {
    let axes = &config.sweep.axes;
    if axes.is_empty() {
        return Err(CliError::config("sweep requires at least one axis".into()));
    }
    for axis in axes {
        if axis.values.is_empty() {
            return Err(CliError::config(format!(
                "sweep axis `{}` has no values",
                axis.param
            )));
        }
        if !SWEEPABLE.contains(&axis.param.as_str()) {
            return Err(CliError::config(format!(
                "unknown sweep parameter `{}` (expected one of {})",
                axis.param,
                SWEEPABLE.join(", ")
            )));
        }
    }

    // cartesian product, last axis fastest; row order is the grid order
    let mut assignments: Vec<Vec<(String, f64)>> = Vec::new();
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    for mut index in 0..total {
        let mut assignment = Vec::with_capacity(axes.len());
        for axis in axes.iter().rev() {
            let k = index % axis.values.len();
            index /= axis.values.len();
            assignment.push((axis.param.clone(), axis.values[k]));
        }
        assignment.reverse();
        assignments.push(assignment);
    }

    let rows: Vec<Vec<Vec<String>>> = assignments
        .par_iter()
        .enumerate()
        .map(|(i, assignment)| sweep_cell_rows(config, i, assignment))
        .collect();

    let mut table = Table::new(vec![
        "cell",
        "d",
        "omega0",
        "gamma",
        "dqq",
        "dpq",
        "dpp",
        "case",
        "status",
        "detail",
        "lambda_plus",
        "lambda_minus",
        "kappa",
        "spectrum_preserving",
        "lindblad_margin",
        "dense_min",
        "dense_kappa_abs_diff",
        "q12_convention",
        "noise_convention",
        "friction_convention",
        "fitted_rate",
        "fitted_stderr",
    ]);
    for cell_rows in rows {
        for row in cell_rows {
            table.push_row(row);
        }
    }
    let path = write_file(Path::new(&config.output.path), "sweep.csv", &table.to_csv())?;
    Ok(vec![path])
}
