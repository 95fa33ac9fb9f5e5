//! Time evolution: the quantum Langevin particle ensemble, an exact Gaussian
//! moment propagator used as its deterministic oracle, decay-rate fitting,
//! and the classical SGD diffusion limit.
//!
//! The dynamics is linear, so Gaussian moments are closed: the Monte-Carlo
//! ensemble is always checkable against [`exact_moment_propagation`], and
//! decay is measured between moment-fitted Gaussians (exact up to sampling
//! error) instead of density estimates.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ModelParams, SdeConventions};
use crate::rng::{CounterRng, STREAM_SGD, STREAM_STEP};
use crate::steady::{
    gaussian_kl, gaussian_l2_distance, sample_steady, steady_covariance_lyapunov, GaussianState,
};

/// Distance used for decay curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    /// Gaussian relative entropy (the primary choice).
    #[default]
    Kl,
    /// L2 distance between the densities.
    L2,
}

impl Metric {
    pub fn label(&self) -> &'static str {
        match self {
            Metric::Kl => "kl",
            Metric::L2 => "l2",
        }
    }
}

fn metric_distance(
    metric: Metric,
    fitted: &GaussianState,
    reference: &GaussianState,
) -> Result<f64> {
    match metric {
        Metric::Kl => gaussian_kl(fitted, reference),
        Metric::L2 => gaussian_l2_distance(fitted, reference),
    }
}

/// Euler-Maruyama schedule and recording plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_final: f64,
    pub n_particles: usize,
    pub seed: u64,
    /// Steps between recorded curve samples.
    pub record_every: usize,
    pub metric: Metric,
}

impl SimConfig {
    pub fn new(
        dt: f64,
        t_final: f64,
        n_particles: usize,
        seed: u64,
        record_every: usize,
        metric: Metric,
    ) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::NonPositiveInput("dt"));
        }
        if !(t_final > 0.0) {
            return Err(Error::NonPositiveInput("t_final"));
        }
        if dt > t_final {
            return Err(Error::InvalidParams(format!(
                "dt = {dt} exceeds t_final = {t_final}"
            )));
        }
        if n_particles < 1 {
            return Err(Error::InvalidParams("n_particles must be >= 1".into()));
        }
        if record_every < 1 {
            return Err(Error::InvalidParams("record_every must be >= 1".into()));
        }
        Ok(Self {
            dt,
            t_final,
            n_particles,
            seed,
            record_every,
            metric,
        })
    }

    pub fn n_steps(&self) -> usize {
        ((self.t_final / self.dt).round() as usize).max(1)
    }
}

/// A phase-space particle ensemble stored row-major (`n` rows of length
/// `dim`; `dim = 2d` for the quantum chain, `d` for the classical one).
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    data: Vec<f64>,
    n: usize,
    dim: usize,
    time: f64,
    seed: u64,
    step_index: u64,
}

impl Ensemble {
    pub(crate) fn from_raw(data: Vec<f64>, n: usize, dim: usize, seed: u64) -> Self {
        debug_assert_eq!(data.len(), n * dim);
        Self {
            data,
            n,
            dim,
            time: 0.0,
            seed,
            step_index: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Sample mean vector.
    pub fn mean(&self) -> DVector<f64> {
        let mut mean = DVector::zeros(self.dim);
        for i in 0..self.n {
            let row = self.row(i);
            for k in 0..self.dim {
                mean[k] += row[k];
            }
        }
        mean / self.n as f64
    }

    /// Gaussian fitted to the sample moments (covariance with the n-1
    /// denominator). Accumulation order is fixed, so the fit is bitwise
    /// reproducible regardless of how the update ran.
    pub fn empirical_gaussian(&self) -> Result<GaussianState> {
        if self.n < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: self.n,
            });
        }
        let mean = self.mean();
        let mut cov = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.n {
            let row = self.row(i);
            for r in 0..self.dim {
                let dr = row[r] - mean[r];
                for c in r..self.dim {
                    cov[(r, c)] += dr * (row[c] - mean[c]);
                }
            }
        }
        let denom = (self.n - 1) as f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                let v = cov[(r, c)] / denom;
                cov[(r, c)] = v;
                cov[(c, r)] = v;
            }
        }
        GaussianState::new(mean, cov)
    }
}

/// One recorded point of a decay curve: the distance plus the block moments
/// it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub distance: f64,
    pub mean_norm: f64,
    pub cxx: f64,
    pub cxp: f64,
    pub cpp: f64,
}

/// What produced a decay curve.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSource {
    Wfp(ModelParams),
    Sgd(SgdSpec),
}

/// Time series of distance-to-steady-state values.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub samples: Vec<CurveSample>,
    pub metric: Metric,
    pub source: CurveSource,
}

/// Least-squares decay rate of `ln(distance)` over a time window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub rate: f64,
    pub stderr: f64,
    pub n_samples: usize,
}

/// Quadratic-objective SGD instance: `f(x) = hessian_scale * |x|^2 / 2`
/// descended with learning rate `s` (noise covariance `s*I` in the SDE
/// limit). `s = 0` is the degenerate pure-gradient-flow limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgdSpec {
    pub s: f64,
    pub hessian_scale: f64,
    pub d: usize,
}

impl SgdSpec {
    pub fn new(s: f64, hessian_scale: f64, d: usize) -> Result<Self> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::InvalidParams(format!(
                "learning rate s = {s} must be >= 0"
            )));
        }
        if !(hessian_scale > 0.0) {
            return Err(Error::NonPositiveInput("hessian_scale"));
        }
        if d < 1 {
            return Err(Error::InvalidParams("d must be >= 1".into()));
        }
        Ok(Self {
            s,
            hessian_scale,
            d,
        })
    }

    /// Zero learning rate: the stationary law degenerates to a point mass.
    pub fn is_degenerate(&self) -> bool {
        self.s == 0.0
    }
}

/// Quantum-vs-classical map read off the momentum block: `D = s I / 2`
/// gives `s = 2 Dpp`, and the friction gradient matches the descent of
/// `F(p) = gamma |p|^2` (integration constant dropped; it has no gradient).
#[derive(Debug, Clone, PartialEq)]
pub struct AnalogyMap {
    pub sgd: SgdSpec,
    /// `gamma / omega0`: how strongly friction dominates the Hamiltonian
    /// transport. The analogy is only meaningful when this is large.
    pub dominance: f64,
    /// Coefficient of the effective objective `F(p) = coeff * |p|^2`.
    pub objective_coefficient: f64,
    pub degenerate: bool,
}

/// Drift field `(p, -omega0^2 x - gamma_eff p)` at one phase-space point.
pub fn drift(params: &ModelParams, conv: SdeConventions, z: &DVector<f64>) -> Result<DVector<f64>> {
    if z.len() != params.phase_dim() {
        return Err(Error::DimensionMismatch {
            expected: params.phase_dim(),
            got: z.len(),
        });
    }
    let d = params.d();
    let omega_sq = params.omega0() * params.omega0();
    let gamma_eff = conv.gamma_eff(params.gamma());
    let mut out = DVector::zeros(2 * d);
    for j in 0..d {
        out[j] = z[j + d];
        out[j + d] = -omega_sq * z[j] - gamma_eff * z[j + d];
    }
    Ok(out)
}

/// Lower-triangular factor of the per-pair noise covariance `scale * D * dt`.
fn noise_factor(params: &ModelParams, conv: SdeConventions, dt: f64) -> (f64, f64, f64) {
    let diff = params.diffusion();
    let scale = conv.noise_scale() * dt;
    let nqq = scale * diff.dqq();
    let npq = scale * diff.dpq();
    let npp = scale * diff.dpp();
    let l11 = nqq.sqrt();
    let l21 = if l11 > 0.0 { npq / l11 } else { 0.0 };
    let l22 = (npp - l21 * l21).max(0.0).sqrt();
    (l11, l21, l22)
}

/// One Euler-Maruyama step of the whole ensemble:
/// `z <- z + drift(z) dt + xi`, `xi ~ N(0, 2 D dt)` per pair.
///
/// Increments are keyed by `(seed, particle, step)`, so the update is
/// embarrassingly parallel and its result independent of the thread count.
pub fn euler_maruyama_step(
    params: &ModelParams,
    conv: SdeConventions,
    ens: &mut Ensemble,
    dt: f64,
) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::NonPositiveInput("dt"));
    }
    if ens.dim != params.phase_dim() {
        return Err(Error::DimensionMismatch {
            expected: params.phase_dim(),
            got: ens.dim,
        });
    }
    if !params.diffusion().is_psd() {
        return Err(Error::NotPsd {
            eigenvalue: params.diffusion().block_min_eigenvalue(),
        });
    }
    let d = params.d();
    let omega_sq = params.omega0() * params.omega0();
    let gamma_eff = conv.gamma_eff(params.gamma());
    let (l11, l21, l22) = noise_factor(params, conv, dt);
    let (seed, step) = (ens.seed, ens.step_index);

    ens.data
        .par_chunks_mut(2 * d)
        .enumerate()
        .for_each(|(i, row)| {
            let mut rng = CounterRng::from_key(seed, STREAM_STEP, i as u64, step);
            for j in 0..d {
                let (z1, z2) = rng.next_normal_pair();
                let x = row[j];
                let p = row[j + d];
                row[j] = x + p * dt + l11 * z1;
                row[j + d] = p + (-omega_sq * x - gamma_eff * p) * dt + l21 * z1 + l22 * z2;
            }
        });
    ens.step_index += 1;
    ens.time += dt;
    Ok(())
}

/// Pair-averaged block moments when the state lives in phase space; for
/// position-only chains `cxx` is the average variance and the momentum
/// columns stay zero.
fn block_moments(fitted: &GaussianState, phase_space: bool) -> (f64, f64, f64, f64) {
    let dim = fitted.dim();
    let mean_norm = fitted.mean().norm();
    if phase_space && dim % 2 == 0 && dim >= 2 {
        let d = dim / 2;
        let mut cxx = 0.0;
        let mut cxp = 0.0;
        let mut cpp = 0.0;
        for j in 0..d {
            cxx += fitted.cov()[(j, j)];
            cxp += fitted.cov()[(j, j + d)];
            cpp += fitted.cov()[(j + d, j + d)];
        }
        (mean_norm, cxx / d as f64, cxp / d as f64, cpp / d as f64)
    } else {
        let var = fitted.cov().diagonal().sum() / dim as f64;
        (mean_norm, var, 0.0, 0.0)
    }
}

fn record_sample(
    curve: &mut Vec<CurveSample>,
    metric: Metric,
    t: f64,
    ens: &Ensemble,
    reference: &GaussianState,
    phase_space: bool,
) -> Result<()> {
    let fitted = ens.empirical_gaussian()?;
    let (mean_norm, cxx, cxp, cpp) = block_moments(&fitted, phase_space);
    match metric_distance(metric, &fitted, reference) {
        Ok(distance) => {
            curve.push(CurveSample {
                t,
                distance,
                mean_norm,
                cxx,
                cxp,
                cpp,
            });
            Ok(())
        }
        // a degenerate fit (e.g. a point-mass start at t = 0) has no
        // measurable distance yet; skip the point rather than fail the run
        Err(Error::SingularCovariance) => Ok(()),
        Err(e) => Err(e),
    }
}

/// Runs the quantum Langevin ensemble from `initial`, recording the metric
/// distance between the moment-fitted Gaussian and the Lyapunov steady state
/// every `record_every` steps (including t = 0). Returns the curve and the
/// final ensemble.
pub fn simulate_decay(
    params: &ModelParams,
    conv: SdeConventions,
    cfg: &SimConfig,
    initial: &GaussianState,
) -> Result<(DecayCurve, Ensemble)> {
    if initial.dim() != params.phase_dim() {
        return Err(Error::DimensionMismatch {
            expected: params.phase_dim(),
            got: initial.dim(),
        });
    }
    let reference = steady_covariance_lyapunov(params, conv)?;
    let mut ens = sample_steady(initial, cfg.n_particles, cfg.seed)?;
    let mut samples = Vec::new();
    record_sample(&mut samples, cfg.metric, 0.0, &ens, &reference, true)?;
    let n_steps = cfg.n_steps();
    for step in 1..=n_steps {
        euler_maruyama_step(params, conv, &mut ens, cfg.dt)?;
        if step % cfg.record_every == 0 {
            let t = step as f64 * cfg.dt;
            record_sample(&mut samples, cfg.metric, t, &ens, &reference, true)?;
        }
    }
    let curve = DecayCurve {
        samples,
        metric: cfg.metric,
        source: CurveSource::Wfp(params.clone()),
    };
    Ok((curve, ens))
}

/// Exact propagation of Gaussian moments under the linear dynamics.
///
/// Everything reduces to the 2x2 pair block `M = [[0, 1], [-w0^2, -g]]`:
/// its exponential is closed-form (trigonometric, hyperbolic, or the
/// critical-damping series when `g^2` is within 1e-8 of `4 w0^2`), and the
/// noise integral is folded away with
/// `Sigma(t) = Sigma_inf + e^{Mt} (Sigma_0 - Sigma_inf) e^{M^T t}`.
#[derive(Debug, Clone)]
pub struct MomentPropagator {
    d: usize,
    omega_sq: f64,
    gamma_eff: f64,
    /// Stationary block, present whenever the noise is nonzero.
    sigma_inf: Option<(f64, f64, f64)>,
}

impl MomentPropagator {
    pub fn new(params: &ModelParams, conv: SdeConventions) -> Result<Self> {
        let diff = params.diffusion();
        if !diff.is_psd() {
            return Err(Error::NotPsd {
                eigenvalue: diff.block_min_eigenvalue(),
            });
        }
        let scale = conv.noise_scale();
        let noise_zero = diff.dqq() == 0.0 && diff.dpq() == 0.0 && diff.dpp() == 0.0;
        let gamma_eff = conv.gamma_eff(params.gamma());
        let omega_sq = params.omega0() * params.omega0();
        let sigma_inf = if noise_zero {
            None
        } else {
            let nqq = scale * diff.dqq();
            let npq = scale * diff.dpq();
            let npp = scale * diff.dpp();
            let cxp = -nqq / 2.0;
            let cpp = (npp + omega_sq * nqq) / (2.0 * gamma_eff);
            let cxx = (cpp - gamma_eff * cxp + npq) / omega_sq;
            Some((cxx, cxp, cpp))
        };
        Ok(Self {
            d: params.d(),
            omega_sq,
            gamma_eff,
            sigma_inf,
        })
    }

    /// Frictionless, noiseless mode: pure harmonic rotation in phase space.
    pub fn hamiltonian_limit(omega0: f64, d: usize) -> Self {
        Self {
            d,
            omega_sq: omega0 * omega0,
            gamma_eff: 0.0,
            sigma_inf: None,
        }
    }

    /// The 2x2 pair-block matrix exponential `e^{Mt}` as `[e11,e12,e21,e22]`.
    pub fn exp_block(&self, t: f64) -> [f64; 4] {
        let a = -self.gamma_eff / 2.0;
        let delta = self.gamma_eff * self.gamma_eff / 4.0 - self.omega_sq;
        let scale = (self.gamma_eff * self.gamma_eff).max(4.0 * self.omega_sq);
        let (c, s) = if delta.abs() < 1e-8 * scale.max(1.0) {
            // critical damping: series limit of cos/cosh around delta = 0
            let dt2 = delta * t * t;
            (
                1.0 + dt2 / 2.0 + dt2 * dt2 / 24.0,
                t * (1.0 + dt2 / 6.0 + dt2 * dt2 / 120.0),
            )
        } else if delta < 0.0 {
            let nu = (-delta).sqrt();
            ((nu * t).cos(), (nu * t).sin() / nu)
        } else {
            let mu = delta.sqrt();
            ((mu * t).cosh(), (mu * t).sinh() / mu)
        };
        let ea = (a * t).exp();
        // e^{Mt} = e^{at} (c I + s (M - a I)),  M - aI = [[-a, 1], [-w^2, a]]
        [
            ea * (c - s * a),
            ea * s,
            ea * (-s * self.omega_sq),
            ea * (c + s * a),
        ]
    }

    fn expand(&self, e: [f64; 4]) -> DMatrix<f64> {
        let d = self.d;
        let mut m = DMatrix::zeros(2 * d, 2 * d);
        for j in 0..d {
            m[(j, j)] = e[0];
            m[(j, j + d)] = e[1];
            m[(j + d, j)] = e[2];
            m[(j + d, j + d)] = e[3];
        }
        m
    }

    /// Stationary covariance block, when noise is present.
    pub fn sigma_inf_block(&self) -> Option<(f64, f64, f64)> {
        self.sigma_inf
    }

    /// Mean and covariance at each requested time (times must be ascending
    /// and nonnegative).
    pub fn propagate(
        &self,
        m0: &DVector<f64>,
        cov0: &DMatrix<f64>,
        times: &[f64],
    ) -> Result<Vec<GaussianState>> {
        let dim = 2 * self.d;
        if m0.len() != dim || cov0.nrows() != dim || cov0.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: m0.len(),
            });
        }
        for pair in times.windows(2) {
            if pair[1] < pair[0] {
                return Err(Error::InvalidParams("times must be ascending".into()));
            }
        }
        if times.first().is_some_and(|&t| t < 0.0) {
            return Err(Error::InvalidParams("times must be nonnegative".into()));
        }
        let sigma_inf = self
            .sigma_inf
            .map(|(cxx, cxp, cpp)| crate::linalg::block_matrix(self.d, cxx, cxp, cpp));
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            let e = self.expand(self.exp_block(t));
            let mean = &e * m0;
            let cov = match &sigma_inf {
                Some(inf) => inf + &e * (cov0 - inf) * e.transpose(),
                None => &e * cov0 * e.transpose(),
            };
            let sym = (&cov + cov.transpose()) / 2.0;
            out.push(GaussianState::new(mean, sym)?);
        }
        Ok(out)
    }
}

/// Exact Gaussian moments of the linear dynamics at the requested times.
pub fn exact_moment_propagation(
    params: &ModelParams,
    conv: SdeConventions,
    m0: &DVector<f64>,
    cov0: &DMatrix<f64>,
    times: &[f64],
) -> Result<Vec<GaussianState>> {
    MomentPropagator::new(params, conv)?.propagate(m0, cov0, times)
}

/// Least-squares fit of `ln(distance)` against `t` over `[t_lo, t_hi]`;
/// the decay rate is the negated slope, with its standard error.
pub fn fit_decay_rate(curve: &DecayCurve, window: (f64, f64)) -> Result<RateFit> {
    let (t_lo, t_hi) = window;
    let selected: Vec<(f64, f64)> = curve
        .samples
        .iter()
        .filter(|s| s.t >= t_lo && s.t <= t_hi)
        .map(|s| (s.t, s.distance))
        .collect();
    if selected.len() < 5 {
        return Err(Error::InsufficientData {
            needed: 5,
            got: selected.len(),
        });
    }
    if let Some(&(t, _)) = selected.iter().find(|&&(_, d)| d <= 0.0) {
        return Err(Error::NonPositiveDistance { t });
    }
    let n = selected.len() as f64;
    let mean_t = selected.iter().map(|&(t, _)| t).sum::<f64>() / n;
    let mean_y = selected.iter().map(|&(_, d)| d.ln()).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(t, d) in &selected {
        let dx = t - mean_t;
        sxx += dx * dx;
        sxy += dx * (d.ln() - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: 5, got: 1 });
    }
    let slope = sxy / sxx;
    let mut ssr = 0.0;
    for &(t, d) in &selected {
        let resid = d.ln() - mean_y - slope * (t - mean_t);
        ssr += resid * resid;
    }
    let stderr = (ssr / (n - 2.0) / sxx).max(0.0).sqrt();
    Ok(RateFit {
        rate: -slope,
        stderr,
        n_samples: selected.len(),
    })
}

/// Stationary law of the SGD diffusion limit: the Gaussian `exp(-2f/s)`,
/// i.e. mean zero with covariance `s/(2 * hessian_scale) * I_d`. Degenerate
/// (zero variance) when `s = 0`; reported, never sampled.
pub fn sgd_stationary(spec: &SgdSpec) -> GaussianState {
    let variance = spec.s / (2.0 * spec.hessian_scale);
    GaussianState::isotropic(spec.d, variance).expect("isotropic covariance is always valid")
}

/// Euler-Maruyama for `dx = -hessian_scale * x dt + sqrt(s) dW` per
/// coordinate, recording the distance of the moment-fitted Gaussian to the
/// analytic stationary law. With `s = 0` the run is a deterministic gradient
/// flow and the curve stays empty (the stationary law is a point mass).
pub fn sgd_sde_simulate(
    spec: &SgdSpec,
    cfg: &SimConfig,
    initial: &GaussianState,
) -> Result<(DecayCurve, Ensemble)> {
    if initial.dim() != spec.d {
        return Err(Error::DimensionMismatch {
            expected: spec.d,
            got: initial.dim(),
        });
    }
    let mut ens = sample_steady(initial, cfg.n_particles, cfg.seed)?;
    let reference = sgd_stationary(spec);
    let record = !spec.is_degenerate();
    let mut samples = Vec::new();
    if record {
        record_sample(&mut samples, cfg.metric, 0.0, &ens, &reference, false)?;
    }
    let hs = spec.hessian_scale;
    let noise_amp = (spec.s * cfg.dt).sqrt();
    let d = spec.d;
    let n_steps = cfg.n_steps();
    for step in 1..=n_steps {
        let (seed, step_index) = (ens.seed, ens.step_index);
        ens.data.par_chunks_mut(d).enumerate().for_each(|(i, row)| {
            let mut rng = CounterRng::from_key(seed, STREAM_SGD, i as u64, step_index);
            let mut k = 0;
            while k < d {
                let (z1, z2) = rng.next_normal_pair();
                row[k] += -hs * row[k] * cfg.dt + noise_amp * z1;
                if k + 1 < d {
                    row[k + 1] += -hs * row[k + 1] * cfg.dt + noise_amp * z2;
                }
                k += 2;
            }
        });
        ens.step_index += 1;
        ens.time += cfg.dt;
        if record && step % cfg.record_every == 0 {
            record_sample(
                &mut samples,
                cfg.metric,
                step as f64 * cfg.dt,
                &ens,
                &reference,
                false,
            )?;
        }
    }
    let curve = DecayCurve {
        samples,
        metric: cfg.metric,
        source: CurveSource::Sgd(*spec),
    };
    Ok((curve, ens))
}

/// Reads the SGD analog off the quantum model: `s = 2 Dpp` from matching
/// `D = s I / 2` on the momentum block, effective objective
/// `F(p) = gamma |p|^2`, and the friction-dominance ratio `gamma / omega0`.
pub fn sgd_analogy_map(params: &ModelParams) -> Result<AnalogyMap> {
    let s = 2.0 * params.diffusion().dpp();
    // F(p) = gamma |p|^2 = (2 gamma) |p|^2 / 2, so the quadratic scale is 2 gamma
    let sgd = SgdSpec::new(s, 2.0 * params.gamma(), params.d())?;
    Ok(AnalogyMap {
        degenerate: sgd.is_degenerate(),
        sgd,
        dominance: params.gamma() / params.omega0(),
        objective_coefficient: params.gamma(),
    })
}
