//! Gaussian steady states: the quadratic exponent of the analytic steady
//! state, an independent Lyapunov-equation oracle for the stationary
//! covariance of the particle dynamics, Gaussian distances, and sampling.
//!
//! The two steady-state routes deliberately do not get reconciled into one:
//! `exp(-A)` with the written-out exponent coefficients and the stationary
//! law of the linear SDE disagree under every convention combination, and
//! [`reconcile_steady_states`] exists to map that gap rather than hide it.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::dynamics::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::{block_matrix, max_asymmetry, symmetric_eigenvalues, symmetric_sqrt_psd};
use crate::model::{q_coefficients, ModelParams, SdeConventions};
use crate::rng::{CounterRng, STREAM_SAMPLE};

/// A Gaussian over phase space (or over positions only, for the classical
/// chain): mean vector plus symmetric PSD covariance, with the block triple
/// `(cxx, cxp, cpp)` kept alongside when the covariance is block-isotropic.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
    block_form: Option<(f64, f64, f64)>,
}

impl GaussianState {
    /// Validates that `cov` is square, matches `mean`, has finite entries,
    /// is symmetric within 1e-12 and has eigenvalues >= -1e-12.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if cov.nrows() != cov.ncols() || cov.nrows() != mean.len() {
            return Err(Error::DimensionMismatch {
                expected: mean.len(),
                got: cov.nrows(),
            });
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(
                "Gaussian moments must be finite".into(),
            ));
        }
        let asym = max_asymmetry(&cov);
        if asym > 1e-12 {
            return Err(Error::NotSymmetric {
                max_asymmetry: asym,
            });
        }
        let eig = symmetric_eigenvalues(&cov)?;
        if let Some(&min) = eig.first() {
            if min < -1e-12 {
                return Err(Error::NotPsd { eigenvalue: min });
            }
        }
        Ok(Self {
            mean,
            cov,
            block_form: None,
        })
    }

    /// Block-isotropic Gaussian on `R^{2d}` with covariance
    /// `[[cxx*I, cxp*I], [cxp*I, cpp*I]]`.
    pub fn from_block(d: usize, mean: DVector<f64>, cxx: f64, cxp: f64, cpp: f64) -> Result<Self> {
        if mean.len() != 2 * d {
            return Err(Error::DimensionMismatch {
                expected: 2 * d,
                got: mean.len(),
            });
        }
        let mut state = Self::new(mean, block_matrix(d, cxx, cxp, cpp))?;
        state.block_form = Some((cxx, cxp, cpp));
        Ok(state)
    }

    /// Centered isotropic Gaussian `variance * I_n`.
    pub fn isotropic(n: usize, variance: f64) -> Result<Self> {
        Self::new(DVector::zeros(n), DMatrix::identity(n, n) * variance)
    }

    /// Degenerate Gaussian concentrated at `mean` (zero covariance).
    pub fn point_mass(mean: DVector<f64>) -> Self {
        let n = mean.len();
        Self {
            mean,
            cov: DMatrix::zeros(n, n),
            block_form: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn block_form(&self) -> Option<(f64, f64, f64)> {
        self.block_form
    }
}

/// Provenance of a quadratic steady-state exponent `A(z) = z^T S z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentProvenance {
    /// The written-out coefficients `(gamma/Q)(Q11 w0^2, Q12 w0, Q22)`.
    PaperA,
    /// Derived from the Lyapunov stationary covariance, `S = Sigma^-1 / 2`.
    Lyapunov,
}

/// Symmetric matrix of the quadratic exponent, `w_inf ~ exp(-z^T S z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentForm {
    pub s: DMatrix<f64>,
    pub provenance: ExponentProvenance,
}

/// Evaluates `A(x,p) = (gamma/Q)(Q11 w0^2 |x|^2 + 2 Q12 w0 x.p + Q22 |p|^2)`.
pub fn quadratic_form_a(params: &ModelParams, z: &DVector<f64>) -> Result<f64> {
    if z.len() != params.phase_dim() {
        return Err(Error::DimensionMismatch {
            expected: params.phase_dim(),
            got: z.len(),
        });
    }
    let q = q_coefficients(params)?;
    let d = params.d();
    let omega0 = params.omega0();
    let mut xx = 0.0;
    let mut xp = 0.0;
    let mut pp = 0.0;
    for j in 0..d {
        xx += z[j] * z[j];
        xp += z[j] * z[j + d];
        pp += z[j + d] * z[j + d];
    }
    Ok(params.gamma() / q.q
        * (q.q11 * omega0 * omega0 * xx + 2.0 * q.q12 * omega0 * xp + q.q22 * pp))
}

/// The exponent matrix of the analytic steady state,
/// `S = (gamma/Q) [[Q11 w0^2 I, Q12 w0 I], [Q12 w0 I, Q22 I]]`.
pub fn exponent_matrix_paper(params: &ModelParams) -> Result<ExponentForm> {
    let q = q_coefficients(params)?;
    let scale = params.gamma() / q.q;
    let omega0 = params.omega0();
    let s = block_matrix(
        params.d(),
        scale * q.q11 * omega0 * omega0,
        scale * q.q12 * omega0,
        scale * q.q22,
    );
    Ok(ExponentForm {
        s,
        provenance: ExponentProvenance::PaperA,
    })
}

fn lyapunov_block(params: &ModelParams, conv: SdeConventions) -> (f64, f64, f64) {
    let diff = params.diffusion();
    let gamma_eff = conv.gamma_eff(params.gamma());
    let scale = conv.noise_scale();
    let (nqq, npq, npp) = (scale * diff.dqq(), scale * diff.dpq(), scale * diff.dpp());
    let omega_sq = params.omega0() * params.omega0();
    let cxp = -nqq / 2.0;
    let cpp = (npp + omega_sq * nqq) / (2.0 * gamma_eff);
    let cxx = (cpp - gamma_eff * cxp + npq) / omega_sq;
    (cxx, cxp, cpp)
}

/// Stationary covariance of the linear Langevin dynamics: the closed-form
/// block solution of `M Sigma + Sigma M^T + N = 0` with drift
/// `M = [[0, I], [-w0^2 I, -gamma_eff I]]` and noise rate `N = 2D` (or `D`,
/// per convention). Rejected as [`Error::NotStationary`] when the solution is
/// not positive definite (e.g. zero noise).
pub fn steady_covariance_lyapunov(
    params: &ModelParams,
    conv: SdeConventions,
) -> Result<GaussianState> {
    if !params.diffusion().is_psd() {
        return Err(Error::NotPsd {
            eigenvalue: params.diffusion().block_min_eigenvalue(),
        });
    }
    let (cxx, cxp, cpp) = lyapunov_block(params, conv);
    // eigenvalues of the 2x2 scalar block; each carries multiplicity d
    let mean = (cxx + cpp) / 2.0;
    let disc = ((cxx - cpp) / 2.0 * ((cxx - cpp) / 2.0) + cxp * cxp).sqrt();
    let min_eig = mean - disc;
    if min_eig <= 0.0 {
        return Err(Error::NotStationary {
            eigenvalue: min_eig,
        });
    }
    GaussianState::from_block(
        params.d(),
        DVector::zeros(params.phase_dim()),
        cxx,
        cxp,
        cpp,
    )
}

/// Max-entry norm of `M Sigma + Sigma M^T + N` for a candidate stationary
/// covariance; the closed-form solution keeps this at roundoff level.
pub fn lyapunov_residual(params: &ModelParams, conv: SdeConventions, state: &GaussianState) -> f64 {
    let d = params.d();
    let gamma_eff = conv.gamma_eff(params.gamma());
    let omega_sq = params.omega0() * params.omega0();
    let m = {
        let mut m = DMatrix::zeros(2 * d, 2 * d);
        for j in 0..d {
            m[(j, j + d)] = 1.0;
            m[(j + d, j)] = -omega_sq;
            m[(j + d, j + d)] = -gamma_eff;
        }
        m
    };
    let diff = params.diffusion();
    let scale = conv.noise_scale();
    let noise = block_matrix(
        d,
        scale * diff.dqq(),
        scale * diff.dpq(),
        scale * diff.dpp(),
    );
    let residual = &m * state.cov() + state.cov() * m.transpose() + noise;
    residual.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// The exponent form induced by the Lyapunov covariance, `S = Sigma^-1 / 2`.
pub fn exponent_matrix_lyapunov(
    params: &ModelParams,
    conv: SdeConventions,
) -> Result<ExponentForm> {
    let sigma = steady_covariance_lyapunov(params, conv)?;
    let inv = sigma
        .cov()
        .clone()
        .try_inverse()
        .ok_or(Error::SingularCovariance)?;
    Ok(ExponentForm {
        s: inv / 2.0,
        provenance: ExponentProvenance::Lyapunov,
    })
}

/// Side-by-side comparison of the two steady-state covariances.
///
/// `ratio` is `Sigma_A * Sigma_L^-1`; `scalar_mean` its average diagonal and
/// `max_deviation_from_scalar` the largest entry of `ratio - scalar_mean*I`.
/// No claim is made that the ratio is the identity: the conventions of the
/// two routes do not force it, and the numbers quantify by how much they
/// miss each other.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconciliationReport {
    pub sigma_a: DMatrix<f64>,
    pub sigma_l: DMatrix<f64>,
    pub ratio: DMatrix<f64>,
    pub scalar_mean: f64,
    pub max_deviation_from_scalar: f64,
    /// Entrywise `Sigma_A[ij] / Sigma_L[ij]` where the denominator is
    /// nonzero; NaN elsewhere.
    pub entry_ratios: DMatrix<f64>,
}

/// Computes `Sigma_A = (2 S_paper)^-1`, the Lyapunov covariance, and their
/// mismatch. Zero diffusion is rejected: neither route has a covariance then.
pub fn reconcile_steady_states(
    params: &ModelParams,
    conv: SdeConventions,
) -> Result<ReconciliationReport> {
    let diff = params.diffusion();
    if diff.dqq() == 0.0 && diff.dpq() == 0.0 && diff.dpp() == 0.0 {
        return Err(Error::SingularCovariance);
    }
    let paper = exponent_matrix_paper(params)?;
    let sigma_a = (2.0 * &paper.s)
        .try_inverse()
        .ok_or(Error::SingularCovariance)?;
    let sigma_l_state = steady_covariance_lyapunov(params, conv)?;
    let sigma_l_inv = sigma_l_state
        .cov()
        .clone()
        .try_inverse()
        .ok_or(Error::SingularCovariance)?;
    let ratio = &sigma_a * sigma_l_inv;

    let n = ratio.nrows();
    let scalar_mean = ratio.trace() / n as f64;
    let mut max_dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { scalar_mean } else { 0.0 };
            max_dev = max_dev.max((ratio[(i, j)] - target).abs());
        }
    }
    let sigma_l = sigma_l_state.cov().clone();
    let entry_ratios = DMatrix::from_fn(n, n, |i, j| {
        if sigma_l[(i, j)] != 0.0 {
            sigma_a[(i, j)] / sigma_l[(i, j)]
        } else {
            f64::NAN
        }
    });
    Ok(ReconciliationReport {
        sigma_a,
        sigma_l,
        ratio,
        scalar_mean,
        max_deviation_from_scalar: max_dev,
        entry_ratios,
    })
}

/// Draws `n` i.i.d. samples through the symmetric square root of the
/// covariance. Each sample is keyed by `(seed, sample index)`, so the
/// ensemble is reproducible and independent of evaluation order.
pub fn sample_steady(state: &GaussianState, n: usize, seed: u64) -> Result<Ensemble> {
    let dim = state.dim();
    let factor = symmetric_sqrt_psd(state.cov())?;
    let mut data = vec![0.0f64; n * dim];
    let mut normals = vec![0.0f64; dim];
    for i in 0..n {
        let mut rng = CounterRng::from_key(seed, STREAM_SAMPLE, i as u64, 0);
        let mut k = 0;
        while k < dim {
            let (z1, z2) = rng.next_normal_pair();
            normals[k] = z1;
            if k + 1 < dim {
                normals[k + 1] = z2;
            }
            k += 2;
        }
        let row = &mut data[i * dim..(i + 1) * dim];
        for r in 0..dim {
            let mut acc = state.mean()[r];
            for c in 0..dim {
                acc += factor[(r, c)] * normals[c];
            }
            row[r] = acc;
        }
    }
    Ok(Ensemble::from_raw(data, n, dim, seed))
}

fn cholesky_of(cov: &DMatrix<f64>) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    Cholesky::new(cov.clone()).ok_or(Error::SingularCovariance)
}

fn log_det(chol: &Cholesky<f64, nalgebra::Dyn>) -> f64 {
    2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>()
}

/// Relative entropy between Gaussians,
/// `KL = [tr(S2^-1 S1) - n + (m2-m1)^T S2^-1 (m2-m1) + ln det S2 - ln det S1] / 2`.
/// Tiny negative roundoff is clamped to zero.
pub fn gaussian_kl(g1: &GaussianState, g2: &GaussianState) -> Result<f64> {
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch {
            expected: g1.dim(),
            got: g2.dim(),
        });
    }
    let n = g1.dim();
    let chol2 = cholesky_of(g2.cov())?;
    let chol1 = cholesky_of(g1.cov())?;
    let trace = chol2.solve(g1.cov()).trace();
    let delta = g2.mean() - g1.mean();
    let mahalanobis = delta.dot(&chol2.solve(&delta));
    let kl = 0.5 * (trace - n as f64 + mahalanobis + log_det(&chol2) - log_det(&chol1));
    Ok(kl.max(0.0))
}

/// Value of the Gaussian product integral `int N(x;m1,S1) N(x;m2,S2) dx`.
fn gaussian_overlap(
    m1: &DVector<f64>,
    s1: &DMatrix<f64>,
    m2: &DVector<f64>,
    s2: &DMatrix<f64>,
) -> Result<f64> {
    let n = m1.len();
    let sum = s1 + s2;
    let chol = cholesky_of(&sum)?;
    let delta = m1 - m2;
    let quad = delta.dot(&chol.solve(&delta));
    let log_norm = -0.5 * (n as f64 * (2.0 * std::f64::consts::PI).ln() + log_det(&chol));
    Ok((log_norm - 0.5 * quad).exp())
}

/// L2 distance between the two normalized Gaussian densities, from the
/// closed-form product integrals
/// `||p1 - p2||_2 = sqrt(I(1,1) - 2 I(1,2) + I(2,2))`.
pub fn gaussian_l2_distance(g1: &GaussianState, g2: &GaussianState) -> Result<f64> {
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch {
            expected: g1.dim(),
            got: g2.dim(),
        });
    }
    let i11 = gaussian_overlap(g1.mean(), g1.cov(), g1.mean(), g1.cov())?;
    let i12 = gaussian_overlap(g1.mean(), g1.cov(), g2.mean(), g2.cov())?;
    let i22 = gaussian_overlap(g2.mean(), g2.cov(), g2.mean(), g2.cov())?;
    Ok((i11 - 2.0 * i12 + i22).max(0.0).sqrt())
}
