//! Problem-instance definition for the harmonic Wigner-Fokker-Planck model:
//! parameter validation, the block diffusion matrix, the Lindblad condition
//! and the Q-coefficients of the Gaussian steady-state exponent.
//!
//! Units are fixed so that hbar = m = 1. The phase-space state lives in
//! R^{2d}, ordered (x_1..x_d, p_1..p_d), and the diffusion matrix is
//! block-isotropic across the d pairs:
//!
//! ```text
//! D = | Dqq*I_d  Dpq*I_d |
//!     | Dpq*I_d  Dpp*I_d |
//! ```

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::block_matrix;

/// Which cross diffusion coefficient enters Q12.
///
/// The steady-state algebra is written down with both `Q12 = 2*omega0*gamma*Dqq`
/// and `Q12 = 2*omega0*gamma*Dpq` in different closed-form cases; the two only
/// coincide when `Dpq = Dqq`. Both are exposed so the discrepancy stays
/// testable. The unit-frequency and Caldeira-Leggett closed forms are only
/// self-consistent under [`Q12Convention::Dqq`], which is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Q12Convention {
    #[default]
    Dqq,
    Dpq,
}

/// Noise magnitude of the Langevin increment: covariance `2*D*dt` or `D*dt`.
///
/// `TwoD` matches the diffusion term `div(D grad w)` of the Fokker-Planck
/// equation and is the default; `OneD` exists for sensitivity runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseConvention {
    #[default]
    TwoD,
    OneD,
}

/// Friction strength in the drift: `-gamma*p` or `-2*gamma*p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrictionConvention {
    #[default]
    Gamma,
    TwoGamma,
}

/// Convention pair consumed by the SDE / steady-state side
/// (`q12_convention` lives on [`ModelParams`] itself).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SdeConventions {
    pub noise: NoiseConvention,
    pub friction: FrictionConvention,
}

impl SdeConventions {
    /// Effective friction coefficient entering the drift `(p, -omega0^2 x - gamma_eff p)`.
    pub fn gamma_eff(&self, gamma: f64) -> f64 {
        match self.friction {
            FrictionConvention::Gamma => gamma,
            FrictionConvention::TwoGamma => 2.0 * gamma,
        }
    }

    /// Scale factor applied to `D` to obtain the noise covariance rate.
    pub fn noise_scale(&self) -> f64 {
        match self.noise {
            NoiseConvention::TwoD => 2.0,
            NoiseConvention::OneD => 1.0,
        }
    }
}

/// The three scalars generating the block diffusion matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionSpec {
    dqq: f64,
    dpq: f64,
    dpp: f64,
}

impl DiffusionSpec {
    /// Validates positive semidefiniteness: `Dqq >= 0`, `Dpp >= 0`,
    /// `Dqq*Dpp - Dpq^2 >= 0`.
    pub fn new(dqq: f64, dpq: f64, dpp: f64) -> Result<Self> {
        let spec = Self::new_indefinite(dqq, dpq, dpp)?;
        if spec.block_det() < 0.0 {
            return Err(Error::InvalidParams(format!(
                "diffusion block not PSD: Dqq*Dpp - Dpq^2 = {} < 0",
                spec.block_det()
            )));
        }
        Ok(spec)
    }

    /// Like [`DiffusionSpec::new`] but without the cross-term PSD check.
    ///
    /// The Caldeira-Leggett regime pairs `Dqq = 0` with a nonzero `Dpq`,
    /// which makes the diffusion block indefinite: no noise process realises
    /// it, but the spectral case analysis still goes through. Operations
    /// that actually need a noise covariance (the Lyapunov oracle, sampling,
    /// the Euler-Maruyama step) re-check definiteness and reject such specs.
    pub fn new_indefinite(dqq: f64, dpq: f64, dpp: f64) -> Result<Self> {
        if !dqq.is_finite() || !dpq.is_finite() || !dpp.is_finite() {
            return Err(Error::InvalidParams(
                "diffusion entries must be finite".into(),
            ));
        }
        if dqq < 0.0 {
            return Err(Error::InvalidParams(format!("Dqq = {dqq} must be >= 0")));
        }
        if dpp < 0.0 {
            return Err(Error::InvalidParams(format!("Dpp = {dpp} must be >= 0")));
        }
        Ok(Self { dqq, dpq, dpp })
    }

    pub fn dqq(&self) -> f64 {
        self.dqq
    }

    /// Cross coefficient; `Dpq = Dqp` by construction.
    pub fn dpq(&self) -> f64 {
        self.dpq
    }

    pub fn dpp(&self) -> f64 {
        self.dpp
    }

    /// Determinant of the 2x2 scalar block, `Dqq*Dpp - Dpq^2`.
    pub fn block_det(&self) -> f64 {
        self.dqq * self.dpp - self.dpq * self.dpq
    }

    /// Smallest eigenvalue of the 2x2 scalar block.
    pub fn block_min_eigenvalue(&self) -> f64 {
        let mean = (self.dqq + self.dpp) / 2.0;
        let half_gap = (self.dqq - self.dpp) / 2.0;
        mean - (half_gap * half_gap + self.dpq * self.dpq).sqrt()
    }

    /// Whether the block is positive semidefinite (true noise covariances).
    pub fn is_psd(&self) -> bool {
        self.block_det() >= 0.0
    }
}

/// A full problem instance: dimension, frequency, friction, diffusion and
/// the Q12 bookkeeping convention. Immutable after construction; validation
/// is eager.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    d: usize,
    omega0: f64,
    gamma: f64,
    diffusion: DiffusionSpec,
    q12_convention: Q12Convention,
}

impl ModelParams {
    pub fn new(
        d: usize,
        omega0: f64,
        gamma: f64,
        diffusion: DiffusionSpec,
        q12_convention: Q12Convention,
    ) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidParams("d must be >= 1".into()));
        }
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::InvalidParams(format!(
                "omega0 = {omega0} must be > 0"
            )));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParams(format!("gamma = {gamma} must be > 0")));
        }
        Ok(Self {
            d,
            omega0,
            gamma,
            diffusion,
            q12_convention,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Full phase-space dimension `2d`.
    pub fn phase_dim(&self) -> usize {
        2 * self.d
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn diffusion(&self) -> &DiffusionSpec {
        self.diffusion_ref()
    }

    fn diffusion_ref(&self) -> &DiffusionSpec {
        &self.diffusion
    }

    pub fn q12_convention(&self) -> Q12Convention {
        self.q12_convention
    }

    /// Same scalar parameters at a different pair count `d`.
    pub fn with_dimension(&self, d: usize) -> Result<Self> {
        Self::new(
            d,
            self.omega0,
            self.gamma,
            self.diffusion,
            self.q12_convention,
        )
    }

    /// Same parameters with the frequency replaced by `omega0`.
    pub fn with_omega0(&self, omega0: f64) -> Result<Self> {
        Self::new(
            self.d,
            omega0,
            self.gamma,
            self.diffusion,
            self.q12_convention,
        )
    }
}

/// Coefficients of the Gaussian steady-state exponent
/// `A(x,p) = (gamma/Q) [Q11 omega0^2 |x|^2 + 2 Q12 omega0 x.p + Q22 |p|^2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QCoefficients {
    pub q11: f64,
    pub q12: f64,
    pub q22: f64,
    /// `Q = Q11*Q22 - Q12^2`.
    pub q: f64,
}

/// Outcome of the Lindblad positivity condition `det(D) >= (gamma/2)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladCheck {
    pub satisfied: bool,
    /// Signed margin `Dqq*Dpp - Dpq^2 - (gamma/2)^2`.
    pub margin: f64,
}

/// Expands the diffusion spec into the dense symmetric `2d x 2d` block matrix.
pub fn build_diffusion_matrix(params: &ModelParams) -> DMatrix<f64> {
    let diff = params.diffusion();
    block_matrix(params.d(), diff.dqq(), diff.dpq(), diff.dpp())
}

/// Checks the Lindblad condition `Dpp*Dqq - Dpq^2 >= (gamma/2)^2` and returns
/// the signed margin. A negative margin means the diffusion/friction pair
/// cannot come from a completely positive master equation (the
/// Caldeira-Leggett choice `Dqq = 0` always fails it).
pub fn check_lindblad(params: &ModelParams) -> LindbladCheck {
    let half_gamma = params.gamma() / 2.0;
    let margin = params.diffusion().block_det() - half_gamma * half_gamma;
    LindbladCheck {
        satisfied: margin >= 0.0,
        margin,
    }
}

/// Computes the steady-state exponent coefficients:
/// `Q11 = Dpp + omega0^2 Dqq`, `Q12 = 2 omega0 gamma D*` (per convention),
/// `Q22 = Q11 + 4 gamma (Dpq + gamma Dqq)`, `Q = Q11*Q22 - Q12^2`.
pub fn q_coefficients(params: &ModelParams) -> Result<QCoefficients> {
    let diff = params.diffusion();
    let (omega0, gamma) = (params.omega0(), params.gamma());
    let q11 = diff.dpp() + omega0 * omega0 * diff.dqq();
    let q12 = match params.q12_convention() {
        Q12Convention::Dqq => 2.0 * omega0 * gamma * diff.dqq(),
        Q12Convention::Dpq => 2.0 * omega0 * gamma * diff.dpq(),
    };
    let q22 = q11 + 4.0 * gamma * (diff.dpq() + gamma * diff.dqq());
    let q = q11 * q22 - q12 * q12;
    if q == 0.0 {
        return Err(Error::DegenerateQ);
    }
    Ok(QCoefficients { q11, q12, q22, q })
}
