//! Desk-scale laboratory for the quantum analog of stochastic gradient
//! descent: analytic decay rates (mixing times) of the harmonic
//! Wigner-Fokker-Planck equation, the corresponding quantum Langevin particle
//! dynamics, the classical SGD diffusion limit, and the machinery to verify
//! that the optimal exponential convergence rate does not depend on the
//! phase-space dimension.
//!
//! Module map:
//! - [`model`]: problem instances, the block diffusion matrix, the Lindblad
//!   condition, Q-coefficients of the steady-state exponent.
//! - [`spectral`]: closed-form eigenvalue/rate cases and the dense Jacobi
//!   oracle that audits them.
//! - [`steady`]: Gaussian steady states (analytic exponent vs Lyapunov
//!   oracle), Gaussian distances, sampling.
//! - [`dynamics`]: Euler-Maruyama ensembles, exact moment propagation,
//!   decay-rate fitting, the classical SGD side and the analogy map.

pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod rng;
pub mod spectral;
pub mod steady;

pub use error::{Error, Result};
pub use model::{
    build_diffusion_matrix, check_lindblad, q_coefficients, DiffusionSpec, FrictionConvention,
    LindbladCheck, ModelParams, NoiseConvention, Q12Convention, QCoefficients, SdeConventions,
};
