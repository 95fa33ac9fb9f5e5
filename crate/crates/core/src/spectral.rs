//! Closed-form eigenvalues and optimal decay rates of the steady-state
//! exponent Hessian, one operation per analytic case, plus a dense Jacobi
//! oracle to audit them against.
//!
//! The long-time behaviour of the harmonic Wigner-Fokker-Planck equation is
//! governed by `||w(t) - w_inf|| <= C exp(-kappa t)` with `kappa` the
//! smallest eigenvalue of the Hessian of the Gaussian steady-state exponent
//! (Sparber, Carrillo, Dolbeault, Markowich, Monatsh. Math. 141, 2004). The
//! Hessian here is block-isotropic, so its spectrum consists of at most two
//! distinct values whatever the pair count d; that is the d-independence of
//! the rate that the case formulas below make explicit.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{block_matrix, symmetric_eigenvalues};
use crate::model::{check_lindblad, q_coefficients, ModelParams, Q12Convention};

/// Which closed-form route produced a [`SpectralResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// Quadratic-formula eigenvalues of the d=1 Hessian block (always exact).
    GeneralD1,
    /// `omega0 = 1` closed form.
    UnitFrequency,
    /// `Dqq = 0` (Caldeira-Leggett regime, violates the Lindblad condition).
    CaldeiraLeggett,
    /// `Dpq = -gamma*Dqq`, which forces `Q22 = Q11`.
    EqualQ,
    /// General case after the diagonal `p` rescaling by `sqrt(Q22/Q11)`.
    RescaledGeneral,
    /// First-order perturbative expansion (approximate by construction).
    Perturbative,
}

impl CaseTag {
    pub fn label(&self) -> &'static str {
        match self {
            CaseTag::GeneralD1 => "GENERAL_D1",
            CaseTag::UnitFrequency => "UNIT_FREQUENCY",
            CaseTag::CaldeiraLeggett => "CALDEIRA_LEGGETT",
            CaseTag::EqualQ => "EQUAL_Q",
            CaseTag::RescaledGeneral => "RESCALED_GENERAL",
            CaseTag::Perturbative => "PERTURBATIVE",
        }
    }
}

/// Pair of closed-form eigenvalues and the decay rate they imply.
///
/// `lambda_plus` always carries the `+` branch of the case formula (for the
/// block-diagonal cases, the position/`w` branch); `kappa` selects the
/// smaller of the two by value. `spectrum_preserving` records whether the
/// case's coordinate change leaves the Hessian spectrum intact, i.e. whether
/// the pair must show up verbatim (each with multiplicity d) in the dense
/// spectrum of [`hessian_matrix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralResult {
    pub case: CaseTag,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub kappa: f64,
    pub spectrum_preserving: bool,
    /// Set for the perturbative case only: first-order in an expansion whose
    /// small parameter is not actually small once the friction is large.
    pub approximate: bool,
    /// Lindblad margin attached as a warning in the Caldeira-Leggett regime.
    pub lindblad_margin: Option<f64>,
}

impl SpectralResult {
    fn new(case: CaseTag, lambda_plus: f64, lambda_minus: f64, spectrum_preserving: bool) -> Self {
        Self {
            case,
            lambda_plus,
            lambda_minus,
            kappa: lambda_plus.min(lambda_minus),
            spectrum_preserving,
            approximate: false,
            lindblad_margin: None,
        }
    }
}

/// Exponential-decay mixing time `t_mix = max(0, ln(C/eps)/kappa)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingEstimate {
    pub kappa: f64,
    pub prefactor_c: f64,
    pub epsilon: f64,
    pub t_mix: f64,
}

/// Dense symmetric `2d x 2d` Hessian of the steady-state exponent,
/// `(gamma/Q) [[Q11 omega0^2 I, Q12 omega0 I], [Q12 omega0 I, Q22 I]]`.
pub fn hessian_matrix(params: &ModelParams) -> Result<DMatrix<f64>> {
    let (a, b, c) = hessian_block(params)?;
    Ok(block_matrix(params.d(), a, b, c))
}

/// The three scalars `(a, b, c)` of the block-isotropic Hessian.
pub fn hessian_block(params: &ModelParams) -> Result<(f64, f64, f64)> {
    let q = q_coefficients(params)?;
    let scale = params.gamma() / q.q;
    let omega0 = params.omega0();
    Ok((
        scale * q.q11 * omega0 * omega0,
        scale * q.q12 * omega0,
        scale * q.q22,
    ))
}

/// Exact eigenvalue pair of the d=1 Hessian block via the quadratic formula:
///
/// ```text
/// lambda_pm = gamma (Q11 w0^2 + Q22) / 2Q
///             +- sqrt( [gamma (Q11 w0^2 - Q22) / 2Q]^2 + (gamma w0 Q12 / Q)^2 )
/// ```
///
/// These are the only two eigenvalues of the full `2d x 2d` Hessian, each
/// with multiplicity d.
pub fn eigenvalues_d1(params: &ModelParams) -> Result<SpectralResult> {
    let q = q_coefficients(params)?;
    let gamma = params.gamma();
    let omega0 = params.omega0();
    let mean = gamma * (q.q11 * omega0 * omega0 + q.q22) / (2.0 * q.q);
    let half_gap = gamma * (q.q11 * omega0 * omega0 - q.q22) / (2.0 * q.q);
    let cross = gamma * omega0 * q.q12 / q.q;
    let disc = (half_gap * half_gap + cross * cross).sqrt();
    Ok(SpectralResult::new(
        CaseTag::GeneralD1,
        mean + disc,
        mean - disc,
        true,
    ))
}

/// `omega0 = 1` closed form,
/// `kappa = (gamma/|Q|) [sign(Q)(Q11 + 2 gamma c) - 2 gamma sqrt(c^2 + Dqq^2)]`
/// with `c = Dpq + gamma Dqq`. Requires the `Dqq` convention for Q12, under
/// which it agrees with [`eigenvalues_d1`] exactly.
pub fn kappa_unit_frequency(params: &ModelParams) -> Result<SpectralResult> {
    if params.omega0() != 1.0 {
        return Err(Error::ConstraintViolated(format!(
            "unit-frequency case needs omega0 = 1, got {}",
            params.omega0()
        )));
    }
    if params.q12_convention() != Q12Convention::Dqq {
        return Err(Error::ConstraintViolated(
            "unit-frequency closed form assumes the Dqq convention for Q12".into(),
        ));
    }
    let q = q_coefficients(params)?;
    let diff = params.diffusion();
    let gamma = params.gamma();
    let c = diff.dpq() + gamma * diff.dqq();
    let root = (c * c + diff.dqq() * diff.dqq()).sqrt();
    let scale = gamma / q.q.abs();
    let symmetric_part = q.q.signum() * (q.q11 + 2.0 * gamma * c);
    let lambda_plus = scale * (symmetric_part + 2.0 * gamma * root);
    let lambda_minus = scale * (symmetric_part - 2.0 * gamma * root);
    Ok(SpectralResult::new(
        CaseTag::UnitFrequency,
        lambda_plus,
        lambda_minus,
        true,
    ))
}

/// Caldeira-Leggett regime `Dqq = 0` (so `Q12 = 0` under the `Dqq`
/// convention and the Hessian is block diagonal):
/// `lambda1 = gamma omega0^2 Dpp / Q` and
/// `lambda2 = gamma (Dpp^2 + 4 gamma Dpq Dpp) / Q = gamma`, the latter an
/// algebraic identity since `Q = Dpp^2 + 4 gamma Dpq Dpp` here. Which root
/// is smaller is decided by `Dpp + 4 gamma Dpq` vs `omega0^2`.
///
/// `lambda2` follows the written-out case algebra rather than the dense
/// (2,2)-block eigenvalue `gamma Q22 / Q` — the two coincide only at
/// `Dpp = 1` — so the result is not marked spectrum preserving. The Lindblad
/// margin (always negative here) is attached as a warning.
pub fn kappa_caldeira_leggett(params: &ModelParams) -> Result<SpectralResult> {
    let diff = params.diffusion();
    if diff.dqq() != 0.0 {
        return Err(Error::ConstraintViolated(format!(
            "Caldeira-Leggett case needs Dqq = 0, got {}",
            diff.dqq()
        )));
    }
    if params.q12_convention() != Q12Convention::Dqq {
        return Err(Error::ConstraintViolated(
            "Caldeira-Leggett case needs the Dqq convention so that Q12 = 0".into(),
        ));
    }
    if diff.dpp() == 0.0 {
        return Err(Error::TrivialCase(
            "Dpp = 0 makes both eigenvalues zero; no exponential convergence".into(),
        ));
    }
    let q = q_coefficients(params)?;
    let gamma = params.gamma();
    let omega0 = params.omega0();
    let lambda1 = gamma * omega0 * omega0 * diff.dpp() / q.q;
    // lambda2 = gamma * (Dpp^2 + 4 gamma Dpq Dpp) / Q = gamma * Q/Q
    let lambda2 = gamma;
    let mut result = SpectralResult::new(CaseTag::CaldeiraLeggett, lambda1, lambda2, false);
    result.lindblad_margin = Some(check_lindblad(params).margin);
    Ok(result)
}

/// Equal-diagonal case `Q11 = Q22`, i.e. `Dpq = -gamma*Dqq`:
/// `lambda_{1,2} = (gamma/Q) [Dpp + (omega0^2 +- 2 gamma) Dqq] omega0^2`.
///
/// The mixing `w = x + p`, `z = x - p` that diagonalises the Hessian is
/// orthogonal up to a uniform factor, but it only applies verbatim when the
/// two diagonal blocks agree, which requires `omega0 = 1`; for other
/// frequencies the pair is reported as written and flagged as not spectrum
/// preserving.
pub fn kappa_equal_q(params: &ModelParams) -> Result<SpectralResult> {
    let diff = params.diffusion();
    let gamma = params.gamma();
    let violation = (diff.dpq() + gamma * diff.dqq()).abs();
    if violation > 1e-12 * diff.dpq().abs().max(1.0) {
        return Err(Error::ConstraintViolated(format!(
            "equal-Q case needs Dpq = -gamma*Dqq (|Dpq + gamma*Dqq| = {violation:e})"
        )));
    }
    if params.q12_convention() != Q12Convention::Dqq {
        return Err(Error::ConstraintViolated(
            "equal-Q closed form assumes the Dqq convention for Q12".into(),
        ));
    }
    let q = q_coefficients(params)?;
    let omega0 = params.omega0();
    let omega_sq = omega0 * omega0;
    let lambda1 = gamma / q.q * (diff.dpp() + (omega_sq + 2.0 * gamma) * diff.dqq()) * omega_sq;
    let lambda2 = gamma / q.q * (diff.dpp() + (omega_sq - 2.0 * gamma) * diff.dqq()) * omega_sq;
    Ok(SpectralResult::new(
        CaseTag::EqualQ,
        lambda1,
        lambda2,
        omega0 == 1.0,
    ))
}

/// General case after rescaling `p -> sqrt(Q22/Q11) p`:
/// `kappa_pm = (gamma/Q) (Q11 +- Q12 sqrt(Q11/Q22))`.
///
/// The rescaling is a non-orthogonal similarity of the quadratic form, so the
/// pair generally differs from the dense spectrum of the unrescaled Hessian;
/// both numbers are kept and the case is flagged accordingly.
pub fn kappa_rescaled_general(params: &ModelParams) -> Result<SpectralResult> {
    let q = q_coefficients(params)?;
    if q.q11 * q.q22 < 0.0 {
        return Err(Error::NegativeRatio);
    }
    if q.q22 == 0.0 {
        return Err(Error::ConstraintViolated(
            "rescaled case needs Q22 != 0 for the ratio Q11/Q22".into(),
        ));
    }
    let gamma = params.gamma();
    let ratio_root = (q.q11 / q.q22).sqrt();
    let kappa_plus = gamma / q.q * (q.q11 + q.q12 * ratio_root);
    let kappa_minus = gamma / q.q * (q.q11 - q.q12 * ratio_root);
    Ok(SpectralResult::new(
        CaseTag::RescaledGeneral,
        kappa_plus,
        kappa_minus,
        false,
    ))
}

/// The only two eigenvalues of `T = [[0, a*I_d], [a*I_d, b*I_d]]` for any
/// `d >= 1`, namely `b/2 +- sqrt((b/2)^2 + a^2)`, each with multiplicity d.
/// Returned as `(plus branch, minus branch)`.
pub fn lemma2_eigenvalues(a: f64, b: f64) -> Result<(f64, f64)> {
    if a == 0.0 && b == 0.0 {
        return Err(Error::TrivialCase(
            "(a, b) = (0, 0) gives the zero matrix".into(),
        ));
    }
    let half_b = b / 2.0;
    let root = (half_b * half_b + a * a).sqrt();
    Ok((half_b + root, half_b - root))
}

/// First-order perturbative eigenvalue pair in the `omega0 = 1`
/// normalisation (the `x -> x/omega0` rescaling):
///
/// ```text
/// gamma [2 Dpp + (gamma+1) Dqq +- sqrt((Dpp + gamma Dqq)^2 + Dqq^2)]
/// / [(Dpp+Dqq)^2 + 4 gamma (Dpq + gamma Dqq)(Dpp+Dqq) - (2 gamma Dqq)^2]
/// ```
///
/// Approximate by construction: the expansion treats the friction-scaled
/// remainder as small, which fails exactly in the large-friction regime of
/// interest. At `Dqq = 0` it collapses to the Caldeira-Leggett `lambda1`
/// at unit frequency.
pub fn kappa_perturbative(params: &ModelParams) -> Result<SpectralResult> {
    let diff = params.diffusion();
    let gamma = params.gamma();
    let (dqq, dpq, dpp) = (diff.dqq(), diff.dpq(), diff.dpp());
    let q11 = dpp + dqq;
    if q11 == 0.0 {
        return Err(Error::DegenerateQ11);
    }
    let denom = q11 * q11 + 4.0 * gamma * (dpq + gamma * dqq) * q11
        - (2.0 * gamma * dqq) * (2.0 * gamma * dqq);
    if denom == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    let root = ((dpp + gamma * dqq) * (dpp + gamma * dqq) + dqq * dqq).sqrt();
    let lambda_plus = gamma * (2.0 * dpp + (gamma + 1.0) * dqq + root) / denom;
    let lambda_minus = gamma * (2.0 * dpp + (gamma + 1.0) * dqq - root) / denom;
    let mut result = SpectralResult::new(CaseTag::Perturbative, lambda_plus, lambda_minus, false);
    result.approximate = true;
    Ok(result)
}

/// Independent dense oracle: all eigenvalues of a symmetric matrix,
/// ascending, via cyclic Jacobi rotations. Rejects matrices that are not
/// symmetric within 1e-12 (relative to the largest entry).
pub fn dense_spectrum_oracle(matrix: &DMatrix<f64>) -> Result<Vec<f64>> {
    symmetric_eigenvalues(matrix)
}

/// `t_mix = max(0, ln(C/eps)/kappa)`: the time after which the decay bound
/// `C exp(-kappa t)` drops below `eps`.
pub fn mixing_time(kappa: f64, prefactor_c: f64, epsilon: f64) -> Result<MixingEstimate> {
    if !(kappa > 0.0) {
        return Err(Error::NonPositiveInput("kappa"));
    }
    if !(prefactor_c > 0.0) {
        return Err(Error::NonPositiveInput("prefactor_c"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::NonPositiveInput("epsilon"));
    }
    let t_mix = ((prefactor_c / epsilon).ln() / kappa).max(0.0);
    Ok(MixingEstimate {
        kappa,
        prefactor_c,
        epsilon,
        t_mix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DiffusionSpec;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params(omega0: f64, gamma: f64, dqq: f64, dpq: f64, dpp: f64) -> ModelParams {
        // indefinite constructor: the Caldeira-Leggett cases pair Dqq = 0
        // with a nonzero cross term
        ModelParams::new(
            1,
            omega0,
            gamma,
            DiffusionSpec::new_indefinite(dqq, dpq, dpp).unwrap(),
            Q12Convention::Dqq,
        )
        .unwrap()
    }

    #[test]
    fn hessian_matrix_examples() {
        let h = hessian_matrix(&params(1.0, 1.0, 1.0, -1.0, 2.0)).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.6, 0.4, 0.4, 0.6]);
        assert_abs_diff_eq!((h - expected).abs().max(), 0.0, epsilon = 1e-15);

        let h = hessian_matrix(&params(1.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(h, DMatrix::identity(2, 2));

        let p = params(1.0, 1.0, 1.0, -1.0, 2.0).with_dimension(2).unwrap();
        let h = hessian_matrix(&p).unwrap();
        assert_abs_diff_eq!(h[(0, 2)], 0.4, epsilon = 1e-15);
        assert_eq!(h[(0, 1)], 0.0);
        assert_eq!(h.nrows(), 4);
    }

    #[test]
    fn eigenvalues_d1_frozen_values() {
        let r = eigenvalues_d1(&params(1.0, 1.0, 1.0, -1.0, 2.0)).unwrap();
        assert_relative_eq!(r.lambda_plus, 1.0, max_relative = 1e-14);
        assert_relative_eq!(r.lambda_minus, 0.2, max_relative = 1e-14);
        assert_relative_eq!(r.kappa, 0.2, max_relative = 1e-14);
        assert!(r.spectrum_preserving);

        let r = eigenvalues_d1(&params(1.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!((r.lambda_plus, r.lambda_minus, r.kappa), (1.0, 1.0, 1.0));

        // dense-oracle frozen: eig(0.1*[[2,4],[4,18]]) = {0.105572809.., 1.894427190..}
        let r = eigenvalues_d1(&params(1.0, 2.0, 1.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(r.lambda_plus, 1.8944271909999159, max_relative = 1e-12);
        assert_relative_eq!(r.kappa, 0.10557280900008412, max_relative = 1e-12);
    }

    #[test]
    fn eigenvalues_match_dense_oracle_across_dimensions() {
        for d in [1usize, 2, 4, 8] {
            let p = params(1.3, 0.8, 0.6, -0.3, 1.7).with_dimension(d).unwrap();
            let r = eigenvalues_d1(&p).unwrap();
            let dense = dense_spectrum_oracle(&hessian_matrix(&p).unwrap()).unwrap();
            let mut expected: Vec<f64> = Vec::new();
            expected.extend(std::iter::repeat_n(r.lambda_minus, d));
            expected.extend(std::iter::repeat_n(r.lambda_plus, d));
            expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (got, want) in dense.iter().zip(&expected) {
                assert_abs_diff_eq!(got, want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn unit_frequency_matches_general() {
        let r = kappa_unit_frequency(&params(1.0, 1.0, 1.0, -1.0, 2.0)).unwrap();
        assert_relative_eq!(r.kappa, 0.2, max_relative = 1e-14);

        let r = kappa_unit_frequency(&params(1.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(r.kappa, 1.0);

        // 0.1*(10 - 4*sqrt(5))
        let r = kappa_unit_frequency(&params(1.0, 2.0, 1.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(
            r.kappa,
            0.1 * (10.0 - 4.0 * 5.0f64.sqrt()),
            max_relative = 1e-13
        );
        let d1 = eigenvalues_d1(&params(1.0, 2.0, 1.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(r.kappa, d1.kappa, max_relative = 1e-12);

        assert!(matches!(
            kappa_unit_frequency(&params(2.0, 1.0, 0.0, 0.0, 1.0)),
            Err(Error::ConstraintViolated(_))
        ));
    }

    #[test]
    fn caldeira_examples_and_identity() {
        let r = kappa_caldeira_leggett(&params(1.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!((r.lambda_plus, r.lambda_minus, r.kappa), (1.0, 1.0, 1.0));

        let r = kappa_caldeira_leggett(&params(1.0, 1.0, 0.0, 0.0, 2.0)).unwrap();
        assert_relative_eq!(r.lambda_plus, 0.5, max_relative = 1e-14);
        assert_eq!(r.lambda_minus, 1.0); // = gamma exactly
        assert_relative_eq!(r.kappa, 0.5, max_relative = 1e-14);
        assert!(r.lindblad_margin.unwrap() < 0.0);

        let r = kappa_caldeira_leggett(&params(1.0, 2.0, 0.0, 0.25, 1.0)).unwrap();
        assert_relative_eq!(r.lambda_plus, 2.0 / 3.0, max_relative = 1e-14);
        assert_eq!(r.lambda_minus, 2.0);
        assert_relative_eq!(r.kappa, 2.0 / 3.0, max_relative = 1e-14);

        assert!(matches!(
            kappa_caldeira_leggett(&params(1.0, 1.0, 0.0, 0.0, 0.0)),
            Err(Error::TrivialCase(_))
        ));
        assert!(matches!(
            kappa_caldeira_leggett(&params(1.0, 1.0, 0.5, 0.0, 1.0)),
            Err(Error::ConstraintViolated(_))
        ));
    }

    #[test]
    fn caldeira_selector_matches_value_ordering() {
        // kappa = lambda1 iff omega0^2 < Dpp + 4 gamma Dpq (for Q > 0)
        for &(omega0, gamma, dpq, dpp) in &[
            (1.0, 1.0, 0.0, 2.0),
            (2.0, 1.0, 0.0, 1.0),
            (1.0, 2.0, 0.25, 1.0),
            (1.5, 0.7, 0.1, 3.0),
        ] {
            let p = params(omega0, gamma, 0.0, dpq, dpp);
            let r = kappa_caldeira_leggett(&p).unwrap();
            let selector = dpp + 4.0 * gamma * dpq;
            if selector > omega0 * omega0 {
                assert_eq!(r.kappa, r.lambda_plus, "lambda1 should win for {p:?}");
            } else if selector < omega0 * omega0 {
                assert_eq!(r.kappa, r.lambda_minus, "lambda2 should win for {p:?}");
            }
        }
    }

    #[test]
    fn equal_q_examples() {
        let r = kappa_equal_q(&params(1.0, 1.0, 1.0, -1.0, 2.0)).unwrap();
        assert_relative_eq!(r.lambda_plus, 1.0, max_relative = 1e-14);
        assert_relative_eq!(r.lambda_minus, 0.2, max_relative = 1e-14);
        assert!(r.spectrum_preserving);

        let r = kappa_equal_q(&params(1.0, 0.5, 2.0, -1.0, 2.0)).unwrap();
        assert_relative_eq!(r.lambda_plus, 0.25, max_relative = 1e-14);
        assert_relative_eq!(r.lambda_minus, 1.0 / 12.0, max_relative = 1e-14);
        assert_relative_eq!(r.kappa, 1.0 / 12.0, max_relative = 1e-14);

        let r = kappa_equal_q(&params(1.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!((r.lambda_plus, r.lambda_minus, r.kappa), (1.0, 1.0, 1.0));

        assert!(matches!(
            kappa_equal_q(&params(1.0, 1.0, 1.0, -0.5, 2.0)),
            Err(Error::ConstraintViolated(_))
        ));
    }

    #[test]
    fn equal_q_trio_consistency_at_unit_frequency() {
        let p = params(1.0, 0.5, 2.0, -1.0, 2.0);
        let d1 = eigenvalues_d1(&p).unwrap().kappa;
        let eq = kappa_equal_q(&p).unwrap().kappa;
        let resc = kappa_rescaled_general(&p).unwrap().kappa;
        assert_relative_eq!(d1, eq, max_relative = 1e-12);
        assert_relative_eq!(d1, resc, max_relative = 1e-12);
    }

    #[test]
    fn equal_q_flags_non_unit_frequency_as_not_spectrum_preserving() {
        let r = kappa_equal_q(&params(2.0, 1.0, 1.0, -1.0, 1.0)).unwrap();
        assert!(!r.spectrum_preserving);
        let dense =
            dense_spectrum_oracle(&hessian_matrix(&params(2.0, 1.0, 1.0, -1.0, 1.0)).unwrap())
                .unwrap();
        // the written-out pair genuinely differs from the dense spectrum here
        assert!((r.kappa - dense[0]).abs() > 1e-3);
    }

    #[test]
    fn rescaled_general_examples() {
        let r = kappa_rescaled_general(&params(1.0, 1.0, 1.0, -1.0, 2.0)).unwrap();
        assert_relative_eq!(r.kappa, 0.2, max_relative = 1e-14);

        let r = kappa_rescaled_general(&params(1.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(r.kappa, 1.0);

        let r = kappa_rescaled_general(&params(1.0, 2.0, 1.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(r.kappa, 1.0 / 15.0, max_relative = 1e-13);
        assert!(!r.spectrum_preserving);
        // intentionally differs from the dense value 0.105572...
        let dense_kappa = eigenvalues_d1(&params(1.0, 2.0, 1.0, 0.0, 1.0))
            .unwrap()
            .kappa;
        assert!((r.kappa - dense_kappa).abs() > 0.03);
    }

    #[test]
    fn rescaled_reduction_with_zero_cross_term() {
        let p = params(1.0, 1.0, 0.0, 0.0, 1.0);
        let q = q_coefficients(&p).unwrap();
        let r = kappa_rescaled_general(&p).unwrap();
        assert_relative_eq!(r.kappa, p.gamma() * q.q11 / q.q, max_relative = 1e-14);
        assert_relative_eq!(
            r.kappa,
            eigenvalues_d1(&p).unwrap().kappa,
            max_relative = 1e-12
        );
    }

    #[test]
    fn lemma2_examples() {
        assert_eq!(lemma2_eigenvalues(0.0, 2.0).unwrap(), (2.0, 0.0));
        assert_eq!(lemma2_eigenvalues(1.0, 0.0).unwrap(), (1.0, -1.0));
        assert_eq!(lemma2_eigenvalues(3.0, 8.0).unwrap(), (9.0, -1.0));
        assert!(matches!(
            lemma2_eigenvalues(0.0, 0.0),
            Err(Error::TrivialCase(_))
        ));
    }

    #[test]
    fn lemma2_agrees_with_dense_t_matrix() {
        for d in [1usize, 2, 4] {
            let t = block_matrix(d, 0.0, 3.0, 8.0);
            let dense = dense_spectrum_oracle(&t).unwrap();
            let (plus, minus) = lemma2_eigenvalues(3.0, 8.0).unwrap();
            for i in 0..d {
                assert_abs_diff_eq!(dense[i], minus, epsilon = 1e-10);
                assert_abs_diff_eq!(dense[d + i], plus, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn perturbative_examples() {
        let r = kappa_perturbative(&params(1.0, 1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(r.kappa, 1.0, max_relative = 1e-14);
        assert!(r.approximate);

        let r = kappa_perturbative(&params(1.0, 1.0, 1.0, -1.0, 2.0)).unwrap();
        assert_relative_eq!(r.kappa, (6.0 - 10.0f64.sqrt()) / 5.0, max_relative = 1e-13);
        // the exact rate is 0.2; the gap is the price of the formal expansion
        assert!((r.kappa - 0.2).abs() > 0.3);

        let r = kappa_perturbative(&params(1.0, 2.0, 0.0, 0.25, 1.0)).unwrap();
        assert_relative_eq!(r.kappa, 2.0 / 3.0, max_relative = 1e-13);

        assert!(matches!(
            kappa_perturbative(&params(1.0, 1.0, 0.0, 0.0, 0.0)),
            Err(Error::DegenerateQ11)
        ));
    }

    #[test]
    fn perturbative_reduces_to_caldeira_lambda1() {
        for &(gamma, dpq, dpp) in &[(1.0, 0.0, 1.0), (2.0, 0.25, 1.0), (0.7, -0.05, 2.5)] {
            let p = params(1.0, gamma, 0.0, dpq, dpp);
            let pert = kappa_perturbative(&p).unwrap();
            let cald = kappa_caldeira_leggett(&p).unwrap();
            assert_relative_eq!(pert.kappa, cald.lambda_plus, max_relative = 1e-12);
        }
    }

    #[test]
    fn oracle_examples() {
        let eig = dense_spectrum_oracle(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(eig, vec![1.0; 4]);
        let eig =
            dense_spectrum_oracle(&DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 3.0, 8.0])).unwrap();
        assert_abs_diff_eq!(eig[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[1], 9.0, epsilon = 1e-12);
    }

    #[test]
    fn mixing_time_examples_and_monotonicity() {
        let m = mixing_time(1.0, 1.0, (-1.0f64).exp()).unwrap();
        assert_relative_eq!(m.t_mix, 1.0, max_relative = 1e-14);

        let m = mixing_time(0.5, 10.0, 0.1).unwrap();
        assert_relative_eq!(m.t_mix, 100.0f64.ln() / 0.5, max_relative = 1e-14);

        let m = mixing_time(2.0, 1.0, 1.0).unwrap();
        assert_eq!(m.t_mix, 0.0);

        assert!(mixing_time(0.0, 1.0, 0.1).is_err());
        assert!(mixing_time(1.0, -1.0, 0.1).is_err());
        assert!(mixing_time(1.0, 1.0, 0.0).is_err());

        // decreasing in kappa and epsilon, increasing in C
        let base = mixing_time(0.5, 10.0, 0.01).unwrap().t_mix;
        assert!(mixing_time(1.0, 10.0, 0.01).unwrap().t_mix < base);
        assert!(mixing_time(0.5, 10.0, 0.1).unwrap().t_mix < base);
        assert!(mixing_time(0.5, 20.0, 0.01).unwrap().t_mix > base);
    }

    #[test]
    fn degenerate_q_propagates() {
        let p = params(1.0, 1.0, 1.0, -1.0, 1.0); // Q = 0
        assert_eq!(eigenvalues_d1(&p), Err(Error::DegenerateQ));
        assert_eq!(hessian_matrix(&p).unwrap_err(), Error::DegenerateQ);
        assert_eq!(kappa_unit_frequency(&p).unwrap_err(), Error::DegenerateQ);
    }
}
