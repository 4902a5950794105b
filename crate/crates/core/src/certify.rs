//! Uncertainty-principle certificates. Every check reduces to the positivity
//! of a Hermitian matrix A + (i/2) Xi; whenever Xi is nonsingular and A is
//! positive-definite the dual route through the Xi-symplectic spectrum is
//! reported alongside (positivity holds iff the smallest invariant is >= 1).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{is_psd, HermitianMatrix, RMat};
use crate::models::{noise_matrix_raw, nqt_model, CovarianceMatrix};
use crate::symplectic::{
    e_block, standard_j, symplectic_spectrum_raw, NCParams, SkewForm,
};

/// Relative tolerance used by the checkers unless overridden.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Principle {
    Rsup,
    OupMatrix,
    Ncoup,
    FormGeneric,
    NqtFeasibility,
}

impl Principle {
    pub fn as_str(&self) -> &'static str {
        match self {
            Principle::Rsup => "RSUP",
            Principle::OupMatrix => "OUP_MATRIX",
            Principle::Ncoup => "NCOUP",
            Principle::FormGeneric => "FORM_GENERIC",
            Principle::NqtFeasibility => "NQT_FEASIBILITY",
        }
    }
}

/// Machine-readable certificate for one positivity check.
#[derive(Debug, Clone)]
pub struct CertReport {
    pub principle: Principle,
    pub holds: bool,
    /// Smallest eigenvalue of the Hermitian test matrix.
    pub lambda_min_herm: f64,
    /// Smallest Xi-symplectic eigenvalue, when the form admits one.
    pub symplectic_lambda1: Option<f64>,
    /// Eigenvector of the minimal Hermitian eigenvalue.
    pub witness: Option<Vec<Complex64>>,
    pub notes: String,
}

pub(crate) fn check_form_raw(
    a: &RMat,
    xi: &SkewForm,
    tol: f64,
    principle: Principle,
) -> Result<CertReport> {
    if a.dim() != xi.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: xi.dim() });
    }
    let herm = HermitianMatrix::from_parts(a, &xi.as_mat().scale(0.5))?;
    let psd = is_psd(&herm, tol)?;

    let mut symplectic_lambda1 = None;
    if xi.is_nonsingular() {
        if let Ok(spec) = symplectic_spectrum_raw(a, xi) {
            symplectic_lambda1 = Some(spec.values[0]);
        }
    }

    Ok(CertReport {
        principle,
        holds: psd.is_psd,
        lambda_min_herm: psd.lambda_min,
        symplectic_lambda1,
        witness: Some(psd.witness),
        notes: String::new(),
    })
}

/// Positivity of A + (i/2) Xi at relative tolerance `tol`.
pub fn check_form(a: &CovarianceMatrix, xi: &SkewForm, tol: f64) -> Result<CertReport> {
    check_form_raw(a.as_mat(), xi, tol, Principle::FormGeneric)
}

/// Preparation uncertainty: positivity of Sigma + (i hbar/2) J.
pub fn rsup(sigma: &CovarianceMatrix, hbar: f64, tol: f64) -> Result<CertReport> {
    if hbar <= 0.0 || !hbar.is_finite() {
        return Err(Error::InvalidParams(format!("hbar = {hbar} must be > 0")));
    }
    let j = standard_j(sigma.dim() / 2).scale(hbar);
    check_form_raw(sigma.as_mat(), &j, tol, Principle::Rsup)
}

/// Matrix noise-disturbance inequality K + (i/2)(G + Gamma - T) >= 0.
/// With T = 0 this is the commutative matrix trade-off; a nonzero T is its
/// noncommutative extension for non-commuting outputs.
pub fn oup_matrix(
    k: &CovarianceMatrix,
    g_mat: &SkewForm,
    gamma: &SkewForm,
    t_mat: &SkewForm,
    tol: f64,
) -> Result<CertReport> {
    let dim = k.dim();
    for m in [g_mat, gamma, t_mat] {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: m.dim() });
        }
    }
    let combined = SkewForm::new(g_mat.as_mat().add(gamma.as_mat()).sub(t_mat.as_mat()))?;
    let principle = if t_mat.as_mat().max_abs() == 0.0 {
        Principle::OupMatrix
    } else {
        Principle::Ncoup
    };
    check_form_raw(k.as_mat(), &combined, tol, principle)
}

/// Scalar trade-off report: the three-term bound and the bare-product bound
/// against |<[A, B]>|/2.
#[derive(Debug, Clone, Copy)]
pub struct ScalarOzawa {
    /// eps*chi + eps*sigma_B + sigma_A*chi
    pub three_term_lhs: f64,
    /// eps*chi alone (the independent-intervention form)
    pub product_lhs: f64,
    /// |c|/2
    pub bound: f64,
    pub three_term_holds: bool,
    pub product_holds: bool,
}

/// Evaluates the scalar noise-disturbance inequalities for one pair.
pub fn scalar_ozawa(
    eps: f64,
    chi: f64,
    sigma_a: f64,
    sigma_b: f64,
    c_expect: f64,
) -> Result<ScalarOzawa> {
    for (name, v) in [("eps", eps), ("chi", chi), ("sigma_a", sigma_a), ("sigma_b", sigma_b)] {
        if v < 0.0 || !v.is_finite() {
            return Err(Error::NegativeInput { name, value: v });
        }
    }
    if !c_expect.is_finite() {
        return Err(Error::NegativeInput { name: "c_expect", value: c_expect });
    }
    let three_term_lhs = eps * chi + eps * sigma_b + sigma_a * chi;
    let product_lhs = eps * chi;
    let bound = 0.5 * c_expect.abs();
    Ok(ScalarOzawa {
        three_term_lhs,
        product_lhs,
        bound,
        three_term_holds: three_term_lhs >= bound,
        product_holds: product_lhs >= bound,
    })
}

/// Feasibility of the noiseless-transducer inequality on the deformed
/// phase space. With theta > 0 a nonzero probe momentum covariance block
/// forces a violation; with theta = 0 the check reduces to a 2x2 form on
/// the momentum blocks with skew part -3 eta E.
pub fn nqt_feasibility(
    z_cov: &CovarianceMatrix,
    w_cov: &CovarianceMatrix,
    p: &NCParams,
    tol: f64,
) -> Result<CertReport> {
    for m in [z_cov, w_cov] {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: m.dim() });
        }
    }
    let w22 = w_cov.block(1, 1);
    let w22_nonzero = w22.max_abs() > 1e-12 * (1.0 + w_cov.as_mat().max_abs());

    // reduced 2x2 test: Z22 + W22 + (eta/hbar)(Z12 E)_S - (3 i eta / 2) E >= 0
    let z12 = z_cov.block(0, 1);
    let a2 = z_cov
        .block(1, 1)
        .add(&w22)
        .add(&z12.mul(&e_block()).symmetric_part().scale(p.eta() / p.hbar()));
    let xi2 = SkewForm::new(e_block().scale(-3.0 * p.eta()))?;
    let reduced = check_form_raw(&a2, &xi2, tol, Principle::NqtFeasibility)?;

    if p.theta() > 0.0 && w22_nonzero {
        // full 4x4 form for the reported eigenvalue
        let model = nqt_model(p)?;
        let k_nc = noise_matrix_raw(&model, Some(z_cov.as_mat()), w_cov.as_mat())?;
        let full = check_form_raw(&k_nc, &model.xi_eff, tol, Principle::NqtFeasibility)?;
        return Ok(CertReport {
            principle: Principle::NqtFeasibility,
            holds: false,
            lambda_min_herm: full.lambda_min_herm,
            symplectic_lambda1: None,
            witness: full.witness,
            notes: "incompatible with noncommutative quantum mechanics: \
                    theta > 0 forces a zero probe momentum covariance; \
                    interchanging the roles of positions and momenta forces eta = 0 likewise"
                .into(),
        });
    }

    Ok(CertReport {
        symplectic_lambda1: None,
        notes: if p.theta() > 0.0 {
            "probe momentum covariance block vanishes; reduced test applied".into()
        } else {
            String::new()
        },
        ..reduced
    })
}
