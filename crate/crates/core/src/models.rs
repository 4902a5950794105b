//! Closed-form measurement models: the backaction-evading amplifier and the
//! noiseless quadrature transducer, commutative and to first order in the
//! deformation parameters. Interaction matrices, noise-disturbance matrices
//! and effective skew forms are assembled in jet arithmetic so that every
//! product is truncated at first order by construction.

use crate::algebra::JetMat;
use crate::error::{Error, Result};
use crate::matcore::RMat;
use crate::symplectic::{e_block, standard_j, NCParams, SkewForm};

/// Real symmetric matrix of symmetrized second moments.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    mat: RMat,
}

impl CovarianceMatrix {
    pub fn new(mat: RMat) -> Result<Self> {
        let n = mat.dim();
        if n == 0 || n % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: 2, got: n });
        }
        mat.check_symmetric(1e-12 * (1.0 + mat.max_abs()))?;
        for i in 0..n {
            let d = mat.get(i, i);
            if d < -1e-12 || d.is_nan() {
                return Err(Error::NegativeDiagonal { index: i, value: d });
            }
        }
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mat.get(i, j)
    }

    pub fn as_mat(&self) -> &RMat {
        &self.mat
    }

    pub fn scale(&self, s: f64) -> Result<Self> {
        Self::new(self.mat.scale(s))
    }

    /// 2x2 block (bi, bj) of a 4x4 covariance matrix.
    pub(crate) fn block(&self, bi: usize, bj: usize) -> RMat {
        let mut out = RMat::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                out.set(i, j, self.mat.get(2 * bi + i, 2 * bj + j));
            }
        }
        out
    }
}

/// Block patterns of the 4x4 interaction algebra in the (X, Y, P_X, P_Y)
/// ordering: E sits in one quadrant, zeros elsewhere.
pub(crate) mod blocks {
    use super::{e_block, RMat};

    fn place(bi: usize, bj: usize) -> RMat {
        let e = e_block();
        let mut m = RMat::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                m.set(2 * bi + i, 2 * bj + j, e.get(i, j));
            }
        }
        m
    }

    /// E in the upper-left block.
    pub fn r11() -> RMat {
        place(0, 0)
    }

    /// E in the upper-right block.
    pub fn r12() -> RMat {
        place(0, 1)
    }

    /// E in the lower-left block.
    pub fn r21() -> RMat {
        place(1, 0)
    }

    /// E in the lower-right block.
    pub fn r22() -> RMat {
        place(1, 1)
    }

    /// diag(I/g, -g I): the commutative amplifier response.
    pub fn pi_c(g: f64) -> RMat {
        let mut m = RMat::zeros(4);
        m.set(0, 0, 1.0 / g);
        m.set(1, 1, 1.0 / g);
        m.set(2, 2, -g);
        m.set(3, 3, -g);
        m
    }

    /// diag(0, -I): the commutative transducer response.
    pub fn nqt_c() -> RMat {
        let mut m = RMat::zeros(4);
        m.set(2, 2, -1.0);
        m.set(3, 3, -1.0);
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Bae,
    Nqt,
}

/// Linear measurement model data: K = Lambda Z^in + Pi W^in, together with
/// the derived skew matrices entering the matrix uncertainty inequalities.
#[derive(Debug, Clone)]
pub struct MeasurementModel {
    pub kind: ModelKind,
    pub params: NCParams,
    /// Gain of the amplifier model; absent for the transducer.
    pub gain: Option<f64>,
    /// First-order interaction matrices, evaluated at the parameters.
    pub lambda: RMat,
    pub pi: RMat,
    /// Gamma = Omega Lambda^T - Lambda Omega^T at first order.
    pub gamma: RMat,
    /// T = (I+Lambda) Omega (I+Lambda^T) + Pi Omega Pi^T at first order.
    pub tmat: RMat,
    /// Effective skew form whose positivity test certifies the model's
    /// uncertainty inequality on the commutative noise matrix.
    pub xi_eff: SkewForm,
    pub(crate) lambda_jet: JetMat,
    pub(crate) pi_jet: JetMat,
}

/// One-system commutator form as a jet matrix: hbar J + theta R11 + eta R22.
pub(crate) fn omega_jet(hbar: f64) -> JetMat {
    JetMat::from_channels(
        &standard_j(2).as_mat().scale(hbar),
        &blocks::r11(),
        &blocks::r22(),
    )
}

fn derived_skew_parts(lambda_jet: &JetMat, pi_jet: &JetMat, hbar: f64) -> (JetMat, JetMat) {
    let om = omega_jet(hbar);
    let id = JetMat::identity(4);
    let gamma = om
        .mul(&lambda_jet.transpose())
        .sub(&lambda_jet.mul(&om.transpose()));
    let i_plus = id.add(lambda_jet);
    let tmat = i_plus
        .mul(&om)
        .mul(&i_plus.transpose())
        .add(&pi_jet.mul(&om).mul(&pi_jet.transpose()));
    (gamma, tmat)
}

/// Backaction-evading amplifier with gain `g`:
/// Lambda = -(eta g^2 / 2 hbar) R21, Pi = Pi^C + (theta g / 2 hbar) R12,
/// Gamma = -eta g^2 R22, Xi_eff = hbar J - (theta/g^2) R11 - eta g^2 R22.
pub fn bae_model(p: &NCParams, g: f64) -> Result<MeasurementModel> {
    if g <= 0.0 || !g.is_finite() {
        return Err(Error::InvalidGain(g));
    }
    let hbar = p.hbar();
    let lambda_jet = JetMat::from_channels(
        &RMat::zeros(4),
        &RMat::zeros(4),
        &blocks::r21().scale(-g * g / (2.0 * hbar)),
    );
    let pi_jet = JetMat::from_channels(
        &blocks::pi_c(g),
        &blocks::r12().scale(g / (2.0 * hbar)),
        &RMat::zeros(4),
    );
    let (gamma_jet, tmat_jet) = derived_skew_parts(&lambda_jet, &pi_jet, hbar);

    let xi_eff_mat = standard_j(2)
        .as_mat()
        .scale(hbar)
        .sub(&blocks::r11().scale(p.theta() / (g * g)))
        .sub(&blocks::r22().scale(p.eta() * g * g));

    Ok(MeasurementModel {
        kind: ModelKind::Bae,
        params: *p,
        gain: Some(g),
        lambda: lambda_jet.eval(p),
        pi: pi_jet.eval(p),
        gamma: gamma_jet.eval(p),
        tmat: tmat_jet.eval(p),
        xi_eff: SkewForm::new(xi_eff_mat)?,
        lambda_jet,
        pi_jet,
    })
}

/// Noiseless quadrature transducer:
/// Lambda = Lambda^C - (eta / 2 hbar) R21, Pi = Pi^C + (theta / 2 hbar) R12
/// with Lambda^C = Pi^C = diag(0, -I); the effective form is
/// Omega + Gamma - T = -3 eta R22 at first order.
pub fn nqt_model(p: &NCParams) -> Result<MeasurementModel> {
    let hbar = p.hbar();
    let lc = blocks::nqt_c();
    let lambda_jet = JetMat::from_channels(
        &lc,
        &RMat::zeros(4),
        &blocks::r21().scale(-1.0 / (2.0 * hbar)),
    );
    let pi_jet = JetMat::from_channels(
        &lc,
        &blocks::r12().scale(1.0 / (2.0 * hbar)),
        &RMat::zeros(4),
    );
    let (gamma_jet, tmat_jet) = derived_skew_parts(&lambda_jet, &pi_jet, hbar);
    let xi_eff_jet = omega_jet(hbar).add(&gamma_jet).sub(&tmat_jet);

    Ok(MeasurementModel {
        kind: ModelKind::Nqt,
        params: *p,
        gain: None,
        lambda: lambda_jet.eval(p),
        pi: pi_jet.eval(p),
        gamma: gamma_jet.eval(p),
        tmat: tmat_jet.eval(p),
        xi_eff: SkewForm::new(xi_eff_jet.eval(p))?,
        lambda_jet,
        pi_jet,
    })
}

impl MeasurementModel {
    /// The skew form Omega + Gamma - T entering the noncommutative matrix
    /// inequality on this model's noise matrix.
    pub fn ncoup_form(&self) -> Result<SkewForm> {
        let om = omega_jet(self.params.hbar()).eval(&self.params);
        SkewForm::new(om.add(&self.gamma).sub(&self.tmat))
    }
}

/// Noise-disturbance matrix K = Lambda Z Lambda^T + Pi W Pi^T at the model's
/// order (second-order channels drop out of the jet products). The object
/// covariance may be omitted; it only contributes for the transducer.
pub fn noise_matrix(
    model: &MeasurementModel,
    z_cov: Option<&CovarianceMatrix>,
    w_cov: &CovarianceMatrix,
) -> Result<CovarianceMatrix> {
    let raw = noise_matrix_raw(model, z_cov.map(CovarianceMatrix::as_mat), w_cov.as_mat())?;
    CovarianceMatrix::new(raw)
}

pub(crate) fn noise_matrix_raw(
    model: &MeasurementModel,
    z_cov: Option<&RMat>,
    w_cov: &RMat,
) -> Result<RMat> {
    if w_cov.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: w_cov.dim() });
    }
    let z = match z_cov {
        Some(z) => {
            if z.dim() != 4 {
                return Err(Error::DimensionMismatch { expected: 4, got: z.dim() });
            }
            JetMat::from_real(z)
        }
        None => JetMat::zeros(4),
    };
    let w = JetMat::from_real(w_cov);
    let k = model
        .lambda_jet
        .mul(&z)
        .mul(&model.lambda_jet.transpose())
        .add(&model.pi_jet.mul(&w).mul(&model.pi_jet.transpose()));
    // exact symmetrization against rounding in the triple products
    Ok(k.eval(&model.params).symmetric_part())
}

/// Scalar noise and disturbance measures: the root-mean-square diagonal of
/// the noise-disturbance matrix, (eps_1, eps_2) and (chi_1, chi_2).
pub fn scalar_measures(k: &CovarianceMatrix) -> Result<([f64; 2], [f64; 2])> {
    if k.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: k.dim() });
    }
    let mut diag = [0.0; 4];
    for (i, d) in diag.iter_mut().enumerate() {
        let v = k.get(i, i);
        if v < -1e-12 {
            return Err(Error::NegativeDiagonal { index: i, value: v });
        }
        *d = v.max(0.0).sqrt();
    }
    Ok(([diag[0], diag[1]], [diag[2], diag[3]]))
}
