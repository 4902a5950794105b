//! Exact Heisenberg-picture evolution of linear observables under quadratic
//! Hamiltonians on the deformed two-system phase space, carried out in jet
//! arithmetic: every coefficient is tracked as c0 + c_theta * theta +
//! c_eta * eta with second-order terms (theta^2, eta^2, theta*eta) dropped.
//!
//! The composite basis is fixed as
//! z = (X_a, Y_a, P_Xa, P_Ya, X_b, Y_b, P_Xb, P_Yb);
//! the first four entries belong to the object, the last four to the probe.

use crate::error::{Error, Result};
use crate::matcore::RMat;
use crate::symplectic::{NCParams, SkewForm};

/// Number of fundamental observables in the composite (object + probe) basis.
pub const BASIS_LEN: usize = 8;

/// Labels for the composite basis, in order.
pub const BASIS_LABELS: [&str; BASIS_LEN] =
    ["X_a", "Y_a", "P_Xa", "P_Ya", "X_b", "Y_b", "P_Xb", "P_Yb"];

/// First-order jet in the two deformation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub c0: f64,
    pub c_theta: f64,
    pub c_eta: f64,
}

impl Jet {
    pub const ZERO: Jet = Jet { c0: 0.0, c_theta: 0.0, c_eta: 0.0 };

    pub fn constant(c0: f64) -> Self {
        Jet { c0, c_theta: 0.0, c_eta: 0.0 }
    }

    pub fn theta_term(c_theta: f64) -> Self {
        Jet { c0: 0.0, c_theta, c_eta: 0.0 }
    }

    pub fn eta_term(c_eta: f64) -> Self {
        Jet { c0: 0.0, c_theta: 0.0, c_eta }
    }

    /// Value at numeric deformation parameters (first-order semantics).
    pub fn eval(&self, p: &NCParams) -> f64 {
        self.c0 + self.c_theta * p.theta() + self.c_eta * p.eta()
    }

    pub fn is_finite(&self) -> bool {
        self.c0.is_finite() && self.c_theta.is_finite() && self.c_eta.is_finite()
    }

    pub fn max_abs(&self) -> f64 {
        self.c0.abs().max(self.c_theta.abs()).max(self.c_eta.abs())
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet {
            c0: self.c0 + rhs.c0,
            c_theta: self.c_theta + rhs.c_theta,
            c_eta: self.c_eta + rhs.c_eta,
        }
    }
}

impl std::ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet {
            c0: self.c0 - rhs.c0,
            c_theta: self.c_theta - rhs.c_theta,
            c_eta: self.c_eta - rhs.c_eta,
        }
    }
}

impl std::ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { c0: -self.c0, c_theta: -self.c_theta, c_eta: -self.c_eta }
    }
}

/// First-order truncated product: the theta*eta, theta^2 and eta^2 channels
/// are dropped, so (a*b).c0 = a.c0 * b.c0 exactly.
impl std::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet {
            c0: self.c0 * rhs.c0,
            c_theta: self.c0 * rhs.c_theta + self.c_theta * rhs.c0,
            c_eta: self.c0 * rhs.c_eta + self.c_eta * rhs.c0,
        }
    }
}

impl std::ops::Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        Jet { c0: self.c0 * rhs, c_theta: self.c_theta * rhs, c_eta: self.c_eta * rhs }
    }
}

/// Square jet-valued matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JetMat {
    n: usize,
    e: Vec<Jet>,
}

impl JetMat {
    pub fn zeros(n: usize) -> Self {
        Self { n, e: vec![Jet::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.e[i * n + i] = Jet::constant(1.0);
        }
        m
    }

    /// Lifts a real matrix into the c0 channel.
    pub fn from_real(m: &RMat) -> Self {
        let n = m.dim();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.e[i * n + j] = Jet::constant(m.get(i, j));
            }
        }
        out
    }

    /// Builds c0 + theta*dtheta + eta*deta channel-wise from real patterns.
    pub fn from_channels(c0: &RMat, dtheta: &RMat, deta: &RMat) -> Self {
        let n = c0.dim();
        assert_eq!(dtheta.dim(), n);
        assert_eq!(deta.dim(), n);
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.e[i * n + j] = Jet {
                    c0: c0.get(i, j),
                    c_theta: dtheta.get(i, j),
                    c_eta: deta.get(i, j),
                };
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Jet {
        self.e[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Jet) {
        self.e[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.e[j * n + i] = self.e[i * n + j];
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let e = self.e.iter().zip(&other.e).map(|(a, b)| *a + *b).collect();
        Self { n: self.n, e }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let e = self.e.iter().zip(&other.e).map(|(a, b)| *a - *b).collect();
        Self { n: self.n, e }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, e: self.e.iter().map(|a| *a * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.e[i * n + k];
                if aik == Jet::ZERO {
                    continue;
                }
                for j in 0..n {
                    out.e[i * n + j] = out.e[i * n + j] + aik * other.e[k * n + j];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.e.iter().fold(0.0_f64, |m, v| m.max(v.max_abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.e.iter().all(Jet::is_finite)
    }

    /// Evaluates every entry at the given parameters.
    pub fn eval(&self, p: &NCParams) -> RMat {
        let n = self.n;
        let mut out = RMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.e[i * n + j].eval(p));
            }
        }
        out
    }
}

/// Linear observable over the composite basis with jet-valued coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub coeffs: [Jet; BASIS_LEN],
    pub constant: Jet,
}

impl Observable {
    pub fn zero() -> Self {
        Self { coeffs: [Jet::ZERO; BASIS_LEN], constant: Jet::ZERO }
    }

    /// The fundamental observable with the given basis index.
    pub fn basis(index: usize) -> Self {
        assert!(index < BASIS_LEN);
        let mut o = Self::zero();
        o.coeffs[index] = Jet::constant(1.0);
        o
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c = *c + *o;
        }
        out.constant = out.constant + other.constant;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c = *c - *o;
        }
        out.constant = out.constant - other.constant;
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = *c * s;
        }
        out.constant = out.constant * s;
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(Jet::is_finite) && self.constant.is_finite()
    }

    /// Coefficient vector at numeric parameters.
    pub fn eval_coeffs(&self, p: &NCParams) -> [f64; BASIS_LEN] {
        let mut out = [0.0; BASIS_LEN];
        for (o, c) in out.iter_mut().zip(&self.coeffs) {
            *o = c.eval(p);
        }
        out
    }
}

/// Quadratic Hamiltonian H = (1/2) z^T B z acting for a fixed duration.
#[derive(Debug, Clone)]
pub struct QuadraticHamiltonian {
    b: RMat,
    duration: f64,
}

impl QuadraticHamiltonian {
    pub fn new(b: RMat, duration: f64) -> Result<Self> {
        if b.dim() != BASIS_LEN {
            return Err(Error::DimensionMismatch { expected: BASIS_LEN, got: b.dim() });
        }
        b.check_symmetric(1e-12 * (1.0 + b.max_abs()))?;
        if duration <= 0.0 || !duration.is_finite() {
            return Err(Error::InvalidParams(format!("duration = {duration} must be > 0")));
        }
        Ok(Self { b, duration })
    }

    pub fn coupling(&self) -> &RMat {
        &self.b
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

/// Jet-valued commutator table of the composite algebra:
/// [z_i, z_j] = i * entries[i][j] with entries = hbar*J8 + theta-pattern +
/// eta-pattern, block-diagonal over object and probe.
#[derive(Debug, Clone)]
pub struct CommutatorForm {
    entries: JetMat,
    hbar: f64,
}

impl CommutatorForm {
    pub fn new(p: &NCParams) -> Self {
        let mut m = JetMat::zeros(BASIS_LEN);
        for sys in 0..2 {
            let o = 4 * sys;
            // position-position and momentum-momentum deformations
            m.set(o, o + 1, Jet::theta_term(1.0));
            m.set(o + 1, o, Jet::theta_term(-1.0));
            m.set(o + 2, o + 3, Jet::eta_term(1.0));
            m.set(o + 3, o + 2, Jet::eta_term(-1.0));
            // canonical pairs
            m.set(o, o + 2, Jet::constant(p.hbar()));
            m.set(o + 1, o + 3, Jet::constant(p.hbar()));
            m.set(o + 2, o, Jet::constant(-p.hbar()));
            m.set(o + 3, o + 1, Jet::constant(-p.hbar()));
        }
        Self { entries: m, hbar: p.hbar() }
    }

    pub fn entries(&self) -> &JetMat {
        &self.entries
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// The composite commutator form evaluated at numeric parameters: an 8x8
/// real skew form, block-diagonal with one deformed block per system.
pub fn composite_omega(p: &NCParams) -> SkewForm {
    let real = CommutatorForm::new(p).entries.eval(p);
    SkewForm::new(real).expect("composite form is skew by construction")
}

/// gamma in [a, b] = i*gamma for linear observables a, b.
pub fn commutator(a: &Observable, b: &Observable, form: &CommutatorForm) -> Jet {
    let w = &form.entries;
    let mut acc = Jet::ZERO;
    for i in 0..BASIS_LEN {
        let ai = a.coeffs[i];
        if ai == Jet::ZERO {
            continue;
        }
        for j in 0..BASIS_LEN {
            acc = acc + ai * w.get(i, j) * b.coeffs[j];
        }
    }
    acc
}

/// Generator of the coefficient flow: v' = -(1/hbar) B Omega v.
fn generator(h: &QuadraticHamiltonian, form: &CommutatorForm) -> JetMat {
    JetMat::from_real(&h.b).mul(&form.entries).scale(-1.0 / form.hbar)
}

/// exp(M) by scaling and squaring with a truncated series; exact for
/// nilpotent generators because the series hits a zero term.
fn expm(m: &JetMat) -> Result<JetMat> {
    let n = m.dim();
    let norm = m.max_abs() * n as f64;
    if !norm.is_finite() {
        return Err(Error::NonFiniteResult);
    }
    let mut squarings = 0u32;
    let mut scaled = m.clone();
    while scaled.max_abs() * n as f64 > 0.5 && squarings < 64 {
        scaled = scaled.scale(0.5);
        squarings += 1;
    }
    let mut acc = JetMat::identity(n);
    let mut term = JetMat::identity(n);
    let mut converged = false;
    for k in 1..=40 {
        term = term.mul(&scaled).scale(1.0 / k as f64);
        if term.max_abs() == 0.0 {
            converged = true;
            break;
        }
        acc = acc.add(&term);
        if term.max_abs() <= 1e-18 * acc.max_abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonFiniteResult);
    }
    for _ in 0..squarings {
        acc = acc.mul(&acc);
    }
    if !acc.is_finite() {
        return Err(Error::NonFiniteResult);
    }
    Ok(acc)
}

/// Heisenberg evolution of `a0` for the duration of `h`.
pub fn evolve(
    a0: &Observable,
    h: &QuadraticHamiltonian,
    form: &CommutatorForm,
) -> Result<Observable> {
    let flow = expm(&generator(h, form).scale(h.duration))?;
    apply_flow(&flow, a0)
}

/// Sequential evolution through `stages` in physical time order.
pub fn evolve_piecewise(
    a0: &Observable,
    stages: &[QuadraticHamiltonian],
    form: &CommutatorForm,
) -> Result<Observable> {
    if stages.is_empty() {
        return Err(Error::InvalidParams("stage list must be nonempty".into()));
    }
    let mut state = a0.clone();
    for h in stages {
        state = evolve(&state, h, form)?;
    }
    Ok(state)
}

fn apply_flow(flow: &JetMat, a0: &Observable) -> Result<Observable> {
    let mut out = Observable::zero();
    for i in 0..BASIS_LEN {
        let mut acc = Jet::ZERO;
        for j in 0..BASIS_LEN {
            acc = acc + flow.get(i, j) * a0.coeffs[j];
        }
        out.coeffs[i] = acc;
    }
    out.constant = a0.constant;
    if !out.is_finite() {
        return Err(Error::NonFiniteResult);
    }
    Ok(out)
}

/// Coupling of the amplifier interaction: H = alpha (P_Xb X_a + P_Yb Y_a),
/// acting for `duration`; the gain is alpha * duration.
pub fn bae_hamiltonian(alpha: f64, duration: f64) -> Result<QuadraticHamiltonian> {
    let mut b = RMat::zeros(BASIS_LEN);
    b.set(0, 6, alpha);
    b.set(6, 0, alpha);
    b.set(1, 7, alpha);
    b.set(7, 1, alpha);
    QuadraticHamiltonian::new(b, duration)
}

/// The two-stage transducer protocol: a swap-in stage of unit gain over
/// [0, t1] followed by the reversed coupling over [t1, t2].
pub fn nqt_stages(t1: f64, t2: f64) -> Result<Vec<QuadraticHamiltonian>> {
    if !(t1 > 0.0 && t2 > t1) {
        return Err(Error::InvalidParams(format!(
            "stage times must satisfy 0 < t1 < t2, got t1 = {t1}, t2 = {t2}"
        )));
    }
    let stage1 = bae_hamiltonian(1.0 / t1, t1)?;
    let t = t2 - t1;
    let mut b = RMat::zeros(BASIS_LEN);
    let c = -1.0 / t;
    b.set(2, 4, c);
    b.set(4, 2, c);
    b.set(3, 5, c);
    b.set(5, 3, c);
    let stage2 = QuadraticHamiltonian::new(b, t)?;
    Ok(vec![stage1, stage2])
}

/// Evolved output vector (M_1, M_2, B_1, B_2) of the amplifier model:
/// (X_b/G, Y_b/G, P_Xa, P_Ya) after the interaction.
pub fn bae_output_vector(p: &NCParams, gain: f64) -> Result<[Observable; 4]> {
    if gain <= 0.0 || !gain.is_finite() {
        return Err(Error::InvalidGain(gain));
    }
    let form = CommutatorForm::new(p);
    let h = bae_hamiltonian(gain, 1.0)?;
    let ev = |idx: usize| evolve(&Observable::basis(idx), &h, &form);
    Ok([
        ev(4)?.scale(1.0 / gain),
        ev(5)?.scale(1.0 / gain),
        ev(2)?,
        ev(3)?,
    ])
}

/// Evolved output vector (X_b, Y_b, P_Xa, P_Ya) of the transducer model.
pub fn nqt_output_vector(p: &NCParams) -> Result<[Observable; 4]> {
    let form = CommutatorForm::new(p);
    let stages = nqt_stages(1.0, 2.0)?;
    let ev = |idx: usize| evolve_piecewise(&Observable::basis(idx), &stages, &form);
    Ok([ev(4)?, ev(5)?, ev(2)?, ev(3)?])
}

/// Reads (Lambda, Pi) off K = v_out - Z^in = Lambda Z^in + Pi W^in.
/// Exact coefficient extraction, no fitting.
pub fn extract_linear_model(v_out: &[Observable; 4]) -> Result<(JetMat, JetMat)> {
    let mut lambda = JetMat::zeros(4);
    let mut pi = JetMat::zeros(4);
    for (alpha, v) in v_out.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonLinearModel("non-finite coefficient".into()));
        }
        if v.constant.max_abs() > 1e-12 {
            return Err(Error::NonLinearModel(format!(
                "output {alpha} has a nonzero constant part"
            )));
        }
        let k = v.sub(&Observable::basis(alpha));
        for j in 0..4 {
            lambda.set(alpha, j, k.coeffs[j]);
            pi.set(alpha, j, k.coeffs[4 + j]);
        }
    }
    Ok((lambda, pi))
}

/// Commutator matrix of the output vector: T[a][b] with
/// [V_a^out, V_b^out] = i T[a][b].
pub fn output_commutator_matrix(v_out: &[Observable; 4], form: &CommutatorForm) -> JetMat {
    let mut t = JetMat::zeros(4);
    for a in 0..4 {
        for b in 0..4 {
            t.set(a, b, commutator(&v_out[a], &v_out[b], form));
        }
    }
    t
}
