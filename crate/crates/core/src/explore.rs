//! Randomized search for probe covariances that violate the commutative
//! matrix inequality while satisfying its deformed counterpart, plus
//! deterministic gain sweeps. Every sample owns a private RNG stream derived
//! from (seed, sample index), so results do not depend on evaluation order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::certify::{check_form, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::matcore::RMat;
use crate::models::{bae_model, noise_matrix, CovarianceMatrix, MeasurementModel};
use crate::symplectic::{build_omega, standard_j, symplectic_spectrum, NCParams, SkewForm};

/// Configuration of one violation search.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub params: NCParams,
    pub gain: f64,
    pub samples: usize,
    pub seed: u64,
    pub refine_steps: usize,
}

/// A probe covariance whose commutative noise matrix fails the standard-form
/// check while passing the deformed one.
#[derive(Debug, Clone)]
pub struct ViolationWitness {
    pub w_cov: CovarianceMatrix,
    /// Smallest symplectic invariant of the noise matrix w.r.t. hbar J.
    pub lambda1_j: f64,
    /// Same w.r.t. the effective deformed form.
    pub lambda1_xi: f64,
    /// Whether the probe satisfies the deformed preparation inequality.
    pub physical: bool,
}

/// One row of a gain sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub gain: f64,
    pub lambda1_j: f64,
    pub lambda1_xi: f64,
    pub holds_j: bool,
    pub holds_xi: bool,
}

const SAMPLE_BUDGET: usize = 1000;
/// Sampled probes are rescaled to sit just above the physicality threshold.
const PHYSICAL_MARGIN: f64 = 1e-6;

/// Draws a random probe covariance W = M M^T + 0.01 I (entries of M uniform
/// on [-1, 1]) and rescales it so that W + (i/2) Omega >= 0 holds.
pub fn sample_probe_cov(rng: &mut impl Rng, p: &NCParams) -> CovarianceMatrix {
    let omega = build_omega(p);
    for _ in 0..SAMPLE_BUDGET {
        let mut m = RMat::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m.set(i, j, rng.gen_range(-1.0..=1.0));
            }
        }
        let mut w = m.mul(&m.transpose());
        for i in 0..4 {
            w.set(i, i, w.get(i, i) + 0.01);
        }
        let w = CovarianceMatrix::new(w).expect("M M^T + s I is a valid covariance");
        let spec = match symplectic_spectrum(&w, &omega) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let scaled = match w.scale((1.0 + PHYSICAL_MARGIN) / spec.values[0]) {
            Ok(s) => s,
            Err(_) => continue,
        };
        match check_form(&scaled, &omega, DEFAULT_TOL) {
            Ok(rep) if rep.holds => return scaled,
            _ => continue,
        }
    }
    unreachable!("physical probe sampling exhausted its {SAMPLE_BUDGET}-draw budget")
}

struct Evaluation {
    lambda1_j: f64,
    lambda1_xi: f64,
    holds_j: bool,
    holds_xi: bool,
}

impl Evaluation {
    fn objective(&self) -> f64 {
        (self.lambda1_xi - 1.0) - (self.lambda1_j - 1.0).max(0.0)
    }

    fn is_hit(&self) -> bool {
        self.holds_xi && !self.holds_j && self.lambda1_j < 1.0 && self.lambda1_xi >= 1.0
    }
}

fn evaluate(
    model_c: &MeasurementModel,
    xi_eff: &SkewForm,
    hj: &SkewForm,
    w: &CovarianceMatrix,
) -> Result<Evaluation> {
    let k_c = noise_matrix(model_c, None, w)?;
    let spec_j = symplectic_spectrum(&k_c, hj)?;
    let spec_xi = symplectic_spectrum(&k_c, xi_eff)?;
    let rep_j = check_form(&k_c, hj, DEFAULT_TOL)?;
    let rep_xi = check_form(&k_c, xi_eff, DEFAULT_TOL)?;
    Ok(Evaluation {
        lambda1_j: spec_j.values[0],
        lambda1_xi: spec_xi.values[0],
        holds_j: rep_j.holds,
        holds_xi: rep_xi.holds,
    })
}

/// Searches for a probe whose commutative noise matrix realizes the
/// violation scenario. Samples are drawn independently; each is refined by
/// coordinate descent on the covariance entries with halving steps. Returns
/// the first verified witness in sample order, or `None` when the budget is
/// exhausted.
pub fn find_violation(cfg: &SearchConfig) -> Result<Option<ViolationWitness>> {
    let p = cfg.params;
    let model_nc = bae_model(&p, cfg.gain)?;
    if !model_nc.xi_eff.is_nonsingular() {
        return Err(Error::SingularForm { det: model_nc.xi_eff.det() });
    }
    let xi_eff = model_nc.xi_eff.clone();
    let hj = standard_j(2).scale(p.hbar());
    let model_c = bae_model(&NCParams::commutative(p.hbar())?, cfg.gain)?;
    let omega = build_omega(&p);

    for index in 0..cfg.samples {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(index as u64);
        let mut w = sample_probe_cov(&mut rng, &p);
        let mut eval = evaluate(&model_c, &xi_eff, &hj, &w)?;

        let mut step = 0.25;
        for _ in 0..cfg.refine_steps {
            if eval.is_hit() {
                break;
            }
            for i in 0..4 {
                for j in i..4 {
                    for sign in [1.0, -1.0] {
                        let mut cand = w.as_mat().clone();
                        let delta = sign * step;
                        cand.set(i, j, cand.get(i, j) + delta);
                        if i != j {
                            cand.set(j, i, cand.get(j, i) + delta);
                        }
                        let cand = match CovarianceMatrix::new(cand) {
                            Ok(c) => c,
                            Err(_) => continue,
                        };
                        let physical = match check_form(&cand, &omega, DEFAULT_TOL) {
                            Ok(rep) => rep.holds,
                            Err(_) => false,
                        };
                        if !physical {
                            continue;
                        }
                        let cand_eval = match evaluate(&model_c, &xi_eff, &hj, &cand) {
                            Ok(e) => e,
                            Err(_) => continue,
                        };
                        if cand_eval.objective() > eval.objective() + 1e-15 {
                            w = cand;
                            eval = cand_eval;
                        }
                    }
                }
            }
            step *= 0.5;
        }

        if eval.is_hit() && verify_witness(&p, cfg.gain, &w)? {
            let physical = check_form(&w, &omega, DEFAULT_TOL)?.holds;
            return Ok(Some(ViolationWitness {
                w_cov: w,
                lambda1_j: eval.lambda1_j,
                lambda1_xi: eval.lambda1_xi,
                physical,
            }));
        }
    }
    Ok(None)
}

/// Recomputes the whole chain from scratch for a candidate witness.
pub fn verify_witness(p: &NCParams, gain: f64, w: &CovarianceMatrix) -> Result<bool> {
    let model_nc = bae_model(p, gain)?;
    let model_c = bae_model(&NCParams::commutative(p.hbar())?, gain)?;
    let hj = standard_j(2).scale(p.hbar());
    let eval = evaluate(&model_c, &model_nc.xi_eff, &hj, w)?;
    Ok(eval.is_hit())
}

/// Evaluates the violation diagnostics of a fixed probe over a logarithmic
/// gain grid; the effective form is rebuilt for every gain.
pub fn gain_sweep(
    p: &NCParams,
    w_cov: &CovarianceMatrix,
    g_from: f64,
    g_to: f64,
    steps: usize,
) -> Result<Vec<SweepRow>> {
    if !(g_from > 0.0 && g_to > g_from) || !g_from.is_finite() || !g_to.is_finite() {
        return Err(Error::InvalidRange(format!(
            "need 0 < g_from < g_to, got g_from = {g_from}, g_to = {g_to}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidRange(format!("steps = {steps} must be >= 2")));
    }
    let p0 = NCParams::commutative(p.hbar())?;
    let hj = standard_j(2).scale(p.hbar());
    let (ln_from, ln_to) = (g_from.ln(), g_to.ln());
    let mut rows = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64;
        let gain = (ln_from + t * (ln_to - ln_from)).exp();
        let model_nc = bae_model(p, gain)?;
        let model_c = bae_model(&p0, gain)?;
        let eval = evaluate(&model_c, &model_nc.xi_eff, &hj, w_cov)?;
        rows.push(SweepRow {
            gain,
            lambda1_j: eval.lambda1_j,
            lambda1_xi: eval.lambda1_xi,
            holds_j: eval.holds_j,
            holds_xi: eval.holds_xi,
        });
    }
    Ok(rows)
}
