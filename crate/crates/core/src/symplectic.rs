//! Symplectic forms (standard and deformed), Seiberg-Witten maps, and the
//! Xi-symplectic (Williamson) spectrum of a positive matrix.
//!
//! The Xi-symplectic eigenvalues of a symmetric matrix A are the positive
//! eigenvalues of 2i Xi^-1 A. For positive-definite A they are computed from
//! the Hermitian matrix 2i A^(1/2) Xi^-1 A^(1/2); for semidefinite A a
//! characteristic-polynomial fallback with an explicit realness check is used.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{self, herm_eigen, HermitianMatrix, RMat};
use crate::models::CovarianceMatrix;

/// Deformation parameters (theta, eta, hbar) with the derived quantities
/// xi = theta*eta/hbar^2 and the symmetric map parameters lambda, mu with
/// lambda*mu = (1 + sqrt(1 - xi))/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NCParams {
    theta: f64,
    eta: f64,
    hbar: f64,
    xi: f64,
    lambda_sw: f64,
    mu_sw: f64,
}

impl NCParams {
    pub fn new(theta: f64, eta: f64, hbar: f64) -> Result<Self> {
        if theta < 0.0 || !theta.is_finite() {
            return Err(Error::InvalidParams(format!("theta = {theta} must be >= 0")));
        }
        if eta < 0.0 || !eta.is_finite() {
            return Err(Error::InvalidParams(format!("eta = {eta} must be >= 0")));
        }
        if hbar <= 0.0 || !hbar.is_finite() {
            return Err(Error::InvalidParams(format!("hbar = {hbar} must be > 0")));
        }
        let xi = theta * eta / (hbar * hbar);
        if xi >= 1.0 || xi.is_nan() {
            return Err(Error::InvalidParams(format!(
                "xi = theta*eta/hbar^2 = {xi} must be < 1"
            )));
        }
        let product = 0.5 * (1.0 + (1.0 - xi).sqrt());
        let lambda_sw = product.sqrt();
        Ok(Self { theta, eta, hbar, xi, lambda_sw, mu_sw: lambda_sw })
    }

    /// Commutative limit with the given hbar.
    pub fn commutative(hbar: f64) -> Result<Self> {
        Self::new(0.0, 0.0, hbar)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Default symmetric choice lambda = mu = sqrt((1 + sqrt(1 - xi))/2).
    pub fn lambda_sw(&self) -> f64 {
        self.lambda_sw
    }

    pub fn mu_sw(&self) -> f64 {
        self.mu_sw
    }

    pub fn is_commutative(&self) -> bool {
        self.theta == 0.0 && self.eta == 0.0
    }
}

/// Real skew-symmetric matrix of even dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewForm {
    mat: RMat,
}

impl SkewForm {
    pub fn new(mat: RMat) -> Result<Self> {
        let n = mat.dim();
        if n == 0 || n % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: 2, got: n });
        }
        mat.check_skew(matcore::STRUCT_TOL.max(1e-12 * (1.0 + mat.max_abs())))?;
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

    pub fn scale(&self, s: f64) -> Self {
        Self { mat: self.mat.scale(s) }
    }

    pub fn det(&self) -> f64 {
        self.mat.det()
    }

    /// True when |det| clears the relative singularity threshold.
    pub fn is_nonsingular(&self) -> bool {
        let scale = (1.0 + self.mat.max_abs()).powi(self.dim() as i32);
        self.det().abs() > 1e-12 * scale
    }
}

/// The 2x2 block E = [[0, 1], [-1, 0]].
pub(crate) fn e_block() -> RMat {
    RMat::from_rows(2, &[0.0, 1.0, -1.0, 0.0])
}

/// Standard symplectic form on 2n dimensions: [[0, I], [-I, 0]].
pub fn standard_j(n: usize) -> SkewForm {
    assert!(n >= 1, "mode count must be positive");
    let mut m = RMat::zeros(2 * n);
    for i in 0..n {
        m.set(i, n + i, 1.0);
        m.set(n + i, i, -1.0);
    }
    SkewForm { mat: m }
}

/// Deformed commutator form for one 2-D system in the (X, Y, P_X, P_Y) basis:
/// [[theta E, hbar I], [-hbar I, eta E]].
pub fn build_omega(p: &NCParams) -> SkewForm {
    let mut m = standard_j(2).mat.scale(p.hbar);
    m.set(0, 1, p.theta);
    m.set(1, 0, -p.theta);
    m.set(2, 3, p.eta);
    m.set(3, 2, -p.eta);
    SkewForm { mat: m }
}

/// Linear map S with hbar S J S^T = Omega, i.e. a Darboux change of variables
/// between the deformed and the standard algebra. `lambda_choice` selects one
/// member of the (physically equivalent) family.
pub fn sw_map(p: &NCParams, lambda_choice: f64) -> Result<RMat> {
    if lambda_choice <= 0.0 || !lambda_choice.is_finite() {
        return Err(Error::InvalidLambda(lambda_choice));
    }
    let product = 0.5 * (1.0 + (1.0 - p.xi).sqrt());
    let lambda = lambda_choice;
    let mu = product / lambda;
    let b = -p.theta / (2.0 * lambda * p.hbar);
    let c = p.eta / (2.0 * mu * p.hbar);
    let mut s = RMat::zeros(4);
    for i in 0..2 {
        s.set(i, i, lambda);
        s.set(2 + i, 2 + i, mu);
    }
    // upper-right block b*E, lower-left block c*E
    s.set(0, 3, b);
    s.set(1, 2, -b);
    s.set(2, 1, c);
    s.set(3, 0, -c);
    Ok(s)
}

/// Xi-symplectic spectrum: the n positive eigenvalues of 2i Xi^-1 A in
/// ascending order, with eigenvectors normalized to u^H Xi u = +-2i.
#[derive(Debug, Clone)]
pub struct SymplecticSpectrum {
    /// Positive eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Eigenvectors for +values[j], normalized to u^H Xi u = 2i.
    pub pos_vectors: Vec<Vec<Complex64>>,
    /// Eigenvectors for -values[j], normalized to v^H Xi v = -2i.
    pub neg_vectors: Vec<Vec<Complex64>>,
}

/// Smallest Xi-symplectic eigenvalue together with its direction(s).
#[derive(Debug, Clone)]
pub struct MinUncertainty {
    /// One direction, or two Xi-orthogonal ones when the bottom of the
    /// spectrum is degenerate.
    pub directions: Vec<Vec<Complex64>>,
    /// u1^H (A + (i/2) Xi) u1; equals lambda_1 - 1 for the returned
    /// normalization.
    pub saturation_gap: f64,
}

fn cx_matvec(m: &RMat, v: &[Complex64]) -> Vec<Complex64> {
    let n = m.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += m.get(i, j) * v[j];
        }
        out[i] = acc;
    }
    out
}

fn xi_product(xi: &RMat, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let xb = cx_matvec(xi, b);
    a.iter().zip(&xb).map(|(ai, xbi)| ai.conj() * xbi).sum()
}

/// Eigendecomposition of a real symmetric matrix, reusing the Hermitian
/// kernel; eigenvectors are returned as real vectors.
fn sym_eigen(a: &RMat) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let h = HermitianMatrix::from_real_symmetric(a)?;
    let eig = herm_eigen(&h)?;
    let vecs = eig
        .eigenvectors
        .iter()
        .map(|v| v.iter().map(|z| z.re).collect())
        .collect();
    Ok((eig.eigenvalues, vecs))
}

fn sym_power(a: &RMat, exponent: f64) -> Result<RMat> {
    let n = a.dim();
    let (vals, vecs) = sym_eigen(a)?;
    let mut out = RMat::zeros(n);
    for k in 0..n {
        if vals[k] <= 0.0 {
            return Err(Error::NotPositiveDefinite { lambda_min: vals[k] });
        }
        let w = vals[k].powf(exponent);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, out.get(i, j) + w * vecs[k][i] * vecs[k][j]);
            }
        }
    }
    Ok(out)
}

fn check_nonsingular(xi: &SkewForm) -> Result<()> {
    if !xi.is_nonsingular() {
        return Err(Error::SingularForm { det: xi.det() });
    }
    Ok(())
}

/// Xi-Gram-Schmidt inside groups of (numerically) equal eigenvalues, so the
/// relation u_a^H Xi u_b = 0 (a != b) holds also for degenerate spectra.
fn xi_orthogonalize(values: &[f64], vectors: &mut [Vec<Complex64>], xi: &RMat) {
    let n = values.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end] - values[start]).abs() <= 1e-8 * (1.0 + values[start].abs()) {
            end += 1;
        }
        for k in (start + 1)..end {
            for j in start..k {
                let coeff = xi_product(xi, &vectors[j], &vectors[k]) / Complex64::new(0.0, 2.0);
                let vj = vectors[j].clone();
                for (vk, vjv) in vectors[k].iter_mut().zip(&vj) {
                    *vk -= coeff * vjv;
                }
            }
            renormalize_positive(xi, &mut vectors[k]);
        }
        start = end;
    }
}

/// Rescales so u^H Xi u = 2i, then fixes the phase deterministically.
fn renormalize_positive(xi: &RMat, u: &mut [Complex64]) {
    let beta = xi_product(xi, u, u).im;
    debug_assert!(beta > 0.0, "normalization requires positive Xi-norm");
    let f = (2.0 / beta).sqrt();
    for z in u.iter_mut() {
        *z *= f;
    }
    matcore::fix_phase(u);
}

/// Computes the Xi-symplectic spectrum of A.
pub fn symplectic_spectrum(a: &CovarianceMatrix, xi: &SkewForm) -> Result<SymplecticSpectrum> {
    symplectic_spectrum_raw(a.as_mat(), xi)
}

pub(crate) fn symplectic_spectrum_raw(a: &RMat, xi: &SkewForm) -> Result<SymplecticSpectrum> {
    let dim = a.dim();
    if xi.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: xi.dim() });
    }
    a.check_symmetric(1e-12 * (1.0 + a.max_abs()))?;
    check_nonsingular(xi)?;

    let a_scale = 1.0 + a.max_abs();
    let (a_vals, _) = sym_eigen(a)?;
    if a_vals[0] > 1e-12 * a_scale {
        spectrum_definite(a, xi)
    } else if a_vals[0] >= -1e-10 * a_scale {
        spectrum_semidefinite(a, xi)
    } else {
        Err(Error::NotPositiveDefinite { lambda_min: a_vals[0] })
    }
}

/// Hermitian route: eigenvalues of 2i A^(1/2) Xi^-1 A^(1/2).
fn spectrum_definite(a: &RMat, xi: &SkewForm) -> Result<SymplecticSpectrum> {
    let dim = a.dim();
    let n = dim / 2;
    let sqrt_a = sym_power(a, 0.5)?;
    let inv_sqrt_a = sym_power(a, -0.5)?;
    let xi_inv = xi.as_mat().inverse()?;
    let core = sqrt_a.mul(&xi_inv).mul(&sqrt_a).scale(2.0);
    // 2i * core is Hermitian because core is real skew-symmetric.
    let m = dim;
    let mut entries = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in 0..m {
            // enforce exact skewness against rounding in the triple product
            let s = 0.5 * (core.get(i, j) - core.get(j, i));
            entries[i * m + j] = Complex64::new(0.0, s);
        }
    }
    let herm = HermitianMatrix::new(m, entries)?;
    let eig = herm_eigen(&herm)?;

    // +- pairing check
    let eig_scale = 1.0 + eig.eigenvalues.iter().fold(0.0_f64, |mx, v| mx.max(v.abs()));
    for k in 0..n {
        let defect = (eig.eigenvalues[k] + eig.eigenvalues[m - 1 - k]).abs();
        if defect > 1e-9 * eig_scale {
            return Err(Error::NoConvergence { sweeps: 0, residual: defect });
        }
    }

    let mut values = Vec::with_capacity(n);
    let mut pos_vectors = Vec::with_capacity(n);
    for k in n..m {
        let lambda = eig.eigenvalues[k];
        if lambda <= 1e-12 * eig_scale {
            return Err(Error::NotPositiveDefinite { lambda_min: lambda });
        }
        let y = &eig.eigenvectors[k];
        let mut u = cx_matvec(&inv_sqrt_a, y);
        let f = lambda.sqrt();
        for z in u.iter_mut() {
            *z *= f;
        }
        renormalize_positive(xi.as_mat(), &mut u);
        values.push(lambda);
        pos_vectors.push(u);
    }
    xi_orthogonalize(&values, &mut pos_vectors, xi.as_mat());
    let neg_vectors = pos_vectors
        .iter()
        .map(|u| u.iter().map(|z| z.conj()).collect())
        .collect();
    Ok(SymplecticSpectrum { values, pos_vectors, neg_vectors })
}

/// Fallback for semidefinite A: roots of det(2 Xi^-1 A - mu I) with an
/// explicit realness check on i*mu, plus nullspace eigenvectors.
fn spectrum_semidefinite(a: &RMat, xi: &SkewForm) -> Result<SymplecticSpectrum> {
    let dim = a.dim();
    let n = dim / 2;
    let xi_inv = xi.as_mat().inverse()?;
    let big_n = xi_inv.mul(a).scale(2.0);

    let coeffs = charpoly(&big_n);
    let mu_roots = durand_kerner(&coeffs)?;
    // lambda = i * mu must be real
    let scale = 1.0 + mu_roots.iter().fold(0.0_f64, |mx, r| mx.max(r.norm()));
    let mut lambdas: Vec<f64> = Vec::with_capacity(dim);
    for mu in &mu_roots {
        let lambda = Complex64::i() * mu;
        if lambda.im.abs() > 1e-9 * scale {
            return Err(Error::NoConvergence { sweeps: 0, residual: lambda.im.abs() });
        }
        lambdas.push(lambda.re);
    }
    lambdas.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for k in 0..n {
        let defect = (lambdas[k] + lambdas[dim - 1 - k]).abs();
        if defect > 1e-9 * scale {
            return Err(Error::NoConvergence { sweeps: 0, residual: defect });
        }
    }

    let mut values = Vec::with_capacity(n);
    let mut pos_vectors = Vec::with_capacity(n);
    let mut k = n;
    while k < dim {
        let lambda = lambdas[k];
        if lambda <= 1e-12 * scale {
            return Err(Error::NotPositiveDefinite { lambda_min: lambda });
        }
        let mut mult = 1;
        while k + mult < dim && (lambdas[k + mult] - lambda).abs() <= 1e-8 * scale {
            mult += 1;
        }
        let mu = -Complex64::i() * lambda;
        let basis = nullspace(&big_n, mu, mult)?;
        for mut u in basis {
            renormalize_positive(xi.as_mat(), &mut u);
            values.push(lambda);
            pos_vectors.push(u);
        }
        k += mult;
    }
    xi_orthogonalize(&values, &mut pos_vectors, xi.as_mat());
    let neg_vectors = pos_vectors
        .iter()
        .map(|u| u.iter().map(|z| z.conj()).collect())
        .collect();
    Ok(SymplecticSpectrum { values, pos_vectors, neg_vectors })
}

/// Characteristic polynomial coefficients of a real matrix by the
/// Faddeev-LeVerrier recursion: p(x) = x^n + c[n-1] x^(n-1) + ... + c[0].
fn charpoly(m: &RMat) -> Vec<f64> {
    let n = m.dim();
    let mut coeffs = vec![0.0; n];
    let mut aux = RMat::identity(n);
    for k in 1..=n {
        let mk = m.mul(&aux);
        let trace: f64 = (0..n).map(|i| mk.get(i, i)).sum();
        let ck = -trace / k as f64;
        coeffs[n - k] = ck;
        aux = mk;
        for i in 0..n {
            aux.set(i, i, aux.get(i, i) + ck);
        }
    }
    coeffs
}

/// Durand-Kerner simultaneous root iteration for a monic polynomial with
/// real coefficients c (constant term first).
fn durand_kerner(c: &[f64]) -> Result<Vec<Complex64>> {
    let n = c.len();
    let scale = 1.0 + c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for k in (0..n).rev() {
            acc = acc * x + c[k];
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..1000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * scale {
            return Ok(roots);
        }
    }
    Err(Error::NoConvergence { sweeps: 1000, residual: f64::NAN })
}

/// Basis of the nullspace of (M - mu I), expected dimension `want`, via
/// complex Gaussian elimination with partial pivoting.
fn nullspace(m: &RMat, mu: Complex64, want: usize) -> Result<Vec<Vec<Complex64>>> {
    let n = m.dim();
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = Complex64::new(m.get(i, j), 0.0);
        }
        a[i * n + i] -= mu;
    }
    let scale = 1.0 + a.iter().fold(0.0_f64, |mx, z| mx.max(z.norm()));
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let mut piv = row;
        let mut best = 0.0;
        for r in row..n {
            let v = a[r * n + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= 1e-10 * scale {
            continue;
        }
        if piv != row {
            for j in 0..n {
                a.swap(row * n + j, piv * n + j);
            }
        }
        let d = a[row * n + col];
        for j in 0..n {
            a[row * n + j] /= d;
        }
        for r in 0..n {
            if r == row {
                continue;
            }
            let f = a[r * n + col];
            if f.norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                let v = a[row * n + j];
                a[r * n + j] -= f * v;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    if free_cols.len() < want {
        return Err(Error::NoConvergence { sweeps: 0, residual: free_cols.len() as f64 });
    }
    let mut basis = Vec::with_capacity(want);
    for &fc in free_cols.iter().take(want) {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[fc] = Complex64::new(1.0, 0.0);
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[r * n + fc];
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Williamson decomposition on the form Xi: returns (S, D) with
/// Xi = S J S^T and S^-1 A S^-T = D; D carries each mode invariant twice,
/// and each diagonal entry is half the matching value of
/// [`symplectic_spectrum`] (congruence covariance forces the factor 2).
pub fn williamson_diag(a: &CovarianceMatrix, xi: &SkewForm) -> Result<(RMat, RMat)> {
    let dim = a.dim();
    if xi.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: xi.dim() });
    }
    check_nonsingular(xi)?;
    let a_scale = 1.0 + a.as_mat().max_abs();
    let (a_vals, _) = sym_eigen(a.as_mat())?;
    if a_vals[0] <= 1e-12 * a_scale {
        return Err(Error::NotPositiveDefinite { lambda_min: a_vals[0] });
    }
    let spec = spectrum_definite(a.as_mat(), xi)?;
    let n = dim / 2;
    // Rows (p_1..p_n, q_1..q_n) of T = S^-1 give T Xi T^T = J exactly from
    // the normalization u = p + i q, p^T Xi q = 1.
    let mut t = RMat::zeros(dim);
    for j in 0..n {
        for col in 0..dim {
            t.set(j, col, spec.pos_vectors[j][col].re);
            t.set(n + j, col, spec.pos_vectors[j][col].im);
        }
    }
    let s = t.inverse()?;
    let d_full = t.mul(a.as_mat()).mul(&t.transpose());
    // clean the numerically tiny off-diagonals
    let mut d = RMat::zeros(dim);
    for i in 0..dim {
        d.set(i, i, d_full.get(i, i));
    }
    Ok((s, d))
}

/// Direction(s) of minimal uncertainty: eigenvector(s) of the smallest
/// Xi-symplectic eigenvalue and the quadratic-form gap they realize.
pub fn min_uncertainty_directions(a: &CovarianceMatrix, xi: &SkewForm) -> Result<MinUncertainty> {
    let spec = symplectic_spectrum(a, xi)?;
    let lambda1 = spec.values[0];
    let mut directions = vec![spec.pos_vectors[0].clone()];
    if spec.values.len() > 1 && (spec.values[1] - lambda1).abs() <= 1e-8 * (1.0 + lambda1) {
        directions.push(spec.pos_vectors[1].clone());
    }
    let u = &directions[0];
    // u^H (A + i/2 Xi) u
    let av = cx_matvec(a.as_mat(), u);
    let quad_a: Complex64 = u.iter().zip(&av).map(|(ui, vi)| ui.conj() * vi).sum();
    let quad_xi = xi_product(xi.as_mat(), u, u);
    let gap = (quad_a + Complex64::i() * 0.5 * quad_xi).re;
    Ok(MinUncertainty { directions, saturation_gap: gap })
}
