//! Dense small-matrix kernel: real square matrices, complex Hermitian
//! eigendecomposition (cyclic Jacobi) and tolerance-aware positivity tests.
//!
//! Everything here targets tiny dimensions (n <= 8). The Jacobi sweep is
//! deterministic, so repeated runs on the same input produce identical output.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for structural checks (symmetry, skewness, hermiticity).
pub const STRUCT_TOL: f64 = 1e-12;

/// Sweep budget for the cyclic Jacobi eigensolver.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RMat {
    n: usize,
    e: Vec<f64>,
}

impl RMat {
    pub fn zeros(n: usize) -> Self {
        Self { n, e: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.e[i * n + i] = 1.0;
        }
        m
    }

    /// Builds from row-major data; panics if the length is not n*n.
    pub fn from_rows(n: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), n * n, "row-major data must have n*n entries");
        Self { n, e: rows.to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.e[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.e[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.e
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
        let e = self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect();
        Self { n: self.n, e }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let e = self.e.iter().zip(&other.e).map(|(a, b)| a - b).collect();
        Self { n: self.n, e }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, e: self.e.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.e[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.e[i * n + j] += aik * other.e[k * n + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.e[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.e.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.e.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].abs();
            for r in (col + 1)..n {
                let v = a[r * n + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for r in (col + 1)..n {
                let f = a[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.e.clone();
        let mut inv = Self::identity(n).e;
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].abs();
            for r in (col + 1)..n {
                let v = a[r * n + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-300 {
                return Err(Error::SingularForm { det: 0.0 });
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                    inv.swap(col * n + j, piv * n + j);
                }
            }
            let d = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= d;
                inv[col * n + j] /= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] -= f * a[col * n + j];
                    inv[r * n + j] -= f * inv[col * n + j];
                }
            }
        }
        Ok(Self { n, e: inv })
    }

    /// Checks A = A^T within `tol`, reporting the first offending pair.
    pub fn check_symmetric(&self, tol: f64) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in i..n {
                let defect = (self.e[i * n + j] - self.e[j * n + i]).abs();
                if defect > tol || defect.is_nan() {
                    return Err(Error::NotSymmetric { row: i, col: j, defect });
                }
            }
        }
        Ok(())
    }

    /// Checks A + A^T = 0 within `tol`.
    pub fn check_skew(&self, tol: f64) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in i..n {
                let defect = (self.e[i * n + j] + self.e[j * n + i]).abs();
                if defect > tol || defect.is_nan() {
                    return Err(Error::NotSkew { row: i, col: j, defect });
                }
            }
        }
        Ok(())
    }

    /// Symmetric part (A + A^T)/2.
    pub fn symmetric_part(&self) -> Self {
        self.add(&self.transpose()).scale(0.5)
    }
}

/// Complex Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    e: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Validates hermiticity within [`STRUCT_TOL`] (absolute).
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        assert_eq!(entries.len(), dim * dim, "entries must have dim*dim elements");
        for i in 0..dim {
            for j in i..dim {
                let a = entries[i * dim + j];
                let b = entries[j * dim + i];
                let defect = (a - b.conj()).norm();
                if defect > STRUCT_TOL || defect.is_nan() {
                    return Err(Error::NonHermitianInput { row: i, col: j, defect });
                }
            }
        }
        Ok(Self { dim, e: entries })
    }

    /// H = A + i B for symmetric A and skew-symmetric B; this is Hermitian by
    /// construction and is how the uncertainty forms A + (i/2) Xi are built.
    pub fn from_parts(real_sym: &RMat, imag_skew: &RMat) -> Result<Self> {
        if real_sym.dim() != imag_skew.dim() {
            return Err(Error::DimensionMismatch { expected: real_sym.dim(), got: imag_skew.dim() });
        }
        real_sym.check_symmetric(STRUCT_TOL.max(1e-12 * (1.0 + real_sym.max_abs())))?;
        imag_skew.check_skew(STRUCT_TOL.max(1e-12 * (1.0 + imag_skew.max_abs())))?;
        let n = real_sym.dim();
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                e.push(Complex64::new(real_sym.get(i, j), imag_skew.get(i, j)));
            }
        }
        Ok(Self { dim: n, e })
    }

    pub fn from_real_symmetric(a: &RMat) -> Result<Self> {
        Self::from_parts(a, &RMat::zeros(a.dim()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.e[i * self.dim + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.e.iter().fold(0.0_f64, |m, v| m.max(v.norm()))
    }
}

/// Sorted eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvectors, `eigenvectors[k]` pairs with `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

/// Outcome of the positive-semidefiniteness test.
#[derive(Debug, Clone)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub lambda_min: f64,
    /// Eigenvector of the minimal eigenvalue.
    pub witness: Vec<Complex64>,
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back ascending; each eigenvector has its
/// largest-magnitude component rotated to the positive real axis so the
/// output is deterministic.
pub fn herm_eigen(h: &HermitianMatrix) -> Result<EigenResult> {
    let n = h.dim;
    let mut a = h.e.clone();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let off_tol = 1e-14 * (1.0 + scale);

    let off = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut residual = off(&a);
    let mut converged = residual <= off_tol;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let gn = g.norm();
                if gn <= f64::MIN_POSITIVE {
                    continue;
                }
                // Phase that makes the (p,q) entry real, then a real Jacobi
                // rotation that annihilates it.
                let phase = g / gn;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * gn);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Column update: (col_p, col_q) <- (c*phase*col_p - s*col_q(*),
                // ...) expressed via the unitary U = [[c*phase, s*phase], [-s, c]].
                let upp = phase * c;
                let upq = phase * s;
                let uqp = Complex64::new(-s, 0.0);
                let uqq = Complex64::new(c, 0.0);
                // A <- U^H A U : first columns, then rows.
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = aip * upp + aiq * uqp;
                    a[i * n + q] = aip * upq + aiq * uqq;
                }
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = upp.conj() * apj + uqp.conj() * aqj;
                    a[q * n + j] = upq.conj() * apj + uqq.conj() * aqj;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip * upp + viq * uqp;
                    v[i * n + q] = vip * upq + viq * uqq;
                }
                // Hermiticity restored exactly on the rotated pair.
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
            }
        }
        residual = off(&a);
        if residual <= off_tol {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS, residual });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.partial_cmp(&a[j * n + j].re).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for &k in &order {
        eigenvalues.push(a[k * n + k].re);
        let mut col: Vec<Complex64> = (0..n).map(|i| v[i * n + k]).collect();
        fix_phase(&mut col);
        eigenvectors.push(col);
    }
    Ok(EigenResult { eigenvalues, eigenvectors })
}

/// Rotates the largest-magnitude component onto the positive real axis.
pub(crate) fn fix_phase(v: &mut [Complex64]) {
    let mut idx = 0;
    let mut best = 0.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best + 1e-15 {
            best = m;
            idx = i;
        }
    }
    if best == 0.0 {
        return;
    }
    let ph = (v[idx] / v[idx].norm()).conj();
    for z in v.iter_mut() {
        *z *= ph;
    }
}

/// Positive-semidefiniteness at relative tolerance `tol`:
/// the flag is true iff lambda_min >= -tol * (1 + max |H_ij|).
pub fn is_psd(h: &HermitianMatrix, tol: f64) -> Result<PsdCheck> {
    let eig = herm_eigen(h)?;
    let lambda_min = eig.eigenvalues[0];
    let slack = tol * (1.0 + h.max_abs());
    Ok(PsdCheck {
        is_psd: lambda_min >= -slack,
        lambda_min,
        witness: eig.eigenvectors[0].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_spectrum() {
        let h = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        let eig = herm_eigen(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let h = HermitianMatrix::new(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap();
        let eig = herm_eigen(&h).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let r = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(0.5, 0.0), c(0.2, 0.0), c(1.0, 0.0)]);
        assert!(matches!(r, Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn psd_identity_and_indefinite_diag() {
        let id = HermitianMatrix::from_real_symmetric(&RMat::identity(2)).unwrap();
        let chk = is_psd(&id, 0.0).unwrap();
        assert!(chk.is_psd);
        assert!((chk.lambda_min - 1.0).abs() < 1e-12);

        let d = RMat::from_rows(2, &[1.0, 0.0, 0.0, -0.5]);
        let h = HermitianMatrix::from_real_symmetric(&d).unwrap();
        let chk = is_psd(&h, 0.0).unwrap();
        assert!(!chk.is_psd);
        assert!((chk.lambda_min + 0.5).abs() < 1e-12);
        // witness is e2 up to phase
        assert!((chk.witness[1].norm() - 1.0).abs() < 1e-9);
        assert!(chk.witness[0].norm() < 1e-9);
    }

    #[test]
    fn minimal_uncertainty_saturation() {
        // Sigma = (hbar/2) I2 with hbar = 1 saturates: lambda_min = 0.
        let sigma = RMat::identity(2).scale(0.5);
        let half_j = RMat::from_rows(2, &[0.0, 0.5, -0.5, 0.0]);
        let h = HermitianMatrix::from_parts(&sigma, &half_j).unwrap();
        let chk = is_psd(&h, 0.0).unwrap();
        assert!(chk.lambda_min.abs() < 1e-12);
        assert!(chk.is_psd);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        // Deterministic pseudo-random Hermitian, dims 2..=8.
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        for n in 2..=8 {
            let mut e = vec![c(0.0, 0.0); n * n];
            for i in 0..n {
                for j in i..n {
                    if i == j {
                        e[i * n + i] = c(next(), 0.0);
                    } else {
                        let z = c(next(), next());
                        e[i * n + j] = z;
                        e[j * n + i] = z.conj();
                    }
                }
            }
            let h = HermitianMatrix::new(n, e).unwrap();
            let eig = herm_eigen(&h).unwrap();
            // ascending
            for k in 1..n {
                assert!(eig.eigenvalues[k] >= eig.eigenvalues[k - 1]);
            }
            // orthonormal within 1e-9
            for a in 0..n {
                for b in 0..n {
                    let dot: Complex64 = (0..n)
                        .map(|i| eig.eigenvectors[a][i].conj() * eig.eigenvectors[b][i])
                        .sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((dot.norm() - want).abs() < 1e-9, "n={n} a={a} b={b}");
                }
            }
            // reconstruction ||H - V D V^H||_max <= 1e-9 (1 + ||H||_max)
            let mut err: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let mut acc = c(0.0, 0.0);
                    for k in 0..n {
                        acc += eig.eigenvectors[k][i]
                            * eig.eigenvalues[k]
                            * eig.eigenvectors[k][j].conj();
                    }
                    err = err.max((acc - h.get(i, j)).norm());
                }
            }
            assert!(err <= 1e-9 * (1.0 + h.max_abs()), "n={n} err={err}");
        }
    }
}
