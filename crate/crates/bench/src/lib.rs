//! Deterministic input generators shared by the benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncup_core::{HermitianMatrix, RMat, SkewForm};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mat(rng: &mut impl Rng, n: usize) -> RMat {
    let mut m = RMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, rng.gen_range(-1.0..1.0));
        }
    }
    m
}

pub fn random_pd(rng: &mut impl Rng, n: usize, shift: f64) -> RMat {
    let m = random_mat(rng, n);
    let mut a = m.mul(&m.transpose());
    for i in 0..n {
        a.set(i, i, a.get(i, i) + shift);
    }
    a.symmetric_part()
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let a = random_pd(rng, n, 0.0);
    let s = random_mat(rng, n);
    let skew = s.sub(&s.transpose()).scale(0.5);
    HermitianMatrix::from_parts(&a, &skew).unwrap()
}

pub fn random_skew_nonsingular(rng: &mut impl Rng, n: usize) -> SkewForm {
    loop {
        let m = random_mat(rng, n);
        let skew = m.sub(&m.transpose()).scale(0.5);
        if let Ok(form) = SkewForm::new(skew) {
            if form.is_nonsingular() {
                return form;
            }
        }
    }
}
