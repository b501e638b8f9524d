//! Truncated-Fock reference implementation and shared test helpers.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use telefid::{PhasePoint, ResourceSpec};

// 40 leaves ~3e-8 truncation error in D(alpha) at |alpha| = 3
pub const CUTOFF: usize = 60;
pub const DIM: usize = CUTOFF + 1;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn annihilation() -> DMatrix<Complex64> {
    DMatrix::from_fn(DIM, DIM, |i, j| if j == i + 1 { c((j as f64).sqrt(), 0.0) } else { c(0.0, 0.0) })
}

/// `exp(alpha a^dag - alpha^* a)` on the truncated space.
pub fn displacement(alpha: Complex64) -> DMatrix<Complex64> {
    let a = annihilation();
    let gen = a.adjoint() * alpha - a * alpha.conj();
    gen.exp()
}

pub fn fock(n: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(DIM);
    v[n] = c(1.0, 0.0);
    v
}

pub fn coherent(gamma: Complex64) -> DVector<Complex64> {
    let mut v = DVector::zeros(DIM);
    v[0] = c((-0.5 * gamma.norm_sqr()).exp(), 0.0);
    for n in 1..DIM {
        v[n] = v[n - 1] * gamma / (n as f64).sqrt();
    }
    v
}

/// Two-mode amplitudes `psi[(m, n)]`.
pub type TwoMode = DMatrix<Complex64>;

pub fn product(u: &DVector<Complex64>, v: &DVector<Complex64>) -> TwoMode {
    u * v.transpose()
}

/// Core superposition of `spec` before squeezing, built independently of the library.
pub fn core_state(spec: &ResourceSpec) -> TwoMode {
    match *spec {
        ResourceSpec::TwinBeam { .. } => product(&fock(0), &fock(0)),
        ResourceSpec::SqueezedBell { delta, theta, .. } => {
            product(&fock(0), &fock(0)) * c(delta.cos(), 0.0)
                + product(&fock(1), &fock(1)) * Complex64::from_polar(delta.sin(), theta)
        }
        ResourceSpec::BuridanDonkey { delta, theta, .. } => {
            product(&fock(0), &fock(1)) * c(delta.cos(), 0.0)
                + product(&fock(1), &fock(0)) * Complex64::from_polar(delta.sin(), theta)
        }
        ResourceSpec::SqueezedCat { delta, theta, gamma_mod, gamma_phase, .. } => {
            let g = coherent(Complex64::from_polar(gamma_mod, gamma_phase));
            let psi = product(&fock(0), &fock(0)) * c(delta.cos(), 0.0)
                + product(&g, &g) * Complex64::from_polar(delta.sin(), theta);
            let n = psi.norm();
            psi / c(n, 0.0)
        }
        ResourceSpec::PhotonSubtracted { r, phi } => {
            // a1 a2 applied to the squeezed vacuum, then normalized
            let sv = squeeze(&product(&fock(0), &fock(0)), r, phi);
            let a = annihilation();
            let out = &a * sv * a.transpose();
            let n = out.norm();
            out / c(n, 0.0)
        }
    }
}

/// `S(zeta) psi` with `S = exp(-zeta a1^dag a2^dag + zeta^* a1 a2)`, exponentiated
/// block by block (the generator conserves `n1 - n2`).
pub fn squeeze(psi: &TwoMode, r: f64, phi: f64) -> TwoMode {
    let zeta = Complex64::from_polar(r, phi);
    let mut out = TwoMode::zeros(DIM, DIM);
    for d in -(CUTOFF as i64)..=(CUTOFF as i64) {
        let ms: Vec<usize> = (0..DIM).filter(|&m| (m as i64 - d) >= 0 && ((m as i64 - d) as usize) < DIM).collect();
        let k = ms.len();
        let mut gen = DMatrix::<Complex64>::zeros(k, k);
        for i in 0..k.saturating_sub(1) {
            let m = ms[i];
            let n = (m as i64 - d) as usize;
            let amp = (((m + 1) * (n + 1)) as f64).sqrt();
            gen[(i + 1, i)] = -zeta * amp;
            gen[(i, i + 1)] = zeta.conj() * amp;
        }
        let u = gen.exp();
        let v = DVector::from_iterator(k, ms.iter().map(|&m| psi[(m, (m as i64 - d) as usize)]));
        let w = u * v;
        for (i, &m) in ms.iter().enumerate() {
            out[(m, (m as i64 - d) as usize)] = w[i];
        }
    }
    out
}

pub fn resource_state(spec: &ResourceSpec) -> TwoMode {
    match *spec {
        ResourceSpec::PhotonSubtracted { .. } => core_state(spec),
        _ => {
            let (r, phi) = spec.squeezing();
            squeeze(&core_state(spec), r, phi)
        }
    }
}

/// `<psi| D1(alpha1) D2(alpha2) |psi>`.
pub fn two_mode_chi(psi: &TwoMode, a1: Complex64, a2: Complex64) -> Complex64 {
    let moved = displacement(a1) * psi * displacement(a2).transpose();
    psi.iter().zip(moved.iter()).map(|(p, q)| p.conj() * q).sum()
}

pub fn single_mode_chi(psi: &DVector<Complex64>, alpha: Complex64) -> Complex64 {
    (psi.adjoint() * displacement(alpha) * psi)[(0, 0)]
}

pub fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> PhasePoint {
    loop {
        let x = rng.gen_range(-radius..radius);
        let p = rng.gen_range(-radius..radius);
        if x * x + p * p <= radius * radius {
            return PhasePoint::new(x, p);
        }
    }
}

pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}
