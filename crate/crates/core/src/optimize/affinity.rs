//! Squeezed-vacuum affinity `G = sup_r' |<-r'|psi>|^2` in a truncated Fock basis.

use num_complex::Complex64;

use super::search::golden_max;
use crate::error::Result;
use crate::phase_space::{core_fock_amplitudes, ResourceSpec};

/// Photons per mode kept in the Fock representation.
pub const AFFINITY_CUTOFF: usize = 40;
const TAIL_WARN: f64 = 1e-8;
const R_PRIME_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinityResult {
    pub value: f64,
    /// Maximizing reference squeezing `r'`.
    pub r_prime: f64,
    /// Norm missing from the truncated state.
    pub tail_weight: f64,
}

/// `S(zeta)|core>` as amplitudes `psi[m * (cutoff + 1) + n]`, using
/// `S = exp(-e^{i phi} t K+) (cosh r)^{-(n1 + n2 + 1)} exp(e^{-i phi} t K-)`
/// with `t = tanh r`, `K+ = a1^dag a2^dag`, `K- = a1 a2`.
pub(crate) fn squeezed_state(spec: &ResourceSpec, cutoff: usize) -> Vec<Complex64> {
    let dim = cutoff + 1;
    let (r, phi) = spec.canonical().squeezing();
    let t = r.tanh();
    let core = core_fock_amplitudes(spec, cutoff);
    let lower = Complex64::from_polar(t, -phi);
    let raise = -Complex64::from_polar(t, phi);

    let mut mid = vec![Complex64::new(0.0, 0.0); dim * dim];
    for m in 0..dim {
        for n in 0..dim {
            let mut coef = Complex64::new(1.0, 0.0);
            let mut acc = core[m * dim + n];
            let mut j = 1;
            while m + j < dim && n + j < dim {
                coef *= lower * (((m + j) * (n + j)) as f64).sqrt() / j as f64;
                acc += coef * core[(m + j) * dim + n + j];
                j += 1;
            }
            mid[m * dim + n] = acc * r.cosh().powi(-((m + n + 1) as i32));
        }
    }

    let mut psi = vec![Complex64::new(0.0, 0.0); dim * dim];
    for m in 0..dim {
        for n in 0..dim {
            let mut coef = Complex64::new(1.0, 0.0);
            let mut acc = mid[m * dim + n];
            let mut j = 1;
            while j <= m && j <= n {
                coef *= raise * (((m - j + 1) * (n - j + 1)) as f64).sqrt() / j as f64;
                acc += coef * mid[(m - j) * dim + n - j];
                j += 1;
            }
            psi[m * dim + n] = acc;
        }
    }
    psi
}

fn overlap_sq(psi: &[Complex64], dim: usize, rp: f64) -> f64 {
    let (t, sech) = (rp.tanh(), 1.0 / rp.cosh());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut tn = 1.0;
    for n in 0..dim {
        acc += sech * tn * psi[n * dim + n];
        tn *= t;
    }
    acc.norm_sqr()
}

/// Maximal squared overlap of the resource with a twin beam `|-r'>`, `r' in [0, 5]`.
pub fn affinity(spec: &ResourceSpec) -> Result<AffinityResult> {
    spec.validate()?;
    let dim = AFFINITY_CUTOFF + 1;
    let psi = squeezed_state(spec, AFFINITY_CUTOFF);
    let tail_weight = (1.0 - psi.iter().map(|a| a.norm_sqr()).sum::<f64>()).max(0.0);
    if tail_weight > TAIL_WARN {
        log::warn!("affinity: Fock cutoff {AFFINITY_CUTOFF} misses weight {tail_weight:e}");
    }
    let steps = 500;
    let h = R_PRIME_MAX / steps as f64;
    let (mut best_r, mut best_v) = (0.0, f64::NEG_INFINITY);
    for i in 0..=steps {
        let rp = i as f64 * h;
        let v = overlap_sq(&psi, dim, rp);
        if v > best_v {
            best_r = rp;
            best_v = v;
        }
    }
    let (rp, v, _) = golden_max(|rp| overlap_sq(&psi, dim, rp), (best_r - h).max(0.0), (best_r + h).min(R_PRIME_MAX), 1e-10);
    let (r_prime, value) = if v >= best_v { (rp, v) } else { (best_r, best_v) };
    Ok(AffinityResult { value, r_prime, tail_weight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn twin_beam_is_its_own_reference() {
        let res = affinity(&ResourceSpec::twin_beam(0.9)).unwrap();
        assert!((res.value - 1.0).abs() < 1e-10);
        assert!((res.r_prime - 0.9).abs() < 1e-4);
    }

    #[test]
    fn squeezed_fock_pair_is_not_gaussian() {
        let res = affinity(&ResourceSpec::squeezed_bell(0.6, FRAC_PI_2)).unwrap();
        assert!(res.value < 1.0 - 1e-3);
    }

    #[test]
    fn tiny_cat_reduces_to_twin_beam() {
        let res = affinity(&ResourceSpec::squeezed_cat(0.7, 0.4, 1e-7)).unwrap();
        assert!((res.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn squeezed_state_is_normalized() {
        let psi = squeezed_state(&ResourceSpec::squeezed_bell(0.8, 0.3), AFFINITY_CUTOFF);
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-10);
    }
}
