//! Phase-space points and characteristic functions of the input coherent
//! states and of the five resource families.
//!
//! Convention: `alpha = (x + i p)/sqrt(2)`, `D(alpha) = exp(alpha a^dag - alpha^* a)`,
//! and the two-mode squeezer is `S(zeta) = exp(-zeta a1^dag a2^dag + zeta^* a1 a2)`
//! with `zeta = r e^{i phi}`. With `phi = pi` the twin beam is
//! `sech r * sum_n tanh^n r |n, n>`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};

/// Smallest admissible value of `1 + e^{-|gamma|^2} sin 2delta cos theta`.
pub const CAT_NORM_FLOOR: f64 = 1e-10;

const MAX_FOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { x: 0.0, p: 0.0 };

    pub const fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }

    pub fn from_alpha(alpha: Complex64) -> Self {
        Self::new(SQRT_2 * alpha.re, SQRT_2 * alpha.im)
    }

    pub fn alpha(self) -> Complex64 {
        Complex64::new(self.x * FRAC_1_SQRT_2, self.p * FRAC_1_SQRT_2)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(s * self.x, s * self.p)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.p * self.p
    }
}

impl Neg for PhasePoint {
    type Output = PhasePoint;
    fn neg(self) -> PhasePoint {
        PhasePoint::new(-self.x, -self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TwoModePhasePoint {
    pub m1: PhasePoint,
    pub m2: PhasePoint,
}

impl TwoModePhasePoint {
    pub const fn new(m1: PhasePoint, m2: PhasePoint) -> Self {
        Self { m1, m2 }
    }
}

impl Neg for TwoModePhasePoint {
    type Output = TwoModePhasePoint;
    fn neg(self) -> TwoModePhasePoint {
        TwoModePhasePoint::new(-self.m1, -self.m2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoherentInput {
    pub beta: Complex64,
}

impl CoherentInput {
    pub fn new(beta: Complex64) -> Self {
        Self { beta }
    }

    pub fn vacuum() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResourceFamily {
    TwinBeam,
    SqueezedBell,
    SqueezedCat,
    BuridanDonkey,
    PhotonSubtracted,
}

impl ResourceFamily {
    pub const ALL: [ResourceFamily; 5] = [
        ResourceFamily::TwinBeam,
        ResourceFamily::SqueezedBell,
        ResourceFamily::SqueezedCat,
        ResourceFamily::BuridanDonkey,
        ResourceFamily::PhotonSubtracted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ResourceFamily::TwinBeam => "twin-beam",
            ResourceFamily::SqueezedBell => "squeezed-bell",
            ResourceFamily::SqueezedCat => "squeezed-cat",
            ResourceFamily::BuridanDonkey => "buridan",
            ResourceFamily::PhotonSubtracted => "photon-subtracted",
        }
    }
}

impl fmt::Display for ResourceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ResourceFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ResourceFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown resource family `{s}`")))
    }
}

/// Entangled resource `S(zeta)|core>` with `zeta = r e^{i phi}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResourceSpec {
    /// core `|0,0>`
    TwinBeam { r: f64, phi: f64 },
    /// core `cos delta |0,0> + e^{i theta} sin delta |1,1>`
    SqueezedBell { r: f64, phi: f64, delta: f64, theta: f64 },
    /// core `N (cos delta |0,0> + e^{i theta} sin delta |gamma,gamma>)`
    SqueezedCat {
        r: f64,
        phi: f64,
        delta: f64,
        theta: f64,
        gamma_mod: f64,
        gamma_phase: f64,
    },
    /// core `cos delta |0,1> + e^{i theta} sin delta |1,0>`
    BuridanDonkey { r: f64, phi: f64, delta: f64, theta: f64 },
    /// `a1 a2 S(zeta)|0,0>`, normalized
    PhotonSubtracted { r: f64, phi: f64 },
}

impl ResourceSpec {
    pub fn twin_beam(r: f64) -> Self {
        ResourceSpec::TwinBeam { r, phi: PI }
    }

    pub fn squeezed_bell(r: f64, delta: f64) -> Self {
        ResourceSpec::SqueezedBell { r, phi: PI, delta, theta: 0.0 }
    }

    pub fn squeezed_cat(r: f64, delta: f64, gamma: f64) -> Self {
        ResourceSpec::SqueezedCat { r, phi: PI, delta, theta: 0.0, gamma_mod: gamma, gamma_phase: 0.0 }
    }

    pub fn buridan_donkey(r: f64, delta: f64) -> Self {
        ResourceSpec::BuridanDonkey { r, phi: PI, delta, theta: 0.0 }
    }

    pub fn photon_subtracted(r: f64) -> Self {
        ResourceSpec::PhotonSubtracted { r, phi: PI }
    }

    /// Resource of `family` at squeezing `r` with the optimal phases and the
    /// given free parameters (ignored where the family has none).
    pub fn with_params(family: ResourceFamily, r: f64, delta: f64, gamma: f64) -> Self {
        match family {
            ResourceFamily::TwinBeam => Self::twin_beam(r),
            ResourceFamily::SqueezedBell => Self::squeezed_bell(r, delta),
            ResourceFamily::SqueezedCat => Self::squeezed_cat(r, delta, gamma),
            ResourceFamily::BuridanDonkey => Self::buridan_donkey(r, delta),
            ResourceFamily::PhotonSubtracted => Self::photon_subtracted(r),
        }
    }

    pub fn family(&self) -> ResourceFamily {
        match self {
            ResourceSpec::TwinBeam { .. } => ResourceFamily::TwinBeam,
            ResourceSpec::SqueezedBell { .. } => ResourceFamily::SqueezedBell,
            ResourceSpec::SqueezedCat { .. } => ResourceFamily::SqueezedCat,
            ResourceSpec::BuridanDonkey { .. } => ResourceFamily::BuridanDonkey,
            ResourceSpec::PhotonSubtracted { .. } => ResourceFamily::PhotonSubtracted,
        }
    }

    pub fn r(&self) -> f64 {
        self.squeezing().0
    }

    /// `(r, phi)` of the squeezer.
    pub fn squeezing(&self) -> (f64, f64) {
        match *self {
            ResourceSpec::TwinBeam { r, phi }
            | ResourceSpec::SqueezedBell { r, phi, .. }
            | ResourceSpec::SqueezedCat { r, phi, .. }
            | ResourceSpec::BuridanDonkey { r, phi, .. }
            | ResourceSpec::PhotonSubtracted { r, phi } => (r, phi),
        }
    }

    pub fn zeta(&self) -> Complex64 {
        let (r, phi) = self.squeezing();
        Complex64::from_polar(r, phi)
    }

    /// Mixing angle, with the photon-subtracted state reporting `arctan(tanh r)`.
    pub fn delta(&self) -> Option<f64> {
        match *self {
            ResourceSpec::TwinBeam { .. } => None,
            ResourceSpec::SqueezedBell { delta, .. }
            | ResourceSpec::SqueezedCat { delta, .. }
            | ResourceSpec::BuridanDonkey { delta, .. } => Some(delta),
            ResourceSpec::PhotonSubtracted { r, .. } => Some(r.tanh().atan()),
        }
    }

    pub fn gamma_mod(&self) -> Option<f64> {
        match *self {
            ResourceSpec::SqueezedCat { gamma_mod, .. } => Some(gamma_mod),
            _ => None,
        }
    }

    /// Photon-subtracted states rewritten as the equivalent squeezed Bell-like state.
    pub fn canonical(&self) -> ResourceSpec {
        match *self {
            ResourceSpec::PhotonSubtracted { r, phi } => ResourceSpec::SqueezedBell {
                r,
                phi,
                delta: r.tanh().atan(),
                theta: phi + PI,
            },
            other => other,
        }
    }

    /// `1 + e^{-|gamma|^2} sin 2delta cos theta` for cat states, 1 otherwise.
    pub fn cat_norm_denominator(&self) -> f64 {
        match *self {
            ResourceSpec::SqueezedCat { delta, theta, gamma_mod, .. } => {
                1.0 + (-gamma_mod * gamma_mod).exp() * (2.0 * delta).sin() * theta.cos()
            }
            _ => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (r, phi) = self.squeezing();
        ensure(r.is_finite() && r >= 0.0, || format!("squeezing r must be finite and >= 0, got {r}"))?;
        ensure(phi.is_finite(), || format!("phi must be finite, got {phi}"))?;
        match *self {
            ResourceSpec::SqueezedBell { delta, theta, .. } | ResourceSpec::BuridanDonkey { delta, theta, .. } => {
                ensure(delta.is_finite() && theta.is_finite(), || "delta and theta must be finite".into())
            }
            ResourceSpec::SqueezedCat { delta, theta, gamma_mod, gamma_phase, .. } => {
                ensure(delta.is_finite() && theta.is_finite() && gamma_phase.is_finite(), || {
                    "delta, theta and gamma phase must be finite".into()
                })?;
                ensure(gamma_mod.is_finite() && gamma_mod >= 0.0, || {
                    format!("gamma modulus must be finite and >= 0, got {gamma_mod}")
                })?;
                let d = self.cat_norm_denominator();
                ensure(d > CAT_NORM_FLOOR, || format!("cat core is not normalizable (1 + e^-|g|^2 sin2d cos th = {d:e})"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ResourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.family().fmt(f)
    }
}

/// Associated Laguerre polynomial `L_n^{(k)}(x)` by the three-term recurrence.
pub fn laguerre(n: usize, k: i64, x: f64) -> Result<f64> {
    ensure(n <= MAX_FOCK, || format!("laguerre order {n} exceeds {MAX_FOCK}"))?;
    ensure(k >= -(n as i64), || format!("laguerre parameter {k} below -{n}"))?;
    Ok(laguerre_unchecked(n, k as f64, x))
}

fn laguerre_unchecked(n: usize, k: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for j in 1..n {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `<m| D(alpha) |n>`.
pub fn fock_displacement_element(m: usize, n: usize, alpha: Complex64) -> Result<Complex64> {
    ensure(m <= MAX_FOCK && n <= MAX_FOCK, || format!("Fock indices ({m}, {n}) exceed {MAX_FOCK}"))?;
    Ok(if m >= n {
        displacement_lower(m, n, alpha)
    } else {
        displacement_lower(n, m, -alpha).conj()
    })
}

fn displacement_lower(m: usize, n: usize, alpha: Complex64) -> Complex64 {
    let a2 = alpha.norm_sqr();
    let ratio: f64 = (n + 1..=m).map(|j| 1.0 / (j as f64).sqrt()).product();
    alpha.powu((m - n) as u32) * (ratio * (-0.5 * a2).exp() * laguerre_unchecked(n, (m - n) as f64, a2))
}

/// Matrix `<m|D(xi)|n>` for `m, n in {0, 1}`.
#[inline]
fn low_displacement(xi: Complex64) -> [[Complex64; 2]; 2] {
    let n2 = xi.norm_sqr();
    let e = (-0.5 * n2).exp();
    [[Complex64::new(e, 0.0), -xi.conj() * e], [xi * e, Complex64::new((1.0 - n2) * e, 0.0)]]
}

/// `(xi1, xi2)` with `S^dag(zeta) D1(alpha1) D2(alpha2) S(zeta) = D1(xi1) D2(xi2)`.
pub fn bogoliubov_args(zeta: Complex64, alpha1: Complex64, alpha2: Complex64) -> (Complex64, Complex64) {
    let r = zeta.norm();
    let (c, s) = (r.cosh(), r.sinh());
    let u = if r > 0.0 { zeta / r } else { Complex64::new(1.0, 0.0) };
    (c * alpha1 + u * s * alpha2.conj(), c * alpha2 + u * s * alpha1.conj())
}

/// `<gamma| D(xi) |gamma'>` for coherent states.
pub fn coherent_displacement_overlap(gamma: Complex64, xi: Complex64, gamma_prime: Complex64) -> Complex64 {
    let shifted = gamma_prime + xi;
    let phase = 0.5 * (xi * gamma_prime.conj() - xi.conj() * gamma_prime);
    (phase - 0.5 * gamma.norm_sqr() - 0.5 * shifted.norm_sqr() + gamma.conj() * shifted).exp()
}

pub fn chi_input_coherent(input: CoherentInput, pt: PhasePoint) -> Complex64 {
    let a = pt.alpha();
    let b = input.beta;
    (-0.5 * a.norm_sqr() + (a * b.conj() - a.conj() * b)).exp()
}

pub fn chi_resource(spec: &ResourceSpec, pt: TwoModePhasePoint) -> Complex64 {
    ResourceChi::new(spec).eval(pt)
}

/// Two-mode characteristic function of a resource with the squeezer
/// coefficients and core amplitudes precomputed.
#[derive(Debug, Clone, Copy)]
pub struct ResourceChi {
    c: f64,
    us: Complex64,
    core: Core,
}

#[derive(Debug, Clone, Copy)]
enum Core {
    /// `sum_k amp_k |m_k, n_k>`
    Fock { terms: [(usize, usize, Complex64); 2], len: usize },
    /// `sqrt(norm2) (c0 |0,0> + c1 |gamma,gamma>)`
    Cat { c0: f64, c1: Complex64, gamma: Complex64, norm2: f64 },
}

impl ResourceChi {
    pub fn new(spec: &ResourceSpec) -> Self {
        let spec = spec.canonical();
        let (r, phi) = spec.squeezing();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let core = match spec {
            ResourceSpec::TwinBeam { .. } => Core::Fock { terms: [(0, 0, one), (0, 0, zero)], len: 1 },
            ResourceSpec::SqueezedBell { delta, theta, .. } => Core::Fock {
                terms: [(0, 0, delta.cos().into()), (1, 1, Complex64::from_polar(delta.sin(), theta))],
                len: 2,
            },
            ResourceSpec::BuridanDonkey { delta, theta, .. } => Core::Fock {
                terms: [(0, 1, delta.cos().into()), (1, 0, Complex64::from_polar(delta.sin(), theta))],
                len: 2,
            },
            ResourceSpec::SqueezedCat { delta, theta, gamma_mod, gamma_phase, .. } => Core::Cat {
                c0: delta.cos(),
                c1: Complex64::from_polar(delta.sin(), theta),
                gamma: Complex64::from_polar(gamma_mod, gamma_phase),
                norm2: 1.0 / spec.cat_norm_denominator(),
            },
            ResourceSpec::PhotonSubtracted { .. } => unreachable!("canonicalized above"),
        };
        Self { c: r.cosh(), us: Complex64::from_polar(r.sinh(), phi), core }
    }

    pub fn eval(&self, pt: TwoModePhasePoint) -> Complex64 {
        let (a1, a2) = (pt.m1.alpha(), pt.m2.alpha());
        let xi1 = self.c * a1 + self.us * a2.conj();
        let xi2 = self.c * a2 + self.us * a1.conj();
        match self.core {
            Core::Fock { terms, len } => {
                let d1 = low_displacement(xi1);
                let d2 = low_displacement(xi2);
                let mut acc = Complex64::new(0.0, 0.0);
                for &(m, n, cmn) in &terms[..len] {
                    for &(k, l, ckl) in &terms[..len] {
                        acc += cmn.conj() * ckl * d1[m][k] * d2[n][l];
                    }
                }
                acc
            }
            Core::Cat { c0, c1, gamma, norm2 } => {
                let amps = [(Complex64::new(0.0, 0.0), Complex64::new(c0, 0.0)), (gamma, c1)];
                let mut acc = Complex64::new(0.0, 0.0);
                for &(ga, ca) in &amps {
                    for &(gb, cb) in &amps {
                        acc += ca.conj()
                            * cb
                            * coherent_displacement_overlap(ga, xi1, gb)
                            * coherent_displacement_overlap(ga, xi2, gb);
                    }
                }
                norm2 * acc
            }
        }
    }
}

/// Fock amplitudes `psi[m * (cutoff + 1) + n]` of the un-squeezed core,
/// truncated at `cutoff` photons per mode.
pub(crate) fn core_fock_amplitudes(spec: &ResourceSpec, cutoff: usize) -> Vec<Complex64> {
    let dim = cutoff + 1;
    let mut psi = vec![Complex64::new(0.0, 0.0); dim * dim];
    let chi = ResourceChi::new(spec);
    match chi.core {
        Core::Fock { terms, len } => {
            for &(m, n, c) in &terms[..len] {
                psi[m * dim + n] += c;
            }
        }
        Core::Cat { c0, c1, gamma, norm2 } => {
            let mut coh = vec![Complex64::new(0.0, 0.0); dim];
            coh[0] = Complex64::new((-0.5 * gamma.norm_sqr()).exp(), 0.0);
            for n in 1..dim {
                coh[n] = coh[n - 1] * gamma / (n as f64).sqrt();
            }
            let nrm = norm2.sqrt();
            psi[0] += nrm * c0;
            for m in 0..dim {
                for n in 0..dim {
                    psi[m * dim + n] += nrm * c1 * coh[m] * coh[n];
                }
            }
        }
    }
    psi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn binom(a: i64, b: i64) -> f64 {
        // generalized binomial with integer (possibly negative) upper index
        (0..b).map(|j| (a - j) as f64 / (j + 1) as f64).product()
    }

    fn laguerre_series(n: usize, k: i64, x: f64) -> f64 {
        let mut fact = 1.0;
        let mut s = 0.0;
        for j in 0..=n {
            if j > 0 {
                fact *= j as f64;
            }
            s += binom(n as i64 + k, (n - j) as i64) * (-x).powi(j as i32) / fact;
        }
        s
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(0, 3, 1.7).unwrap(), 1.0);
        assert!((laguerre(1, 0, 0.4).unwrap() - 0.6).abs() < 1e-15);
        assert!((laguerre(2, 1, 0.0).unwrap() - 3.0).abs() < 1e-15);
        assert!(laguerre(65, 0, 1.0).is_err());
        assert!(laguerre(2, -3, 1.0).is_err());
    }

    #[test]
    fn laguerre_matches_series() {
        for n in 0..12 {
            for k in -(n as i64)..6 {
                for &x in &[0.0, 0.3, 1.1, 2.5, 4.0] {
                    let a = laguerre(n, k, x).unwrap();
                    let b = laguerre_series(n, k, x);
                    assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()), "n={n} k={k} x={x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn displacement_examples() {
        let a = c(0.3, -0.8);
        let e = (-0.5 * a.norm_sqr()).exp();
        assert!((fock_displacement_element(0, 0, a).unwrap() - e).norm() < 1e-15);
        assert!((fock_displacement_element(1, 1, c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((fock_displacement_element(1, 1, a).unwrap() - (1.0 - a.norm_sqr()) * e).norm() < 1e-15);
    }

    #[test]
    fn low_displacement_matches_general() {
        let xi = c(-0.7, 1.3);
        let d = low_displacement(xi);
        for m in 0..2 {
            for n in 0..2 {
                let g = fock_displacement_element(m, n, xi).unwrap();
                assert!((d[m][n] - g).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn bogoliubov_trivial_cases() {
        let (a1, a2) = (c(0.4, -1.0), c(0.2, 0.9));
        let (x1, x2) = bogoliubov_args(c(0.0, 0.0), a1, a2);
        assert_eq!((x1, x2), (a1, a2));
        let (x1, x2) = bogoliubov_args(c(0.7, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!((x1.norm(), x2.norm()), (0.0, 0.0));
    }

    #[test]
    fn coherent_input_examples() {
        let pt = PhasePoint::new(0.8, -0.3);
        assert!((chi_input_coherent(CoherentInput::new(c(1.0, 2.0)), PhasePoint::ORIGIN) - 1.0).norm() < 1e-15);
        let vac = chi_input_coherent(CoherentInput::vacuum(), pt);
        assert!((vac - (-0.25 * pt.norm_sqr()).exp()).norm() < 1e-15);
    }

    #[test]
    fn coherent_overlap_reduces_to_vacuum_element() {
        let xi = c(0.6, -0.4);
        let z = c(0.0, 0.0);
        assert!((coherent_displacement_overlap(z, xi, z) - (-0.5 * xi.norm_sqr()).exp()).norm() < 1e-15);
    }

    #[test]
    fn photon_subtracted_canonical_form() {
        let spec = ResourceSpec::photon_subtracted(0.9).canonical();
        match spec {
            ResourceSpec::SqueezedBell { delta, theta, phi, .. } => {
                assert!((delta - 0.9f64.tanh().atan()).abs() < 1e-15);
                assert!((phi - PI).abs() < 1e-15);
                assert!(((theta - 2.0 * PI).sin()).abs() < 1e-15 && theta.cos() > 0.0);
            }
            _ => panic!("expected squeezed Bell form"),
        }
    }

    #[test]
    fn family_names_round_trip() {
        for f in ResourceFamily::ALL {
            assert_eq!(f.name().parse::<ResourceFamily>().unwrap(), f);
        }
        assert!("bell".parse::<ResourceFamily>().is_err());
    }

    #[test]
    fn cat_validation_rejects_unnormalizable_core() {
        let bad = ResourceSpec::squeezed_cat(0.5, -std::f64::consts::FRAC_PI_4, 0.0);
        assert!(bad.validate().is_err());
        assert!(ResourceSpec::squeezed_cat(0.5, -std::f64::consts::FRAC_PI_4, 0.5).validate().is_ok());
        assert!(ResourceSpec::twin_beam(-0.1).validate().is_err());
    }
}
