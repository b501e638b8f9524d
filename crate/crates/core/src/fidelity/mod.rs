//! Teleportation fidelity `F = Tr[rho_in rho_out]`, its average over a Gaussian
//! alphabet of coherent states, and the classical benchmark.

pub(crate) mod closed;

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::phase_space::{chi_input_coherent, CoherentInput, PhasePoint, ResourceFamily, ResourceSpec};
use crate::protocol::{gamma_cov, GainSetting, NoiseParams, OutputChi};
use crate::quadrature::{envelope_half_width, hermite_rule, SquareRule};

pub(crate) use closed::Scalars;

/// Gaussian prior `p(beta) = e^{-|beta|^2/sigma} / (pi sigma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphabetPrior {
    pub sigma: f64,
}

impl AlphabetPrior {
    pub fn new(sigma: f64) -> Result<Self> {
        ensure(sigma.is_finite() && sigma > 0.0, || format!("sigma must be finite and > 0, got {sigma}"))?;
        Ok(Self { sigma })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Closed,
    Quadrature,
    GaussianOracle,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Quadrature => "quadrature",
            Method::GaussianOracle => "gaussian-oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub value: f64,
    pub method: Method,
    pub resource: ResourceSpec,
    pub noise: NoiseParams,
    pub gain: GainSetting,
    pub beta: Option<Complex64>,
    pub sigma: Option<f64>,
}

fn wrapped(angle: f64, target: f64) -> bool {
    let d = (angle - target).rem_euclid(TAU);
    d.min(TAU - d) < 1e-12
}

/// Free parameters `(delta, gamma)` of a spec whose phases match the closed forms.
pub(crate) fn specialized(spec: &ResourceSpec) -> Result<(f64, f64)> {
    let (_, phi) = spec.squeezing();
    let name = spec.family().name();
    if !wrapped(phi, PI) {
        return Err(Error::PhaseNotSpecialized(name));
    }
    match *spec {
        ResourceSpec::TwinBeam { .. } | ResourceSpec::PhotonSubtracted { .. } => Ok((0.0, 0.0)),
        ResourceSpec::SqueezedBell { delta, theta, .. } | ResourceSpec::BuridanDonkey { delta, theta, .. } => {
            if wrapped(theta, 0.0) {
                Ok((delta, 0.0))
            } else {
                Err(Error::PhaseNotSpecialized(name))
            }
        }
        ResourceSpec::SqueezedCat { delta, theta, gamma_mod, gamma_phase, .. } => {
            if wrapped(theta, 0.0) && (gamma_mod == 0.0 || wrapped(gamma_phase, 0.0)) {
                Ok((delta, gamma_mod))
            } else {
                Err(Error::PhaseNotSpecialized(name))
            }
        }
    }
}

fn check_inputs(spec: &ResourceSpec, noise: &NoiseParams, gain: &GainSetting) -> Result<()> {
    spec.validate()?;
    noise.validate()?;
    gain.validate()
}

/// Closed-form value for already validated arguments.
pub(crate) fn closed_value(spec: &ResourceSpec, sc: &Scalars, beta: Complex64) -> Result<f64> {
    let (delta, gamma) = specialized(spec)?;
    Ok(match spec.family() {
        ResourceFamily::TwinBeam => sc.twin_beam(beta),
        ResourceFamily::SqueezedBell => sc.squeezed_bell(delta, beta),
        ResourceFamily::PhotonSubtracted => sc.squeezed_bell(spec.r().tanh().atan(), beta),
        ResourceFamily::SqueezedCat => sc.squeezed_cat(delta, gamma, beta),
        ResourceFamily::BuridanDonkey => sc.buridan(delta, beta),
    })
}

/// `F = (1/2pi) int chi_in(x, p) chi_out(-x, -p) dx dp` by adaptive quadrature.
pub fn fidelity_quadrature(
    input: CoherentInput,
    spec: &ResourceSpec,
    noise: &NoiseParams,
    gain: &GainSetting,
) -> Result<FidelityReport> {
    check_inputs(spec, noise, gain)?;
    let out = OutputChi::new(input, spec, noise, gain);
    let gt = gain.effective(noise);
    let c = (1.0 + gt * gt) / 4.0 + gamma_cov(noise, gain) / 2.0;
    let est = SquareRule::default().integrate(envelope_half_width(c), |x, p| {
        let pt = PhasePoint::new(x, p);
        chi_input_coherent(input, pt) * out.eval(-pt)
    })?;
    Ok(FidelityReport {
        value: est.value.re / (2.0 * PI),
        method: Method::Quadrature,
        resource: *spec,
        noise: *noise,
        gain: *gain,
        beta: Some(input.beta),
        sigma: None,
    })
}

/// Closed forms for `phi = pi`, `theta = 0`, real `gamma`.
pub fn fidelity_closed(
    spec: &ResourceSpec,
    noise: &NoiseParams,
    gain: &GainSetting,
    beta: Complex64,
) -> Result<FidelityReport> {
    check_inputs(spec, noise, gain)?;
    let sc = Scalars::new(spec.r(), noise, gain);
    Ok(FidelityReport {
        value: closed_value(spec, &sc, beta)?,
        method: Method::Closed,
        resource: *spec,
        noise: *noise,
        gain: *gain,
        beta: Some(beta),
        sigma: None,
    })
}

/// `int F(beta) p(beta) d^2 beta` by a tensor Gauss–Hermite rule of order 60.
/// Falls back to quadrature fidelities when no closed form applies.
pub fn average_fidelity(
    spec: &ResourceSpec,
    noise: &NoiseParams,
    gain: &GainSetting,
    prior: &AlphabetPrior,
) -> Result<FidelityReport> {
    check_inputs(spec, noise, gain)?;
    AlphabetPrior::new(prior.sigma)?;
    let sc = Scalars::new(spec.r(), noise, gain);
    let closed = specialized(spec).is_ok();
    let rule = hermite_rule();
    let scale = prior.sigma.sqrt();
    let mut acc = 0.0;
    for &(x, wx) in rule {
        let mut row = 0.0;
        for &(y, wy) in rule {
            let beta = Complex64::new(scale * x, scale * y);
            let f = if closed {
                closed_value(spec, &sc, beta)?
            } else {
                fidelity_quadrature(CoherentInput::new(beta), spec, noise, gain)?.value
            };
            row += wy * f;
        }
        acc += wx * row;
    }
    Ok(FidelityReport {
        value: acc / PI,
        method: if closed { Method::Closed } else { Method::Quadrature },
        resource: *spec,
        noise: *noise,
        gain: *gain,
        beta: None,
        sigma: Some(prior.sigma),
    })
}

/// Best fidelity reachable without entanglement for the Gaussian alphabet.
pub fn classical_benchmark(prior: &AlphabetPrior) -> f64 {
    (prior.sigma + 1.0) / (2.0 * prior.sigma + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn twin_beam_ideal_values() {
        for &r in &[0.0, 0.5, 1.0, 1.5] {
            let f = fidelity_closed(&ResourceSpec::twin_beam(r), &NoiseParams::ideal(), &GainSetting::UnityOverT, c(0.3, 1.0))
                .unwrap()
                .value;
            assert!((f - 1.0 / (1.0 + (-2.0 * r).exp())).abs() < 1e-15);
        }
        let f0 = fidelity_closed(&ResourceSpec::twin_beam(0.0), &NoiseParams::ideal(), &GainSetting::UnityOverT, c(0.0, 0.0))
            .unwrap()
            .value;
        assert_eq!(f0, 0.5);
    }

    #[test]
    fn quadrature_reproduces_twin_beam_anchor() {
        let f = fidelity_quadrature(
            CoherentInput::new(c(0.4, -0.3)),
            &ResourceSpec::twin_beam(1.0),
            &NoiseParams::ideal(),
            &GainSetting::UnityOverT,
        )
        .unwrap();
        assert!((f.value - 0.880_797_077_977_882_3).abs() < 1e-10);
    }

    #[test]
    fn general_phases_are_rejected_by_closed_form() {
        let spec = ResourceSpec::SqueezedBell { r: 0.5, phi: 0.3, delta: 0.2, theta: 0.0 };
        let err = fidelity_closed(&spec, &NoiseParams::ideal(), &GainSetting::UnityOverT, c(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::PhaseNotSpecialized(_)));
        let spec = ResourceSpec::SqueezedCat { r: 0.5, phi: PI, delta: 0.2, theta: 0.0, gamma_mod: 1.0, gamma_phase: 0.5 };
        assert!(fidelity_closed(&spec, &NoiseParams::ideal(), &GainSetting::UnityOverT, c(0.0, 0.0)).is_err());
        let spec = ResourceSpec::SqueezedBell { r: 0.5, phi: -PI, delta: 0.2, theta: TAU };
        assert!(fidelity_closed(&spec, &NoiseParams::ideal(), &GainSetting::UnityOverT, c(0.0, 0.0)).is_ok());
    }

    #[test]
    fn benchmark_values() {
        let b10 = classical_benchmark(&AlphabetPrior::new(10.0).unwrap());
        let b100 = classical_benchmark(&AlphabetPrior::new(100.0).unwrap());
        assert!((b10 - 11.0 / 21.0).abs() < 1e-15);
        assert!((b100 - 101.0 / 201.0).abs() < 1e-15);
        assert!((classical_benchmark(&AlphabetPrior::new(1e12).unwrap()) - 0.5).abs() < 1e-12);
        assert!(AlphabetPrior::new(0.0).is_err());
    }

    #[test]
    fn twin_beam_average_is_analytic() {
        let noise = NoiseParams::new(0.3, 0.1, 0.05).unwrap();
        for &(g, sigma) in &[(0.9, 10.0), (1.1, 3.0), (1.0, 100.0), (0.97, 100.0)] {
            let gain = GainSetting::Fixed { g };
            let sc = Scalars::new(0.8, &noise, &gain);
            let expect = 4.0 / sc.big / (1.0 + 4.0 * sigma * sc.k / sc.big);
            let got = average_fidelity(&ResourceSpec::twin_beam(0.8), &noise, &gain, &AlphabetPrior::new(sigma).unwrap())
                .unwrap()
                .value;
            assert!((got - expect).abs() < 1e-10, "g={g} sigma={sigma}: {got} vs {expect}");
        }
    }

    #[test]
    fn average_collapses_for_narrow_prior() {
        let noise = NoiseParams::new(0.2, 0.0, 0.05).unwrap();
        let gain = GainSetting::Fixed { g: 0.8 };
        let spec = ResourceSpec::squeezed_bell(0.7, 0.4);
        let avg = average_fidelity(&spec, &noise, &gain, &AlphabetPrior::new(1e-9).unwrap()).unwrap().value;
        let f0 = fidelity_closed(&spec, &noise, &gain, c(0.0, 0.0)).unwrap().value;
        assert!((avg - f0).abs() < 1e-8);
    }

    fn kernel_matches_tensor(spec: ResourceSpec, noise: NoiseParams, gain: GainSetting, sigma: f64) {
        let sc = Scalars::new(spec.r(), &noise, &gain);
        let m = sc.moments(sigma);
        let delta = spec.delta().unwrap_or(0.0);
        let fast = match spec.family() {
            ResourceFamily::TwinBeam => sc.twin_beam_avg(&m),
            ResourceFamily::SqueezedBell | ResourceFamily::PhotonSubtracted => sc.squeezed_bell_avg(delta, &m),
            ResourceFamily::BuridanDonkey => sc.buridan_avg(delta, &m),
            ResourceFamily::SqueezedCat => {
                let gamma = spec.gamma_mod().unwrap();
                sc.squeezed_cat_avg(delta, &sc.cat_averages(gamma, sigma), &m)
            }
        };
        let slow = average_fidelity(&spec, &noise, &gain, &AlphabetPrior::new(sigma).unwrap()).unwrap().value;
        assert!((fast - slow).abs() < 1e-13, "{spec:?}: {fast} vs {slow}");
    }

    #[test]
    fn separable_averages_equal_tensor_rule() {
        let noise = NoiseParams::new(0.3, 0.0, 0.05).unwrap();
        for &g in &[0.85, 1.0, 1.2] {
            let gain = GainSetting::Fixed { g };
            for &sigma in &[1.0, 10.0, 100.0] {
                kernel_matches_tensor(ResourceSpec::twin_beam(0.9), noise, gain, sigma);
                kernel_matches_tensor(ResourceSpec::squeezed_bell(0.9, -0.6), noise, gain, sigma);
                kernel_matches_tensor(ResourceSpec::photon_subtracted(0.9), noise, gain, sigma);
                kernel_matches_tensor(ResourceSpec::buridan_donkey(0.9, 0.5), noise, gain, sigma);
                kernel_matches_tensor(ResourceSpec::squeezed_cat(0.9, 0.7, 1.3), noise, gain, sigma);
                kernel_matches_tensor(ResourceSpec::squeezed_cat(0.9, -0.3, 0.0), noise, gain, sigma);
            }
        }
    }
}
