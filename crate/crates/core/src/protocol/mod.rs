//! Nonideal Braunstein–Kimble protocol in the characteristic-function picture:
//! lossy Bell measurement (fictitious beam splitters of reflectivity `R^2`),
//! damping channel of reduced time `tau` with `n_th` thermal photons, and
//! Bob's displacement with gain `g`.

mod gaussian;
mod measurement;

use num_complex::Complex64;

use crate::error::{ensure, Result};
use crate::phase_space::{chi_input_coherent, CoherentInput, PhasePoint, ResourceChi, ResourceSpec, TwoModePhasePoint};

pub use gaussian::{gaussian_pipeline, GaussianMode, GaussianPipeline};
pub use measurement::{
    chi_bell_conditioned, chi_bell_unnormalized, chi_out_via_measurement_average, outcome_distribution,
    outcome_grid,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub tau: f64,
    pub n_th: f64,
    pub r2: f64,
}

impl NoiseParams {
    pub fn new(tau: f64, n_th: f64, r2: f64) -> Result<Self> {
        let n = Self { tau, n_th, r2 };
        n.validate()?;
        Ok(n)
    }

    pub const fn ideal() -> Self {
        Self { tau: 0.0, n_th: 0.0, r2: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.tau.is_finite() && self.tau >= 0.0, || format!("tau must be finite and >= 0, got {}", self.tau))?;
        ensure(self.n_th.is_finite() && self.n_th >= 0.0, || format!("n_th must be finite and >= 0, got {}", self.n_th))?;
        ensure((0.0..1.0).contains(&self.r2), || format!("R^2 must lie in [0, 1), got {}", self.r2))
    }

    /// Beam-splitter transmissivity amplitude `T = sqrt(1 - R^2)`.
    pub fn t(&self) -> f64 {
        (1.0 - self.r2).sqrt()
    }

    /// Channel attenuation `e^{-tau/2}`.
    pub fn attenuation(&self) -> f64 {
        (-0.5 * self.tau).exp()
    }
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self::ideal()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainSetting {
    Fixed { g: f64 },
    UnityOverT,
}

impl GainSetting {
    pub fn g(&self, noise: &NoiseParams) -> f64 {
        match *self {
            GainSetting::Fixed { g } => g,
            GainSetting::UnityOverT => 1.0 / noise.t(),
        }
    }

    /// `g~ = g T`, exactly 1 for [`GainSetting::UnityOverT`].
    pub fn effective(&self, noise: &NoiseParams) -> f64 {
        match *self {
            GainSetting::Fixed { g } => g * noise.t(),
            GainSetting::UnityOverT => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GainSetting::Fixed { g } => ensure(g.is_finite() && g > 0.0, || format!("gain must be finite and > 0, got {g}")),
            GainSetting::UnityOverT => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BellOutcome {
    pub x_tilde: f64,
    pub p_tilde: f64,
}

impl BellOutcome {
    pub const fn new(x_tilde: f64, p_tilde: f64) -> Self {
        Self { x_tilde, p_tilde }
    }
}

/// `Gamma = (1 - e^{-tau})(1/2 + n_th) + g^2 R^2`.
pub fn gamma_cov(noise: &NoiseParams, gain: &GainSetting) -> f64 {
    let g = gain.g(noise);
    -(-noise.tau).exp_m1() * (0.5 + noise.n_th) + g * g * noise.r2
}

/// Output characteristic function with everything but the point precomputed.
#[derive(Debug, Clone, Copy)]
pub struct OutputChi {
    input: CoherentInput,
    res: ResourceChi,
    gt: f64,
    att: f64,
    gamma: f64,
}

impl OutputChi {
    pub fn new(input: CoherentInput, spec: &ResourceSpec, noise: &NoiseParams, gain: &GainSetting) -> Self {
        Self {
            input,
            res: ResourceChi::new(spec),
            gt: gain.effective(noise),
            att: noise.attenuation(),
            gamma: gamma_cov(noise, gain),
        }
    }

    pub fn eval(&self, pt: PhasePoint) -> Complex64 {
        let g = self.gt;
        let res = self.res.eval(TwoModePhasePoint::new(
            PhasePoint::new(g * pt.x, -g * pt.p),
            pt.scale(self.att),
        ));
        chi_input_coherent(self.input, pt.scale(g)) * res * (-0.5 * self.gamma * pt.norm_sqr()).exp()
    }
}

pub fn chi_out(
    input: CoherentInput,
    spec: &ResourceSpec,
    noise: &NoiseParams,
    gain: &GainSetting,
    pt: PhasePoint,
) -> Complex64 {
    OutputChi::new(input, spec, noise, gain).eval(pt)
}

/// Ideal protocol: `chi_in(x, p) chi_res(x, -p; x, p)`.
pub fn chi_out_ideal(input: CoherentInput, spec: &ResourceSpec, pt: PhasePoint) -> Complex64 {
    chi_input_coherent(input, pt) * ResourceChi::new(spec).eval(TwoModePhasePoint::new(PhasePoint::new(pt.x, -pt.p), pt))
}

/// Solution of the damping-channel diffusion equation after reduced time `tau`.
pub fn propagate_lossy<F>(chi_initial: F, tau: f64, n_th: f64, pt: PhasePoint) -> Complex64
where
    F: Fn(PhasePoint) -> Complex64,
{
    let att = (-0.5 * tau).exp();
    chi_initial(pt.scale(att)) * (0.5 * (-tau).exp_m1() * (0.5 + n_th) * pt.norm_sqr()).exp()
}

/// Characteristic function of `D(lambda) rho D^dag(lambda)`.
pub fn displace_chi<F>(chi: F, lambda: Complex64, pt: PhasePoint) -> Complex64
where
    F: Fn(PhasePoint) -> Complex64,
{
    let phase = std::f64::consts::SQRT_2 * (lambda.re * pt.p - lambda.im * pt.x);
    chi(pt) * Complex64::from_polar(1.0, phase)
}
