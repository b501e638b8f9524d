//! Bell-measurement conditioning and the outcome-averaged output, computed by
//! direct quadrature instead of the delta-function collapse.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{gaussian_pipeline, BellOutcome, GainSetting, NoiseParams};
use crate::error::{Error, Result};
use crate::phase_space::{
    chi_input_coherent, CoherentInput, PhasePoint, ResourceChi, ResourceFamily, ResourceSpec, TwoModePhasePoint,
};
use crate::quadrature::{composite_nodes, envelope_half_width, SquareRule};

/// Integrand of the conditioned characteristic function without the outcome phase.
struct BellWeight {
    input: CoherentInput,
    res: ResourceChi,
    t: f64,
    r2: f64,
}

impl BellWeight {
    fn new(input: CoherentInput, spec: &ResourceSpec, noise: &NoiseParams) -> Result<Self> {
        spec.validate()?;
        noise.validate()?;
        Ok(Self { input, res: ResourceChi::new(spec), t: noise.t(), r2: noise.r2 })
    }

    /// Decay rate `c` of the envelope `e^{-c (xi^2 + ups^2)}`.
    fn envelope(&self) -> f64 {
        self.t * self.t / 8.0 + self.r2 / 4.0
    }

    fn eval(&self, xi: f64, ups: f64, m2: PhasePoint) -> Complex64 {
        let s = self.t * FRAC_1_SQRT_2;
        let a = PhasePoint::new(s * xi, s * ups);
        let b = PhasePoint::new(s * xi, -s * ups);
        chi_input_coherent(self.input, a)
            * self.res.eval(TwoModePhasePoint::new(b, m2))
            * (-0.25 * self.r2 * (xi * xi + ups * ups)).exp()
            / (4.0 * PI * PI)
    }
}

/// `P(p~, x~) chi_Bm(x_2, p_2)`, the conditioned characteristic function before normalization.
pub fn chi_bell_unnormalized(
    input: CoherentInput,
    spec: &ResourceSpec,
    noise: &NoiseParams,
    outcome: BellOutcome,
    pt: PhasePoint,
) -> Result<Complex64> {
    let w = BellWeight::new(input, spec, noise)?;
    let half = envelope_half_width(w.envelope());
    let est = SquareRule::default().integrate(half, |xi, ups| {
        w.eval(xi, ups, pt) * Complex64::from_polar(1.0, xi * outcome.p_tilde - outcome.x_tilde * ups)
    })?;
    Ok(est.value)
}

/// Outcome density `P(p~, x~)`.
pub fn outcome_distribution(
    input: CoherentInput,
    spec: &ResourceSpec,
    noise: &NoiseParams,
    outcome: BellOutcome,
) -> Result<f64> {
    Ok(chi_bell_unnormalized(input, spec, noise, outcome, PhasePoint::ORIGIN)?.re)
}

/// Normalized characteristic function of mode 2 after the Bell measurement.
pub fn chi_bell_conditioned(
    input: CoherentInput,
    spec: &ResourceSpec,
    noise: &NoiseParams,
    outcome: BellOutcome,
    pt: PhasePoint,
) -> Result<Complex64> {
    let p = outcome_distribution(input, spec, noise, outcome)?;
    if !(p > 0.0) {
        return Err(Error::Degenerate(format!("outcome probability density {p:e} is not positive")));
    }
    Ok(chi_bell_unnormalized(input, spec, noise, outcome, pt)? / p)
}

/// Inner panels needed to resolve phases up to `k_max` over `[-half, half]`.
fn inner_panels(half: f64, k_max: f64) -> usize {
    let need = (2.0 * half * k_max / 10.0).ceil().max(16.0) as usize;
    need.next_power_of_two()
}

/// Matrix `S[a][b] = P(p~_b, x~_a) chi_Bm(pt)` on a tensor grid of outcomes.
fn outcome_matrix(w: &BellWeight, pt: PhasePoint, xs: &[f64], ps: &[f64], refine: usize) -> DMatrix<Complex64> {
    let half = envelope_half_width(w.envelope());
    let k_max = xs.iter().chain(ps).fold(1.0f64, |m, v| m.max(v.abs()));
    let nodes = composite_nodes(0.0, half, inner_panels(half, k_max) * refine);
    let n = nodes.len();
    // gt[j, i] = w_i w_j weight(xi_i, ups_j)
    let gt = DMatrix::from_fn(n, n, |j, i| {
        let (xi, wi) = nodes[i];
        let (ups, wj) = nodes[j];
        wi * wj * w.eval(xi, ups, pt)
    });
    let ex = DMatrix::from_fn(xs.len(), n, |a, j| Complex64::from_polar(1.0, -xs[a] * nodes[j].0));
    let ep = DMatrix::from_fn(n, ps.len(), |i, b| Complex64::from_polar(1.0, nodes[i].0 * ps[b]));
    ex * (gt * ep)
}

/// `P(p~, x~) chi_Bm(pt)` for every pair `(xs[a], ps[b])`, as `[a][b]`.
pub fn outcome_grid(
    input: CoherentInput,
    spec: &ResourceSpec,
    noise: &NoiseParams,
    pt: PhasePoint,
    xs: &[f64],
    ps: &[f64],
) -> Result<DMatrix<Complex64>> {
    let w = BellWeight::new(input, spec, noise)?;
    Ok(outcome_matrix(&w, pt, xs, ps, 1))
}

/// Output characteristic function obtained by conditioning on each Bell outcome,
/// propagating through the channel, displacing by `g (x~ + i p~)` and averaging
/// over outcomes. Slow; meant as an independent check of [`super::chi_out`].
pub fn chi_out_via_measurement_average(
    input: CoherentInput,
    spec: &ResourceSpec,
    noise: &NoiseParams,
    gain: &GainSetting,
    pt: PhasePoint,
) -> Result<Complex64> {
    let factor = match spec.family() {
        ResourceFamily::TwinBeam => 8.0,
        ResourceFamily::SqueezedBell | ResourceFamily::PhotonSubtracted => 10.0,
        other => {
            return Err(Error::InvalidParameter(format!(
                "measurement average supports twin-beam and squeezed-bell resources, not {other}"
            )))
        }
    };
    gain.validate()?;
    let w = BellWeight::new(input, spec, noise)?;
    let gauss = gaussian_pipeline(input, spec.r(), noise, gain)?;
    let (mx, mp) = (gauss.outcome_mean[0], gauss.outcome_mean[1]);
    let (sx, sp) = (gauss.outcome_cov[(0, 0)].sqrt(), gauss.outcome_cov[(1, 1)].sqrt());
    let g = gain.g(noise);
    let m2 = pt.scale(noise.attenuation());
    let heat = (0.5 * (-noise.tau).exp_m1() * (0.5 + noise.n_th) * pt.norm_sqr()).exp();

    let mut prev: Option<Complex64> = None;
    for (level, outer) in [8usize, 16, 32].into_iter().enumerate() {
        let xn = composite_nodes(mx, factor * sx, outer);
        let pn = composite_nodes(mp, factor * sp, outer);
        let xs: Vec<f64> = xn.iter().map(|n| n.0).collect();
        let ps: Vec<f64> = pn.iter().map(|n| n.0).collect();
        let s = outcome_matrix(&w, m2, &xs, &ps, 1 << level);
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, &(x, wx)) in xn.iter().enumerate() {
            for (b, &(p, wp)) in pn.iter().enumerate() {
                let phase = SQRT_2 * g * (x * pt.p - p * pt.x);
                acc += wx * wp * s[(a, b)] * Complex64::from_polar(1.0, phase);
            }
        }
        acc *= heat;
        if let Some(last) = prev {
            let err = (acc - last).norm();
            if err < 1e-10 {
                return Ok(acc);
            }
            if level == 2 {
                if err < 1e-8 {
                    return Ok(acc);
                }
                return Err(Error::NonConvergence { estimate: acc.re, error: err });
            }
        }
        prev = Some(acc);
    }
    unreachable!("loop returns at the last level")
}
