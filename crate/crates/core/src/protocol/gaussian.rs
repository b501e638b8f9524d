//! Covariance-matrix model of the twin-beam protocol. Quadrature vectors are
//! ordered `(x_in, p_in, x_1, p_1, x_2, p_2, x_3, p_3, x_4, p_4)`, modes 3 and 4
//! being the vacua entering the lossy-detector beam splitters. The vacuum
//! covariance is `I/2`.

use nalgebra::{Matrix2, SMatrix, SVector, Vector2};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use super::{GainSetting, NoiseParams};
use crate::error::{Error, Result};
use crate::phase_space::{CoherentInput, PhasePoint};

type Mat10 = SMatrix<f64, 10, 10>;
type Vec10 = SVector<f64, 10>;

const IN: usize = 0;
const M1: usize = 2;
const M2: usize = 4;
const M3: usize = 6;
const M4: usize = 8;

/// Single-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMode {
    pub mean: Vector2<f64>,
    pub cov: Matrix2<f64>,
}

impl GaussianMode {
    pub fn coherent(beta: Complex64) -> Self {
        Self { mean: Vector2::new(SQRT_2 * beta.re, SQRT_2 * beta.im), cov: Matrix2::identity() * 0.5 }
    }

    /// `exp(i(p <X> - x <P>)) exp(-k^T V k / 2)` with `k = (p, -x)`.
    pub fn chi(&self, pt: PhasePoint) -> Complex64 {
        let k = Vector2::new(pt.p, -pt.x);
        let quad = (k.transpose() * self.cov * k)[(0, 0)];
        Complex64::from_polar((-0.5 * quad).exp(), k.dot(&self.mean))
    }

    /// `Tr[rho sigma]` for two Gaussian states.
    pub fn overlap(&self, other: &GaussianMode) -> Result<f64> {
        let s = self.cov + other.cov;
        let inv = s.try_inverse().ok_or_else(|| Error::Degenerate("singular covariance sum".into()))?;
        let d = self.mean - other.mean;
        Ok((-0.5 * (d.transpose() * inv * d)[(0, 0)]).exp() / s.determinant().sqrt())
    }
}

/// Result of propagating the twin-beam protocol through its Gaussian model.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPipeline {
    /// Mean of the outcome vector `(x~, p~) = (X_1'', P_in'')`.
    pub outcome_mean: Vector2<f64>,
    pub outcome_cov: Matrix2<f64>,
    /// Unconditioned mode 2 before the channel.
    pub mode2: GaussianMode,
    /// `Cov(mode 2, outcome)`.
    pub cross: Matrix2<f64>,
    /// Teleported state averaged over outcomes.
    pub output: GaussianMode,
    pub input: GaussianMode,
    noise: NoiseParams,
    g: f64,
}

impl GaussianPipeline {
    /// Mode 2 right after the Bell measurement gave `(x~, p~)`.
    pub fn conditional(&self, x_tilde: f64, p_tilde: f64) -> Result<GaussianMode> {
        let inv = self.outcome_inverse()?;
        let k = self.cross * inv;
        let o = Vector2::new(x_tilde, p_tilde);
        Ok(GaussianMode {
            mean: self.mode2.mean + k * (o - self.outcome_mean),
            cov: self.mode2.cov - k * self.cross.transpose(),
        })
    }

    /// Outcome density at `(x~, p~)`.
    pub fn outcome_density(&self, x_tilde: f64, p_tilde: f64) -> Result<f64> {
        let inv = self.outcome_inverse()?;
        let d = Vector2::new(x_tilde, p_tilde) - self.outcome_mean;
        let q = (d.transpose() * inv * d)[(0, 0)];
        Ok((-0.5 * q).exp() / (2.0 * std::f64::consts::PI * self.outcome_cov.determinant().sqrt()))
    }

    pub fn fidelity(&self) -> Result<f64> {
        self.input.overlap(&self.output)
    }

    pub fn gain(&self) -> f64 {
        self.g
    }

    pub fn noise(&self) -> NoiseParams {
        self.noise
    }

    fn outcome_inverse(&self) -> Result<Matrix2<f64>> {
        if self.outcome_cov.determinant() <= 1e-14 {
            return Err(Error::Degenerate("outcome covariance is singular".into()));
        }
        self.outcome_cov
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("outcome covariance is singular".into()))
    }
}

/// Mixes modes `a` and `b`: `a' = c_aa a + c_ab b`, `b' = c_ba a + c_bb b` on both quadratures.
fn mixer(a: usize, b: usize, c: [[f64; 2]; 2]) -> Mat10 {
    let mut m = Mat10::identity();
    for q in 0..2 {
        m[(a + q, a + q)] = c[0][0];
        m[(a + q, b + q)] = c[0][1];
        m[(b + q, a + q)] = c[1][0];
        m[(b + q, b + q)] = c[1][1];
    }
    m
}

/// Gaussian model of the protocol with a twin-beam resource (`phi = pi`).
pub fn gaussian_pipeline(
    input: CoherentInput,
    r: f64,
    noise: &NoiseParams,
    gain: &GainSetting,
) -> Result<GaussianPipeline> {
    noise.validate()?;
    gain.validate()?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidParameter(format!("squeezing r must be finite and >= 0, got {r}")));
    }
    let inp = GaussianMode::coherent(input.beta);
    let mut mean = Vec10::zeros();
    mean[IN] = inp.mean[0];
    mean[IN + 1] = inp.mean[1];

    let mut cov = Mat10::identity() * 0.5;
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    for q in 0..2 {
        cov[(M1 + q, M1 + q)] = 0.5 * ch;
        cov[(M2 + q, M2 + q)] = 0.5 * ch;
    }
    // <X1 X2> = sinh(2r)/2, <P1 P2> = -sinh(2r)/2 for phi = pi
    cov[(M1, M2)] = 0.5 * sh;
    cov[(M2, M1)] = 0.5 * sh;
    cov[(M1 + 1, M2 + 1)] = -0.5 * sh;
    cov[(M2 + 1, M1 + 1)] = -0.5 * sh;

    let s = FRAC_1_SQRT_2;
    let (t, rr) = (noise.t(), noise.r2.sqrt());
    let chain = mixer(IN, M3, [[t, -rr], [rr, t]])
        * mixer(M1, M4, [[t, -rr], [rr, t]])
        * mixer(IN, M1, [[s, s], [s, -s]]);
    let mean = chain * mean;
    let cov = chain * cov * chain.transpose();

    // outcome o = (X_1'', P_in'')
    let idx_o = [M1, IN + 1];
    let idx_2 = [M2, M2 + 1];
    let pick = |rows: [usize; 2], cols: [usize; 2]| {
        Matrix2::new(cov[(rows[0], cols[0])], cov[(rows[0], cols[1])], cov[(rows[1], cols[0])], cov[(rows[1], cols[1])])
    };
    let outcome_mean = Vector2::new(mean[idx_o[0]], mean[idx_o[1]]);
    let outcome_cov = pick(idx_o, idx_o);
    let cross = pick(idx_2, idx_o);
    let mode2 = GaussianMode { mean: Vector2::new(mean[M2], mean[M2 + 1]), cov: pick(idx_2, idx_2) };

    if outcome_cov.determinant() <= 1e-14 {
        return Err(Error::Degenerate("outcome covariance is singular".into()));
    }
    let k = cross * outcome_cov.try_inverse().ok_or_else(|| Error::Degenerate("outcome covariance is singular".into()))?;
    let att = noise.attenuation();
    let g = gain.g(noise);
    let heat = -(-noise.tau).exp_m1() * (0.5 + noise.n_th);
    let cond_cov = mode2.cov - k * cross.transpose();
    let m = k * att + Matrix2::identity() * (SQRT_2 * g);
    let output = GaussianMode {
        mean: (mode2.mean - k * outcome_mean) * att + m * outcome_mean,
        cov: cond_cov * (att * att) + Matrix2::identity() * heat + m * outcome_cov * m.transpose(),
    };

    Ok(GaussianPipeline { outcome_mean, outcome_cov, mode2, cross, output, input: inp, noise: *noise, g })
}
