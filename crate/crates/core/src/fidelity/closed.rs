//! Closed-form fidelities for resources with `phi = pi`, `theta = 0` and real
//! `gamma`, and their averages over the Gaussian alphabet.
//!
//! With `g~ = g T`, `a = e^{-2r} (e^{-tau/2} + g~)^2` and
//! `b = e^{2r} (e^{-tau/2} - g~)^2`, the common scale is
//! `Delta = a + b + 2 (1 + g~^2 + 2 Gamma)`.
//!
//! The squeezed-cat mixed terms carry `g~ -/+ e^{-tau/2}` and the last
//! exponent `e^r gamma (g~ - e^{-tau/2})`; both were checked against direct
//! quadrature of the overlap integral.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::protocol::{gamma_cov, GainSetting, NoiseParams};
use crate::quadrature::hermite_rule;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Scalars {
    pub r: f64,
    pub gt: f64,
    /// `Delta`
    pub big: f64,
    pub a: f64,
    pub b: f64,
    /// `e^{-tau/2}`
    pub att: f64,
    /// `(g~ - 1)^2`
    pub k: f64,
}

impl Scalars {
    pub fn new(r: f64, noise: &NoiseParams, gain: &GainSetting) -> Self {
        let gt = gain.effective(noise);
        let att = noise.attenuation();
        let gamma = gamma_cov(noise, gain);
        let a = (-2.0 * r).exp() * (att + gt).powi(2);
        let b = (2.0 * r).exp() * (att - gt).powi(2);
        Self { r, gt, big: a + b + 2.0 * (1.0 + gt * gt + 2.0 * gamma), a, b, att, k: (gt - 1.0).powi(2) }
    }

    /// Coefficients `(p0, p1, p2)` with `F_SB = (4/Delta) e^{-4k|beta|^2/Delta} (p0 + p1 |beta|^2 + p2 |beta|^4)`.
    fn bell_poly(&self, delta: f64) -> [f64; 3] {
        let (s, c) = delta.sin_cos();
        let d = self.big;
        let k = self.k;
        let amb = self.a - self.b;
        let sq = 2.0 * s * s * amb * amb / d.powi(4);
        let lin = 2.0 * s * (c * (self.b - self.a) + s * (self.a + self.b)) / (d * d);
        [1.0 + sq * d * d - lin * d, -8.0 * d * k * sq + 4.0 * k * lin, 8.0 * k * k * sq]
    }

    /// `(q0, q1, q2)` of the Buridan donkey for the `|beta|^2` part, and the
    /// coefficient multiplying `Re(beta^2)`.
    fn buridan_poly(&self, delta: f64) -> ([f64; 2], f64) {
        let d = self.big;
        let k = self.k;
        let ab = self.a + self.b;
        let cc = 2.0 * (2.0 * delta).cos() * (self.gt * self.gt - self.att * self.att);
        let q0 = 1.0 + (cc * d - ab * d) / (d * d);
        let q1 = (4.0 * k * ab - 4.0 * k * cc) / (d * d);
        let re2 = -4.0 * (2.0 * delta).sin() * k * (self.a - self.b) / (d * d);
        ([q0, q1], re2)
    }

    fn envelope(&self, b2: f64) -> f64 {
        4.0 / self.big * (-4.0 * self.k * b2 / self.big).exp()
    }

    pub fn twin_beam(&self, beta: Complex64) -> f64 {
        self.envelope(beta.norm_sqr())
    }

    pub fn squeezed_bell(&self, delta: f64, beta: Complex64) -> f64 {
        let b2 = beta.norm_sqr();
        let [p0, p1, p2] = self.bell_poly(delta);
        self.envelope(b2) * (p0 + b2 * (p1 + b2 * p2))
    }

    pub fn buridan(&self, delta: f64, beta: Complex64) -> f64 {
        let b2 = beta.norm_sqr();
        let ([q0, q1], re2) = self.buridan_poly(delta);
        self.envelope(b2) * (q0 + q1 * b2 + re2 * (beta * beta).re)
    }

    pub fn squeezed_cat(&self, delta: f64, gamma: f64, beta: Complex64) -> f64 {
        if gamma == 0.0 {
            return self.twin_beam(beta);
        }
        let (s, c) = delta.sin_cos();
        let d = self.big;
        let eg = (-gamma * gamma).exp();
        let pre = 4.0 / (d * (1.0 + eg * (2.0 * delta).sin()));
        let h = self.cat_shifts(gamma);
        let gm1 = self.gt - 1.0;
        let t0 = (-4.0 * self.k * beta.norm_sqr() / d).exp();
        let re_arg = 2.0 * gm1 * beta.re - h[0];
        let im_arg = Complex64::new(h[1], 2.0 * gm1 * beta.im);
        let t1 = eg * (-re_arg * re_arg / d).exp() * 2.0 * (im_arg * im_arg / d).exp().re;
        let shifted = Complex64::new(gm1 * beta.re - h[2], gm1 * beta.im);
        let t2 = (-4.0 * shifted.norm_sqr() / d).exp();
        pre * (c * c * t0 + s * c * t1 + s * s * t2)
    }

    /// `[e^r gamma (g~ - e^{-tau/2}), e^{-r} gamma (g~ + e^{-tau/2}), e^r gamma (g~ - e^{-tau/2})]`
    fn cat_shifts(&self, gamma: f64) -> [f64; 3] {
        let up = self.r.exp() * gamma * (self.gt - self.att);
        let down = (-self.r).exp() * gamma * (self.gt + self.att);
        [up, down, up]
    }

    /// Gauss–Hermite moments for `sigma`.
    pub fn moments(&self, sigma: f64) -> Moments {
        let lam = 4.0 * self.k * sigma / self.big;
        let (mut s0, mut s2, mut s4) = (0.0, 0.0, 0.0);
        for &(x, w) in hermite_rule() {
            let x2 = x * x;
            let e = w * (-lam * x2).exp();
            s0 += e;
            s2 += e * x2;
            s4 += e * x2 * x2;
        }
        Moments {
            m: [
                s0 * s0 / PI,
                sigma * 2.0 * s0 * s2 / PI,
                sigma * sigma * (2.0 * s0 * s4 + 2.0 * s2 * s2) / PI,
            ],
        }
    }

    pub fn twin_beam_avg(&self, m: &Moments) -> f64 {
        4.0 / self.big * m.m[0]
    }

    pub fn squeezed_bell_avg(&self, delta: f64, m: &Moments) -> f64 {
        let p = self.bell_poly(delta);
        4.0 / self.big * (p[0] * m.m[0] + p[1] * m.m[1] + p[2] * m.m[2])
    }

    /// The `Re(beta^2)` term averages to zero over the isotropic prior.
    pub fn buridan_avg(&self, delta: f64, m: &Moments) -> f64 {
        let ([q0, q1], _) = self.buridan_poly(delta);
        4.0 / self.big * (q0 * m.m[0] + q1 * m.m[1])
    }

    /// Gauss–Hermite averages of the three delta-independent cat terms.
    pub fn cat_averages(&self, gamma: f64, sigma: f64) -> CatAverages {
        let d = self.big;
        let sq = sigma.sqrt();
        let gm1 = self.gt - 1.0;
        let h = self.cat_shifts(gamma);
        let (mut a0, mut a1, mut a2u, mut a2v) = (0.0, 0.0, 0.0, 0.0);
        let mut y1 = Complex64::new(0.0, 0.0);
        for &(x, w) in hermite_rule() {
            let u = sq * x;
            let v0 = gm1 * u;
            a0 += w * (-4.0 * v0 * v0 / d).exp();
            let ra = 2.0 * v0 - h[0];
            a1 += w * (-ra * ra / d).exp();
            let ia = Complex64::new(h[1], 2.0 * v0);
            y1 += w * (ia * ia / d).exp();
            let sa = v0 - h[2];
            a2u += w * (-4.0 * sa * sa / d).exp();
            a2v += w * (-4.0 * v0 * v0 / d).exp();
        }
        CatAverages {
            gamma,
            t: [a0 * a0 / PI, (-gamma * gamma).exp() * a1 * 2.0 * y1.re / PI, a2u * a2v / PI],
        }
    }

    pub fn squeezed_cat_avg(&self, delta: f64, avg: &CatAverages, m: &Moments) -> f64 {
        if avg.gamma == 0.0 {
            return self.twin_beam_avg(m);
        }
        let (s, c) = delta.sin_cos();
        let pre = 4.0 / (self.big * (1.0 + (-avg.gamma * avg.gamma).exp() * (2.0 * delta).sin()));
        pre * (c * c * avg.t[0] + s * c * avg.t[1] + s * s * avg.t[2])
    }
}

/// `E[e^{-4k|beta|^2/Delta} |beta|^{2n}]`, `n = 0, 1, 2`, under the alphabet prior.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Moments {
    pub m: [f64; 3],
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct CatAverages {
    pub gamma: f64,
    pub t: [f64; 3],
}
