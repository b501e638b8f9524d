//! Maximization of fidelities over the free resource parameters and the gain,
//! the optimal squeezing `r_max`, squeezed-vacuum affinity and one-shot fidelities.
//!
//! All searches are deterministic: a fixed grid, then golden-section (one free
//! parameter) or Nelder–Mead (several) refinement from the best grid point.
//! Exact ties in gain-averaged searches go to the lexicographically smallest
//! parameter vector `(g, delta, gamma)`. At `g = 1/T` ties go to the smallest
//! `(|delta|, |gamma|)` first, so degenerate optima report the twin-beam point
//! (e.g. the Buridan donkey at `tau = 0`, which does not depend on `delta`).

mod affinity;
pub mod search;

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{ensure, Result};
use crate::fidelity::closed::{Moments, Scalars};
use crate::fidelity::{fidelity_closed, AlphabetPrior, FidelityReport};
use crate::phase_space::{ResourceFamily, ResourceSpec};
use crate::protocol::{GainSetting, NoiseParams};

pub use affinity::{affinity, AffinityResult, AFFINITY_CUTOFF};
use search::{golden_max, nelder_mead_max};

/// Cat states with `1 + e^{-gamma^2} sin 2delta` below this are skipped by the search.
pub const CAT_FEASIBILITY: f64 = 1e-4;
pub const GAMMA_MAX: f64 = 5.0;
/// Upper bound of the effective gain `g~ = g T`.
pub const GT_MAX: f64 = 2.0;
const GT_MIN: f64 = 1e-6;
const REFINE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptimizerMethod {
    /// Nothing to optimize.
    Fixed,
    GridGolden,
    GridNelderMead,
}

impl OptimizerMethod {
    pub fn tag(self) -> &'static str {
        match self {
            OptimizerMethod::Fixed => "fixed",
            OptimizerMethod::GridGolden => "grid+golden",
            OptimizerMethod::GridNelderMead => "grid+nelder-mead",
        }
    }
}

impl fmt::Display for OptimizerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationResult {
    pub family: ResourceFamily,
    pub r: f64,
    pub noise: NoiseParams,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    /// Effective gain `g~`; `None` when fixed to `g = 1/T`.
    pub gain_eff: Option<f64>,
    pub sigma: Option<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub method: OptimizerMethod,
}

impl OptimizationResult {
    pub fn resource(&self) -> ResourceSpec {
        ResourceSpec::with_params(self.family, self.r, self.delta.unwrap_or(0.0), self.gamma.unwrap_or(0.0))
    }

    pub fn gain(&self) -> GainSetting {
        match self.gain_eff {
            Some(gt) if gt != 1.0 => GainSetting::Fixed { g: gt / self.noise.t() },
            _ => GainSetting::UnityOverT,
        }
    }

    /// Gain `g` itself.
    pub fn g(&self) -> f64 {
        self.gain().g(&self.noise)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RMax {
    Finite(f64),
    /// No finite optimum (`tau = 0`): fidelity grows monotonically with `r`.
    Unbounded,
}

impl RMax {
    pub fn value(self) -> Option<f64> {
        match self {
            RMax::Finite(r) => Some(r),
            RMax::Unbounded => None,
        }
    }
}

/// Squeezing maximizing the twin-beam fidelity at `g = 1/T`:
/// `r_max = (1/2) ln sqrt[(cosh(tau/2) + 1)/(cosh(tau/2) - 1)] = atanh(e^{-tau/2})`.
pub fn r_max(tau: f64) -> Result<RMax> {
    ensure(tau.is_finite() && tau >= 0.0, || format!("tau must be finite and >= 0, got {tau}"))?;
    if tau == 0.0 {
        return Ok(RMax::Unbounded);
    }
    Ok(RMax::Finite(-0.5 * (0.25 * tau).tanh().ln()))
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn cat_feasible(delta: f64, gamma: f64) -> bool {
    gamma == 0.0 || 1.0 + (-gamma * gamma).exp() * (2.0 * delta).sin() >= CAT_FEASIBILITY
}

/// Keeps the best `(value, params)`. Exact ties go to the smaller parameter
/// vector in lexicographic order, or, with `by_magnitude`, to the one closest
/// to the twin-beam point first.
#[derive(Debug, Clone)]
struct Best {
    value: f64,
    params: Vec<f64>,
    key: Vec<f64>,
    by_magnitude: bool,
}

impl Best {
    fn new() -> Self {
        Self { value: f64::NEG_INFINITY, params: Vec::new(), key: Vec::new(), by_magnitude: false }
    }

    fn by_magnitude() -> Self {
        Self { by_magnitude: true, ..Self::new() }
    }

    fn offer(&mut self, value: f64, params: &[f64]) {
        let key: Vec<f64> = if self.by_magnitude {
            params.iter().map(|p| p.abs()).chain(params.iter().copied()).collect()
        } else {
            params.to_vec()
        };
        let better = value > self.value
            || (value == self.value && key.partial_cmp(&self.key) == Some(std::cmp::Ordering::Less));
        if better {
            self.value = value;
            self.params = params.to_vec();
            self.key = key;
        }
    }
}

fn check(r: f64, noise: &NoiseParams) -> Result<()> {
    ensure(r.is_finite() && r >= 0.0, || format!("squeezing r must be finite and >= 0, got {r}"))?;
    noise.validate()
}

/// Maximizes the fidelity at `g = 1/T` over `delta in [-pi/2, pi/2]`
/// (and `gamma in [0, 5]` for cat states).
pub fn optimize_beta_independent(family: ResourceFamily, r: f64, noise: &NoiseParams) -> Result<OptimizationResult> {
    check(r, noise)?;
    let sc = Scalars::new(r, noise, &GainSetting::UnityOverT);
    let zero = Complex64::new(0.0, 0.0);
    let evals = Cell::new(0usize);
    let mut out = OptimizationResult {
        family,
        r,
        noise: *noise,
        delta: None,
        gamma: None,
        gain_eff: None,
        sigma: None,
        value: 0.0,
        evaluations: 1,
        method: OptimizerMethod::Fixed,
    };
    match family {
        ResourceFamily::TwinBeam => {
            out.value = sc.twin_beam(zero);
        }
        ResourceFamily::PhotonSubtracted => {
            let d = r.tanh().atan();
            out.delta = Some(d);
            out.value = sc.squeezed_bell(d, zero);
        }
        ResourceFamily::SqueezedBell | ResourceFamily::BuridanDonkey => {
            let f = |d: f64| {
                evals.set(evals.get() + 1);
                if family == ResourceFamily::SqueezedBell {
                    sc.squeezed_bell(d, zero)
                } else {
                    sc.buridan(d, zero)
                }
            };
            let mut best = Best::by_magnitude();
            for d in grid(-FRAC_PI_2, FRAC_PI_2, 201) {
                best.offer(f(d), &[d]);
            }
            if family == ResourceFamily::SqueezedBell {
                let d = r.tanh().atan();
                best.offer(f(d), &[d]);
            }
            let h = PI / 200.0;
            let c = best.params[0];
            let (d, fd, _) = golden_max(f, (c - h).max(-FRAC_PI_2), (c + h).min(FRAC_PI_2), REFINE_TOL);
            best.offer(fd, &[d]);
            out.delta = Some(best.params[0]);
            out.value = best.value;
            out.evaluations = evals.get();
            out.method = OptimizerMethod::GridGolden;
        }
        ResourceFamily::SqueezedCat => {
            let f = |x: &[f64]| {
                let (d, g) = (x[0].clamp(-FRAC_PI_2, FRAC_PI_2), x[1].clamp(0.0, GAMMA_MAX));
                evals.set(evals.get() + 1);
                if cat_feasible(d, g) {
                    sc.squeezed_cat(d, g, zero)
                } else {
                    f64::NEG_INFINITY
                }
            };
            let mut best = Best::by_magnitude();
            for d in grid(-FRAC_PI_2, FRAC_PI_2, 201) {
                for g in grid(0.0, GAMMA_MAX, 201) {
                    best.offer(f(&[d, g]), &[d, g]);
                }
            }
            let start = best.params.clone();
            let (x, _, _) = nelder_mead_max(f, &start, &[PI / 200.0, GAMMA_MAX / 200.0], REFINE_TOL, 4000);
            let x = [x[0].clamp(-FRAC_PI_2, FRAC_PI_2), x[1].clamp(0.0, GAMMA_MAX)];
            best.offer(f(&x), &x);
            out.delta = Some(best.params[0]);
            out.gamma = Some(best.params[1]);
            out.value = best.value;
            out.evaluations = evals.get();
            out.method = OptimizerMethod::GridNelderMead;
        }
    }
    Ok(out)
}

/// Averaged fidelity as a function of the effective gain and free parameters.
struct AveragedObjective {
    family: ResourceFamily,
    r: f64,
    noise: NoiseParams,
    sigma: f64,
}

impl AveragedObjective {
    fn scalars(&self, gt: f64) -> Scalars {
        let gain = if gt == 1.0 { GainSetting::UnityOverT } else { GainSetting::Fixed { g: gt / self.noise.t() } };
        Scalars::new(self.r, &self.noise, &gain)
    }

    fn delta_of(&self, x: &[f64]) -> f64 {
        match self.family {
            ResourceFamily::PhotonSubtracted => self.r.tanh().atan(),
            ResourceFamily::TwinBeam => 0.0,
            _ => x[1],
        }
    }

    /// `x = (g~, delta, gamma)` truncated to the family's free parameters.
    fn eval(&self, x: &[f64]) -> f64 {
        let sc = self.scalars(x[0]);
        let m = sc.moments(self.sigma);
        self.eval_with(&sc, &m, x)
    }

    fn eval_with(&self, sc: &Scalars, m: &Moments, x: &[f64]) -> f64 {
        match self.family {
            ResourceFamily::TwinBeam => sc.twin_beam_avg(m),
            ResourceFamily::SqueezedBell | ResourceFamily::PhotonSubtracted => sc.squeezed_bell_avg(self.delta_of(x), m),
            ResourceFamily::BuridanDonkey => sc.buridan_avg(x[1], m),
            ResourceFamily::SqueezedCat => {
                if !cat_feasible(x[1], x[2]) {
                    return f64::NEG_INFINITY;
                }
                sc.squeezed_cat_avg(x[1], &sc.cat_averages(x[2], self.sigma), m)
            }
        }
    }

    fn dims(&self) -> usize {
        match self.family {
            ResourceFamily::TwinBeam | ResourceFamily::PhotonSubtracted => 1,
            ResourceFamily::SqueezedBell | ResourceFamily::BuridanDonkey => 2,
            ResourceFamily::SqueezedCat => 3,
        }
    }

    fn clamp(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        y[0] = y[0].clamp(GT_MIN, GT_MAX);
        if y.len() > 1 {
            y[1] = y[1].clamp(-FRAC_PI_2, FRAC_PI_2);
        }
        if y.len() > 2 {
            y[2] = y[2].clamp(0.0, GAMMA_MAX);
        }
        y
    }
}

/// Maximizes the alphabet-averaged fidelity over `(g, delta[, gamma])` with
/// `g T in (0, 2]`.
pub fn optimize_gain_average(
    family: ResourceFamily,
    r: f64,
    noise: &NoiseParams,
    prior: &AlphabetPrior,
) -> Result<OptimizationResult> {
    check(r, noise)?;
    AlphabetPrior::new(prior.sigma)?;
    let obj = AveragedObjective { family, r, noise: *noise, sigma: prior.sigma };
    let dims = obj.dims();
    let mut evals = 0usize;
    let mut best = Best::new();

    let gts: Vec<f64> = (0..101).map(|k| 2.0 * (k as f64 + 0.5) / 101.0).collect();
    let deltas: Vec<f64> = grid(-FRAC_PI_2, FRAC_PI_2, 101).collect();
    let gammas: Vec<f64> = grid(0.0, GAMMA_MAX, 51).collect();
    for &gt in &gts {
        let sc = obj.scalars(gt);
        let m = sc.moments(prior.sigma);
        match dims {
            1 => {
                best.offer(obj.eval_with(&sc, &m, &[gt]), &[gt]);
                evals += 1;
            }
            2 => {
                for &d in &deltas {
                    best.offer(obj.eval_with(&sc, &m, &[gt, d]), &[gt, d]);
                }
                evals += deltas.len();
            }
            _ => {
                for &g in &gammas {
                    let avg = sc.cat_averages(g, prior.sigma);
                    for &d in &deltas {
                        if cat_feasible(d, g) {
                            best.offer(sc.squeezed_cat_avg(d, &avg, &m), &[gt, d, g]);
                            evals += 1;
                        }
                    }
                }
            }
        }
    }

    // the beta-independent optimum sits at g~ = 1
    let bi = optimize_beta_independent(family, r, noise)?;
    let seed: Vec<f64> = [Some(1.0), bi.delta, bi.gamma].into_iter().flatten().take(dims).collect();
    best.offer(obj.eval(&seed), &seed);
    evals += 1;

    let method = if dims == 1 {
        let h = 2.0 / 101.0;
        let c = best.params[0];
        let (gt, fv, n) = golden_max(|gt| obj.eval(&[gt]), (c - h).max(GT_MIN), (c + h).min(GT_MAX), REFINE_TOL);
        evals += n;
        best.offer(fv, &[gt]);
        OptimizerMethod::GridGolden
    } else {
        let steps = [2.0 / 101.0, PI / 100.0, GAMMA_MAX / 50.0];
        let start = best.params.clone();
        let counter = Cell::new(0usize);
        let (x, _, _) = nelder_mead_max(
            |x| {
                counter.set(counter.get() + 1);
                obj.eval(&obj.clamp(x))
            },
            &start,
            &steps[..dims],
            REFINE_TOL,
            6000,
        );
        evals += counter.get();
        let x = obj.clamp(&x);
        best.offer(obj.eval(&x), &x);
        OptimizerMethod::GridNelderMead
    };

    let p = &best.params;
    Ok(OptimizationResult {
        family,
        r,
        noise: *noise,
        delta: match family {
            ResourceFamily::TwinBeam => None,
            _ => Some(obj.delta_of(p)),
        },
        gamma: if dims == 3 { Some(p[2]) } else { None },
        gain_eff: Some(p[0]),
        sigma: Some(prior.sigma),
        value: best.value,
        evaluations: evals,
        method,
    })
}

/// Fidelity at `beta` using the parameters that maximize the averaged fidelity.
pub fn one_shot_fidelity(
    family: ResourceFamily,
    r: f64,
    noise: &NoiseParams,
    prior: &AlphabetPrior,
    beta: Complex64,
) -> Result<FidelityReport> {
    let opt = optimize_gain_average(family, r, noise, prior)?;
    one_shot_at(&opt, beta)
}

/// One-shot fidelity at `beta` for an existing averaged optimum.
pub fn one_shot_at(opt: &OptimizationResult, beta: Complex64) -> Result<FidelityReport> {
    let mut rep = fidelity_closed(&opt.resource(), &opt.noise, &opt.gain(), beta)?;
    rep.sigma = opt.sigma;
    Ok(rep)
}
