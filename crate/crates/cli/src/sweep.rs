//! Parameter points, sweep axes and their parallel evaluation.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use telefid::fidelity::{average_fidelity, fidelity_closed, fidelity_quadrature};
use telefid::optimize::{one_shot_at, optimize_beta_independent, optimize_gain_average, OptimizationResult};
use telefid::{AlphabetPrior, CoherentInput, GainSetting, Method, NoiseParams, ResourceFamily, ResourceSpec};

use crate::csv_out::ResultRow;
use crate::error::{CliError, CliResult};

/// Environment variable selecting the worker count.
pub const THREADS_VAR: &str = "TELEFID_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    R,
    Tau,
    Nth,
    R2,
    Gain,
    Sigma,
    BetaRe,
    BetaIm,
    Delta,
    Gamma,
}

impl Axis {
    pub const ALL: [Axis; 10] = [
        Axis::R,
        Axis::Tau,
        Axis::Nth,
        Axis::R2,
        Axis::Gain,
        Axis::Sigma,
        Axis::BetaRe,
        Axis::BetaIm,
        Axis::Delta,
        Axis::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::R => "r",
            Axis::Tau => "tau",
            Axis::Nth => "nth",
            Axis::R2 => "r2",
            Axis::Gain => "gain",
            Axis::Sigma => "sigma",
            Axis::BetaRe => "beta_re",
            Axis::BetaIm => "beta_im",
            Axis::Delta => "delta",
            Axis::Gamma => "gamma",
        }
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Axis::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let names: Vec<_> = Axis::ALL.iter().map(|a| a.name()).collect();
            format!("unknown axis `{s}`; expected one of {}", names.join(", "))
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gain {
    Fixed(f64),
    UnityOverT,
}

/// Everything needed to evaluate one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub family: ResourceFamily,
    pub r: f64,
    pub delta: f64,
    pub theta: f64,
    pub phi: f64,
    pub gamma_mod: f64,
    pub tau: f64,
    pub nth: f64,
    pub r2: f64,
    pub gain: Gain,
    pub betas: Vec<Complex64>,
    pub sigma: Option<f64>,
}

impl Point {
    pub fn new(family: ResourceFamily, r: f64) -> Self {
        Self {
            family,
            r,
            delta: 0.0,
            theta: 0.0,
            phi: PI,
            gamma_mod: 0.0,
            tau: 0.0,
            nth: 0.0,
            r2: 0.0,
            gain: Gain::UnityOverT,
            betas: vec![Complex64::new(0.0, 0.0)],
            sigma: None,
        }
    }

    pub fn spec(&self) -> ResourceSpec {
        let (r, phi, delta, theta) = (self.r, self.phi, self.delta, self.theta);
        match self.family {
            ResourceFamily::TwinBeam => ResourceSpec::TwinBeam { r, phi },
            ResourceFamily::SqueezedBell => ResourceSpec::SqueezedBell { r, phi, delta, theta },
            ResourceFamily::BuridanDonkey => ResourceSpec::BuridanDonkey { r, phi, delta, theta },
            ResourceFamily::SqueezedCat => {
                ResourceSpec::SqueezedCat { r, phi, delta, theta, gamma_mod: self.gamma_mod, gamma_phase: 0.0 }
            }
            ResourceFamily::PhotonSubtracted => ResourceSpec::PhotonSubtracted { r, phi },
        }
    }

    pub fn noise(&self) -> CliResult<NoiseParams> {
        Ok(NoiseParams::new(self.tau, self.nth, self.r2)?)
    }

    pub fn gain_setting(&self) -> GainSetting {
        match self.gain {
            Gain::Fixed(g) => GainSetting::Fixed { g },
            Gain::UnityOverT => GainSetting::UnityOverT,
        }
    }

    pub fn prior(&self) -> CliResult<Option<AlphabetPrior>> {
        self.sigma.map(AlphabetPrior::new).transpose().map_err(Into::into)
    }

    pub fn set(&mut self, axis: Axis, v: f64) {
        match axis {
            Axis::R => self.r = v,
            Axis::Tau => self.tau = v,
            Axis::Nth => self.nth = v,
            Axis::R2 => self.r2 = v,
            Axis::Gain => self.gain = Gain::Fixed(v),
            Axis::Sigma => self.sigma = Some(v),
            Axis::BetaRe => self.betas.iter_mut().for_each(|b| b.re = v),
            Axis::BetaIm => self.betas.iter_mut().for_each(|b| b.im = v),
            Axis::Delta => self.delta = v,
            Axis::Gamma => self.gamma_mod = v,
        }
    }

    fn base_row(&self, gain: f64, method: &str, fidelity: f64) -> ResultRow {
        ResultRow {
            resource: self.family,
            r: self.r,
            tau: self.tau,
            nth: self.nth,
            r2: self.r2,
            gain,
            delta_opt: None,
            gamma_opt: None,
            sigma: None,
            beta_re: None,
            beta_im: None,
            method: method.to_string(),
            fidelity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FidelityMethod {
    Closed,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Fidelity(FidelityMethod),
    /// At `g = 1/T` without a prior; gain-averaged with one, then one-shot
    /// values at each beta of the point if any are given.
    Optimize,
}

fn fidelity_rows(p: &Point, method: FidelityMethod) -> CliResult<Vec<ResultRow>> {
    let spec = p.spec();
    let noise = p.noise()?;
    let gain = p.gain_setting();
    let g = gain.g(&noise);
    let delta = match p.family {
        ResourceFamily::TwinBeam => None,
        _ => spec.delta(),
    };
    let gamma = spec.gamma_mod();
    if let Some(prior) = p.prior()? {
        let rep = average_fidelity(&spec, &noise, &gain, &prior)?;
        let mut row = p.base_row(g, rep.method.tag(), rep.value);
        row.delta_opt = delta;
        row.gamma_opt = gamma;
        row.sigma = Some(prior.sigma);
        return Ok(vec![row]);
    }
    p.betas
        .iter()
        .map(|&beta| {
            let rep = match method {
                FidelityMethod::Closed => fidelity_closed(&spec, &noise, &gain, beta)?,
                FidelityMethod::Quadrature => fidelity_quadrature(CoherentInput::new(beta), &spec, &noise, &gain)?,
            };
            debug_assert!(rep.method == Method::Closed || rep.method == Method::Quadrature);
            let mut row = p.base_row(g, rep.method.tag(), rep.value);
            row.delta_opt = delta;
            row.gamma_opt = gamma;
            row.beta_re = Some(beta.re);
            row.beta_im = Some(beta.im);
            Ok(row)
        })
        .collect()
}

fn optimum_row(p: &Point, opt: &OptimizationResult) -> ResultRow {
    let mut row = p.base_row(opt.g(), opt.method.tag(), opt.value);
    row.delta_opt = opt.delta;
    row.gamma_opt = opt.gamma;
    row.sigma = opt.sigma;
    row
}

fn optimize_rows(p: &Point) -> CliResult<Vec<ResultRow>> {
    let noise = p.noise()?;
    match p.prior()? {
        None => Ok(vec![optimum_row(p, &optimize_beta_independent(p.family, p.r, &noise)?)]),
        Some(prior) => {
            let opt = optimize_gain_average(p.family, p.r, &noise, &prior)?;
            if p.betas.is_empty() {
                return Ok(vec![optimum_row(p, &opt)]);
            }
            p.betas
                .iter()
                .map(|&beta| {
                    let mut row = optimum_row(p, &opt);
                    row.fidelity = one_shot_at(&opt, beta)?.value;
                    row.beta_re = Some(beta.re);
                    row.beta_im = Some(beta.im);
                    Ok(row)
                })
                .collect()
        }
    }
}

pub fn evaluate(p: &Point, task: Task) -> CliResult<Vec<ResultRow>> {
    match task {
        Task::Fidelity(m) => fidelity_rows(p, m),
        Task::Optimize => optimize_rows(p),
    }
}

/// Evaluates all points concurrently; rows keep the order of `points`.
pub fn run_points(points: &[Point], task: Task) -> CliResult<Vec<ResultRow>> {
    let pool = thread_pool()?;
    let per_point: Vec<CliResult<Vec<ResultRow>>> = pool.install(|| points.par_iter().map(|p| evaluate(p, task)).collect());
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("{THREADS_VAR} must be a non-negative integer, got {s:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub base: Point,
    pub task: Task,
}

impl SweepSpec {
    pub fn new(axis: Axis, from: f64, to: f64, steps: usize, base: Point, task: Task) -> CliResult<Self> {
        if steps < 2 {
            return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
        }
        if !(from < to) {
            return Err(CliError::Usage(format!("--from must be below --to, got {from} and {to}")));
        }
        if task == Task::Optimize && matches!(axis, Axis::Delta | Axis::Gamma | Axis::Gain) {
            return Err(CliError::Usage(format!("axis {axis} is optimized over and cannot be swept")));
        }
        Ok(Self { axis, from, to, steps, base, task })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| if i == n { self.to } else { self.from + (self.to - self.from) * i as f64 / n as f64 })
            .collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.values()
            .into_iter()
            .map(|v| {
                let mut p = self.base.clone();
                p.set(self.axis, v);
                p
            })
            .collect()
    }

    pub fn run(&self) -> CliResult<Vec<ResultRow>> {
        run_points(&self.points(), self.task)
    }
}
