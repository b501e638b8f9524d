//! Command-line flags and their translation into sweep points.

use std::path::PathBuf;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use telefid::ResourceFamily;

use crate::csv_out::ResultRow;
use crate::error::{CliError, CliResult};
use crate::figures::{run_figure_preset, FigureTag};
use crate::sweep::{evaluate, Axis, FidelityMethod, Gain, Point, SweepSpec, Task};

#[derive(Debug, Parser)]
#[command(name = "telefid", version, about = "Fidelity of nonideal CV teleportation with non-Gaussian resources")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fidelity at one parameter point (averaged over the alphabet when --sigma is given).
    Fidelity(FidelityArgs),
    /// Optimal fidelity at g = 1/T, or over the gain when --sigma is given.
    Optimize(OptimizeArgs),
    /// Evaluate fidelities or optima along one parameter axis.
    Sweep(SweepArgs),
    /// Reproduce a published figure as CSV.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GainMode {
    UnityOverT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    Fidelity,
    Optimize,
}

fn family_parser() -> impl TypedValueParser<Value = ResourceFamily> {
    PossibleValuesParser::new(ResourceFamily::ALL.map(|f| f.name()))
        .map(|s| s.parse::<ResourceFamily>().expect("restricted to known names"))
}

fn axis_parser() -> impl TypedValueParser<Value = Axis> {
    PossibleValuesParser::new(Axis::ALL.map(|a| a.name())).map(|s| s.parse::<Axis>().expect("restricted to known names"))
}

fn figure_parser() -> impl TypedValueParser<Value = FigureTag> {
    PossibleValuesParser::new(FigureTag::ALL.map(|f| f.name()))
        .map(|s| s.parse::<FigureTag>().expect("restricted to known names"))
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long, value_parser = family_parser())]
    pub resource: ResourceFamily,
    /// Squeezing amplitude.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub theta: f64,
    /// Squeezing phase.
    #[arg(long, allow_negative_numbers = true, default_value_t = std::f64::consts::PI)]
    pub phi: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub gamma_mod: f64,
    /// Reduced propagation time of the lossy channel.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub tau: f64,
    /// Thermal photon number of the channel.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub nth: f64,
    /// Reflectivity of the detector beam splitters.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub r2: f64,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "gain_mode")]
    pub gain: Option<f64>,
    /// Gain rule; the default when --gain is absent.
    #[arg(long, value_enum)]
    pub gain_mode: Option<GainMode>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta_im: Option<f64>,
    /// Variance of the Gaussian alphabet.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
}

impl PointArgs {
    /// `r_free` allows a missing --r because a sweep supplies it.
    fn point(&self, r_free: bool) -> CliResult<Point> {
        let r = match (self.r, r_free) {
            (Some(r), _) => r,
            (None, true) => 0.0,
            (None, false) => return Err(CliError::Usage("the argument '--r <R>' is required".into())),
        };
        let mut p = Point::new(self.resource, r);
        p.delta = self.delta;
        p.theta = self.theta;
        p.phi = self.phi;
        p.gamma_mod = self.gamma_mod;
        p.tau = self.tau;
        p.nth = self.nth;
        p.r2 = self.r2;
        p.gain = match self.gain {
            Some(g) => Gain::Fixed(g),
            None => Gain::UnityOverT,
        };
        p.sigma = self.sigma;
        p.betas = vec![Complex64::new(self.beta_re.unwrap_or(0.0), self.beta_im.unwrap_or(0.0))];
        Ok(p)
    }

    fn has_beta(&self) -> bool {
        self.beta_re.is_some() || self.beta_im.is_some()
    }
}

#[derive(Debug, Clone, Args)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_parser = axis_parser())]
    pub vary: Axis,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = TaskArg::Fidelity)]
    pub task: TaskArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(long, value_parser = figure_parser())]
    pub figure: FigureTag,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn method(m: MethodArg) -> FidelityMethod {
    match m {
        MethodArg::Closed => FidelityMethod::Closed,
        MethodArg::Quadrature => FidelityMethod::Quadrature,
    }
}

impl Command {
    pub fn output(&self) -> Option<&PathBuf> {
        match self {
            Command::Fidelity(a) => a.output.as_ref(),
            Command::Optimize(a) => a.output.as_ref(),
            Command::Sweep(a) => a.output.as_ref(),
            Command::Figure(a) => a.output.as_ref(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Fidelity(_) => "fidelity",
            Command::Optimize(_) => "optimize",
            Command::Sweep(_) => "sweep",
            Command::Figure(_) => "figure",
        }
    }

    pub fn run(&self) -> CliResult<Vec<ResultRow>> {
        match self {
            Command::Fidelity(a) => evaluate(&a.point.point(false)?, Task::Fidelity(method(a.method))),
            Command::Optimize(a) => {
                let mut p = a.point.point(false)?;
                if a.point.gain.is_some() {
                    return Err(CliError::Usage("optimize chooses the gain; drop --gain".into()));
                }
                if !a.point.has_beta() {
                    p.betas.clear();
                }
                evaluate(&p, Task::Optimize)
            }
            Command::Sweep(a) => {
                let mut p = a.point.point(a.vary == Axis::R)?;
                let task = match a.task {
                    TaskArg::Fidelity => Task::Fidelity(method(a.method)),
                    TaskArg::Optimize => {
                        if !a.point.has_beta() && !matches!(a.vary, Axis::BetaRe | Axis::BetaIm) {
                            p.betas.clear();
                        }
                        Task::Optimize
                    }
                };
                SweepSpec::new(a.vary, a.from, a.to, a.steps, p, task)?.run()
            }
            Command::Figure(a) => run_figure_preset(a.figure),
        }
    }
}
