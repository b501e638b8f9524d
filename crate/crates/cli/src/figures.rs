//! Presets reproducing the published fidelity curves.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use telefid::ResourceFamily;

use crate::csv_out::ResultRow;
use crate::error::CliResult;
use crate::sweep::{run_points, Axis, Point, SweepSpec, Task};

pub const SWEEP_STEPS: usize = 81;
pub const SWEEP_MAX: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureTag {
    Fig3I,
    Fig3II,
    Fig4,
    Fig5I,
    Fig5II,
    Fig6I,
    Fig6II,
}

impl FigureTag {
    pub const ALL: [FigureTag; 7] =
        [FigureTag::Fig3I, FigureTag::Fig3II, FigureTag::Fig4, FigureTag::Fig5I, FigureTag::Fig5II, FigureTag::Fig6I, FigureTag::Fig6II];

    pub fn name(self) -> &'static str {
        match self {
            FigureTag::Fig3I => "3-I",
            FigureTag::Fig3II => "3-II",
            FigureTag::Fig4 => "4",
            FigureTag::Fig5I => "5-I",
            FigureTag::Fig5II => "5-II",
            FigureTag::Fig6I => "6-I",
            FigureTag::Fig6II => "6-II",
        }
    }
}

impl FromStr for FigureTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FigureTag::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<_> = FigureTag::ALL.iter().map(|f| f.name()).collect();
            format!("unknown figure `{s}`; expected one of {}", names.join(", "))
        })
    }
}

impl fmt::Display for FigureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

use ResourceFamily::*;

struct Preset {
    families: &'static [ResourceFamily],
    axis: Axis,
    /// Curve parameter and its values; one curve per value and family.
    curves: (Axis, &'static [f64]),
    base: fn(&mut Point),
    /// Alphabet variance and input amplitudes for one-shot presets.
    alphabet: Option<(f64, &'static [f64])>,
}

fn preset(tag: FigureTag) -> Preset {
    const BETA_INDEPENDENT: &[ResourceFamily] = &[SqueezedBell, SqueezedCat, TwinBeam, BuridanDonkey];
    const ONE_SHOT: &[ResourceFamily] = &[SqueezedBell, SqueezedCat, TwinBeam];
    fn lossy(p: &mut Point) {
        p.tau = 0.3;
        p.r2 = 0.05;
    }
    fn fixed_r(p: &mut Point) {
        p.r = 0.8;
        p.r2 = 0.05;
    }
    match tag {
        FigureTag::Fig3I => Preset {
            families: BETA_INDEPENDENT,
            axis: Axis::R,
            curves: (Axis::R2, &[0.0, 0.05, 0.1, 0.15]),
            base: |_| {},
            alphabet: None,
        },
        FigureTag::Fig3II => Preset {
            families: BETA_INDEPENDENT,
            axis: Axis::R,
            curves: (Axis::Tau, &[0.0, 0.1, 0.2, 0.3]),
            base: |_| {},
            alphabet: None,
        },
        FigureTag::Fig4 => Preset {
            families: &[SqueezedBell, SqueezedCat, TwinBeam, BuridanDonkey, PhotonSubtracted],
            axis: Axis::R,
            curves: (Axis::Tau, &[0.3]),
            base: lossy,
            alphabet: None,
        },
        FigureTag::Fig5I => Preset {
            families: ONE_SHOT,
            axis: Axis::R,
            curves: (Axis::Tau, &[0.3]),
            base: lossy,
            alphabet: Some((10.0, &[1.0, 2.0, 3.0])),
        },
        FigureTag::Fig5II => Preset {
            families: ONE_SHOT,
            axis: Axis::R,
            curves: (Axis::Tau, &[0.3]),
            base: lossy,
            alphabet: Some((100.0, &[3.0, 5.0, 10.0])),
        },
        FigureTag::Fig6I => Preset {
            families: ONE_SHOT,
            axis: Axis::Tau,
            curves: (Axis::R, &[0.8]),
            base: fixed_r,
            alphabet: Some((10.0, &[1.0, 2.0, 3.0])),
        },
        FigureTag::Fig6II => Preset {
            families: ONE_SHOT,
            axis: Axis::Tau,
            curves: (Axis::R, &[0.8]),
            base: fixed_r,
            alphabet: Some((100.0, &[3.0, 5.0, 10.0])),
        },
    }
}

/// All parameter points of a preset, in output order: family, curve, axis value.
pub fn figure_points(tag: FigureTag) -> Vec<Point> {
    let pr = preset(tag);
    let mut points = Vec::new();
    for &family in pr.families {
        for &c in pr.curves.1 {
            let mut base = Point::new(family, 0.0);
            (pr.base)(&mut base);
            base.set(pr.curves.0, c);
            match pr.alphabet {
                Some((sigma, betas)) => {
                    base.sigma = Some(sigma);
                    base.betas = betas.iter().map(|&b| Complex64::new(b, 0.0)).collect();
                }
                None => base.betas.clear(),
            }
            let sweep = SweepSpec::new(pr.axis, 0.0, SWEEP_MAX, SWEEP_STEPS, base, Task::Optimize)
                .expect("preset sweeps are valid");
            points.extend(sweep.points());
        }
    }
    points
}

pub fn run_figure_preset(tag: FigureTag) -> CliResult<Vec<ResultRow>> {
    run_points(&figure_points(tag), Task::Optimize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for t in FigureTag::ALL {
            assert_eq!(t.name().parse::<FigureTag>().unwrap(), t);
        }
        assert!("7".parse::<FigureTag>().is_err());
    }

    #[test]
    fn preset_sizes() {
        assert_eq!(figure_points(FigureTag::Fig3I).len(), 4 * 4 * SWEEP_STEPS);
        assert_eq!(figure_points(FigureTag::Fig3II).len(), 4 * 4 * SWEEP_STEPS);
        assert_eq!(figure_points(FigureTag::Fig4).len(), 5 * SWEEP_STEPS);
        let p = figure_points(FigureTag::Fig6II);
        assert_eq!(p.len(), 3 * SWEEP_STEPS);
        assert!(p.iter().all(|q| q.r == 0.8 && q.r2 == 0.05 && q.sigma == Some(100.0) && q.betas.len() == 3));
        assert_eq!(p[SWEEP_STEPS - 1].tau, 2.0);
    }
}
