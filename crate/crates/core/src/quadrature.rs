//! Composite Gauss–Legendre rules on squares and Gauss–Hermite rules for
//! Gaussian weights. Node generation is delegated to `gauss-quad`.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::{GaussHermite, GaussLegendre};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes per panel.
pub const PANEL_ORDER: usize = 16;
/// Successive-refinement tolerance.
pub const REFINE_TOL: f64 = 1e-10;
/// Largest error estimate accepted at the finest level.
pub const ACCEPT_TOL: f64 = 1e-9;
/// Order of the Gauss–Hermite rule used for beta averages.
pub const HERMITE_ORDER: usize = 60;

/// Half-width `L` at which an envelope `e^{-c s^2}` has fallen to `e^{-40}`,
/// below 1e-17.
pub fn envelope_half_width(c: f64) -> f64 {
    (40.0 / c).sqrt()
}

fn legendre_reference() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let rule = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).unwrap());
        rule.as_node_weight_pairs().to_vec()
    })
}

/// Gauss–Hermite pairs for weight `e^{-x^2}` at order [`HERMITE_ORDER`].
pub fn hermite_rule() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let rule = GaussHermite::new(NonZeroUsize::new(HERMITE_ORDER).unwrap());
        rule.as_node_weight_pairs().to_vec()
    })
}

/// Composite rule on `[center - half, center + half]` with `panels` equal panels.
pub fn composite_nodes(center: f64, half: f64, panels: usize) -> Vec<(f64, f64)> {
    let reference = legendre_reference();
    let h = 2.0 * half / panels as f64;
    let mut out = Vec::with_capacity(panels * reference.len());
    for k in 0..panels {
        let mid = center - half + (k as f64 + 0.5) * h;
        for &(t, w) in reference {
            out.push((mid + 0.5 * h * t, 0.5 * h * w));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    /// Difference between the last two refinement levels.
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Adaptive tensor-product rule on a square, doubling panels per axis.
#[derive(Debug, Clone, Copy)]
pub struct SquareRule {
    pub min_panels: usize,
    pub max_panels: usize,
    pub tol: f64,
    pub accept: f64,
}

impl Default for SquareRule {
    fn default() -> Self {
        Self { min_panels: 4, max_panels: 128, tol: REFINE_TOL, accept: ACCEPT_TOL }
    }
}

impl SquareRule {
    /// `int f(x, p) dx dp` over `[-half, half]^2`.
    pub fn integrate<F>(&self, half: f64, mut f: F) -> Result<Estimate>
    where
        F: FnMut(f64, f64) -> Complex64,
    {
        let mut panels = self.min_panels;
        let mut evaluations = 0;
        let mut prev: Option<Complex64> = None;
        loop {
            let nodes = composite_nodes(0.0, half, panels);
            let mut acc = Complex64::new(0.0, 0.0);
            for &(x, wx) in &nodes {
                let mut row = Complex64::new(0.0, 0.0);
                for &(p, wp) in &nodes {
                    row += wp * f(x, p);
                }
                acc += wx * row;
            }
            evaluations += nodes.len() * nodes.len();
            if let Some(last) = prev {
                let err = (acc - last).norm();
                if err < self.tol {
                    return Ok(Estimate { value: acc, abs_error: err, evaluations });
                }
                if panels >= self.max_panels {
                    if err <= self.accept {
                        return Ok(Estimate { value: acc, abs_error: err, evaluations });
                    }
                    return Err(Error::NonConvergence { estimate: acc.re, error: err });
                }
            }
            prev = Some(acc);
            panels *= 2;
        }
    }
}
