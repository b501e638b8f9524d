//! Fidelity of nonideal continuous-variable teleportation of coherent states.
//!
//! Everything is expressed through characteristic functions
//! `chi(x, p) = Tr[rho D(alpha)]` with `alpha = (x + i p)/sqrt(2)`.
//! The resource families are squeezed two-mode states built on a small
//! "core" superposition: twin beam, squeezed Bell-like, squeezed cat-like,
//! Buridan donkey and photon-subtracted squeezed states.

pub mod error;
pub mod fidelity;
pub mod optimize;
pub mod phase_space;
pub mod protocol;
pub mod quadrature;

pub use error::{Error, Result};
pub use fidelity::{AlphabetPrior, FidelityReport, Method};
pub use phase_space::{CoherentInput, PhasePoint, ResourceFamily, ResourceSpec, TwoModePhasePoint};
pub use protocol::{BellOutcome, GainSetting, NoiseParams};
