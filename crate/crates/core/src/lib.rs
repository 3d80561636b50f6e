//! Bound states of the screened Coulomb (Yukawa) potential `-(A/r) e^{-αr}`.
//!
//! Energies and wavefunctions come from a superpotential perturbation
//! expansion around the Coulomb problem, truncated at second order. An
//! independent Numerov shooting solver provides numerically exact energies
//! for cross-checks, and [`report`] lines results up against reference
//! tables.

pub mod error;
pub mod hydrogenic;
pub mod numerov;
pub mod perturbation;
pub mod quadrature;
pub mod report;
pub mod special;

pub use error::{Error, Result};
pub use hydrogenic::{PhysicalContext, StateLabel};
pub use perturbation::EnergyBreakdown;

/// A real function of the radial coordinate `r ≥ 0`.
///
/// Evaluation is fallible: superpotentials of excited states have poles at
/// the nodes of the underlying eigenfunction.
pub trait RadialFunction {
    fn eval(&self, r: f64) -> Result<f64>;
}
