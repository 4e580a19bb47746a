//! Numerics for Born–Infeld electrodynamics with point charges.
//!
//! * [`electrostatics`]: Born's single-charge potential, the two-body
//!   potential `A₀(r)`, its series and asymptotics, and the deviation `U(ζ)`.
//! * [`spectral`]: radial bound states for the Schrödinger and Klein–Gordon
//!   hydrogen problems, first-order β corrections and bounds on β.
//! * [`aether3d`]: the Born–Infeld constitutive maps and a charge-free
//!   lattice evolver with constraint diagnostics.
//! * [`bohm`]: Klein–Gordon density/current functionals, quantum velocity
//!   fields, guiding-equation trajectories and residual checks.
//!
//! Units are dimensionless: lengths and times in electron Compton
//! wavelengths, energies in electron rest energies, charges in `e`.

// `!(x > 0)` guards also reject NaN; frozen constants keep all their digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod aether3d;
pub mod bohm;
pub mod constants;
pub mod electrostatics;
pub mod error;
pub mod math_core;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use electrostatics::{ChargeSign, ModelParams, PairGeometry};
pub use error::{Error, Result};
pub use scalar::Real;

/// Library version written into every output record.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Vec3 = math_core::Vec3<f64>;
pub type QuadratureResult = math_core::QuadratureResult<f64>;
pub type FieldLattice = aether3d::FieldLattice<f64>;
