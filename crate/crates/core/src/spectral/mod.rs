//! Hydrogen bound states with the Coulomb–Born–Infeld potential, the
//! first-order β correction and the bounds on β it implies.

pub mod perturbation;
pub mod potential;
pub mod radial;
pub mod report;
pub mod selfconsistent;

pub use perturbation::{
    beta_upper_bound, delta_e_bound, delta_e_first_order, delta_e_first_order_raw, validity_radius,
    BetaBound, ValidityRadius,
};
pub use potential::{Coulomb, PotentialTable, RadialPotential};
pub use radial::{
    coulomb_level, kg_coulomb_level, radial_energy, solve_radial, Eigenpair, PotentialForm,
    RadialGrid, RadialProblem,
};
pub use report::{fmt17, state_label, write_csv, write_json, SpectrumRecord, CSV_HEADER};
pub use selfconsistent::{kg_selfconsistent, kg_selfconsistent_with};
