//! Klein–Gordon probability density and current, quantum velocity fields,
//! guiding-equation trajectories and residual checks of the Madelung split.

pub mod functionals;
pub mod grid;
pub mod residuals;
pub mod states;
pub mod trajectory;

pub use functionals::{
    current_kg, gauge_check, gauge_transform, rho_kg, velocity_kg, velocity_kg_inverse,
    velocity_schrodinger, Density, VelocityReport,
};
pub use grid::{GridSpec, Jet, WaveFunction, WaveGrid};
pub use residuals::{continuity_residual, madelung_roundtrip, MadelungResidual, ResidualField};
pub use states::{Harmonic, RadialState, Superposition};
pub use trajectory::{
    density, integrate_many, integrate_trajectory, write_trajectory_csv, GriddedVelocity, KgGuide,
    SchrodingerGuide, Trajectory, UniformVelocity, VelocityField,
};
