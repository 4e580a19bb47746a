//! Born–Infeld aether laws and a charge-free field evolver.

pub mod constitutive;
pub mod io;
pub mod lattice;

pub use constitutive::{constitutive_e, constitutive_h, invert_linearized_d, ConstitutiveInputs};
pub use io::{read_snapshot, snapshot_paths, write_snapshot, SnapshotMetadata};
pub use lattice::{divergence_diagnostics, mbi_step, Diagnostics, FieldLattice, DEFAULT_CFL};
