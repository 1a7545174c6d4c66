//! Design and qualification kernels for additively manufactured
//! ultra-high-vacuum chambers.
//!
//! The crate is organized around five subsystems:
//! - [`model`]: materials, chamber specification, build-parameter calculator
//! - [`lattice`]: graded gyroid lattice fields, voxelization, mesh extraction
//!   and geometric reports
//! - [`structure`]: thin-shell stress, lattice stiffness scaling and
//!   mass-minimizing density selection
//! - [`vacuum`]: lumped-parameter vacuum network simulation
//! - [`emission`]: mass-spec emission fitting and surface metrology

pub mod emission;
pub mod error;
pub mod lattice;
pub mod model;
pub mod presets;
pub mod structure;
pub mod vacuum;

pub use error::{EmissionError, GeometryError, ModelError, StructureError, VacuumError};
pub use lattice::{DensityField, TriMesh, VoxelGrid};
pub use model::{BuildParams, ChamberSpec, MaterialSpec, PortSpec};
