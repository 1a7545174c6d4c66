//! Gyroid lattice geometry: implicit fields, graded density, voxelization,
//! isosurface meshing, STL I/O and geometric reports.

pub mod density;
pub mod field;
pub mod mesh;
pub mod optics;
pub mod solid;
pub mod stl;
pub mod voxel;

pub use density::{build_density_field, DensityField, ThresholdBoost};
pub use field::{density_to_threshold, gyroid_field, volume_fraction, THRESHOLD_MAX};
pub use mesh::{extract_mesh, mesh_metrics, MeshMetrics, TriMesh};
pub use optics::{check_optical_access, AxisAccess, OpticalAccessReport};
pub use solid::ChamberSolid;
pub use stl::{read_stl, write_stl};
pub use voxel::{voxelize, VoxelGrid};
