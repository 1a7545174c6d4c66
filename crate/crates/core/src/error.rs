//! Error types shared across the crate, one enum per subsystem.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("chamber spec invalid: {0}")]
    InvalidSpec(String),
    #[error("voxel size {voxel_mm} mm too coarse: must be <= cell_size/8 = {bound_mm} mm")]
    VoxelTooCoarse { voxel_mm: f64, bound_mm: f64 },
    #[error("isosurface is not closed: solid reaches the grid boundary at {0}")]
    OpenBoundary(String),
    #[error("optical access configuration error: missing opposing port pairs for axes {0}")]
    MissingAxes(String),
    #[error("mesh is not watertight: {0}")]
    NotWatertight(String),
}

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("stiffness constraint infeasible in region {region}: requires phi = {required_phi:.3} > 1")]
    Infeasible { region: String, required_phi: f64 },
}

#[derive(Debug, Error)]
pub enum VacuumError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("node {0} has no pump reachable; steady-state pressure is unbounded")]
    UnboundedPressure(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Error)]
pub enum EmissionError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("rank deficiency: {0}")]
    RankDeficient(String),
}
