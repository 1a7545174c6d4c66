//! CLI error type with the stable exit-code contract:
//! 0 success, 2 validation, 3 numerical/infeasibility, 4 I/O.

use std::fmt;
use std::path::Path;

use uhvforge_core::{EmissionError, GeometryError, ModelError, StructureError, VacuumError};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "validation error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::InvalidArgument(_)
            | GeometryError::InvalidSpec(_)
            | GeometryError::VoxelTooCoarse { .. }
            | GeometryError::MissingAxes(_) => CliError::Validation(e.to_string()),
            GeometryError::OpenBoundary(_) | GeometryError::NotWatertight(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Configuration(_) => CliError::Validation(e.to_string()),
            StructureError::Infeasible { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<VacuumError> for CliError {
    fn from(e: VacuumError) -> Self {
        match e {
            VacuumError::InvalidScenario(_) => CliError::Validation(e.to_string()),
            VacuumError::UnboundedPressure(_) | VacuumError::Numerical(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<EmissionError> for CliError {
    fn from(e: EmissionError) -> Self {
        match e {
            EmissionError::InvalidArgument(_)
            | EmissionError::InsufficientData(_)
            | EmissionError::Domain(_) => CliError::Validation(e.to_string()),
            EmissionError::RankDeficient(_) => CliError::Numerical(e.to_string()),
        }
    }
}
