//! `uhvforge analyze`: inspect an existing binary STL and report mesh
//! soundness and geometric metrics.

use std::fs;
use std::io::{Cursor, ErrorKind};
use std::path::Path;

use uhvforge_core::lattice::read_stl;

use crate::error::CliError;
use crate::report::RunReport;

pub fn run(mesh_path: &Path) -> Result<(), CliError> {
    let bytes = fs::read(mesh_path).map_err(|e| CliError::io(mesh_path, e))?;
    let mesh = read_stl(&mut Cursor::new(&bytes)).map_err(|e| {
        if e.kind() == ErrorKind::InvalidData || e.kind() == ErrorKind::UnexpectedEof {
            CliError::Validation(format!("{}: {e}", mesh_path.display()))
        } else {
            CliError::io(mesh_path, e)
        }
    })?;

    let mut report = RunReport::new("analyze", &bytes);
    report.metric("triangles", mesh.triangles.len() as f64, "1");
    report.metric("vertices", mesh.vertices.len() as f64, "1");
    report.metric("surface_area", mesh.surface_area_mm2() / 100.0, "cm^2");
    let watertight = mesh.is_watertight();
    report.flag("watertight", watertight);
    if watertight {
        report.metric("enclosed_volume", mesh.signed_volume_mm3() / 1000.0, "cm^3");
    } else {
        report.warnings.push("mesh is not watertight; volume not reported".into());
    }
    println!("{}", report.to_json());
    Ok(())
}
