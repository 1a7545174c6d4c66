//! `uhvforge generate`: chamber spec → binary STL plus a geometry,
//! structural and optical-access report.

use std::fs;
use std::io::BufWriter;
use std::path::Path;

use uhvforge_core::lattice::{
    build_density_field, check_optical_access, extract_mesh, mesh_metrics, voxelize, write_stl,
};
use uhvforge_core::model::validate_chamber_spec;
use uhvforge_core::structure::{optimize_density, shell_stress};
use uhvforge_core::GeometryError;

use crate::error::CliError;
use crate::report::RunReport;
use crate::schema::ChamberFile;
use crate::util::{parse_json, write_bytes};

pub fn run(
    spec_path: &Path,
    voxel_mm: f64,
    beam_mm: f64,
    out_dir: &Path,
) -> Result<(), CliError> {
    let bytes = fs::read(spec_path).map_err(|e| CliError::io(spec_path, e))?;
    let file: ChamberFile = parse_json(&bytes, spec_path)?;
    let spec = file.chamber;

    let violations = validate_chamber_spec(&spec);
    if !violations.is_empty() {
        let joined = violations
            .iter()
            .map(|v| format!("{:?}: {}", v.code, v.message))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(CliError::Validation(joined));
    }

    let mut report = RunReport::new("generate", &bytes);

    // Structural qualification first: it may retune the density field.
    let field = match &file.structure {
        Some(section) => {
            let stress = shell_stress(
                &spec.core,
                spec.skin_thickness_mm,
                section.pressure_delta_pa,
                &spec.material,
            )?;
            report.metric("skin_max_stress", stress.max_stress_pa, "Pa");
            if let Some(sf) = stress.safety_factor {
                report.metric("skin_safety_factor", sf, "1");
            }
            optimize_density(&spec, &section.constraints(), section.scaling())?
        }
        None => build_density_field(&spec)?,
    };

    let grid = voxelize(&spec, &field, voxel_mm)?;
    let mesh = extract_mesh(&grid)?;
    let metrics = mesh_metrics(&mesh, &spec.material);
    report.flag("watertight", metrics.watertight);
    report.metric("surface_area", metrics.surface_area_cm2, "cm^2");
    report.metric("triangles", mesh.triangles.len() as f64, "1");
    if let Some(v) = metrics.volume_cm3 {
        report.metric("solid_volume", v, "cm^3");
    }
    if let Some(m) = metrics.mass_g {
        report.metric("mass", m, "g");
    }

    match check_optical_access(&spec, beam_mm) {
        Ok(access) => {
            report.flag("optical_access_all_clear", access.all_clear);
            for axis in &access.axes {
                if !axis.clear {
                    report.warnings.push(format!(
                        "beam axis {:?} blocked near {:?} mm",
                        axis.direction,
                        axis.blocking_positions_mm.first()
                    ));
                }
            }
        }
        Err(GeometryError::MissingAxes(msg)) => {
            report.warnings.push(format!("optical access not evaluated: {msg}"));
        }
        Err(e) => return Err(e.into()),
    }

    if let Some(reference) = &file.reference_material {
        report.metric(
            "mass_reduction_ratio",
            spec.material.density_kg_m3 / reference.density_kg_m3,
            "1",
        );
        // Reference build: same envelope with the lattice band fully dense,
        // made of the reference material.
        let mut dense = spec.clone();
        dense.lattice.phi_base = 1.0;
        dense.lattice.boosts.clear();
        let dense_field = build_density_field(&dense)?;
        let dense_mesh = extract_mesh(&voxelize(&dense, &dense_field, voxel_mm)?)?;
        let dense_metrics = mesh_metrics(&dense_mesh, reference);
        if let (Some(m), Some(m_ref)) = (metrics.mass_g, dense_metrics.mass_g) {
            report.metric("reference_dense_mass", m_ref, "g");
            report.metric("mass_ratio_vs_dense_reference", m / m_ref, "1");
        }
    }

    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let stl_path = out_dir.join("chamber.stl");
    let stl_file = fs::File::create(&stl_path).map_err(|e| CliError::io(&stl_path, e))?;
    let mut w = BufWriter::new(stl_file);
    write_stl(&mut w, &mesh).map_err(|e| CliError::io(&stl_path, e))?;

    let report_path = out_dir.join("report.json");
    report.outputs = vec![stl_path.display().to_string(), report_path.display().to_string()];
    write_bytes(&report_path, report.to_json().as_bytes())?;
    println!("{}", report.to_json());
    Ok(())
}
