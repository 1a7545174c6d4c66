//! Lightweight structural qualification: closed-form thin-shell membrane
//! stress under external pressure, a Gibson–Ashby stiffness proxy for the
//! lattice, and mass-minimizing density selection against stiffness
//! constraints.

use nalgebra::Point3;

use crate::error::StructureError;
use crate::lattice::density::{build_density_field, DensityField, ThresholdBoost};
use crate::lattice::field::density_to_threshold;
use crate::model::{ChamberSpec, CoreShape, MaterialSpec};

/// Power-law stiffness scaling `E*/Es = C · φⁿ` for the cellular lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessScaling {
    pub c: f64,
    pub n: f64,
}

impl Default for StiffnessScaling {
    fn default() -> Self {
        StiffnessScaling { c: 1.0, n: 2.0 }
    }
}

/// Where a stiffness requirement applies.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintRegion {
    Global,
    Sphere { center_mm: Point3<f64>, radius_mm: f64 },
}

/// Minimum relative lattice modulus required in a region.
#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessConstraint {
    pub region: ConstraintRegion,
    /// E*/Es in (0, 1].
    pub min_relative_modulus: f64,
}

/// Membrane stress report for the pressure-loaded skin.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ShellStressReport {
    pub max_stress_pa: f64,
    /// yield / max_stress; absent for the unloaded case.
    pub safety_factor: Option<f64>,
}

/// Thin-shell membrane stress of the chamber skin under an external pressure
/// differential. Sphere: σ = ΔP·r/(2h); cylinder hoop: σ = ΔP·r/h.
pub fn shell_stress(
    core: &CoreShape,
    skin_thickness_mm: f64,
    delta_p_pa: f64,
    material: &MaterialSpec,
) -> Result<ShellStressReport, StructureError> {
    if skin_thickness_mm <= 0.0 {
        return Err(StructureError::Configuration("skin thickness must be > 0".into()));
    }
    if delta_p_pa < 0.0 {
        return Err(StructureError::Configuration("pressure differential must be >= 0".into()));
    }
    let yield_pa = material.yield_strength_mpa.ok_or_else(|| {
        StructureError::Configuration(format!(
            "material '{}' has no yield_strength_mpa configured",
            material.name
        ))
    })? * 1e6;

    let r = core.inner_radius_mm();
    let ratio = r / skin_thickness_mm; // dimensionless, mm/mm
    let max_stress_pa = match core {
        CoreShape::Sphere { .. } => delta_p_pa * ratio / 2.0,
        CoreShape::Cylinder { .. } => delta_p_pa * ratio,
    };
    let safety_factor =
        if max_stress_pa > 0.0 { Some(yield_pa / max_stress_pa) } else { None };
    Ok(ShellStressReport { max_stress_pa, safety_factor })
}

/// Relative lattice modulus `E*/Es = C·φⁿ`, clamped to <= 1.
pub fn lattice_modulus(phi: f64, scaling: StiffnessScaling) -> f64 {
    (scaling.c * phi.powf(scaling.n)).min(1.0)
}

/// Minimal volume fraction achieving the required relative modulus.
fn required_phi(min_relative_modulus: f64, scaling: StiffnessScaling) -> f64 {
    (min_relative_modulus / scaling.c).powf(1.0 / scaling.n)
}

/// Select the mass-minimizing density field satisfying every stiffness
/// constraint: each region gets the minimal feasible volume fraction
/// `φ = (E_req/C)^(1/n)` (never below the spec's `phi_base` floor), held
/// constant over the region and blended smoothly outside it.
pub fn optimize_density(
    spec: &ChamberSpec,
    constraints: &[StiffnessConstraint],
    scaling: StiffnessScaling,
) -> Result<DensityField, StructureError> {
    let mut phi_base = spec.lattice.phi_base;
    let mut regional: Vec<(Point3<f64>, f64, f64)> = Vec::new();

    for constraint in constraints {
        let phi_req = required_phi(constraint.min_relative_modulus, scaling);
        let region_name = match &constraint.region {
            ConstraintRegion::Global => "global".to_string(),
            ConstraintRegion::Sphere { center_mm, radius_mm } => {
                format!("sphere r={radius_mm} at {center_mm:?}")
            }
        };
        if phi_req > 1.0 + 1e-12 {
            return Err(StructureError::Infeasible { region: region_name, required_phi: phi_req });
        }
        match &constraint.region {
            ConstraintRegion::Global => phi_base = phi_base.max(phi_req.min(1.0)),
            ConstraintRegion::Sphere { center_mm, radius_mm } => {
                regional.push((*center_mm, *radius_mm, phi_req.min(1.0)));
            }
        }
    }

    let mut tuned = spec.clone();
    tuned.lattice.phi_base = phi_base;
    tuned.lattice.boosts.clear();
    let mut field = build_density_field(&tuned)
        .map_err(|e| StructureError::Configuration(e.to_string()))?;
    // Keep only the base field; reinforcement comes from the constraints.
    field.boosts.clear();

    for (center, radius, phi) in regional {
        if phi <= phi_base {
            continue;
        }
        let threshold = density_to_threshold(phi)
            .map_err(|e| StructureError::Configuration(e.to_string()))?;
        // Plateau over the whole constraint region, then a half-radius
        // smoothstep skirt down to the base density.
        field.boosts.push(ThresholdBoost {
            center_mm: center,
            plateau_radius_mm: radius,
            falloff_width_mm: radius / 2.0,
            threshold,
        });
    }
    Ok(field)
}
