//! Domain types for materials, chamber specification and additive build
//! parameters, plus spec validation and the build-parameter calculator.
//!
//! All quantities carry their unit in the field name (`*_mm`, `*_kg_m3`, ...)
//! so the JSON schema and the in-memory types cannot drift apart silently.

use std::collections::BTreeMap;

use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Outgassing model parameters for a material surface.
///
/// `q_ref` is the specific outgassing rate at the reference temperature for a
/// freshly exposed (unpumped) surface; `bake_decay_tau` controls the 1/t-like
/// decay of the rate with accumulated pumped time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutgassingSpec {
    /// Specific rate at `t_ref_k`, mbar·L·s⁻¹ per cm² of exposed surface.
    pub q_ref_mbar_l_s_cm2: f64,
    /// Reference temperature, K.
    pub t_ref_k: f64,
    /// Arrhenius activation energy, eV.
    pub activation_energy_ev: f64,
    /// Pump-down decay time constant, s.
    pub bake_decay_tau_s: f64,
}

/// Bulk material description used for mass reporting, structural checks and
/// outgassing simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub name: String,
    /// Bulk density, kg/m³.
    pub density_kg_m3: f64,
    /// Element symbol → weight fraction; fractions must sum to 1 ± 1e-6.
    pub composition: BTreeMap<String, f64>,
    /// Vickers hardness (HV), informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardness_hv: Option<f64>,
    /// Yield strength, MPa. Required by the structural check, optional here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yield_strength_mpa: Option<f64>,
    pub outgassing: OutgassingSpec,
    /// Free-form annotations (e.g. surface-composition measurements). Never
    /// used in computation.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
}

/// ConFlat flange standards supported by the port model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PortStandard {
    CF16,
    CF40,
}

/// A single flanged port on the chamber.
///
/// The port is anchored on the chamber axis at `axial_offset_mm` from the
/// center and its bore is subtracted along `direction` through the full skin
/// and lattice depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortSpec {
    pub standard: PortStandard,
    /// Outward unit vector from the anchor point.
    pub direction: [f64; 3],
    /// Anchor offset along the chamber z axis, mm from chamber center.
    pub axial_offset_mm: f64,
    pub bore_diameter_mm: f64,
    pub flange_outer_diameter_mm: f64,
}

impl PortSpec {
    pub fn direction_vec(&self) -> Vector3<f64> {
        Vector3::new(self.direction[0], self.direction[1], self.direction[2])
    }

    /// Anchor point of the port on the chamber axis.
    pub fn anchor(&self) -> Point3<f64> {
        Point3::new(0.0, 0.0, self.axial_offset_mm)
    }
}

/// Shape of the chamber's inner (vacuum-facing) core surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum CoreShape {
    Sphere { inner_radius_mm: f64 },
    Cylinder { inner_radius_mm: f64, length_mm: f64 },
}

impl CoreShape {
    pub fn inner_radius_mm(&self) -> f64 {
        match *self {
            CoreShape::Sphere { inner_radius_mm } => inner_radius_mm,
            CoreShape::Cylinder { inner_radius_mm, .. } => inner_radius_mm,
        }
    }
}

/// Radial band, measured outward from the outer skin surface, occupied by the
/// support lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeRegion {
    pub inner_offset_mm: f64,
    pub outer_offset_mm: f64,
}

/// A local density reinforcement: volume fraction `phi` at `center_mm`,
/// falling off smoothly to the base density over `radius_mm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityBoost {
    pub center_mm: [f64; 3],
    pub radius_mm: f64,
    pub phi: f64,
}

/// Gyroid lattice parameters: unit-cell size, base volume fraction and any
/// explicit local reinforcements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub cell_size_mm: f64,
    pub phi_base: f64,
    #[serde(default)]
    pub boosts: Vec<DensityBoost>,
}

/// Full parametric chamber description: material, core shell, skin, ports and
/// lattice. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChamberSpec {
    pub material: MaterialSpec,
    pub core: CoreShape,
    pub skin_thickness_mm: f64,
    pub ports: Vec<PortSpec>,
    pub lattice_region: LatticeRegion,
    pub lattice: LatticeSpec,
}

impl ChamberSpec {
    /// Outer radius of the skin shell (sphere) or of the skin around the
    /// cylinder barrel, mm.
    pub fn skin_outer_radius_mm(&self) -> f64 {
        self.core.inner_radius_mm() + self.skin_thickness_mm
    }

    /// Outermost radial extent of the solid (skin + lattice band), mm.
    pub fn outer_extent_mm(&self) -> f64 {
        self.skin_outer_radius_mm() + self.lattice_region.outer_offset_mm
    }
}

/// Machine-readable spec violation. Violations are data, not failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    DensityNonpositive,
    CompositionFractionRange,
    CompositionSum,
    OutgassingNegative,
    SkinNonpositive,
    LatticeRegionOrder,
    CellSizeNonpositive,
    PhiRange,
    DirectionNotUnit,
    BoreNonpositive,
    BoreExceedsFlange,
    PortOverlap,
    CoreDegenerate,
}

fn violation(code: ViolationCode, message: impl Into<String>) -> Violation {
    Violation { code, message: message.into() }
}

/// Check every `ChamberSpec` invariant and return the full violation list.
/// An empty list means the spec is valid. The result is independent of the
/// order of the port list.
pub fn validate_chamber_spec(spec: &ChamberSpec) -> Vec<Violation> {
    let mut out = Vec::new();

    let m = &spec.material;
    if m.density_kg_m3 <= 0.0 {
        out.push(violation(
            ViolationCode::DensityNonpositive,
            format!("material density must be > 0 (got {})", m.density_kg_m3),
        ));
    }
    let mut frac_sum = 0.0;
    for (elem, frac) in &m.composition {
        if !(0.0..=1.0).contains(frac) {
            out.push(violation(
                ViolationCode::CompositionFractionRange,
                format!("weight fraction of {elem} outside [0,1]: {frac}"),
            ));
        }
        frac_sum += frac;
    }
    if (frac_sum - 1.0).abs() > 1e-6 {
        out.push(violation(
            ViolationCode::CompositionSum,
            format!("composition weight fractions sum to {frac_sum}, expected 1"),
        ));
    }
    if m.outgassing.q_ref_mbar_l_s_cm2 < 0.0 || m.outgassing.activation_energy_ev < 0.0 {
        out.push(violation(
            ViolationCode::OutgassingNegative,
            "outgassing q_ref and activation energy must be >= 0".to_string(),
        ));
    }

    match spec.core {
        CoreShape::Sphere { inner_radius_mm } if inner_radius_mm <= 0.0 => {
            out.push(violation(ViolationCode::CoreDegenerate, "sphere inner radius must be > 0"));
        }
        CoreShape::Cylinder { inner_radius_mm, length_mm }
            if inner_radius_mm <= 0.0 || length_mm <= 0.0 =>
        {
            out.push(violation(
                ViolationCode::CoreDegenerate,
                "cylinder inner radius and length must be > 0",
            ));
        }
        _ => {}
    }

    if spec.skin_thickness_mm <= 0.0 {
        out.push(violation(
            ViolationCode::SkinNonpositive,
            format!("skin thickness must be > 0 (got {})", spec.skin_thickness_mm),
        ));
    }

    let region = &spec.lattice_region;
    if !(region.inner_offset_mm >= 0.0 && region.outer_offset_mm > region.inner_offset_mm) {
        out.push(violation(
            ViolationCode::LatticeRegionOrder,
            format!(
                "lattice region requires outer_offset > inner_offset >= 0 (got {} / {})",
                region.inner_offset_mm, region.outer_offset_mm
            ),
        ));
    }

    if spec.lattice.cell_size_mm <= 0.0 {
        out.push(violation(ViolationCode::CellSizeNonpositive, "lattice cell size must be > 0"));
    }
    if !(0.0..=1.0).contains(&spec.lattice.phi_base) {
        out.push(violation(
            ViolationCode::PhiRange,
            format!("phi_base outside [0,1]: {}", spec.lattice.phi_base),
        ));
    }
    for (i, boost) in spec.lattice.boosts.iter().enumerate() {
        if !(0.0..=1.0).contains(&boost.phi) {
            out.push(violation(
                ViolationCode::PhiRange,
                format!("boost {i} phi outside [0,1]: {}", boost.phi),
            ));
        }
    }

    // Port checks in a stable (sorted) order so permuting the port list does
    // not change the report.
    let mut indices: Vec<usize> = (0..spec.ports.len()).collect();
    indices.sort_by(|&a, &b| port_sort_key(&spec.ports[a]).partial_cmp(&port_sort_key(&spec.ports[b])).unwrap());
    for &i in &indices {
        let p = &spec.ports[i];
        let norm = p.direction_vec().norm();
        if (norm - 1.0).abs() > 1e-9 {
            out.push(violation(
                ViolationCode::DirectionNotUnit,
                format!("port direction {:?} has norm {norm}, expected 1", p.direction),
            ));
        }
        if p.bore_diameter_mm <= 0.0 {
            out.push(violation(
                ViolationCode::BoreNonpositive,
                format!("port bore diameter must be > 0 (got {})", p.bore_diameter_mm),
            ));
        }
        if p.bore_diameter_mm >= p.flange_outer_diameter_mm {
            out.push(violation(
                ViolationCode::BoreExceedsFlange,
                format!(
                    "port bore {} mm must be smaller than flange OD {} mm",
                    p.bore_diameter_mm, p.flange_outer_diameter_mm
                ),
            ));
        }
    }

    // Pairwise bore overlap on the core surface. Base circles live where the
    // port axis pierces the outer skin.
    let surface_r = spec.skin_outer_radius_mm();
    for a in 0..indices.len() {
        for b in (a + 1)..indices.len() {
            let pa = &spec.ports[indices[a]];
            let pb = &spec.ports[indices[b]];
            let ca = pa.anchor() + pa.direction_vec() * surface_r;
            let cb = pb.anchor() + pb.direction_vec() * surface_r;
            let gap = (ca - cb).norm();
            if gap < (pa.bore_diameter_mm + pb.bore_diameter_mm) / 2.0 {
                out.push(violation(
                    ViolationCode::PortOverlap,
                    format!(
                        "port bores overlap on the core surface (centers {:.2} mm apart)",
                        gap
                    ),
                ));
            }
        }
    }

    out
}

fn port_sort_key(p: &PortSpec) -> (f64, f64, f64, f64) {
    (p.direction[0], p.direction[1], p.direction[2], p.axial_offset_mm)
}

/// Laser powder-bed-fusion exposure parameters with the derived scanning
/// quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildParams {
    pub laser_power_w: f64,
    pub layer_thickness_um: f64,
    pub hatch_spacing_um: f64,
    pub point_distance_um: f64,
    pub exposure_time_us: f64,
    /// point_distance / exposure_time, mm/s.
    pub scan_speed_mm_s: f64,
    /// scan_speed · hatch · layer, mm³/s.
    pub build_rate_mm3_s: f64,
    /// laser_power / build_rate, J/mm³.
    pub energy_density_j_mm3: f64,
}

/// Derive scanning speed, volumetric build rate and energy density from the
/// pulsed-exposure machine parameters.
pub fn compute_build_parameters(
    laser_power_w: f64,
    layer_thickness_um: f64,
    hatch_spacing_um: f64,
    point_distance_um: f64,
    exposure_time_us: f64,
) -> Result<BuildParams, ModelError> {
    let inputs = [
        ("laser_power_w", laser_power_w),
        ("layer_thickness_um", layer_thickness_um),
        ("hatch_spacing_um", hatch_spacing_um),
        ("point_distance_um", point_distance_um),
        ("exposure_time_us", exposure_time_us),
    ];
    for (name, v) in inputs {
        if !(v > 0.0) {
            return Err(ModelError::InvalidArgument(format!("{name} must be > 0 (got {v})")));
        }
    }

    // µm/µs == mm/ms, so ×1000 gives mm/s.
    let scan_speed_mm_s = point_distance_um / exposure_time_us * 1000.0;
    let build_rate_mm3_s = scan_speed_mm_s * (hatch_spacing_um * 1e-3) * (layer_thickness_um * 1e-3);
    let energy_density_j_mm3 = laser_power_w / build_rate_mm3_s;

    Ok(BuildParams {
        laser_power_w,
        layer_thickness_um,
        hatch_spacing_um,
        point_distance_um,
        exposure_time_us,
        scan_speed_mm_s,
        build_rate_mm3_s,
        energy_density_j_mm3,
    })
}
