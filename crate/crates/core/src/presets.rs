//! Built-in example configurations.
//!
//! Dimensions are illustrative defaults, not measurements of any particular
//! chamber. CF bore and flange diameters follow common vendor catalogs and
//! are meant to be edited per application.

use std::collections::BTreeMap;

use crate::model::{
    ChamberSpec, CoreShape, DensityBoost, LatticeRegion, LatticeSpec, MaterialSpec,
    OutgassingSpec, PortSpec, PortStandard,
};

/// AlSi10Mg with placeholder outgassing and yield values. The outgassing and
/// yield figures are editable calibration inputs, not measured constants.
pub fn alsi10mg() -> MaterialSpec {
    let mut composition = BTreeMap::new();
    composition.insert("Al".to_string(), 0.898);
    composition.insert("Si".to_string(), 0.097);
    composition.insert("Mg".to_string(), 0.003);
    composition.insert("other".to_string(), 0.002);
    let mut notes = BTreeMap::new();
    notes.insert(
        "surface_composition_xps".to_string(),
        "informational only; not used in computation".to_string(),
    );
    MaterialSpec {
        name: "AlSi10Mg".to_string(),
        density_kg_m3: 2670.0,
        composition,
        hardness_hv: Some(105.0),
        yield_strength_mpa: Some(230.0),
        outgassing: OutgassingSpec {
            q_ref_mbar_l_s_cm2: 1e-11,
            t_ref_k: 293.0,
            activation_energy_ev: 0.8,
            bake_decay_tau_s: 1e6,
        },
        notes,
    }
}

/// Stainless-steel reference material for mass-comparison reports.
pub fn stainless_reference() -> MaterialSpec {
    let mut composition = BTreeMap::new();
    composition.insert("Fe".to_string(), 0.68);
    composition.insert("Cr".to_string(), 0.17);
    composition.insert("Ni".to_string(), 0.12);
    composition.insert("Mo".to_string(), 0.03);
    MaterialSpec {
        name: "316L reference".to_string(),
        density_kg_m3: 7930.0,
        composition,
        hardness_hv: None,
        yield_strength_mpa: Some(170.0),
        outgassing: OutgassingSpec {
            q_ref_mbar_l_s_cm2: 2e-12,
            t_ref_k: 293.0,
            activation_energy_ev: 0.8,
            bake_decay_tau_s: 1e6,
        },
        notes: BTreeMap::new(),
    }
}

fn port(standard: PortStandard, dir: [f64; 3], bore: f64, flange: f64) -> PortSpec {
    PortSpec {
        standard,
        direction: dir,
        axial_offset_mm: 0.0,
        bore_diameter_mm: bore,
        flange_outer_diameter_mm: flange,
    }
}

/// The bundled example chamber: spherical 30 mm core, 2.5 mm skin,
/// 2×CF40 + 8×CF16 ports, graded gyroid lattice band.
pub fn example_chamber() -> ChamberSpec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut ports = vec![
        port(PortStandard::CF40, [0.0, 0.0, 1.0], 38.0, 70.0),
        port(PortStandard::CF40, [0.0, 0.0, -1.0], 38.0, 70.0),
        port(PortStandard::CF16, [1.0, 0.0, 0.0], 16.0, 34.0),
        port(PortStandard::CF16, [-1.0, 0.0, 0.0], 16.0, 34.0),
        port(PortStandard::CF16, [0.0, 1.0, 0.0], 16.0, 34.0),
        port(PortStandard::CF16, [0.0, -1.0, 0.0], 16.0, 34.0),
    ];
    for dir in [[s, s, 0.0], [-s, s, 0.0], [s, -s, 0.0], [-s, -s, 0.0]] {
        ports.push(port(PortStandard::CF16, dir, 16.0, 34.0));
    }
    ChamberSpec {
        material: alsi10mg(),
        core: CoreShape::Sphere { inner_radius_mm: 30.0 },
        skin_thickness_mm: 2.5,
        ports,
        lattice_region: LatticeRegion { inner_offset_mm: 0.5, outer_offset_mm: 8.0 },
        lattice: LatticeSpec {
            cell_size_mm: 10.0,
            phi_base: 0.3,
            boosts: vec![DensityBoost {
                center_mm: [0.0, 0.0, 36.0],
                radius_mm: 12.0,
                phi: 0.6,
            }],
        },
    }
}
