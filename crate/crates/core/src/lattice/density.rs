//! Graded threshold fields: a base gyroid threshold plus local boost regions
//! with smoothstep falloff.

use nalgebra::Point3;

use crate::error::GeometryError;
use crate::lattice::field::{density_to_threshold, THRESHOLD_MAX};
use crate::model::{validate_chamber_spec, ChamberSpec};

/// A spherical region where the threshold is raised toward `threshold`.
/// Inside `plateau_radius_mm` the target holds exactly; from there it falls
/// off smoothly to the base over `falloff_width_mm`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdBoost {
    pub center_mm: Point3<f64>,
    pub plateau_radius_mm: f64,
    pub falloff_width_mm: f64,
    pub threshold: f64,
}

/// Spatially varying gyroid threshold: base value plus boost regions.
/// `t(x)` stays within [0, 1.5] and is C¹ across boost boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub cell_size_mm: f64,
    pub base_threshold: f64,
    pub boosts: Vec<ThresholdBoost>,
}

fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * (3.0 - 2.0 * x)
}

impl DensityField {
    /// Uniform field with no boosts.
    pub fn uniform(cell_size_mm: f64, threshold: f64) -> Self {
        DensityField { cell_size_mm, base_threshold: threshold, boosts: Vec::new() }
    }

    /// Evaluate the threshold at a point. Boosts only ever raise the
    /// threshold above the base (reinforcement, never thinning).
    pub fn threshold_at(&self, p: &Point3<f64>) -> f64 {
        let mut t = self.base_threshold;
        for boost in &self.boosts {
            let r = (p - boost.center_mm).norm();
            let w = if r <= boost.plateau_radius_mm {
                1.0
            } else if boost.falloff_width_mm > 0.0 {
                1.0 - smoothstep((r - boost.plateau_radius_mm) / boost.falloff_width_mm)
            } else {
                0.0
            };
            let candidate = self.base_threshold + w * (boost.threshold - self.base_threshold);
            t = t.max(candidate);
        }
        t.clamp(0.0, THRESHOLD_MAX)
    }
}

/// Multiplier on `phi_base` for the automatic reinforcement rings around
/// port base circles, capped at full density.
const PORT_BOOST_PHI_GAIN: f64 = 2.0;

/// Realize the chamber's lattice grading as a threshold field: base density
/// from `phi_base`, explicit boosts from the spec, and automatic boost
/// regions at each port base circle.
pub fn build_density_field(spec: &ChamberSpec) -> Result<DensityField, GeometryError> {
    let violations = validate_chamber_spec(spec);
    if let Some(v) = violations.first() {
        return Err(GeometryError::InvalidSpec(format!("{:?}: {}", v.code, v.message)));
    }

    let base_threshold = density_to_threshold(spec.lattice.phi_base)?;
    let mut boosts = Vec::new();
    for b in &spec.lattice.boosts {
        boosts.push(ThresholdBoost {
            center_mm: Point3::new(b.center_mm[0], b.center_mm[1], b.center_mm[2]),
            plateau_radius_mm: 0.0,
            falloff_width_mm: b.radius_mm,
            threshold: density_to_threshold(b.phi)?,
        });
    }

    // Reinforce around every port where the bore pierces the skin.
    let surface_r = spec.skin_outer_radius_mm();
    let port_phi = (spec.lattice.phi_base * PORT_BOOST_PHI_GAIN).min(1.0);
    let port_threshold = density_to_threshold(port_phi)?;
    for port in &spec.ports {
        let center = port.anchor() + port.direction_vec() * surface_r;
        boosts.push(ThresholdBoost {
            center_mm: center,
            plateau_radius_mm: 0.0,
            falloff_width_mm: port.flange_outer_diameter_mm / 2.0,
            threshold: port_threshold,
        });
    }

    Ok(DensityField { cell_size_mm: spec.lattice.cell_size_mm, base_threshold, boosts })
}
