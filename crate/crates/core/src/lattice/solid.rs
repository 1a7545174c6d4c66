//! The chamber's implicit solid: skin shell ∪ (lattice band ∩ gyroid matrix),
//! minus port bores. Evaluated as a signed occupancy scalar, positive inside
//! the solid.

use nalgebra::Point3;

use crate::lattice::density::DensityField;
use crate::lattice::field::gyroid_field;
use crate::model::{ChamberSpec, CoreShape};

/// Signed distance from `p` to the chamber's inner (vacuum-facing) surface:
/// negative inside the vacuum volume, positive outside, in mm.
pub fn core_distance(core: &CoreShape, p: &Point3<f64>) -> f64 {
    match *core {
        CoreShape::Sphere { inner_radius_mm } => p.coords.norm() - inner_radius_mm,
        CoreShape::Cylinder { inner_radius_mm, length_mm } => {
            let radial = (p.x * p.x + p.y * p.y).sqrt() - inner_radius_mm;
            let axial = p.z.abs() - length_mm / 2.0;
            let outside =
                (radial.max(0.0).powi(2) + axial.max(0.0).powi(2)).sqrt();
            radial.max(axial).min(0.0) + outside
        }
    }
}

/// Implicit solid evaluator for a chamber + density field pair.
pub struct ChamberSolid<'a> {
    spec: &'a ChamberSpec,
    field: &'a DensityField,
    /// Gyroid term is rescaled by cell/(2π) so it mixes with the mm-valued
    /// distance terms on a comparable gradient scale.
    gyroid_scale: f64,
    bore_reach_mm: f64,
}

impl<'a> ChamberSolid<'a> {
    pub fn new(spec: &'a ChamberSpec, field: &'a DensityField) -> Self {
        let gyroid_scale = field.cell_size_mm / (2.0 * std::f64::consts::PI);
        ChamberSolid { spec, field, gyroid_scale, bore_reach_mm: spec.outer_extent_mm() + 5.0 }
    }

    /// Signed occupancy: > 0 inside the solid. Not a true distance, but the
    /// zero level set is the chamber surface.
    pub fn occupancy(&self, p: &Point3<f64>) -> f64 {
        let d = core_distance(&self.spec.core, p);
        let h = self.spec.skin_thickness_mm;
        let skin = d.min(h - d);

        let region = &self.spec.lattice_region;
        let band_inner = h + region.inner_offset_mm;
        let band_outer = h + region.outer_offset_mm;
        let band = (d - band_inner).min(band_outer - d);
        let t = self.field.threshold_at(p);
        let gyroid = (t - gyroid_field(p, self.field.cell_size_mm).abs()) * self.gyroid_scale;
        let lattice = band.min(gyroid);

        let mut f = skin.max(lattice);

        // Subtract every port bore through the full solid depth.
        for port in &self.spec.ports {
            let rel = p - port.anchor();
            let axis = port.direction_vec();
            let s = rel.dot(&axis);
            let rho = (rel - axis * s).norm();
            let complement = (rho - port.bore_diameter_mm / 2.0)
                .max(-s)
                .max(s - self.bore_reach_mm);
            f = f.min(complement);
        }
        f
    }

    pub fn is_solid(&self, p: &Point3<f64>) -> bool {
        self.occupancy(p) > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::density::build_density_field;
    use crate::presets::example_chamber;

    #[test]
    fn core_distance_sphere() {
        let core = CoreShape::Sphere { inner_radius_mm: 30.0 };
        assert_eq!(core_distance(&core, &Point3::origin()), -30.0);
        assert_eq!(core_distance(&core, &Point3::new(35.0, 0.0, 0.0)), 5.0);
    }

    #[test]
    fn core_distance_cylinder() {
        let core = CoreShape::Cylinder { inner_radius_mm: 20.0, length_mm: 60.0 };
        assert_eq!(core_distance(&core, &Point3::origin()), -20.0);
        assert_eq!(core_distance(&core, &Point3::new(25.0, 0.0, 0.0)), 5.0);
        assert_eq!(core_distance(&core, &Point3::new(0.0, 0.0, 40.0)), 10.0);
        // Corner region combines radial and axial excess.
        let d = core_distance(&core, &Point3::new(23.0, 0.0, 34.0));
        assert!((d - (3.0f64.powi(2) + 4.0f64.powi(2)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn interior_is_empty_and_skin_is_solid() {
        let spec = example_chamber();
        let field = build_density_field(&spec).unwrap();
        let solid = ChamberSolid::new(&spec, &field);
        assert!(!solid.is_solid(&Point3::origin()));
        // Mid-skin away from any port: direction (1,1,1)/√3 misses all bores.
        let dir = nalgebra::Vector3::new(1.0, 1.0, 1.0).normalize();
        let mid_skin = Point3::origin() + dir * 31.25;
        assert!(solid.is_solid(&mid_skin));
        // Far outside.
        assert!(!solid.is_solid(&Point3::new(100.0, 0.0, 0.0)));
    }

    #[test]
    fn bore_is_empty_through_full_depth() {
        let spec = example_chamber();
        let field = build_density_field(&spec).unwrap();
        let solid = ChamberSolid::new(&spec, &field);
        // Along +z (CF40 bore, radius 19): sample through skin and lattice.
        for z in [30.5, 31.25, 32.4, 33.5, 36.0, 39.0, 40.4] {
            assert!(!solid.is_solid(&Point3::new(0.0, 0.0, z)), "solid at z={z}");
            assert!(!solid.is_solid(&Point3::new(10.0, 0.0, z)), "solid at rho=10, z={z}");
        }
    }
}
