//! Corner-sampled voxelization of the chamber solid.

use nalgebra::Point3;

use crate::error::GeometryError;
use crate::lattice::density::DensityField;
use crate::lattice::solid::ChamberSolid;
use crate::model::{ChamberSpec, CoreShape};

/// Regular grid of signed occupancy samples at voxel corners.
/// Positive sample = solid. The grid always carries at least one empty
/// boundary layer so the extracted surface is closed.
#[derive(Debug, Clone)]
pub struct VoxelGrid {
    pub origin_mm: Point3<f64>,
    pub voxel_size_mm: f64,
    /// Corner counts per axis, each >= 2.
    pub dims: [usize; 3],
    pub values: Vec<f64>,
}

impl VoxelGrid {
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.index(i, j, k)]
    }

    pub fn corner_position(&self, i: usize, j: usize, k: usize) -> Point3<f64> {
        Point3::new(
            self.origin_mm.x + i as f64 * self.voxel_size_mm,
            self.origin_mm.y + j as f64 * self.voxel_size_mm,
            self.origin_mm.z + k as f64 * self.voxel_size_mm,
        )
    }

    /// Number of solid corner samples.
    pub fn solid_count(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0.0).count()
    }

    /// True when no solid sample touches the outermost layer.
    pub fn boundary_is_empty(&self) -> bool {
        let [nx, ny, nz] = self.dims;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    if (i == 0 || j == 0 || k == 0 || i == nx - 1 || j == ny - 1 || k == nz - 1)
                        && self.value(i, j, k) > 0.0
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Sample an arbitrary signed field over a box. Test and tooling helper.
    pub fn from_field<F: Fn(&Point3<f64>) -> f64>(
        min: Point3<f64>,
        max: Point3<f64>,
        voxel_size_mm: f64,
        field: F,
    ) -> Self {
        let margin = 2.0 * voxel_size_mm;
        let origin = Point3::new(min.x - margin, min.y - margin, min.z - margin);
        let dims = [
            ((max.x - min.x + 2.0 * margin) / voxel_size_mm).ceil() as usize + 1,
            ((max.y - min.y + 2.0 * margin) / voxel_size_mm).ceil() as usize + 1,
            ((max.z - min.z + 2.0 * margin) / voxel_size_mm).ceil() as usize + 1,
        ];
        let mut values = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for k in 0..dims[2] {
            let z = origin.z + k as f64 * voxel_size_mm;
            for j in 0..dims[1] {
                let y = origin.y + j as f64 * voxel_size_mm;
                for i in 0..dims[0] {
                    let x = origin.x + i as f64 * voxel_size_mm;
                    let mut v = field(&Point3::new(x, y, z));
                    // Never store an exact zero; ambiguous corners break
                    // surface extraction.
                    if v == 0.0 {
                        v = -1e-12;
                    }
                    values.push(v);
                }
            }
        }
        VoxelGrid { origin_mm: origin, voxel_size_mm, dims, values }
    }
}

/// Sample the chamber solid over its bounding box. `voxel_size_mm` must be at
/// most one eighth of the lattice unit cell so the gyroid walls are resolved.
pub fn voxelize(
    spec: &ChamberSpec,
    field: &DensityField,
    voxel_size_mm: f64,
) -> Result<VoxelGrid, GeometryError> {
    let bound = field.cell_size_mm / 8.0;
    if voxel_size_mm > bound {
        return Err(GeometryError::VoxelTooCoarse { voxel_mm: voxel_size_mm, bound_mm: bound });
    }
    if voxel_size_mm <= 0.0 {
        return Err(GeometryError::InvalidArgument("voxel size must be > 0".into()));
    }

    let radial = spec.outer_extent_mm();
    let axial = match spec.core {
        CoreShape::Sphere { .. } => radial,
        CoreShape::Cylinder { length_mm, .. } => {
            length_mm / 2.0 + spec.skin_thickness_mm + spec.lattice_region.outer_offset_mm
        }
    };
    let min = Point3::new(-radial, -radial, -axial);
    let max = Point3::new(radial, radial, axial);
    let solid = ChamberSolid::new(spec, field);
    Ok(VoxelGrid::from_field(min, max, voxel_size_mm, |p| solid.occupancy(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::density::build_density_field;
    use crate::presets::example_chamber;

    #[test]
    fn coarse_voxel_is_rejected_with_bound() {
        let spec = example_chamber();
        let field = build_density_field(&spec).unwrap();
        let err = voxelize(&spec, &field, 2.0).unwrap_err();
        match err {
            GeometryError::VoxelTooCoarse { voxel_mm, bound_mm } => {
                assert_eq!(voxel_mm, 2.0);
                assert_eq!(bound_mm, 10.0 / 8.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn sphere_occupancy_matches_analytic_volume() {
        let r: f64 = 20.0;
        let voxel = r / 50.0;
        let grid = VoxelGrid::from_field(
            Point3::new(-r, -r, -r),
            Point3::new(r, r, r),
            voxel,
            |p| r - p.coords.norm(),
        );
        assert!(grid.boundary_is_empty());
        let estimated = grid.solid_count() as f64 * voxel.powi(3);
        let analytic = 4.0 / 3.0 * std::f64::consts::PI * r.powi(3);
        assert!((estimated - analytic).abs() / analytic < 0.02);
    }

    #[test]
    fn degenerate_chamber_voxelizes_empty() {
        // Zero skin and zero base density: nothing to solidify.
        let mut spec = example_chamber();
        spec.skin_thickness_mm = 0.0;
        spec.lattice.phi_base = 0.0;
        spec.lattice.boosts.clear();
        spec.ports.clear();
        let field = DensityField::uniform(spec.lattice.cell_size_mm, 0.0);
        let grid = voxelize(&spec, &field, 1.0).unwrap();
        assert_eq!(grid.solid_count(), 0);
    }

    #[test]
    fn chamber_grid_has_empty_boundary() {
        let spec = example_chamber();
        let field = build_density_field(&spec).unwrap();
        let grid = voxelize(&spec, &field, 1.25).unwrap();
        assert!(grid.boundary_is_empty());
        assert!(grid.solid_count() > 0);
    }

    #[test]
    fn port_bore_column_is_empty_through_skin() {
        let spec = example_chamber();
        let field = build_density_field(&spec).unwrap();
        let grid = voxelize(&spec, &field, 1.0).unwrap();
        // Walk corners near the +z axis through the skin depth.
        let [nx, ny, nz] = grid.dims;
        let ci = nx / 2;
        let cj = ny / 2;
        for k in 0..nz {
            let p = grid.corner_position(ci, cj, k);
            if p.z > 29.0 && p.z < 41.0 && (p.x.powi(2) + p.y.powi(2)).sqrt() < 5.0 {
                assert!(grid.value(ci, cj, k) <= 0.0, "solid inside bore at {p:?}");
            }
        }
    }
}
