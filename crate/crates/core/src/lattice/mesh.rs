//! Isosurface extraction from corner-sampled occupancy grids and watertight
//! mesh metrics.
//!
//! Extraction marches tetrahedra: every cube is split into the same six
//! tetrahedra around its main diagonal, so face diagonals agree between
//! neighboring cubes and the surface is watertight by construction. Crossing
//! vertices are welded through a grid-edge map, which makes every surface
//! edge shared by exactly two triangles.

use std::collections::HashMap;

use nalgebra::Point3;

use crate::error::GeometryError;
use crate::lattice::voxel::VoxelGrid;
use crate::model::MaterialSpec;

/// Indexed triangle mesh in mm with consistent outward winding.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<Point3<f64>>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriMesh {
    /// Signed volume via the divergence theorem, mm³. Positive for outward
    /// winding.
    pub fn signed_volume_mm3(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let a = self.vertices[t[0] as usize].coords;
                let b = self.vertices[t[1] as usize].coords;
                let c = self.vertices[t[2] as usize].coords;
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum()
    }

    pub fn surface_area_mm2(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let a = self.vertices[t[0] as usize];
                let b = self.vertices[t[1] as usize];
                let c = self.vertices[t[2] as usize];
                (b - a).cross(&(c - a)).norm() / 2.0
            })
            .sum::<f64>()
    }

    /// Watertightness audit: every undirected edge must appear in exactly two
    /// triangles, once per direction. Returns the offending edge on failure.
    pub fn check_watertight(&self) -> Result<(), GeometryError> {
        let mut edges: HashMap<(u32, u32), i32> = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let key = (a.min(b), a.max(b));
                // +1 for the canonical direction, -1 for the reverse.
                *edges.entry(key).or_insert(0) += if a < b { 1 } else { -1 };
            }
        }
        let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        for (edge, n) in &counts {
            if *n != 2 {
                return Err(GeometryError::NotWatertight(format!(
                    "edge {edge:?} belongs to {n} triangles"
                )));
            }
        }
        for (edge, balance) in &edges {
            if *balance != 0 {
                return Err(GeometryError::NotWatertight(format!(
                    "edge {edge:?} has inconsistent winding"
                )));
            }
        }
        Ok(())
    }

    pub fn is_watertight(&self) -> bool {
        self.check_watertight().is_ok()
    }
}

/// Geometric report for a mesh. Volume and mass are absent when the mesh is
/// not watertight (the divergence-theorem volume would be meaningless).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MeshMetrics {
    pub watertight: bool,
    pub volume_cm3: Option<f64>,
    pub mass_g: Option<f64>,
    pub surface_area_cm2: f64,
}

/// Volume, mass and surface area of a mesh for the given material.
pub fn mesh_metrics(mesh: &TriMesh, material: &MaterialSpec) -> MeshMetrics {
    let watertight = mesh.is_watertight();
    let surface_area_cm2 = mesh.surface_area_mm2() / 100.0;
    if !watertight {
        return MeshMetrics { watertight, volume_cm3: None, mass_g: None, surface_area_cm2 };
    }
    let volume_mm3 = mesh.signed_volume_mm3();
    // 1 kg/m³ = 1e-6 g/mm³.
    let mass_g = material.density_kg_m3 * 1e-6 * volume_mm3;
    MeshMetrics {
        watertight,
        volume_cm3: Some(volume_mm3 / 1000.0),
        mass_g: Some(mass_g),
        surface_area_cm2,
    }
}

// Cube corner offsets addressed by bit pattern (x | y<<1 | z<<2).
const CORNER_OFFSETS: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [1, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
];

// Six tetrahedra around the main diagonal corner0 → corner7, one per
// permutation of the axis step order. Identical in every cube, so shared
// cube faces always use the same diagonal.
const TETS: [[usize; 4]; 6] = [
    [0, 1, 3, 7], // x, y, z
    [0, 1, 5, 7], // x, z, y
    [0, 2, 3, 7], // y, x, z
    [0, 2, 6, 7], // y, z, x
    [0, 4, 5, 7], // z, x, y
    [0, 4, 6, 7], // z, y, x
];

struct MeshBuilder {
    vertices: Vec<Point3<f64>>,
    triangles: Vec<[u32; 3]>,
    edge_vertices: HashMap<(u32, u32), u32>,
}

impl MeshBuilder {
    /// Crossing vertex on the grid edge between global corners `a` and `b`
    /// (opposite occupancy signs), welded across all incident tetrahedra.
    fn crossing(&mut self, a: u32, b: u32, pa: Point3<f64>, pb: Point3<f64>, va: f64, vb: f64) -> u32 {
        let (lo, hi, plo, phi, vlo, vhi) =
            if a < b { (a, b, pa, pb, va, vb) } else { (b, a, pb, pa, vb, va) };
        if let Some(&idx) = self.edge_vertices.get(&(lo, hi)) {
            return idx;
        }
        // Keep crossings off the grid corners: vertices from different edges
        // of one corner must stay separated by far more than f32 resolution,
        // or STL export (f32) welds them and pinches the surface.
        let t = (vlo / (vlo - vhi)).clamp(1e-3, 1.0 - 1e-3);
        let p = plo + (phi - plo) * t;
        let idx = self.vertices.len() as u32;
        self.vertices.push(p);
        self.edge_vertices.insert((lo, hi), idx);
        idx
    }

    fn emit(&mut self, a: u32, b: u32, c: u32) {
        self.triangles.push([a, b, c]);
    }

    fn march_tet(&mut self, corners: [(u32, Point3<f64>, f64); 4]) {
        let pos: Vec<usize> = (0..4).filter(|&i| corners[i].2 > 0.0).collect();
        match pos.len() {
            0 | 4 => {}
            1 | 3 => {
                // Single vertex on one side; triangle from the three
                // crossings. Orientation from the tet's chirality.
                let lone_positive = pos.len() == 1;
                let apex = if lone_positive {
                    pos[0]
                } else {
                    (0..4).find(|i| !pos.contains(i)).unwrap()
                };
                let others: Vec<usize> = (0..4).filter(|&i| i != apex).collect();
                let (ai, pa, va) = corners[apex];
                let e0 = corners[others[0]].1 - pa;
                let e1 = corners[others[1]].1 - pa;
                let e2 = corners[others[2]].1 - pa;
                let det = e0.dot(&e1.cross(&e2));
                let xs: Vec<u32> = others
                    .iter()
                    .map(|&o| {
                        let (bi, pb, vb) = corners[o];
                        self.crossing(ai, bi, pa, pb, va, vb)
                    })
                    .collect();
                // det > 0 with a positive apex gives outward order (0,1,2);
                // each flipped condition reverses it.
                if (det > 0.0) == lone_positive {
                    self.emit(xs[0], xs[1], xs[2]);
                } else {
                    self.emit(xs[0], xs[2], xs[1]);
                }
            }
            2 => {
                let p1 = pos[0];
                let p2 = pos[1];
                let neg: Vec<usize> = (0..4).filter(|i| !pos.contains(i)).collect();
                let (n1, n2) = (neg[0], neg[1]);
                let x = |builder: &mut Self, a: usize, b: usize| {
                    let (ai, pa, va) = corners[a];
                    let (bi, pb, vb) = corners[b];
                    builder.crossing(ai, bi, pa, pb, va, vb)
                };
                let q0 = x(self, p1, n1);
                let q1 = x(self, p1, n2);
                let q2 = x(self, p2, n2);
                let q3 = x(self, p2, n1);
                let det = (corners[p2].1 - corners[p1].1)
                    .dot(&(corners[n1].1 - corners[p1].1).cross(&(corners[n2].1 - corners[p1].1)));
                if det > 0.0 {
                    self.emit(q0, q1, q2);
                    self.emit(q0, q2, q3);
                } else {
                    self.emit(q0, q2, q1);
                    self.emit(q0, q3, q2);
                }
            }
            _ => unreachable!(),
        }
    }
}

/// Extract the zero isosurface of the occupancy grid as a watertight,
/// outward-wound triangle mesh. Fails if solid reaches the grid boundary.
pub fn extract_mesh(grid: &VoxelGrid) -> Result<TriMesh, GeometryError> {
    if !grid.boundary_is_empty() {
        return Err(GeometryError::OpenBoundary("outermost sample layer".into()));
    }
    let [nx, ny, nz] = grid.dims;
    let mut builder = MeshBuilder {
        vertices: Vec::new(),
        triangles: Vec::new(),
        edge_vertices: HashMap::new(),
    };

    for k in 0..nz - 1 {
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let mut idx = [0u32; 8];
                let mut val = [0.0f64; 8];
                let mut any_pos = false;
                let mut any_neg = false;
                for (c, off) in CORNER_OFFSETS.iter().enumerate() {
                    let gi = grid.index(i + off[0], j + off[1], k + off[2]);
                    idx[c] = gi as u32;
                    val[c] = grid.values[gi];
                    if val[c] > 0.0 {
                        any_pos = true;
                    } else {
                        any_neg = true;
                    }
                }
                if !(any_pos && any_neg) {
                    continue;
                }
                let pts: Vec<Point3<f64>> = CORNER_OFFSETS
                    .iter()
                    .map(|off| grid.corner_position(i + off[0], j + off[1], k + off[2]))
                    .collect();
                for tet in &TETS {
                    let corners = [
                        (idx[tet[0]], pts[tet[0]], val[tet[0]]),
                        (idx[tet[1]], pts[tet[1]], val[tet[1]]),
                        (idx[tet[2]], pts[tet[2]], val[tet[2]]),
                        (idx[tet[3]], pts[tet[3]], val[tet[3]]),
                    ];
                    builder.march_tet(corners);
                }
            }
        }
    }
    Ok(TriMesh { vertices: builder.vertices, triangles: builder.triangles })
}
