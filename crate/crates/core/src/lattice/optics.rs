//! Optical access checks: cylinder casts between opposing port bores for the
//! three orthogonal beam pairs of a magneto-optical trap layout.

use nalgebra::{Point3, Vector3};

use crate::error::GeometryError;
use crate::lattice::density::build_density_field;
use crate::lattice::solid::ChamberSolid;
use crate::model::ChamberSpec;

/// Verdict for one counter-propagating beam axis.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AxisAccess {
    /// Indices into the spec's port list for the opposing pair.
    pub ports: (usize, usize),
    pub direction: [f64; 3],
    pub clear: bool,
    /// Solid sample points inside the beam cylinder (first few), mm.
    pub blocking_positions_mm: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct OpticalAccessReport {
    pub beam_diameter_mm: f64,
    pub axes: Vec<AxisAccess>,
    pub all_clear: bool,
}

const DIR_TOL: f64 = 1e-6;
const MAX_BLOCKING_SAMPLES: usize = 8;

/// Opposing port pairs whose common axis passes through the chamber center.
fn opposing_pairs(spec: &ChamberSpec) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..spec.ports.len() {
        for j in (i + 1)..spec.ports.len() {
            let di = spec.ports[i].direction_vec();
            let dj = spec.ports[j].direction_vec();
            if di.dot(&dj) > -1.0 + DIR_TOL {
                continue;
            }
            // Both anchors must lie on the shared beam line through center.
            let line_miss = |anchor: Point3<f64>, dir: Vector3<f64>| {
                let rel = anchor.coords;
                (rel - dir * rel.dot(&dir)).norm()
            };
            if line_miss(spec.ports[i].anchor(), di) < 1e-6
                && line_miss(spec.ports[j].anchor(), dj) < 1e-6
            {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Pick three mutually orthogonal pairs out of the opposing-pair candidates.
fn orthogonal_triple(spec: &ChamberSpec, pairs: &[(usize, usize)]) -> Option<[(usize, usize); 3]> {
    for a in 0..pairs.len() {
        for b in (a + 1)..pairs.len() {
            for c in (b + 1)..pairs.len() {
                let da = spec.ports[pairs[a].0].direction_vec();
                let db = spec.ports[pairs[b].0].direction_vec();
                let dc = spec.ports[pairs[c].0].direction_vec();
                if da.dot(&db).abs() < DIR_TOL
                    && da.dot(&dc).abs() < DIR_TOL
                    && db.dot(&dc).abs() < DIR_TOL
                {
                    return Some([pairs[a], pairs[b], pairs[c]]);
                }
            }
        }
    }
    None
}

/// Cast a beam cylinder of `beam_diameter_mm` between each of the three
/// orthogonal opposing port pairs and report any solid material inside it.
pub fn check_optical_access(
    spec: &ChamberSpec,
    beam_diameter_mm: f64,
) -> Result<OpticalAccessReport, GeometryError> {
    if beam_diameter_mm <= 0.0 {
        return Err(GeometryError::InvalidArgument("beam diameter must be > 0".into()));
    }
    let pairs = opposing_pairs(spec);
    let triple = orthogonal_triple(spec, &pairs).ok_or_else(|| {
        GeometryError::MissingAxes(format!(
            "found {} opposing pair(s), need 3 mutually orthogonal",
            pairs.len()
        ))
    })?;

    let density = build_density_field(spec)?;
    let solid = ChamberSolid::new(spec, &density);

    let half_len = spec.outer_extent_mm() + 2.0;
    let beam_r = beam_diameter_mm / 2.0;
    let axial_step = 0.5f64;
    let n_axial = (2.0 * half_len / axial_step).ceil() as usize;
    let radii = [0.0, 0.25, 0.5, 0.75, 1.0];
    let n_angles = 16;

    let mut axes = Vec::with_capacity(3);
    for (pi, pj) in triple {
        let axis = spec.ports[pi].direction_vec();
        // Orthonormal frame around the beam axis.
        let seed = if axis.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let u = axis.cross(&seed).normalize();
        let v = axis.cross(&u);

        let mut blocking = Vec::new();
        'scan: for a in 0..=n_axial {
            let s = -half_len + a as f64 * axial_step;
            let on_axis = Point3::origin() + axis * s;
            for &rf in &radii {
                let r = rf * beam_r;
                if r == 0.0 {
                    if solid.is_solid(&on_axis) {
                        blocking.push([on_axis.x, on_axis.y, on_axis.z]);
                    }
                } else {
                    for t in 0..n_angles {
                        let ang = 2.0 * std::f64::consts::PI * t as f64 / n_angles as f64;
                        let p = on_axis + u * (r * ang.cos()) + v * (r * ang.sin());
                        if solid.is_solid(&p) {
                            blocking.push([p.x, p.y, p.z]);
                        }
                        if blocking.len() >= MAX_BLOCKING_SAMPLES {
                            break 'scan;
                        }
                    }
                }
            }
        }
        axes.push(AxisAccess {
            ports: (pi, pj),
            direction: spec.ports[pi].direction,
            clear: blocking.is_empty(),
            blocking_positions_mm: blocking,
        });
    }
    let all_clear = axes.iter().all(|a| a.clear);
    Ok(OpticalAccessReport { beam_diameter_mm, axes, all_clear })
}
