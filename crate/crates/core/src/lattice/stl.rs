//! Binary STL read/write.
//!
//! Layout: 80-byte header, little-endian u32 triangle count, then one
//! 50-byte record per triangle (normal, three vertices, u16 attribute = 0).

use std::collections::HashMap;
use std::io::{self, Read, Write};

use nalgebra::Point3;

use crate::lattice::mesh::TriMesh;

fn write_vec3<W: Write>(w: &mut W, v: [f32; 3]) -> io::Result<()> {
    for c in v {
        w.write_all(&c.to_le_bytes())?;
    }
    Ok(())
}

/// Serialize a mesh as binary STL. Triangle order and vertex coordinates are
/// preserved, so identical meshes produce identical bytes.
pub fn write_stl<W: Write>(w: &mut W, mesh: &TriMesh) -> io::Result<()> {
    let mut header = [0u8; 80];
    let tag = b"uhvforge binary stl";
    header[..tag.len()].copy_from_slice(tag);
    w.write_all(&header)?;
    w.write_all(&(mesh.triangles.len() as u32).to_le_bytes())?;
    for t in &mesh.triangles {
        let a = mesh.vertices[t[0] as usize];
        let b = mesh.vertices[t[1] as usize];
        let c = mesh.vertices[t[2] as usize];
        let n = (b - a).cross(&(c - a));
        let n = if n.norm() > 0.0 { n.normalize() } else { n };
        write_vec3(w, [n.x as f32, n.y as f32, n.z as f32])?;
        for p in [a, b, c] {
            write_vec3(w, [p.x as f32, p.y as f32, p.z as f32])?;
        }
        w.write_all(&0u16.to_le_bytes())?;
    }
    Ok(())
}

fn read_vec3<R: Read>(r: &mut R) -> io::Result<[f32; 3]> {
    let mut buf = [0u8; 12];
    r.read_exact(&mut buf)?;
    Ok([
        f32::from_le_bytes(buf[0..4].try_into().unwrap()),
        f32::from_le_bytes(buf[4..8].try_into().unwrap()),
        f32::from_le_bytes(buf[8..12].try_into().unwrap()),
    ])
}

/// Parse binary STL, welding vertices by exact coordinate match so meshes
/// written by [`write_stl`] round-trip to an indexed, auditable form.
///
/// Vertices closer than f32 resolution weld to one point; the sliver
/// triangles collapsed by such a weld are dropped, which preserves the
/// closed-surface edge pairing (an edge collapse removes exactly the two
/// faces sharing the collapsed edge).
pub fn read_stl<R: Read>(r: &mut R) -> io::Result<TriMesh> {
    let mut header = [0u8; 80];
    r.read_exact(&mut header)?;
    let mut count_buf = [0u8; 4];
    r.read_exact(&mut count_buf)?;
    let count = u32::from_le_bytes(count_buf) as usize;

    let mut vertices: Vec<Point3<f64>> = Vec::new();
    let mut triangles = Vec::with_capacity(count);
    let mut dedup: HashMap<[u32; 3], u32> = HashMap::new();
    for _ in 0..count {
        let _normal = read_vec3(r)?;
        let mut tri = [0u32; 3];
        for slot in &mut tri {
            let v = read_vec3(r)?;
            let key = [v[0].to_bits(), v[1].to_bits(), v[2].to_bits()];
            *slot = *dedup.entry(key).or_insert_with(|| {
                vertices.push(Point3::new(v[0] as f64, v[1] as f64, v[2] as f64));
                (vertices.len() - 1) as u32
            });
        }
        let mut attr = [0u8; 2];
        r.read_exact(&mut attr)?;
        if tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2] {
            triangles.push(tri);
        }
    }
    Ok(TriMesh { vertices, triangles })
}
