//! The gyroid level-set field and the threshold ↔ volume-fraction mapping.
//!
//! The lattice solid is the "matrix" (sheet) gyroid: the set `|F(p)| <= t`
//! with `F(p) = sin(kx)cos(ky) + sin(ky)cos(kz) + sin(kz)cos(kx)` and
//! `k = 2π/cell_size`. The volume fraction φ of that set per unit cell is
//! tabulated once by dense sampling and inverted by interpolation.

use nalgebra::Point3;
use once_cell::sync::Lazy;

use crate::error::GeometryError;

/// Largest attainable |F|; `t = F_MAX` fills the whole cell.
pub const THRESHOLD_MAX: f64 = 1.5;

/// Evaluate the gyroid level-set function at `p` for the given unit-cell
/// size. The range is contained in [-1.5, 1.5] and the field is periodic
/// with period `cell_size` along each axis.
pub fn gyroid_field(p: &Point3<f64>, cell_size: f64) -> f64 {
    debug_assert!(cell_size > 0.0);
    let k = 2.0 * std::f64::consts::PI / cell_size;
    let (x, y, z) = (k * p.x, k * p.y, k * p.z);
    x.sin() * y.cos() + y.sin() * z.cos() + z.sin() * x.cos()
}

/// Samples per axis for the unit-cell table.
const TABLE_SAMPLES: usize = 128;
/// Number of threshold knots over [0, 1.5] (0.01 spacing).
const TABLE_KNOTS: usize = 151;

/// Cumulative φ(t) at `TABLE_KNOTS` evenly spaced thresholds, built by
/// cell-centered sampling of |F| on a `TABLE_SAMPLES`³ grid.
static PHI_TABLE: Lazy<Vec<f64>> = Lazy::new(|| {
    let n = TABLE_SAMPLES;
    let bins = TABLE_KNOTS - 1;
    let bin_width = THRESHOLD_MAX / bins as f64;
    let mut counts = vec![0u64; bins];
    // Unit cell of size 1; precompute the 1-D trig factors.
    let mut sin_t = vec![0.0; n];
    let mut cos_t = vec![0.0; n];
    for i in 0..n {
        let u = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
        sin_t[i] = u.sin();
        cos_t[i] = u.cos();
    }
    for i in 0..n {
        for j in 0..n {
            let sx_cy = sin_t[i] * cos_t[j];
            for k in 0..n {
                let f = sx_cy + sin_t[j] * cos_t[k] + sin_t[k] * cos_t[i];
                let bin = ((f.abs() / bin_width) as usize).min(bins - 1);
                counts[bin] += 1;
            }
        }
    }
    let total = (n * n * n) as f64;
    let mut phi = Vec::with_capacity(TABLE_KNOTS);
    let mut acc = 0u64;
    phi.push(0.0);
    for c in counts {
        acc += c;
        phi.push(acc as f64 / total);
    }
    // Endpoints are exact by definition of the matrix solid.
    phi[0] = 0.0;
    *phi.last_mut().unwrap() = 1.0;
    phi
});

fn knot_spacing() -> f64 {
    THRESHOLD_MAX / (TABLE_KNOTS - 1) as f64
}

/// Volume fraction of the matrix-gyroid solid `{|F| <= t}` per unit cell.
/// Tabulated at 128³ unit-cell samples and 151 threshold knots, interpolated
/// linearly in between.
pub fn volume_fraction(t: f64) -> Result<f64, GeometryError> {
    if !(0.0..=THRESHOLD_MAX).contains(&t) {
        return Err(GeometryError::InvalidArgument(format!(
            "threshold {t} outside [0, {THRESHOLD_MAX}]"
        )));
    }
    let table = &PHI_TABLE;
    let h = knot_spacing();
    let pos = t / h;
    let idx = (pos as usize).min(TABLE_KNOTS - 2);
    let frac = pos - idx as f64;
    Ok(table[idx] + frac * (table[idx + 1] - table[idx]))
}

/// Invert [`volume_fraction`]: find the threshold whose matrix solid has the
/// requested volume fraction, to within 1e-3 in φ.
pub fn density_to_threshold(phi_target: f64) -> Result<f64, GeometryError> {
    if !(0.0..=1.0).contains(&phi_target) {
        return Err(GeometryError::InvalidArgument(format!(
            "volume fraction {phi_target} outside [0, 1]"
        )));
    }
    let table = &PHI_TABLE;
    if phi_target <= 0.0 {
        return Ok(0.0);
    }
    if phi_target >= 1.0 {
        return Ok(THRESHOLD_MAX);
    }
    // The table is monotone; locate the bracketing knots.
    let idx = match table.binary_search_by(|v| v.partial_cmp(&phi_target).unwrap()) {
        Ok(i) => return Ok(i as f64 * knot_spacing()),
        Err(i) => i - 1,
    };
    let (lo, hi) = (table[idx], table[idx + 1]);
    let frac = (phi_target - lo) / (hi - lo);
    Ok((idx as f64 + frac) * knot_spacing())
}
