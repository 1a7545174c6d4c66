//! Mass-spectrometric emission analysis and surface metrology: reference
//! calibration of count traces, continuous two-segment log-linear fitting,
//! Arrhenius activation-energy fitting and areal RMS roughness.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::EmissionError;
use crate::vacuum::K_BOLTZMANN_EV;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalUnits {
    Counts,
    Torr,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmissionSample {
    pub time_min: f64,
    pub temp_c: f64,
    pub signal: f64,
}

/// Time-resolved emission signal at the spectrometer, either raw counts or a
/// calibrated partial pressure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionTrace {
    pub samples: Vec<EmissionSample>,
    pub units: SignalUnits,
}

impl EmissionTrace {
    pub fn validate(&self) -> Result<(), EmissionError> {
        for pair in self.samples.windows(2) {
            if pair[1].time_min <= pair[0].time_min {
                return Err(EmissionError::InvalidArgument(format!(
                    "times must be strictly increasing (at t={})",
                    pair[1].time_min
                )));
            }
        }
        if let Some(s) = self.samples.iter().find(|s| s.signal < 0.0) {
            return Err(EmissionError::Domain(format!(
                "negative signal {} at t={}",
                s.signal, s.time_min
            )));
        }
        Ok(())
    }
}

/// Convert a counts trace to partial pressure using a reference measurement:
/// `pressure_i = signal_i · reference_pressure / reference_counts`.
pub fn normalize_to_reference(
    trace: &EmissionTrace,
    reference_counts: f64,
    reference_pressure_torr: f64,
) -> Result<EmissionTrace, EmissionError> {
    if reference_counts <= 0.0 {
        return Err(EmissionError::InvalidArgument(format!(
            "reference counts must be > 0 (got {reference_counts})"
        )));
    }
    if reference_pressure_torr <= 0.0 {
        return Err(EmissionError::InvalidArgument(format!(
            "reference pressure must be > 0 (got {reference_pressure_torr})"
        )));
    }
    trace.validate()?;
    let scale = reference_pressure_torr / reference_counts;
    Ok(EmissionTrace {
        samples: trace
            .samples
            .iter()
            .map(|s| EmissionSample { signal: s.signal * scale, ..*s })
            .collect(),
        units: SignalUnits::Torr,
    })
}

/// Continuous two-segment fit of ln(pressure) vs time:
/// early gradient `g1`, late gradient `g2`, joined at `breakpoint_min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSegmentFit {
    pub breakpoint_min: f64,
    /// Early-time gradient, ln(Torr)/min.
    pub g1: f64,
    /// Late-time gradient, ln(Torr)/min.
    pub g2: f64,
    /// ln-intercept of the early segment at t = 0.
    pub intercept1: f64,
    /// ln-intercept the late segment extrapolates to at t = 0.
    pub intercept2: f64,
    pub rms_segment1: f64,
    pub rms_segment2: f64,
    /// Set when the two gradients are indistinguishable (single-slope data).
    pub degenerate_breakpoint: bool,
}

/// Least-squares continuous piecewise-linear fit of ln(signal) vs time with
/// one breakpoint, chosen by exhaustive scan over sample midpoints.
pub fn fit_two_segment(trace: &EmissionTrace) -> Result<TwoSegmentFit, EmissionError> {
    let n = trace.samples.len();
    if n < 8 {
        return Err(EmissionError::InsufficientData(format!(
            "two-segment fit needs >= 8 samples (got {n})"
        )));
    }
    trace.validate()?;
    if let Some(s) = trace.samples.iter().find(|s| s.signal <= 0.0) {
        return Err(EmissionError::Domain(format!(
            "non-positive pressure {} at t={}; log fit undefined",
            s.signal, s.time_min
        )));
    }

    let times: Vec<f64> = trace.samples.iter().map(|s| s.time_min).collect();
    let logs: Vec<f64> = trace.samples.iter().map(|s| s.signal.ln()).collect();

    // Model: y = a + g1·min(t,τ) + g2·max(t−τ, 0), continuous at τ.
    let solve_at = |tau: f64| -> Option<(f64, f64, f64, f64)> {
        let mut ata = Matrix3::<f64>::zeros();
        let mut atb = Vector3::<f64>::zeros();
        for (&t, &y) in times.iter().zip(&logs) {
            let row = Vector3::new(1.0, t.min(tau), (t - tau).max(0.0));
            ata += row * row.transpose();
            atb += row * y;
        }
        let coeffs = ata.lu().solve(&atb)?;
        let ssr: f64 = times
            .iter()
            .zip(&logs)
            .map(|(&t, &y)| {
                let fit = coeffs[0] + coeffs[1] * t.min(tau) + coeffs[2] * (t - tau).max(0.0);
                (y - fit).powi(2)
            })
            .sum();
        Some((coeffs[0], coeffs[1], coeffs[2], ssr))
    };

    // Candidate breakpoints: midpoints keeping at least two samples per side.
    let mut best: Option<(f64, f64, f64, f64, f64)> = None;
    for i in 1..n - 2 {
        let tau = (times[i] + times[i + 1]) / 2.0;
        if let Some((a, g1, g2, ssr)) = solve_at(tau) {
            if best.map_or(true, |b| ssr < b.4) {
                best = Some((tau, a, g1, g2, ssr));
            }
        }
    }
    let (tau, a, g1, g2, _) =
        best.ok_or_else(|| EmissionError::RankDeficient("all candidate fits singular".into()))?;

    let mut ssr1 = 0.0;
    let mut n1 = 0usize;
    let mut ssr2 = 0.0;
    let mut n2 = 0usize;
    for (&t, &y) in times.iter().zip(&logs) {
        let fit = a + g1 * t.min(tau) + g2 * (t - tau).max(0.0);
        if t <= tau {
            ssr1 += (y - fit).powi(2);
            n1 += 1;
        } else {
            ssr2 += (y - fit).powi(2);
            n2 += 1;
        }
    }

    let scale = g1.abs().max(g2.abs());
    let degenerate = scale == 0.0 || (g1 - g2).abs() <= 1e-6 * scale;
    Ok(TwoSegmentFit {
        breakpoint_min: tau,
        g1,
        g2,
        intercept1: a,
        intercept2: a + (g1 - g2) * tau,
        rms_segment1: if n1 > 0 { (ssr1 / n1 as f64).sqrt() } else { 0.0 },
        rms_segment2: if n2 > 0 { (ssr2 / n2 as f64).sqrt() } else { 0.0 },
        degenerate_breakpoint: degenerate,
    })
}

/// Arrhenius fit over (temperature, pressure) points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrheniusResult {
    pub activation_energy_ev: f64,
    /// Standard error of the activation energy, eV.
    pub activation_energy_stderr_ev: f64,
    /// Pre-exponential factor, Torr.
    pub prefactor_torr: f64,
    pub fit_rms: f64,
    pub n_points: usize,
}

/// Linear least squares of ln(P) against 1/T; the activation energy is the
/// negated slope times the Boltzmann constant.
pub fn fit_arrhenius(points: &[(f64, f64)]) -> Result<ArrheniusResult, EmissionError> {
    if points.len() < 3 {
        return Err(EmissionError::InsufficientData(format!(
            "Arrhenius fit needs >= 3 points (got {})",
            points.len()
        )));
    }
    let mut temps: Vec<f64> = points.iter().map(|p| p.0).collect();
    temps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    temps.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if temps.len() < 3 {
        return Err(EmissionError::RankDeficient(format!(
            "only {} distinct temperatures; need >= 3",
            temps.len()
        )));
    }
    for &(t, p) in points {
        if t <= 0.0 {
            return Err(EmissionError::Domain(format!("temperature {t} K must be > 0")));
        }
        if p <= 0.0 {
            return Err(EmissionError::Domain(format!("pressure {p} must be > 0")));
        }
    }

    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| 1.0 / p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;

    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let dof = (points.len() - 2).max(1) as f64;
    let slope_stderr = (ssr / dof / sxx).sqrt();

    Ok(ArrheniusResult {
        activation_energy_ev: -slope * K_BOLTZMANN_EV,
        activation_energy_stderr_ev: slope_stderr * K_BOLTZMANN_EV,
        prefactor_torr: intercept.exp(),
        fit_rms: (ssr / n).sqrt(),
        n_points: points.len(),
    })
}

/// Surface height map on a regular lateral grid, heights in µm.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightMap {
    /// `heights_um[row][col]`, all rows the same length.
    pub heights_um: Vec<Vec<f64>>,
    pub pitch_um: f64,
}

impl HeightMap {
    pub fn validate(&self) -> Result<(), EmissionError> {
        let rows = self.heights_um.len();
        let cols = self.heights_um.first().map_or(0, |r| r.len());
        if rows < 2 || cols < 2 {
            return Err(EmissionError::InvalidArgument(format!(
                "height map must be at least 2x2 (got {rows}x{cols})"
            )));
        }
        for row in &self.heights_um {
            if row.len() != cols {
                return Err(EmissionError::InvalidArgument("ragged height map".into()));
            }
            if row.iter().any(|h| !h.is_finite()) {
                return Err(EmissionError::Domain("non-finite height value".into()));
            }
        }
        Ok(())
    }
}

/// Areal RMS roughness: `Sq = sqrt(mean((z − mean(z))²))`, µm.
pub fn surface_sq(map: &HeightMap) -> Result<f64, EmissionError> {
    map.validate()?;
    let count = map.heights_um.iter().map(|r| r.len()).sum::<usize>() as f64;
    let mean = map.heights_um.iter().flatten().sum::<f64>() / count;
    let var = map
        .heights_um
        .iter()
        .flatten()
        .map(|z| (z - mean).powi(2))
        .sum::<f64>()
        / count;
    Ok(var.sqrt())
}

/// Report annotation for emission hysteresis: compares the first and last
/// signal recorded near a matched temperature, returning (early, late,
/// late/early ratio). `None` when fewer than two samples match.
pub fn hysteresis_at_temperature(
    trace: &EmissionTrace,
    temp_c: f64,
    tol_c: f64,
) -> Option<(f64, f64, f64)> {
    let matched: Vec<&EmissionSample> = trace
        .samples
        .iter()
        .filter(|s| (s.temp_c - temp_c).abs() <= tol_c)
        .collect();
    let first = matched.first()?;
    let last = matched.last()?;
    if std::ptr::eq(*first, *last) || first.signal <= 0.0 {
        return None;
    }
    Some((first.signal, last.signal, last.signal / first.signal))
}
