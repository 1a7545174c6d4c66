//! `uhvforge fit`: emission CSV → two-segment or Arrhenius fit JSON.

use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use uhvforge_core::emission::{
    fit_arrhenius, fit_two_segment, EmissionSample, EmissionTrace, SignalUnits,
};

use crate::error::CliError;
use crate::util::write_bytes;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FitMode {
    TwoSegment,
    Arrhenius,
}

#[derive(Serialize)]
struct FitOutput<T: Serialize> {
    command: String,
    mode: String,
    input_digest_sha256: String,
    result: T,
}

const HEADER: &str = "time_min,temp_C,signal";

/// Parse the emission CSV, attributing problems to 1-based data row numbers.
fn parse_emission_csv(bytes: &[u8], path: &Path) -> Result<Vec<EmissionSample>, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| CliError::Validation(format!("{}: not UTF-8: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == HEADER => {}
        Some(h) => {
            return Err(CliError::Validation(format!(
                "{}: expected header '{HEADER}', got '{}'",
                path.display(),
                h.trim()
            )))
        }
        None => {
            return Err(CliError::Validation(format!(
                "{}: insufficient data: empty file",
                path.display()
            )))
        }
    }

    let mut samples = Vec::new();
    for (row, line) in lines.enumerate() {
        let row = row + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::Validation(format!(
                "row {row}: expected 3 fields, got {}",
                fields.len()
            )));
        }
        let parse = |name: &str, s: &str| -> Result<f64, CliError> {
            s.trim().parse::<f64>().map_err(|_| {
                CliError::Validation(format!("row {row}: malformed {name} '{}'", s.trim()))
            })
        };
        let sample = EmissionSample {
            time_min: parse("time_min", fields[0])?,
            temp_c: parse("temp_C", fields[1])?,
            signal: parse("signal", fields[2])?,
        };
        if sample.signal < 0.0 {
            return Err(CliError::Validation(format!(
                "row {row}: negative signal {}",
                sample.signal
            )));
        }
        samples.push(sample);
    }
    Ok(samples)
}

pub fn run(data_path: &Path, mode: FitMode, out_path: &Path) -> Result<(), CliError> {
    let bytes = fs::read(data_path).map_err(|e| CliError::io(data_path, e))?;
    let samples = parse_emission_csv(&bytes, data_path)?;
    let digest = hex::encode(Sha256::digest(&bytes));

    let json = match mode {
        FitMode::TwoSegment => {
            let trace = EmissionTrace { samples, units: SignalUnits::Torr };
            let fit = fit_two_segment(&trace)?;
            serde_json::to_string_pretty(&FitOutput {
                command: "fit".into(),
                mode: "two-segment".into(),
                input_digest_sha256: digest,
                result: fit,
            })
        }
        FitMode::Arrhenius => {
            let points: Vec<(f64, f64)> =
                samples.iter().map(|s| (s.temp_c + 273.15, s.signal)).collect();
            let fit = fit_arrhenius(&points)?;
            serde_json::to_string_pretty(&FitOutput {
                command: "fit".into(),
                mode: "arrhenius".into(),
                input_digest_sha256: digest,
                result: fit,
            })
        }
    }
    .expect("fit serialization");

    let mut out = json;
    out.push('\n');
    write_bytes(out_path, out.as_bytes())?;
    println!("{out}");
    Ok(())
}
