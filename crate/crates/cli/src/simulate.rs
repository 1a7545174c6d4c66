//! `uhvforge simulate`: vacuum scenario → pressure trace CSV (raw and
//! gauge-displayed columns) plus a summary report.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use uhvforge_core::vacuum::{simulate, VacuumScenario};

use crate::error::CliError;
use crate::report::RunReport;
use crate::util::{parse_json, write_bytes};

pub fn run(scenario_path: &Path, out_path: &Path) -> Result<(), CliError> {
    let bytes = fs::read(scenario_path).map_err(|e| CliError::io(scenario_path, e))?;
    let scenario: VacuumScenario = parse_json(&bytes, scenario_path)?;
    let outcome = simulate(&scenario)?;
    let trace = &outcome.trace;

    let floor = scenario.gauge_floor_mbar;
    let displayed = floor.map(|f| trace.displayed(f));

    let mut csv = String::from("time_s,node,pressure_mbar,displayed_mbar\n");
    for (si, &t) in trace.times_s.iter().enumerate() {
        for (ni, name) in trace.node_names.iter().enumerate() {
            let raw = trace.pressures_mbar[si][ni];
            let shown = displayed.as_ref().map_or(raw, |d| d[si][ni]);
            writeln!(csv, "{t},{name},{raw},{shown}").expect("string write");
        }
    }
    write_bytes(out_path, csv.as_bytes())?;

    let mut report = RunReport::new("simulate", &bytes);
    report.warnings = outcome.warnings.clone();
    let last = trace.pressures_mbar.last().expect("at least one sample");
    for (ni, name) in trace.node_names.iter().enumerate() {
        report.metric(&format!("final_pressure_{name}"), last[ni], "mbar");
    }
    for (pump, sorbed) in &outcome.neg_sorbed_mbar_l {
        report.metric(&format!("neg_sorbed_{pump}"), *sorbed, "mbar*L");
    }

    // Recovery summaries: minutes from each pump-on event until the pump's
    // node reads at the gauge floor.
    if let (Some(floor), Some(shown)) = (floor, displayed.as_ref()) {
        for pump in &scenario.pumps {
            let Some(ni) = trace.node_names.iter().position(|n| n == &pump.node) else {
                continue;
            };
            for &(event_t, on) in &pump.schedule {
                if !on {
                    continue;
                }
                let reached = trace
                    .times_s
                    .iter()
                    .enumerate()
                    .find(|&(si, &t)| t >= event_t && shown[si][ni] <= floor)
                    .map(|(si, _)| trace.times_s[si]);
                if let Some(t_floor) = reached {
                    report.metric(
                        &format!("recovery_to_floor_after_{}", pump.name),
                        (t_floor - event_t) / 60.0,
                        "min",
                    );
                }
            }
        }
    }

    let report_path = out_path.with_extension("report.json");
    report.outputs =
        vec![out_path.display().to_string(), report_path.display().to_string()];
    write_bytes(&report_path, report.to_json().as_bytes())?;
    println!("{}", report.to_json());
    Ok(())
}
