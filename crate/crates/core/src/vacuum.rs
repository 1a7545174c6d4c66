//! Lumped-parameter vacuum network simulation: molecular-flow conductances,
//! ion/NEG/turbo pump models with schedules and NEG capacity derating,
//! temperature-scheduled outgassing, an L-stable implicit integrator and a
//! gauge model with an under-range display floor.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::VacuumError;
use crate::model::OutgassingSpec;

/// Boltzmann constant in eV/K.
pub const K_BOLTZMANN_EV: f64 = 8.617333262e-5;
/// Molar mass of air, g/mol; the reference gas for conductance formulas.
pub const AIR_MOLAR_MASS: f64 = 28.97;

/// Piecewise-linear temperature schedule, °C over scenario time. Clamped to
/// the first/last point outside the defined range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperatureSchedule(pub Vec<(f64, f64)>);

impl TemperatureSchedule {
    pub fn constant(temp_c: f64) -> Self {
        TemperatureSchedule(vec![(0.0, temp_c)])
    }

    pub fn celsius_at(&self, t: f64) -> f64 {
        let pts = &self.0;
        match pts.len() {
            0 => 20.0,
            1 => pts[0].1,
            _ => {
                if t <= pts[0].0 {
                    return pts[0].1;
                }
                if t >= pts[pts.len() - 1].0 {
                    return pts[pts.len() - 1].1;
                }
                let i = pts.partition_point(|p| p.0 <= t) - 1;
                let (t0, v0) = pts[i];
                let (t1, v1) = pts[i + 1];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    pub fn kelvin_at(&self, t: f64) -> f64 {
        self.celsius_at(t) + 273.15
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VacuumNode {
    pub name: String,
    pub volume_l: f64,
    pub initial_pressure_mbar: f64,
    /// Node wall temperature, °C over time.
    pub temperature_schedule_c: TemperatureSchedule,
}

/// Duct between two nodes, either with explicit conductance or with tube
/// geometry resolved through the molecular-flow formula at the local
/// temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conduit {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter_cm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_cm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductance_ls: Option<f64>,
    #[serde(default = "default_molar_mass")]
    pub molar_mass_g_mol: f64,
}

fn default_molar_mass() -> f64 {
    AIR_MOLAR_MASS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PumpKind {
    Ion,
    Neg,
    Turbo,
}

/// Pump attached to a node. An empty schedule means always on; otherwise the
/// pump is off until its first event. NEG pumps derate linearly with sorbed
/// quantity: S(n) = S₀ · max(0, 1 − n/capacity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpSpec {
    pub name: String,
    pub kind: PumpKind,
    pub node: String,
    pub nominal_speed_ls: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity_mbar_l: Option<f64>,
    #[serde(default)]
    pub schedule: Vec<(f64, bool)>,
}

impl PumpSpec {
    pub fn enabled_at(&self, t: f64) -> bool {
        if self.schedule.is_empty() {
            return true;
        }
        let mut state = false;
        for &(time, on) in &self.schedule {
            if time <= t {
                state = on;
            } else {
                break;
            }
        }
        state
    }
}

/// Outgassing surface attached to a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutgasSource {
    pub node: String,
    pub area_cm2: f64,
    pub outgassing: OutgassingSpec,
    /// Pumped time already accumulated before the scenario starts, s.
    #[serde(default)]
    pub initial_pumped_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VacuumScenario {
    pub nodes: Vec<VacuumNode>,
    #[serde(default)]
    pub conduits: Vec<Conduit>,
    #[serde(default)]
    pub pumps: Vec<PumpSpec>,
    #[serde(default)]
    pub sources: Vec<OutgasSource>,
    pub duration_s: f64,
    pub output_dt_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge_floor_mbar: Option<f64>,
    /// Optional cap on the integrator step, for convergence studies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_step_s: Option<f64>,
}

/// Time series of node pressures. `displayed` applies the gauge floor while
/// retaining the raw values.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureTrace {
    pub node_names: Vec<String>,
    pub times_s: Vec<f64>,
    /// `pressures_mbar[sample][node]`.
    pub pressures_mbar: Vec<Vec<f64>>,
    pub gauge_floor_mbar: Option<f64>,
}

impl PressureTrace {
    /// Gauge-model view: each value clipped up to the under-range floor.
    pub fn displayed(&self, floor_mbar: f64) -> Vec<Vec<f64>> {
        self.pressures_mbar
            .iter()
            .map(|row| row.iter().map(|&p| p.max(floor_mbar)).collect())
            .collect()
    }
}

/// Clip a trace to a gauge floor, keeping the raw trace alongside.
pub fn apply_gauge(trace: &PressureTrace, floor_mbar: f64) -> (PressureTrace, Vec<Vec<f64>>) {
    let mut out = trace.clone();
    out.gauge_floor_mbar = Some(floor_mbar);
    let displayed = trace.displayed(floor_mbar);
    (out, displayed)
}

#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub trace: PressureTrace,
    /// Final sorbed quantity per NEG pump, mbar·L.
    pub neg_sorbed_mbar_l: Vec<(String, f64)>,
    pub warnings: Vec<String>,
}

/// Long-tube molecular-flow conductance with end correction, referenced to
/// air at 293 K: `C = 12.1 · d³/(l + 4d/3) · sqrt((T/293)·(28.97/M))` L/s
/// with d, l in cm.
pub fn tube_conductance(diameter_cm: f64, length_cm: f64, temp_k: f64, molar_mass: f64) -> f64 {
    debug_assert!(diameter_cm > 0.0 && length_cm > 0.0 && temp_k > 0.0 && molar_mass > 0.0);
    12.1 * diameter_cm.powi(3) / (length_cm + 4.0 * diameter_cm / 3.0)
        * ((temp_k / 293.0) * (AIR_MOLAR_MASS / molar_mass)).sqrt()
}

/// Effective pumping speed behind a chain of series conductances:
/// `1/S_eff = 1/S + Σ 1/Cᵢ`.
pub fn effective_speed(pump_speed_ls: f64, series_conductances_ls: &[f64]) -> f64 {
    let inv = 1.0 / pump_speed_ls
        + series_conductances_ls.iter().map(|c| 1.0 / c).sum::<f64>();
    1.0 / inv
}

/// Outgassing throughput of a surface: Arrhenius temperature activation times
/// a 1/t-like pump-down decay.
/// `Q = q_ref · A · exp[(Ea/k)(1/T_ref − 1/T)] · τ/(τ + pumped_time)`.
pub fn outgassing_rate(source: &OutgasSource, temp_k: f64, pumped_time_s: f64) -> f64 {
    let og = &source.outgassing;
    let arrhenius =
        ((og.activation_energy_ev / K_BOLTZMANN_EV) * (1.0 / og.t_ref_k - 1.0 / temp_k)).exp();
    let decay = og.bake_decay_tau_s / (og.bake_decay_tau_s + pumped_time_s);
    og.q_ref_mbar_l_s_cm2 * source.area_cm2 * arrhenius * decay
}

struct Network<'a> {
    scenario: &'a VacuumScenario,
    node_index: std::collections::HashMap<String, usize>,
    neg_sorbed: Vec<f64>,
}

impl<'a> Network<'a> {
    fn new(scenario: &'a VacuumScenario) -> Result<Self, VacuumError> {
        if scenario.nodes.is_empty() {
            return Err(VacuumError::InvalidScenario("scenario needs at least one node".into()));
        }
        let mut node_index = std::collections::HashMap::new();
        for (i, node) in scenario.nodes.iter().enumerate() {
            if node.volume_l <= 0.0 {
                return Err(VacuumError::InvalidScenario(format!(
                    "node '{}' volume must be > 0",
                    node.name
                )));
            }
            if node.initial_pressure_mbar <= 0.0 {
                return Err(VacuumError::InvalidScenario(format!(
                    "node '{}' initial pressure must be > 0",
                    node.name
                )));
            }
            if node_index.insert(node.name.clone(), i).is_some() {
                return Err(VacuumError::InvalidScenario(format!(
                    "duplicate node name '{}'",
                    node.name
                )));
            }
        }
        let resolve = |name: &str| -> Result<usize, VacuumError> {
            node_index
                .get(name)
                .copied()
                .ok_or_else(|| VacuumError::InvalidScenario(format!("unknown node '{name}'")))
        };
        for c in &scenario.conduits {
            resolve(&c.from)?;
            resolve(&c.to)?;
            match (c.conductance_ls, c.diameter_cm, c.length_cm) {
                (Some(v), _, _) if v > 0.0 => {}
                (None, Some(d), Some(l)) if d > 0.0 && l > 0.0 => {}
                _ => {
                    return Err(VacuumError::InvalidScenario(format!(
                        "conduit {}-{} needs a positive conductance or tube geometry",
                        c.from, c.to
                    )))
                }
            }
        }
        for p in &scenario.pumps {
            resolve(&p.node)?;
            if p.nominal_speed_ls < 0.0 {
                return Err(VacuumError::InvalidScenario(format!(
                    "pump '{}' speed must be >= 0",
                    p.name
                )));
            }
            if p.kind == PumpKind::Neg && !matches!(p.capacity_mbar_l, Some(c) if c > 0.0) {
                return Err(VacuumError::InvalidScenario(format!(
                    "NEG pump '{}' needs a positive capacity",
                    p.name
                )));
            }
        }
        for s in &scenario.sources {
            resolve(&s.node)?;
            if s.area_cm2 <= 0.0 {
                return Err(VacuumError::InvalidScenario(format!(
                    "source at node '{}' area must be > 0",
                    s.node
                )));
            }
        }
        let neg_sorbed = vec![0.0; scenario.pumps.len()];
        Ok(Network { scenario, node_index, neg_sorbed })
    }

    fn index(&self, name: &str) -> usize {
        self.node_index[name]
    }

    fn pump_speed(&self, pump_idx: usize, t: f64) -> f64 {
        let pump = &self.scenario.pumps[pump_idx];
        if !pump.enabled_at(t) {
            return 0.0;
        }
        match pump.kind {
            PumpKind::Neg => {
                let cap = pump.capacity_mbar_l.unwrap();
                pump.nominal_speed_ls * (1.0 - self.neg_sorbed[pump_idx] / cap).max(0.0)
            }
            _ => pump.nominal_speed_ls,
        }
    }

    /// Assemble dP/dt = M·P + r at time `t` with the current pump state.
    fn assemble(&self, t: f64) -> (DMatrix<f64>, DVector<f64>) {
        let n = self.scenario.nodes.len();
        let mut m = DMatrix::zeros(n, n);
        let mut r = DVector::zeros(n);

        for c in &self.scenario.conduits {
            let i = self.index(&c.from);
            let j = self.index(&c.to);
            let cond = match c.conductance_ls {
                Some(v) => v,
                None => {
                    let temp = (self.scenario.nodes[i].temperature_schedule_c.kelvin_at(t)
                        + self.scenario.nodes[j].temperature_schedule_c.kelvin_at(t))
                        / 2.0;
                    tube_conductance(c.diameter_cm.unwrap(), c.length_cm.unwrap(), temp, c.molar_mass_g_mol)
                }
            };
            m[(i, i)] -= cond;
            m[(i, j)] += cond;
            m[(j, j)] -= cond;
            m[(j, i)] += cond;
        }
        for (pi, pump) in self.scenario.pumps.iter().enumerate() {
            let i = self.index(&pump.node);
            m[(i, i)] -= self.pump_speed(pi, t);
        }
        for s in &self.scenario.sources {
            let i = self.index(&s.node);
            let temp = self.scenario.nodes[i].temperature_schedule_c.kelvin_at(t);
            r[i] += outgassing_rate(s, temp, s.initial_pumped_time_s + t);
        }
        for i in 0..n {
            let v = self.scenario.nodes[i].volume_l;
            for j in 0..n {
                m[(i, j)] /= v;
            }
            r[i] /= v;
        }
        (m, r)
    }

    /// One backward-Euler step: solve (I − dt·M(t+dt))·P' = P + dt·r(t+dt).
    fn backward_euler(&self, p: &DVector<f64>, t: f64, dt: f64) -> Result<DVector<f64>, VacuumError> {
        let n = p.len();
        let (m, r) = self.assemble(t + dt);
        let lhs = DMatrix::identity(n, n) - m * dt;
        let rhs = p + r * dt;
        lhs.lu()
            .solve(&rhs)
            .ok_or_else(|| VacuumError::Numerical(format!("singular system at t={t}")))
    }

    /// Advance from `t` to `t_end` with adaptive step-doubling error control,
    /// updating NEG sorbed inventories along the way.
    fn advance(
        &mut self,
        p: &mut DVector<f64>,
        t: &mut f64,
        t_end: f64,
        dt_hint: &mut f64,
    ) -> Result<(), VacuumError> {
        const REL_TOL: f64 = 1e-5;
        const ABS_FLOOR: f64 = 1e-16;
        let max_step = self.scenario.max_step_s.unwrap_or(f64::INFINITY);

        while *t < t_end - 1e-12 {
            let mut dt = dt_hint.min(t_end - *t).min(max_step);
            loop {
                let full = self.backward_euler(p, *t, dt)?;
                let half = self.backward_euler(p, *t, dt / 2.0)?;
                let two_half = self.backward_euler(&half, *t + dt / 2.0, dt / 2.0)?;
                let err = (0..p.len())
                    .map(|i| (full[i] - two_half[i]).abs() / (two_half[i].abs() + ABS_FLOOR))
                    .fold(0.0f64, f64::max);
                if err <= REL_TOL || dt <= 1e-9 {
                    // Book-keep NEG sorption with the accepted step.
                    for (pi, pump) in self.scenario.pumps.iter().enumerate() {
                        if pump.kind == PumpKind::Neg {
                            let i = self.index(&pump.node);
                            let speed = self.pump_speed(pi, *t + dt);
                            let p_avg = (p[i] + two_half[i]) / 2.0;
                            self.neg_sorbed[pi] += speed * p_avg * dt;
                        }
                    }
                    *p = two_half;
                    for i in 0..p.len() {
                        if !(p[i] > 0.0) {
                            return Err(VacuumError::Numerical(format!(
                                "nonpositive pressure at node {i}, t={:.3}",
                                *t + dt
                            )));
                        }
                    }
                    *t += dt;
                    *dt_hint = if err < REL_TOL / 4.0 { dt * 2.0 } else { dt };
                    break;
                }
                dt /= 2.0;
            }
        }
        Ok(())
    }
}

/// Times where pump schedules switch, within the scenario duration.
fn event_times(scenario: &VacuumScenario) -> Vec<f64> {
    let mut times: Vec<f64> = scenario
        .pumps
        .iter()
        .flat_map(|p| p.schedule.iter().map(|&(t, _)| t))
        .filter(|&t| t > 0.0 && t < scenario.duration_s)
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();
    times
}

/// Integrate the scenario and return the pressure trace for every node.
pub fn simulate(scenario: &VacuumScenario) -> Result<SimOutcome, VacuumError> {
    if scenario.duration_s <= 0.0 || scenario.output_dt_s <= 0.0 {
        return Err(VacuumError::InvalidScenario("duration and output_dt must be > 0".into()));
    }
    let mut network = Network::new(scenario)?;
    let mut warnings = Vec::new();

    // Orphan check: a node with no conduit, no pump and no source just holds
    // its initial pressure; flag it.
    for node in &scenario.nodes {
        let touched = scenario.conduits.iter().any(|c| c.from == node.name || c.to == node.name)
            || scenario.pumps.iter().any(|p| p.node == node.name)
            || scenario.sources.iter().any(|s| s.node == node.name);
        if !touched {
            warnings.push(format!(
                "node '{}' is disconnected with no pump and no source",
                node.name
            ));
        }
    }

    // Output grid plus schedule events as integrator breakpoints.
    let mut sample_times = Vec::new();
    if scenario.output_dt_s > scenario.duration_s {
        warnings.push(format!(
            "output_dt {} s exceeds duration {} s; emitting a single sample",
            scenario.output_dt_s, scenario.duration_s
        ));
        sample_times.push(scenario.duration_s);
    } else {
        let mut t = 0.0;
        while t < scenario.duration_s - 1e-9 {
            sample_times.push(t);
            t += scenario.output_dt_s;
        }
        sample_times.push(scenario.duration_s);
    }

    let events = event_times(scenario);
    let mut breakpoints: Vec<f64> = sample_times.iter().copied().chain(events.iter().copied()).collect();
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

    let n = scenario.nodes.len();
    let mut p = DVector::from_iterator(n, scenario.nodes.iter().map(|nd| nd.initial_pressure_mbar));
    let mut t = 0.0;
    let mut dt_hint = (scenario.output_dt_s / 16.0).min(1.0).max(1e-6);

    let mut pressures = Vec::with_capacity(sample_times.len());
    let mut sample_iter = sample_times.iter().peekable();
    if let Some(&&first) = sample_iter.peek() {
        if first == 0.0 {
            pressures.push(p.iter().copied().collect::<Vec<f64>>());
            sample_iter.next();
        }
    }
    for &bp in breakpoints.iter().filter(|&&bp| bp > 0.0) {
        network.advance(&mut p, &mut t, bp, &mut dt_hint)?;
        // Reset the step after an event so schedule switches are resolved.
        if events.iter().any(|&e| (e - bp).abs() < 1e-9) {
            dt_hint = dt_hint.min(1.0).min(scenario.output_dt_s / 16.0).max(1e-6);
        }
        if let Some(&&next_sample) = sample_iter.peek() {
            if (next_sample - bp).abs() < 1e-9 {
                pressures.push(p.iter().copied().collect::<Vec<f64>>());
                sample_iter.next();
            }
        }
    }

    let trace = PressureTrace {
        node_names: scenario.nodes.iter().map(|nd| nd.name.clone()).collect(),
        times_s: sample_times,
        pressures_mbar: pressures,
        gauge_floor_mbar: scenario.gauge_floor_mbar,
    };
    let neg_sorbed_mbar_l = scenario
        .pumps
        .iter()
        .enumerate()
        .filter(|(_, pump)| pump.kind == PumpKind::Neg)
        .map(|(i, pump)| (pump.name.clone(), network.neg_sorbed[i]))
        .collect();
    Ok(SimOutcome { trace, neg_sorbed_mbar_l, warnings })
}

/// Steady-state pressures with schedules frozen at time `t`: solves the
/// linear balance Σ C(P_j − P_i) + Q_i − S_i·P_i = 0.
pub fn equilibrium_pressure(scenario: &VacuumScenario, t: f64) -> Result<Vec<f64>, VacuumError> {
    let network = Network::new(scenario)?;

    // Every node must reach an active pump through the conduit graph.
    let n = scenario.nodes.len();
    let mut reachable = vec![false; n];
    let mut queue: Vec<usize> = Vec::new();
    for (pi, pump) in scenario.pumps.iter().enumerate() {
        if network.pump_speed(pi, t) > 0.0 {
            let i = network.index(&pump.node);
            if !reachable[i] {
                reachable[i] = true;
                queue.push(i);
            }
        }
    }
    while let Some(i) = queue.pop() {
        for c in &scenario.conduits {
            let a = network.index(&c.from);
            let b = network.index(&c.to);
            for (x, y) in [(a, b), (b, a)] {
                if x == i && !reachable[y] {
                    reachable[y] = true;
                    queue.push(y);
                }
            }
        }
    }
    if let Some(i) = reachable.iter().position(|&r| !r) {
        return Err(VacuumError::UnboundedPressure(scenario.nodes[i].name.clone()));
    }

    let (m, r) = network.assemble(t);
    // m is already volume-scaled; steady state solves M·P = −r.
    let solution = m
        .lu()
        .solve(&(-r))
        .ok_or_else(|| VacuumError::Numerical("singular steady-state system".into()))?;
    Ok(solution.iter().copied().collect())
}
