//! Hot-path benchmarks: implicit field evaluation, voxelization plus surface
//! extraction, vacuum integration and the two-segment fit.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nalgebra::Point3;

use uhvforge_core::emission::{fit_two_segment, EmissionSample, EmissionTrace, SignalUnits};
use uhvforge_core::lattice::{build_density_field, extract_mesh, gyroid_field, voxelize};
use uhvforge_core::model::OutgassingSpec;
use uhvforge_core::presets::example_chamber;
use uhvforge_core::vacuum::{
    simulate, OutgasSource, PumpKind, PumpSpec, TemperatureSchedule, VacuumNode, VacuumScenario,
};

fn bench_gyroid_field(c: &mut Criterion) {
    c.bench_function("gyroid_field_1k_points", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..1000 {
                let t = i as f64 * 0.013;
                let p = Point3::new(t, 1.7 * t, 0.3 * t);
                acc += gyroid_field(black_box(&p), 10.0);
            }
            black_box(acc)
        })
    });
}

fn bench_mesh_pipeline(c: &mut Criterion) {
    let spec = example_chamber();
    let field = build_density_field(&spec).unwrap();
    c.bench_function("voxelize_extract_1.25mm", |b| {
        b.iter(|| {
            let grid = voxelize(black_box(&spec), &field, 1.25).unwrap();
            black_box(extract_mesh(&grid).unwrap().triangles.len())
        })
    });
}

fn bench_simulate(c: &mut Criterion) {
    let scenario = VacuumScenario {
        nodes: vec![VacuumNode {
            name: "chamber".into(),
            volume_l: 1.0,
            initial_pressure_mbar: 1e-6,
            temperature_schedule_c: TemperatureSchedule::constant(20.0),
        }],
        conduits: vec![],
        pumps: vec![PumpSpec {
            name: "ion".into(),
            kind: PumpKind::Ion,
            node: "chamber".into(),
            nominal_speed_ls: 50.0,
            capacity_mbar_l: None,
            schedule: vec![],
        }],
        sources: vec![OutgasSource {
            node: "chamber".into(),
            area_cm2: 100.0,
            outgassing: OutgassingSpec {
                q_ref_mbar_l_s_cm2: 1e-11,
                t_ref_k: 293.0,
                activation_energy_ev: 0.8,
                bake_decay_tau_s: 1e6,
            },
            initial_pumped_time_s: 0.0,
        }],
        duration_s: 3600.0,
        output_dt_s: 60.0,
        gauge_floor_mbar: Some(1e-10),
        max_step_s: None,
    };
    c.bench_function("simulate_1h_pumpdown", |b| {
        b.iter(|| black_box(simulate(black_box(&scenario)).unwrap().trace.times_s.len()))
    });
}

fn bench_two_segment_fit(c: &mut Criterion) {
    let samples: Vec<EmissionSample> = (0..=750)
        .map(|i| {
            let t = i as f64 * 0.2;
            let ln_p = (3e-8f64).ln() - 5.1e-3 * t.min(30.1) - 9.1e-4 * (t - 30.1).max(0.0);
            EmissionSample { time_min: t, temp_c: 420.0, signal: ln_p.exp() }
        })
        .collect();
    let trace = EmissionTrace { samples, units: SignalUnits::Torr };
    c.bench_function("two_segment_fit_751_samples", |b| {
        b.iter(|| black_box(fit_two_segment(black_box(&trace)).unwrap().breakpoint_min))
    });
}

criterion_group!(
    benches,
    bench_gyroid_field,
    bench_mesh_pipeline,
    bench_simulate,
    bench_two_segment_fit
);
criterion_main!(benches);
