use std::hint::black_box;
use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ftqc_core::engine::{
    evaluate_all, EstimateInputs, ExecMode, FeatureFlags, PresetStore, ResolvedScenario,
};

fn scenarios() -> Vec<ResolvedScenario> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/scenarios");
    let store = PresetStore::builtin();
    let mut out: Vec<ResolvedScenario> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| ResolvedScenario::from_file(&e.unwrap().path(), &store).unwrap())
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

fn grid(c: &mut Criterion) {
    let scenarios = scenarios();
    let epsilons: Vec<_> = (1..=8).map(|k| k as f64 * 2.5e-4).collect();
    let specs: Vec<Vec<_>> = scenarios
        .iter()
        .map(|s| {
            epsilons
                .iter()
                .map(|&e| {
                    let mut spec = s.spec.clone();
                    spec.epsilon_target = e;
                    spec
                })
                .collect()
        })
        .collect();
    let cells: Vec<EstimateInputs<'_>> = scenarios
        .iter()
        .zip(&specs)
        .flat_map(|(s, specs)| {
            specs.iter().flat_map(move |spec| {
                FeatureFlags::all_combinations()
                    .into_iter()
                    .map(move |flags| EstimateInputs {
                        spec,
                        ..s.inputs_with(flags, &s.calibration)
                    })
            })
        })
        .collect();

    let mut group = c.benchmark_group("estimate_grid");
    for (name, mode) in [
        ("sequential", ExecMode::Sequential),
        ("parallel", ExecMode::Parallel),
    ] {
        group.bench_with_input(BenchmarkId::new(name, cells.len()), &cells, |b, cells| {
            b.iter(|| evaluate_all(black_box(cells), mode))
        });
    }
    group.finish();
}

criterion_group!(benches, grid);
criterion_main!(benches);
