use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use optocool::langevin::{adiabatic_validity_check, build_sde, simulate_ensemble, EnsembleConfig, Form};
use optocool::spectral::{log_correction_probe, SpectralConfig};
use optocool::{DimensionlessParams, Execution, FeedbackScheme, SystemParams};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn system(quality: f64, theta: f64, zeta: f64) -> SystemParams {
    SystemParams::dimensionless(DimensionlessParams {
        quality,
        theta,
        zeta,
        ..Default::default()
    })
    .unwrap()
}

fn ensemble(c: &mut Criterion) {
    let sde = build_sde(
        &system(100.0, 10.0, 10.0),
        &FeedbackScheme::MomentumFeedback { gain: 10.0 },
        Form::Adiabatic,
    )
    .unwrap();
    let mut group = c.benchmark_group("ensemble");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = EnsembleConfig {
            exec,
            ..EnsembleConfig::new(sde.max_dt(), 20_000, 64, 1)
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| simulate_ensemble(&sde, cfg).unwrap())
        });
    }
    group.finish();
}

fn cutoff_probe(c: &mut Criterion) {
    let sys = system(1e3, 1e3, 1.0);
    let scheme = FeedbackScheme::ColdDamping { gain: 10.0 };
    let ladder = [1e1, 3e1, 1e2, 3e2, 1e3, 3e3, 1e4];
    let cfg = SpectralConfig::default();
    let mut group = c.benchmark_group("cutoff_probe");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| log_correction_probe(&sys, &scheme, &ladder, exec, &cfg).unwrap())
        });
    }
    group.finish();
}

fn adiabatic_ladder(c: &mut Criterion) {
    let sys = system(1e3, 10.0, 10.0);
    let scheme = FeedbackScheme::ColdDamping { gain: 10.0 };
    let ladder: Vec<f64> = (0..16).map(|i| 10f64.powf(1.0 + 0.25 * i as f64)).collect();
    let mut group = c.benchmark_group("adiabatic_ladder");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| adiabatic_validity_check(&sys, &scheme, &ladder, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ensemble, cutoff_probe, adiabatic_ladder);
criterion_main!(benches);
