use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ck_core::energetics;
use ck_core::ensembles::LiouvilleGaussian;
use ck_core::oracles::crank_nicolson::{self, GridSpec, InitialWave};
use ck_core::oracles::{monte_carlo, rk4};
use ck_core::scenario::{Preset, Scenario};

fn bench_energy_series(c: &mut Criterion) {
    let grid: Vec<f64> = (0..1001).map(|i| 0.01 * i as f64).collect();
    let mut group = c.benchmark_group("energy_series_1001");
    for preset in [Preset::UnderdampedOscillator, Preset::OverdampedOscillator] {
        let scn = Scenario::preset(preset);
        group.bench_with_input(BenchmarkId::from_parameter(preset.name()), &scn, |b, s| {
            b.iter(|| energetics::energy_series(s, &grid).unwrap())
        });
    }
    group.finish();
}

fn bench_rk4(c: &mut Criterion) {
    c.bench_function("rk4_10k_steps", |b| {
        b.iter(|| rk4::integrate(1.0, 10.0, 0.0, std::f64::consts::SQRT_2, 1.0, 1e-4).unwrap())
    });
}

fn bench_cn_steps(c: &mut Criterion) {
    let scn = Scenario::preset(Preset::UnderdampedOscillator);
    let p = scn.phys();
    let i = scn.init();
    let grid = GridSpec {
        x_min: -0.55,
        x_max: 0.55,
        n_points: 4096,
        dt: 1e-5,
        boundary_pad: 16,
    };
    c.bench_function("crank_nicolson_1k_steps_4096", |b| {
        b.iter(|| {
            crank_nicolson::propagate(
                p.lambda,
                p.omega,
                p.m0,
                p.hbar_eff,
                InitialWave::Gaussian {
                    x0: i.x0,
                    p0: i.p0,
                    var_x: i.delta_x0 * i.delta_x0,
                },
                &grid,
                &[0.01],
            )
            .unwrap()
        })
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let scn = Scenario::preset(Preset::OverdampedOscillator);
    let ens = LiouvilleGaussian::matched(&scn, false).unwrap();
    c.bench_function("monte_carlo_10k_samples", |b| {
        b.iter(|| monte_carlo::liouville_velocity_moments(&ens, &scn, &[1.0], 10_000, 7).unwrap())
    });
}

criterion_group!(
    benches,
    bench_energy_series,
    bench_rk4,
    bench_cn_steps,
    bench_monte_carlo
);
criterion_main!(benches);
