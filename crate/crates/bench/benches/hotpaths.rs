//! Microbenchmarks for the per-TTI hot paths: Clarke correlation, MMSE
//! layer SINR, exhaustive CSI search, fading evolution and a full small
//! run.

use criterion::{criterion_group, criterion_main, Criterion};
use mucellsim_core::fading::{bessel_j0, draw_rayleigh, FadingState};
use mucellsim_core::mimo::{
    per_layer_sinr, AntennaConfig, CsiContext, McsTable,
};
use mucellsim_core::{run, LayoutConfig, SchedulerKind, SimConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn bench_bessel(c: &mut Criterion) {
    c.bench_function("bessel_j0_sweep", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..100 {
                acc += bessel_j0(black_box(i as f64 * 0.05));
            }
            acc
        })
    });
}

fn bench_per_layer_sinr(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = draw_rayleigh(4, 4, &mut rng);
    let ctx = CsiContext::new(
        AntennaConfig::new(4, 4).unwrap(),
        McsTable::default_16qam(),
        0.0,
    )
    .unwrap();
    for rank in [2usize, 4] {
        let f = ctx.precoder(rank, 3).matrix;
        c.bench_function(&format!("per_layer_sinr_rank{rank}"), |b| {
            b.iter(|| per_layer_sinr(black_box(&h), black_box(&f), 0.5))
        });
    }
}

fn bench_select_csi(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (t, r) in [(2usize, 4usize), (4, 4)] {
        let ctx = CsiContext::new(
            AntennaConfig::new(t, r).unwrap(),
            McsTable::with_levels(15, 4.0).unwrap(),
            0.0,
        )
        .unwrap();
        let chunks: Vec<_> = (0..6).map(|_| draw_rayleigh(r, t, &mut rng)).collect();
        c.bench_function(&format!("select_csi_{t}x{r}_6chunks"), |b| {
            b.iter(|| ctx.select_csi(black_box(&chunks), 0.5, 0))
        });
    }
}

fn bench_fading_evolve(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut state = FadingState::init(4, 4, 6, 0.3913, &mut rng);
    c.bench_function("fading_evolve_4x4_6chunks", |b| {
        b.iter(|| state.evolve(&mut rng))
    });
}

fn bench_small_run(c: &mut Criterion) {
    let config = SimConfig {
        layout: LayoutConfig {
            n_rings: 0,
            ..LayoutConfig::default()
        },
        antenna: AntennaConfig::new(2, 4).unwrap(),
        scheduler: SchedulerKind::ProportionalFair,
        velocity_kmh: 60.0,
        n_ttis: 20,
        ues_per_sector: 5,
        ..SimConfig::default()
    };
    let mut group = c.benchmark_group("run");
    group.sample_size(10);
    group.bench_function("single_site_15ue_20tti", |b| {
        b.iter(|| run(black_box(&config)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_bessel,
    bench_per_layer_sinr,
    bench_select_csi,
    bench_fading_evolve,
    bench_small_run
);
criterion_main!(benches);
