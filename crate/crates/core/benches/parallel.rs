use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use twocoin::protocols::{search_cycle_schedules_with, verify_batch};
use twocoin::tomography::{tomography_pipeline, ShotMode};
use twocoin::{complete_pst_schedule, cycle8_schedule, evolve, CoinStateSpec, Exec, Register, WalkState};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search_cycle8");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| search_cycle_schedules_with(8, 0, 5, black_box(10), exec).unwrap())
        });
    }
    g.finish();
}

fn tomography(c: &mut Criterion) {
    let s = cycle8_schedule();
    let payload = CoinStateSpec::from_real(&[0.5, 3f64.sqrt() / 2.0]).unwrap();
    let state = evolve(&WalkState::make_product_state(s.layout(), 0, &payload, 0).unwrap(), &s).unwrap();
    let mode = ShotMode::Finite {
        shots: 8192,
        runs: 10,
        seed: 1,
    };
    let mut g = c.benchmark_group("tomography_10x8192");
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| tomography_pipeline(black_box(&state), Register::Coin1, mode, None, exec).unwrap())
        });
    }
    g.finish();
}

fn payload_sweep(c: &mut Criterion) {
    let s = complete_pst_schedule(8, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let payloads: Vec<_> = (0..64).map(|_| CoinStateSpec::random(8, &mut rng)).collect();
    let mut g = c.benchmark_group("complete8_payload_sweep");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_batch(&s, black_box(&payloads), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, search, tomography, payload_sweep);
criterion_main!(benches);
