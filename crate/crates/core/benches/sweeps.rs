//! Sequential against rayon evaluation of the same sweeps.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dispteleport::protocol::{
    alice_measure_full, approximation_fidelity_numeric, protocol_state, Mode, ProtocolParams, Qubit,
};
use dispteleport::sweep::{cartesian, linspace, map_sequential};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fidelity_point(p: &[f64]) -> f64 {
    let params = ProtocolParams::from_alpha(p[0], p[1]).unwrap();
    approximation_fidelity_numeric(&Qubit::plus_i(), &params).unwrap()
}

fn outcome_mass(q: &Qubit) -> f64 {
    let params = ProtocolParams::from_alpha(0.1, 0.99).unwrap();
    let state = protocol_state(q, &params, Mode::Exact).unwrap();
    alice_measure_full(&state).unwrap().iter().map(|r| r.probability).sum()
}

fn bench_fidelity_grid(c: &mut Criterion) {
    let grid = cartesian(&[linspace(0.02, 0.1, 6).unwrap(), linspace(0.99, 0.999, 6).unwrap()]);
    let mut g = c.benchmark_group("fidelity_grid");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("sequential", grid.len()), |b| {
        b.iter(|| map_sequential(&grid, |p| fidelity_point(p)))
    });
    #[cfg(feature = "parallel")]
    g.bench_function(BenchmarkId::new("parallel", grid.len()), |b| {
        b.iter(|| dispteleport::sweep::map_parallel(&grid, |p| fidelity_point(p)))
    });
    g.finish();
}

fn bench_random_qubits(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let qubits: Vec<Qubit> = (0..64).map(|_| Qubit::random(&mut rng)).collect();
    let mut g = c.benchmark_group("exact_outcomes");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("sequential", qubits.len()), |b| {
        b.iter(|| map_sequential(&qubits, outcome_mass))
    });
    #[cfg(feature = "parallel")]
    g.bench_function(BenchmarkId::new("parallel", qubits.len()), |b| {
        b.iter(|| dispteleport::sweep::map_parallel(&qubits, outcome_mass))
    });
    g.finish();
}

criterion_group!(benches, bench_fidelity_grid, bench_random_qubits);
criterion_main!(benches);
