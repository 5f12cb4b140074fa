//! Sequential against data-parallel execution on the three hot loops.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eulerwedge::causal::{sampled_compression_check, IsometryElement, WedgeRegion};
use eulerwedge::par::{self, Execution};
use eulerwedge::stdsp::{self, ModularPair};
use eulerwedge::wedgespace::{factorization_search, GradedGroupElement, SearchOptions, WedgeOrderConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn compression_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampled_compression_check");
    group.sample_size(10);
    let g = IsometryElement::translation(&[0.2, 1.0, 0.0, 0.5]).compose(&IsometryElement::boost(4, 1, 0.3));
    let region = WedgeRegion::standard(4);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 100_000), |b| {
            b.iter(|| sampled_compression_check(black_box(&g), &region, 100_000, 0, exec).unwrap())
        });
    }
    group.finish();
}

fn factorization(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorization_search");
    group.sample_size(10);
    for (name, exec) in MODES {
        let search = SearchOptions { starts: 64, iterations: 60, exec, ..SearchOptions::default() };
        let cfg = WedgeOrderConfig::poincare(3).unwrap().with_search(search);
        let g = GradedGroupElement::poincare(&cfg.algebra, &IsometryElement::translation(&[1.0, 0.0, 0.0])).unwrap();
        group.bench_function(BenchmarkId::new(name, 64), |b| b.iter(|| factorization_search(&cfg, black_box(&g))));
    }
    group.finish();
}

fn modular_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("stdsp_sweep");
    group.sample_size(10);
    let roundtrip = |i: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let p = ModularPair::random(&mut rng, 6, 50.0);
        let v = stdsp::subspace_from_modular(&p).unwrap();
        stdsp::modular_from_subspace(&v).unwrap().distance(&p)
    };
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 128), |b| b.iter(|| par::map_range(exec, 0..128, roundtrip)));
    }
    group.finish();
}

criterion_group!(benches, compression_check, factorization, modular_sweep);
criterion_main!(benches);
