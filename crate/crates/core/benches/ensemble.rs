use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lattice_corr::circulant::{localized_square_root, CouplingVector};
use lattice_corr::dynamics::{mc_correlations_with, EnsembleSpec, NonlinearModel};
use lattice_corr::par::Execution;

fn spec(replicas: usize) -> EnsembleSpec {
    EnsembleSpec {
        replicas,
        seed: 7,
        n: 129,
        beta: 1.0,
        dt: 0.05,
        t_snapshots: vec![0.0, 5.0, 10.0],
        pairs: vec![(1, 1), (1, 2), (2, 1), (2, 2), (3, 3)],
        js: (-8..=8).collect(),
    }
}

fn ensemble(c: &mut Criterion) {
    let couplings = CouplingVector::example1();
    let sq = localized_square_root(&couplings).unwrap();
    let model = NonlinearModel::new(couplings, 0.1, 0.01).unwrap();
    let mut group = c.benchmark_group("mc_ensemble");
    group.sample_size(10);
    for replicas in [16usize, 64] {
        let s = spec(replicas);
        for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, replicas), &s, |b, s| {
                b.iter(|| mc_correlations_with(s, &model, &sq, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, ensemble);
criterion_main!(benches);
