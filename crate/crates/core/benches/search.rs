use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use loopdeg::search::{run_search, SearchConfig};
use loopdeg::Catalog;

fn search(c: &mut Criterion) {
    let catalog = Catalog::builtin();
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    for rank in [10, 12] {
        let mut modes = vec![("sequential", 1)];
        if cfg!(feature = "parallel") {
            modes.push(("parallel", threads));
        }
        for (name, jobs) in modes {
            let mut config = SearchConfig::new(rank);
            config.jobs = jobs;
            group.bench_with_input(BenchmarkId::new(name, rank), &config, |b, config| {
                b.iter(|| run_search(config, &catalog).expect("search runs"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);
