use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use std::hint::black_box;

use cutforge_core::apmc::apmc_pipeline;
use cutforge_core::dynamic::{community_script, DynamicEngine};
use cutforge_core::flow::brute_force_apmc;
use cutforge_core::gomory_hu::build_gomory_hu;
use cutforge_core::streaming::{stream_from_graph, PowerCutSketchSet, SketchParams};
use cutforge_core::suite::{clustered_multigraph, random_cluster_spec, random_multigraph};

fn gomory_hu(c: &mut Criterion) {
    let mut group = c.benchmark_group("gomory_hu");
    for n in [16usize, 32, 64] {
        let g = random_multigraph(n, 0.3, 1);
        group.bench_with_input(BenchmarkId::new("gusfield", n), &g, |b, g| b.iter(|| build_gomory_hu(black_box(g))));
        group.bench_with_input(BenchmarkId::new("apmc_pipeline", n), &g, |b, g| b.iter(|| apmc_pipeline(black_box(g)).unwrap()));
    }
    let g = random_multigraph(32, 0.3, 1);
    group.bench_function("brute_force/32", |b| b.iter(|| brute_force_apmc(black_box(&g)).unwrap()));
    group.finish();
}

fn clustered(c: &mut Criterion) {
    let g = clustered_multigraph(&random_cluster_spec(24, 3), 3);
    c.bench_function("apmc_pipeline/clustered24", |b| b.iter(|| apmc_pipeline(black_box(&g)).unwrap()));
}

fn dynamic(c: &mut Criterion) {
    let script = community_script(24, 60, 2);
    c.bench_function("dynamic/24x60", |b| {
        b.iter_batched(
            || DynamicEngine::new(24).unwrap(),
            |mut e| {
                e.process_all(&script).unwrap();
                e
            },
            BatchSize::SmallInput,
        )
    });
}

fn sketches(c: &mut Criterion) {
    let g = random_multigraph(32, 0.5, 4);
    let stream = stream_from_graph(&g, 50, 4);
    c.bench_function("sketch/ingest32", |b| {
        b.iter(|| {
            let mut set = PowerCutSketchSet::new(32, SketchParams::for_n(32), 4);
            for &e in &stream {
                set.update(e).unwrap();
            }
            set
        })
    });
}

criterion_group!(benches, gomory_hu, clustered, dynamic, sketches);
criterion_main!(benches);
