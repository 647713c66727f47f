use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use echoscope::graph::{FollowerGraph, RetweetGraph};
use echoscope::ingest::TimeWindow;
use echoscope::moderacy::{compute_user_metrics, Analysis, ModeracyOptions};
use echoscope::report::{build_report, RunConfig};
use echoscope_bench::fixture;

fn graph_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("graph_build");
    for n in [1_000, 4_000] {
        let b = fixture(n);
        let users = b.users.len();
        g.bench_with_input(BenchmarkId::from_parameter(n), &b, |bench, b| {
            bench.iter(|| {
                let fg = FollowerGraph::build(&b.edges, &b.seeds, users).unwrap();
                let rg = RetweetGraph::build(&b.log, &b.seeds, TimeWindow::ALL, users);
                (fg.edge_count(), rg.edge_count())
            })
        });
    }
    g.finish();
}

fn metrics(c: &mut Criterion) {
    let b = fixture(2_000);
    let n = b.users.len();
    let fg = FollowerGraph::build(&b.edges, &b.seeds, n).unwrap();
    let rg = RetweetGraph::build(&b.log, &b.seeds, TimeWindow::ALL, n);
    c.bench_function("analysis_and_metrics_k1", |bench| {
        bench.iter(|| {
            let an = Analysis::new(&b, &fg, &rg, ModeracyOptions::default());
            compute_user_metrics(&an, 1).rows.len()
        })
    });
}

fn report(c: &mut Criterion) {
    let b = fixture(1_000);
    let n = b.users.len();
    let fg = FollowerGraph::build(&b.edges, &b.seeds, n).unwrap();
    let rg = RetweetGraph::build(&b.log, &b.seeds, TimeWindow::ALL, n);
    let cfg = RunConfig {
        reps: 100,
        baseline_users: Some(100),
        ..RunConfig::default()
    };
    let mut g = c.benchmark_group("report");
    g.sample_size(10);
    g.bench_function("full_k1_to_10", |bench| bench.iter(|| build_report(&b, &fg, &rg, &cfg).unwrap().tables.len()));
    g.finish();
}

criterion_group!(benches, graph_build, metrics, report);
criterion_main!(benches);
