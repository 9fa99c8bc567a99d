use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mbqc_core::simulate::{enumerate_branches, pattern_channel_with, SimOptions};
use mbqc_core::transpile::parity_pattern;
use mbqc_core::Execution;

fn branches(c: &mut Criterion) {
    let mut g = c.benchmark_group("branches");
    g.sample_size(10);
    for n in [3, 4, 5] {
        let t = parity_pattern(n).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let opts = SimOptions {
                exec,
                ..SimOptions::default()
            };
            g.bench_with_input(BenchmarkId::new(format!("{exec:?}"), n), &t, |b, t| {
                b.iter(|| enumerate_branches(t, &opts).unwrap().len())
            });
        }
    }
    g.finish();
}

fn channel(c: &mut Criterion) {
    let mut g = c.benchmark_group("channel");
    g.sample_size(10);
    let t = parity_pattern(3).unwrap();
    for exec in [Execution::Sequential, Execution::Parallel] {
        let opts = SimOptions {
            exec,
            ..SimOptions::default()
        };
        g.bench_function(format!("{exec:?}"), |b| {
            b.iter(|| pattern_channel_with(&t, &opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, branches, channel);
criterion_main!(benches);
