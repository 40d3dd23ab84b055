use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bandit_lab::harness::{load_config, run_experiment_with, Execution};

fn config(kind: &str, reps: usize) -> bandit_lab::harness::ExperimentConfig {
    let model = if kind == "ag1" {
        "sinusoidal"
    } else {
        "stationary"
    };
    load_config(&format!(
        r#"{{"name":"bench","replications":{reps},"reward_model":{{"kind":"{model}"}},
            "strategies":[{{"kind":"{kind}"}}]}}"#
    ))
    .unwrap()
}

fn execution_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("replications");
    group.sample_size(10);
    for kind in ["epsilon-greedy", "thompson", "ucb1", "ag1"] {
        let cfg = config(kind, 32);
        group.bench_with_input(BenchmarkId::new("sequential", kind), &cfg, |b, cfg| {
            b.iter(|| run_experiment_with(cfg, Execution::Sequential).unwrap())
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", kind), &cfg, |b, cfg| {
            b.iter(|| run_experiment_with(cfg, Execution::Parallel).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, execution_modes);
criterion_main!(benches);
