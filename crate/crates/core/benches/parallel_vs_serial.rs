//! Parallel batch operations against their sequential equivalents.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use varuq::entropy::entropy_triple;
use varuq::harness::{score, synth_run, PredictionRecord, SyntheticConfig};
use varuq::math::mean_and_std_error;
use varuq::oracles::{mc_estimate, sample_q, MeasureId, SamplerFamily, SamplerSpec, MC_STREAMS};
use varuq::simplex::WeightVector;
use varuq::variance::{aggregate_labelwise, labelwise};

fn scoring_workload() -> Vec<PredictionRecord> {
    let config = SyntheticConfig {
        n_train: 1,
        n_test: 8000,
        n_ood: 1,
        gradient_steps: 120,
        ..SyntheticConfig::default()
    }
    .with_seed(99);
    synth_run(&config).expect("synthetic run").test
}

fn bench_record_scoring(c: &mut Criterion) {
    let records = scoring_workload();
    let mut group = c.benchmark_group("score_8k_records");
    group.bench_function("batch", |b| {
        // parallel under the default feature, sequential without it
        b.iter(|| score(&records, MeasureId::EuVar, None).unwrap().scores)
    });
    group.bench_function("serial_loop", |b| {
        b.iter(|| {
            records
                .iter()
                .map(|r| {
                    let lw = labelwise(&r.ensemble());
                    aggregate_labelwise(&lw, &WeightVector::unit(r.num_labels()), false)
                        .unwrap()
                        .eu
                })
                .collect::<Vec<f64>>()
        })
    });
    group.finish();
}

fn bench_mc_streams(c: &mut Criterion) {
    let spec = SamplerSpec::new(SamplerFamily::Beta { a: 8.0, b: 2.0 }, 40_000, 7).unwrap();
    let mut group = c.benchmark_group("mc_estimate_10_streams");
    group.sample_size(20);
    group.bench_function("batch", |b| {
        b.iter(|| mc_estimate(MeasureId::EuVar, &spec).unwrap().mean)
    });
    group.bench_function("serial_loop", |b| {
        b.iter(|| {
            let values: Vec<f64> = (0..MC_STREAMS)
                .map(|s| {
                    let stream = spec.reseeded(varuq::math::derive_seed(spec.seed, s as u64));
                    let q = sample_q(&stream).unwrap();
                    labelwise(&q).per_label()[0].eu
                })
                .collect();
            mean_and_std_error(&values).0
        })
    });
    group.finish();
}

fn bench_entropy_triple(c: &mut Criterion) {
    let spec = SamplerSpec::new(
        SamplerFamily::UniformInterval { lo: 0.0, hi: 1.0 },
        100_000,
        3,
    )
    .unwrap();
    let q = sample_q(&spec).unwrap();
    c.bench_function("entropy_triple_100k_atoms", |b| {
        b.iter_batched(|| q.clone(), |q| entropy_triple(&q), BatchSize::LargeInput)
    });
}

criterion_group!(
    benches,
    bench_record_scoring,
    bench_mc_streams,
    bench_entropy_triple
);
criterion_main!(benches);
