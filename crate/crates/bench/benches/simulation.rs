// Copyright 2026 orsim Contributors
// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use orsim_bench::working_point;
use orsim_core::circuit::{evolve_exact, record_distribution, sample_distribution};
use orsim_core::experiment::{build_protocol, predict, run_experiment, REPLICATION_SHOTS};

fn simulation(c: &mut Criterion) {
    let params = working_point(65.5);
    let circuit = build_protocol(&params).unwrap();
    let opts = params.evolve_options();

    c.bench_function("predict", |b| b.iter(|| predict(black_box(&params)).unwrap()));
    c.bench_function("evolve_exact", |b| {
        b.iter(|| evolve_exact(black_box(&circuit), &opts).unwrap())
    });
    let dist = record_distribution(&evolve_exact(&circuit, &opts).unwrap());
    c.bench_function("sample_100k", |b| {
        b.iter(|| sample_distribution(black_box(&dist), 100_000, 7).unwrap())
    });
    c.bench_function("run_experiment_replication", |b| {
        b.iter(|| run_experiment(black_box(&params), REPLICATION_SHOTS, 7, 2).unwrap())
    });
}

criterion_group!(benches, simulation);
criterion_main!(benches);
