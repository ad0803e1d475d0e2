use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fainf_core::ainfinity::{er_minimal_model, transfer_ainfinity, tree_transfer, AInfinityStructure, TransferOptions};
use fainf_core::complexes::{filtered_transfer, spectral_sequence};
use fainf_core::presentations::{fixture, fixture_names, FilteredDGA};

fn algebra(name: &str) -> FilteredDGA {
    fixture(name).and_then(|f| f.algebra()).expect("bundled fixture")
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_sequence");
    for name in fixture_names() {
        let a = algebra(name);
        group.bench_function(*name, |b| b.iter(|| spectral_sequence(black_box(a.complex()), 3)));
    }
    group.finish();
}

fn filtered(c: &mut Criterion) {
    let mut group = c.benchmark_group("filtered_transfer");
    for name in fixture_names() {
        let a = algebra(name);
        group.bench_function(*name, |b| b.iter(|| filtered_transfer(black_box(a.complex())).unwrap()));
    }
    group.finish();
}

fn ainfinity(c: &mut Criterion) {
    let opts = TransferOptions { arity_cap: 4, verify: false, filtered: true };
    let mut group = c.benchmark_group("transfer_ainfinity");
    group.sample_size(20);
    for name in fixture_names() {
        let a = algebra(name);
        let diagram = filtered_transfer(a.complex()).unwrap();
        group.bench_function(*name, |b| b.iter(|| transfer_ainfinity(black_box(&diagram), &a, opts).unwrap()));
        let source = AInfinityStructure::from_dga(&a, 4);
        group.bench_function(format!("{name}/tree"), |b| b.iter(|| tree_transfer(black_box(&diagram), &source, opts).unwrap()));
    }
    group.finish();
}

fn er_minimal(c: &mut Criterion) {
    let a = algebra("iwasawa");
    let opts = TransferOptions { arity_cap: 3, verify: false, filtered: true };
    let mut group = c.benchmark_group("er_minimal_model");
    group.sample_size(10);
    group.bench_function("iwasawa/r=2", |b| b.iter(|| er_minimal_model(black_box(&a), 2, opts).unwrap()));
    group.finish();
}

criterion_group!(benches, spectral, filtered, ainfinity, er_minimal);
criterion_main!(benches);
