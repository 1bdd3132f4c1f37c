use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use trop_moduli::automorphism::{aut_via_compat_graph_with, aut_via_poset_with};
use trop_moduli::complex::build_complex;
use trop_moduli::counting::lemma_sweep;
use trop_moduli::enumeration::enumerate_strata_with;
use trop_moduli::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_strata");
    g.sample_size(10);
    for n in [7, 8] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| enumerate_strata_with(black_box(n), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn graph_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("aut_via_compat_graph");
    g.sample_size(10);
    for n in [6, 7] {
        let cx = build_complex(n).unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &cx, |b, cx| {
                b.iter(|| aut_via_compat_graph_with(black_box(cx), exec))
            });
        }
    }
    g.finish();
}

fn poset_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("aut_via_poset");
    g.sample_size(10);
    let cx = build_complex(6).unwrap();
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| aut_via_poset_with(black_box(&cx), exec).unwrap())
        });
    }
    g.finish();
}

fn lemma(c: &mut Criterion) {
    let mut g = c.benchmark_group("lemma_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| lemma_sweep(black_box(20), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(kernels, enumeration, graph_search, poset_search, lemma);
criterion_main!(kernels);
