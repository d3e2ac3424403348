use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use godel_delta::elimination::chain_normal_form_with;
use godel_delta::first_order::{is_valid_fo_bounded, translate_t, Bounds};
use godel_delta::formula::{parse, parse_first_order};
use godel_delta::par::Strategy;
use godel_delta::semantics::{is_valid_at_with, Mode};

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn validity(c: &mut Criterion) {
    // valid, so the whole space is enumerated
    let f = parse("(a -> b) | (b -> c) | (c -> d) | (d -> e) | (e -> g) | D(g) | ~D(g)").unwrap();
    let mut group = c.benchmark_group("is_valid_k8");
    for (name, s) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| is_valid_at_with(&f, 8, Mode::Standard, s).unwrap())
        });
    }
    group.finish();
}

fn normal_form(c: &mut Criterion) {
    let f = parse("((a -> b) -> c) -> (d -> a | c) & (b -> d)").unwrap();
    let mut group = c.benchmark_group("cnf_4_vars");
    for (name, s) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| chain_normal_form_with(&f, Mode::Standard, s).unwrap())
        });
    }
    group.finish();
}

fn models(c: &mut Criterion) {
    let source = parse_first_order("D(exists x. P(x)) <-> exists x. D(P(x))").unwrap();
    let f = translate_t(&source).unwrap();
    let mut group = c.benchmark_group("fo_translation_search_d2_k3");
    group.sample_size(10);
    for (name, s) in STRATEGIES {
        let bounds = Bounds::new(2, 3).strategy(s);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| is_valid_fo_bounded(&f, &bounds).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, validity, normal_form, models);
criterion_main!(benches);
