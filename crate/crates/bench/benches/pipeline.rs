use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use genus_pls::pls::{prove, run_verifier, Scheme};
use genus_pls::surgery::unfold;
use genus_pls_bench::{instance, torus, SIZES};

fn faces(c: &mut Criterion) {
    let mut group = c.benchmark_group("trace_faces");
    for n in SIZES {
        let s = instance(n, torus(1));
        group.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| b.iter(|| s.trace_faces().unwrap()));
    }
    group.finish();
}

fn unfolding(c: &mut Criterion) {
    let mut group = c.benchmark_group("unfold");
    group.sample_size(20);
    for genus in [1, 2] {
        let s = instance(256, torus(genus));
        group.bench_with_input(BenchmarkId::new("n256_genus", genus), &s, |b, s| b.iter(|| unfold(s).unwrap()));
    }
    group.finish();
}

fn certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for n in SIZES {
        let s = instance(n, torus(1));
        let target = Scheme::orientable(1);
        group.bench_with_input(BenchmarkId::new("prove", n), &s, |b, s| b.iter(|| prove(s, target).unwrap()));
        let a = prove(&s, target).unwrap();
        let g = s.graph();
        group.bench_with_input(BenchmarkId::new("verify", n), &a, |b, a| b.iter(|| run_verifier(&g, target, a)));
    }
    group.finish();
}

criterion_group!(benches, faces, unfolding, certify);
criterion_main!(benches);
