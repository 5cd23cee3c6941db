use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use impcirc_core::bimp::eval;
use impcirc_core::lang::{self, mux};
use impcirc_core::normalform::factorize;
use impcirc_core::suites::random::{self, Bounds};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BOY_OR_GIRL_2: &str = "let t = flip 0.5 in let s = flip 0.5 in \
    let _ = observe (if knight then t else s) in (t, s)";

fn terms(n: usize) -> Vec<impcirc_core::GradedTerm> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let bounds = Bounds::default();
    (0..n).map(|_| random::term(&mut rng, 3, 3, &bounds)).collect()
}

fn bench_eval(c: &mut Criterion) {
    let ts = terms(32);
    c.bench_function("eval random terms", |b| {
        b.iter(|| ts.iter().map(|t| eval(black_box(t)).unwrap().grade()).sum::<usize>())
    });
    let m = mux(3);
    c.bench_function("eval mux(3)", |b| b.iter(|| eval(black_box(&m)).unwrap()));
}

fn bench_factorize(c: &mut Criterion) {
    let ts = terms(32);
    c.bench_function("factorize random terms", |b| {
        b.iter_batched(
            || ts.clone(),
            |ts| ts.iter().map(|t| factorize(t).unwrap().grade).sum::<usize>(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_run(c: &mut Criterion) {
    c.bench_function("run boy or girl 2", |b| {
        b.iter(|| lang::run(black_box(BOY_OR_GIRL_2)).unwrap())
    });
}

criterion_group!(benches, bench_eval, bench_factorize, bench_run);
criterion_main!(benches);
