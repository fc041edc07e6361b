use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qperceptron::{
    build_model, builtin_dataset, pinv_matrix, predict, svd_full, synthesize_weights,
    DEFAULT_UNITARITY_TOL,
};
use qperceptron_bench::random_matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn decompositions(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("svd_full");
    for n in [2usize, 4, 8, 16, 32] {
        let a = random_matrix(&mut rng, n, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| svd_full(black_box(a)))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("pinv_matrix");
    for n in [4usize, 8, 16] {
        let a = random_matrix(&mut rng, n, n / 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| pinv_matrix(black_box(a)))
        });
    }
    group.finish();
}

fn gates(c: &mut Criterion) {
    for name in ["cnot", "cswap", "xor"] {
        let ts = builtin_dataset(name).unwrap().training_set;
        c.bench_function(&format!("train/{name}"), |b| {
            b.iter(|| {
                build_model(
                    &synthesize_weights(black_box(&ts)).unwrap(),
                    DEFAULT_UNITARITY_TOL,
                )
            })
        });
        let model = build_model(&synthesize_weights(&ts).unwrap(), DEFAULT_UNITARITY_TOL).unwrap();
        let x = ts.pairs()[0].input.clone();
        c.bench_function(&format!("predict/{name}"), |b| {
            b.iter(|| predict(&model, black_box(&x)))
        });
    }
}

criterion_group!(benches, decompositions, gates);
criterion_main!(benches);
