use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl2kit::abelian::{abelianization, smith_normal_form, IntMat};
use sl2kit::campaign::random_word;
use sl2kit::coset::{todd_coxeter, EnumOptions, Strategy};
use sl2kit::decompose::{decompose_to_abu, rewrite_abu_to_xy};
use sl2kit::fp::{make_corollary, make_hm};
use sl2kit::matgroups::Assignment;

fn snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("snf");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [4usize, 8, 16] {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-50..=50)).collect()).collect();
        let m = IntMat::from_rows(&rows);
        group.bench_with_input(BenchmarkId::new("random", n), &m, |b, m| b.iter(|| smith_normal_form(black_box(m))));
    }
    let hm = make_hm(30).unwrap();
    group.bench_function("abelianize-h30", |b| b.iter(|| abelianization(black_box(&hm))));
    group.finish();
}

fn coset(c: &mut Criterion) {
    let mut group = c.benchmark_group("coset");
    for r in [5u64, 9] {
        let p = make_corollary(r).unwrap();
        for (name, strategy) in [("hlt", Strategy::Hlt), ("felsch", Strategy::Felsch)] {
            let opts = EnumOptions {
                strategy,
                ..EnumOptions::default()
            };
            group.bench_function(BenchmarkId::new(name, r), |b| b.iter(|| todd_coxeter(black_box(&p), &[], &opts)));
        }
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    for m in [2u64, 6, 10] {
        let phi = Assignment::phi(m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(m);
        let mats: Vec<_> = (0..32).map(|_| phi.evaluate(&random_word(&mut rng, 2, 40)).unwrap()).collect();
        group.bench_with_input(BenchmarkId::new("words-40", m), &mats, |b, mats| {
            b.iter(|| {
                for mat in mats {
                    let d = decompose_to_abu(black_box(mat)).unwrap();
                    black_box(rewrite_abu_to_xy(&d.word).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, snf, coset, decomposition);
criterion_main!(benches);
