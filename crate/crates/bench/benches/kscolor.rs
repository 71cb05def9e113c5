use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kscolor::density::{nearest_true_ray, suitable_frame_near};
use kscolor::kscheck::{build_graph, find_ks_coloring, RaySet};
use kscolor::linalg::psd_check;
use kscolor::povm::{make_suitable_near, SuitableOptions};
use kscolor::{coloring::classify_projection_matrix, gen};

fn density(c: &mut Criterion) {
    let mut rng = gen::rng(1);
    let rays: Vec<Vec<f64>> = (0..64).map(|_| gen::haar_ray(&mut rng, 3)).collect();
    let frames: Vec<Vec<Vec<f64>>> = (0..16).map(|_| gen::haar_frame(&mut rng, 3)).collect();
    let mut i = 0;
    c.bench_function("nearest_true_ray/n3/eps1e-6", |b| {
        b.iter(|| {
            i = (i + 1) % rays.len();
            nearest_true_ray(black_box(&rays[i]), 1e-6).unwrap()
        })
    });
    c.bench_function("suitable_frame_near/n3/eps1e-4", |b| {
        b.iter(|| {
            i = (i + 1) % frames.len();
            suitable_frame_near(black_box(&frames[i]), 1e-4).unwrap()
        })
    });
}

fn matrices(c: &mut Criterion) {
    let mut rng = gen::rng(2);
    let psd: Vec<_> = (0..64).map(|_| gen::psd_test_matrix(&mut rng, 3)).collect();
    let reps: Vec<_> = (0..64)
        .map(|k| gen::projection_rep(&mut rng, 3, if k % 2 == 0 { 1 } else { 2 }))
        .collect();
    let mut i = 0;
    c.bench_function("psd_check/n3", |b| {
        b.iter(|| {
            i = (i + 1) % psd.len();
            psd_check(black_box(&psd[i]))
        })
    });
    c.bench_function("classify_projection_matrix/n3", |b| {
        b.iter(|| {
            i = (i + 1) % reps.len();
            classify_projection_matrix(black_box(&reps[i]))
        })
    });
}

fn povm(c: &mut Criterion) {
    let mut rng = gen::rng(3);
    let targets: Vec<_> = (0..8).map(|_| gen::povm(&mut rng, 3, 4)).collect();
    let mut i = 0;
    c.bench_function("make_suitable_near/n3/m4/eps1e-3", |b| {
        b.iter(|| {
            i = (i + 1) % targets.len();
            make_suitable_near(black_box(&targets[i]), 1e-3, SuitableOptions::default()).unwrap()
        })
    });
}

fn kochen_specker(c: &mut Criterion) {
    for (name, rs) in [
        ("peres33", RaySet::peres33()),
        ("cabello18", RaySet::cabello18()),
    ] {
        c.bench_function(&format!("build_graph/{name}"), |b| {
            b.iter(|| build_graph(black_box(&rs)))
        });
        let g = build_graph(&rs);
        c.bench_function(&format!("find_ks_coloring/{name}"), |b| {
            b.iter(|| find_ks_coloring(black_box(&g)))
        });
    }
}

criterion_group!(benches, density, matrices, povm, kochen_specker);
criterion_main!(benches);
