use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use fresco_core::fresco::{a_matrix_from_presentation, element_to_bpoly, saturate_bernstein, SaturationConfig};
use fresco_core::rational::{int, rat};
use fresco_core::{gaussmanin, FrescoPresentation, HomogeneousElement, Letter, MonomialInput, Poly};

fn normal_order(c: &mut Criterion) {
    let word: Vec<Letter> = (0..24).map(|i| if i % 3 == 0 { Letter::A } else { Letter::B }).collect();
    c.bench_function("normal_order/24 letters", |bench| {
        bench.iter(|| fresco_core::ncalg::normal_order(black_box(&word), false).unwrap())
    });
}

fn bpoly(c: &mut Criterion) {
    let coeffs: Vec<_> = (0..=8).map(|j| if j == 0 { int(1) } else { rat(j * j - 3, j + 1) }).collect();
    let p = HomogeneousElement::new(coeffs).unwrap();
    c.bench_function("element_to_bpoly/degree 8", |bench| {
        bench.iter(|| element_to_bpoly(black_box(&p)).unwrap())
    });
}

fn saturation(c: &mut Criterion) {
    let p = FrescoPresentation::new(
        vec![rat(5, 2), int(1), rat(1, 3)],
        vec![Poly::new(vec![int(1), rat(1, 2)]), Poly::new(vec![int(1), int(-2)])],
    )
    .unwrap();
    let m = a_matrix_from_presentation(&p, 16).unwrap();
    let config = SaturationConfig { precision: 16, ..SaturationConfig::default() };
    c.bench_function("saturate/rank 3", |bench| {
        bench.iter(|| saturate_bernstein(black_box(&m), &config).unwrap())
    });
}

fn gauss_manin(c: &mut Criterion) {
    let input = MonomialInput::new(
        vec![vec![1, 2, 0, 0], vec![2, 1, 0, 0], vec![0, 0, 1, 3], vec![0, 0, 3, 1]],
        None,
        None,
        None,
    )
    .unwrap();
    c.bench_function("gaussmanin/quartic", |bench| {
        bench.iter(|| gaussmanin::run(black_box(&input)).unwrap())
    });
}

criterion_group!(benches, normal_order, bpoly, saturation, gauss_manin);
criterion_main!(benches);
