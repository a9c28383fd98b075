use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dynclosure::{
    factor_linear, gcd_split, newton_puiseux, quasi_inverse, separable_associate, AlgPoly,
    AlgebraElement, CurveInput, Tower,
};

fn tower(spec: &str) -> Tower {
    Tower::parse_spec(spec).unwrap()
}

fn poly(src: &str, t: &Tower) -> AlgPoly {
    AlgPoly::parse(src, "X", t).unwrap()
}

fn splitting(c: &mut Criterion) {
    let t = tower("a:a^3-6*a^2+11*a-6, b:b^2-a");
    let x = AlgebraElement::parse("a*b-2*b+a-1", &t).unwrap();
    c.bench_function("quasi_inverse/split_tower", |b| {
        b.iter(|| quasi_inverse(black_box(&x)).unwrap())
    });

    let t = tower("a:a^3+a^2-5*a-5, b:b^3+a^2*b^2+a*b");
    let (f, g) = (poly("X^3-a*X+b", &t), poly("X^2-b*X-a^2", &t));
    c.bench_function("gcd_split/depth_two", |b| {
        b.iter(|| gcd_split(black_box(&f), black_box(&g)).unwrap())
    });
}

fn rational_polynomials(c: &mut Criterion) {
    let q = Tower::rationals();
    let f = poly("(X-1)^3*(X+2)^2*(X^2+1)", &q);
    c.bench_function("separable_associate/degree_7", |b| {
        b.iter(|| separable_associate(black_box(&f)).unwrap())
    });
    let f = poly("X^4-10*X^2+1", &q);
    c.bench_function("factor_linear/sqrt2_plus_sqrt3", |b| {
        b.iter(|| factor_linear(black_box(&f)).unwrap())
    });
}

fn puiseux(c: &mut Criterion) {
    let mut group = c.benchmark_group("newton_puiseux");
    group.sample_size(20);
    for order in [5, 8, 12] {
        let curve = CurveInput::parse("Y^4-3*Y^2+X*Y+X^2", order).unwrap();
        group.bench_with_input(BenchmarkId::new("worked_example", order), &curve, |b, c| {
            b.iter(|| newton_puiseux(black_box(c)).unwrap())
        });
    }
    let curve = CurveInput::parse("Y^3-X^2-X^3*Y", 8).unwrap();
    group.bench_function("cusp_order_8", |b| {
        b.iter(|| newton_puiseux(black_box(&curve)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, splitting, rational_polynomials, puiseux);
criterion_main!(benches);
