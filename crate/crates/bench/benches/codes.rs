use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use sdmds::census::Census;
use sdmds::grs::all_locators;
use sdmds::verify::self_dual_matrix;
use sdmds::{construct, make_field, ConstructionParams};

fn field_ops(c: &mut Criterion) {
    let mut g = c.benchmark_group("field");
    for (p, d) in [(151u64, 2u32), (3, 10), (5, 26)] {
        let ctx = make_field(p, d).unwrap();
        let a = ctx.gpow(12345);
        let b = ctx.gpow(678);
        let label = format!("{p}^{d}");
        g.bench_with_input(BenchmarkId::new("mul", &label), &(a, b), |bch, &(a, b)| {
            bch.iter(|| ctx.mul(black_box(a), black_box(b)))
        });
        let sq = ctx.mul(a, a);
        g.bench_with_input(BenchmarkId::new("sqrt", &label), &sq, |bch, &sq| {
            bch.iter(|| ctx.sqrt(black_box(sq)).unwrap())
        });
    }
    g.finish();
}

fn constructions(c: &mut Criterion) {
    let ctx = make_field(151, 2).unwrap();
    let mut g = c.benchmark_group("construct");
    g.sample_size(10);
    for params in [
        ConstructionParams::T1i { m: 6, t: 7 },
        ConstructionParams::T1i { m: 6, t: 71 },
        ConstructionParams::T3ii { m: 8, t: 9, s: 4 },
    ] {
        g.bench_function(params.to_string(), |b| {
            b.iter(|| construct(&ctx, &params).unwrap())
        });
    }
    g.finish();

    let (art, _) = construct(&ctx, &ConstructionParams::T1i { m: 6, t: 71 }).unwrap();
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("locators n=426", |b| {
        b.iter(|| all_locators(&ctx, art.eval_vector()))
    });
    g.bench_function("self-dual n=426", |b| {
        b.iter(|| self_dual_matrix(&ctx, art.generator()).unwrap())
    });
    g.finish();
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("q=83^2", |b| {
        b.iter(|| Census::new(83 * 83).unwrap().union().len())
    });
    g.finish();
}

criterion_group!(benches, field_ops, constructions, census);
criterion_main!(benches);
