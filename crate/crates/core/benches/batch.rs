use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qsplit::batch::{fibers, fibers_abelian, kr_round_trips, Exec};
use qsplit::cameral::CameralCover;
use qsplit::centralizers::sample_regular_points;
use qsplit::forms::{form, DEFAULT_SEED};
use qsplit::report::{off_discriminant, test_bases};
use qsplit::Scalar;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn kr(c: &mut Criterion) {
    let f = form("sp4R").unwrap();
    let pts: Vec<Vec<Scalar>> = (0..64).map(|k| vec![Scalar::int(k % 9 - 4), Scalar::int(k / 9 - 3)]).collect();
    let mut g = c.benchmark_group("kr_round_trips/sp4R");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| kr_round_trips(f, black_box(&pts), e).unwrap()));
    }
    g.finish();
}

fn centralizers(c: &mut Criterion) {
    let f = form("sl3R").unwrap();
    let xs: Vec<_> = sample_regular_points(f, 24, DEFAULT_SEED).unwrap().into_iter().map(|p| p.0).collect();
    let mut g = c.benchmark_group("centralizer_fibers/sl3R");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| fibers_abelian(f, black_box(&xs), e).unwrap()));
    }
    g.finish();
}

fn cameral(c: &mut Criterion) {
    let f = form("su22").unwrap();
    let cover = CameralCover::build(&test_bases(f, DEFAULT_SEED).unwrap()[0]).unwrap();
    let mut xs = off_discriminant(&cover, 1);
    xs.extend(off_discriminant(&cover, 40));
    xs.extend(off_discriminant(&cover, 80));
    let mut g = c.benchmark_group("cameral_fibers/su22");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| fibers(&cover, black_box(&xs), e).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, kr, centralizers, cameral);
criterion_main!(benches);
