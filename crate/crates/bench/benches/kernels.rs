use criterion::{black_box, criterion_group, criterion_main, Criterion};

use kuforge::groupring::{aug_power_lattice, rn_group};
use kuforge::localcoh::{cech_local_cohomology, present_module, ModuleSpec};
use kuforge::milnor::{bicomplex, milnor_derivation, tau0_rank, total_homology, BicomplexKind};
use kuforge::smith_normal_form;

fn f2_rank(c: &mut Criterion) {
    let q1 = milnor_derivation(1, 4, 16);
    c.bench_function("f2 rank of Q1 on S^16, r=4", |b| b.iter(|| black_box(&q1).rank()));
    c.bench_function("tau0 rank on L^2 S^8, r=4", |b| b.iter(|| tau0_rank(black_box(4), 2, 8)));
}

fn integral(c: &mut Criterion) {
    let lattice = aug_power_lattice(3, 4);
    c.bench_function("smith normal form, P^4 for r=3", |b| {
        b.iter(|| smith_normal_form(black_box(&lattice.generators)))
    });
    c.bench_function("R^5 for r=3", |b| b.iter(|| rn_group(black_box(3), 5)));
}

fn homological(c: &mut Criterion) {
    let mut g = c.benchmark_group("homological");
    g.sample_size(10);
    let bi = bicomplex(BicomplexKind::B, 2, 3, 6);
    g.bench_function("Tot B(2), r=3, w<=6", |b| b.iter(|| total_homology(black_box(&bi))));
    let pres = present_module(ModuleSpec::Lfrak { r: 3, i: 2 });
    g.bench_function("Cech H(Lfrak_2), r=3, degrees -8..4", |b| {
        b.iter(|| cech_local_cohomology(black_box(&pres), -8, 4))
    });
    g.finish();
}

criterion_group!(benches, f2_rank, integral, homological);
criterion_main!(benches);
