use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use g2sub_core::chevalley::Rep;
use g2sub_core::cohomology::{g2_two, h1_dim};
use g2sub_core::gf::{Field, FieldElement};
use g2sub_core::repanalysis::{chop, restriction_report, ModuleRep};
use g2sub_core::subgroups::{subgroup_generators, SubgroupName, SubgroupSpec};

fn field_ops(c: &mut Criterion) {
    for (p, n) in [(2, 8), (13, 2)] {
        let f = Field::new(p, n).unwrap();
        let elems: Vec<FieldElement> = FieldElement::all(&f).take(64).collect();
        c.bench_function(&format!("gf mul {f}"), |b| {
            b.iter(|| {
                let mut acc = FieldElement::one(&f);
                for e in &elems {
                    acc = &acc * e;
                    acc = &acc + e;
                }
                black_box(acc)
            })
        });
    }
}

fn root_elements(c: &mut Criterion) {
    let f = Field::new(2, 3).unwrap();
    let rep = Rep::new(&f);
    let t = FieldElement::primitive(&f);
    c.bench_function("xmat all roots GF(8)", |b| {
        b.iter(|| {
            for i in (1..=6).chain(-6..=-1) {
                black_box(rep.xmat(i, &t).unwrap());
            }
        })
    });
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumeration");
    g.sample_size(10);
    g.bench_function("G2(2)", |b| b.iter(|| black_box(g2_two().unwrap().len())));
    g.finish();
}

fn meataxe(c: &mut Criterion) {
    let f = Field::new(2, 2).unwrap();
    let rep = Rep::new(&f);
    let gens = subgroup_generators(&SubgroupSpec::new(SubgroupName::Z1, &f))
        .unwrap()
        .matrices(&rep)
        .unwrap();
    let m = ModuleRep::new(&f, 7, gens).unwrap();
    c.bench_function("chop V7 restricted to Z1 over GF(4)", |b| b.iter(|| black_box(chop(&m, 1).unwrap().len())));
    let spec = SubgroupSpec::new(SubgroupName::Z2, &f);
    c.bench_function("restriction report Z2 over GF(4)", |b| {
        b.iter(|| black_box(restriction_report(&spec, 1).unwrap()))
    });
    c.bench_function("H1 SL2(9) on 1x1t3", |b| b.iter(|| black_box(h1_dim(9, "1x1t3").unwrap())));
}

criterion_group!(benches, field_ops, root_elements, enumeration, meataxe);
criterion_main!(benches);
