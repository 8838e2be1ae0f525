use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use adlv_core::affine_weyl::AffElt;
use adlv_core::conjugacy::ClassRegistry;
use adlv_core::{AdlvEngine, CocenterEngine, Limits, PivotRule, RootDatum};

fn datum(name: &str) -> Arc<RootDatum> {
    Arc::new(RootDatum::preset(name).unwrap())
}

fn window(d: &RootDatum, max_len: usize) -> Vec<AffElt> {
    d.pi_one_window(0)
        .iter()
        .flat_map(|k| d.elements_by_length(&d.omega_element(k), max_len).concat())
        .collect()
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_classes");
    for name in ["SL3", "C2", "G2"] {
        let d = datum(name);
        g.bench_with_input(BenchmarkId::from_parameter(name), &d, |b, d| {
            b.iter(|| {
                let reg = ClassRegistry::new(d.clone(), Limits::default());
                black_box(reg.enumerate_classes(8, 0).unwrap().len())
            })
        });
    }
    g.finish();
}

fn class_polynomials(c: &mut Criterion) {
    let mut g = c.benchmark_group("class_polynomials_cold");
    g.sample_size(10);
    for name in ["SL3", "C2"] {
        let d = datum(name);
        let elements = window(&d, 8);
        g.bench_with_input(BenchmarkId::from_parameter(name), &elements, |b, ws| {
            b.iter(|| {
                let e =
                    CocenterEngine::for_datum(d.clone(), Limits::default(), PivotRule::Canonical);
                for w in ws {
                    black_box(e.class_polynomials(w).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn dimension_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("dim_adlv_basic_scan");
    g.sample_size(10);
    for name in ["SL3", "C2"] {
        let d = datum(name);
        let elements = window(&d, 8);
        g.bench_with_input(BenchmarkId::from_parameter(name), &elements, |b, ws| {
            b.iter(|| {
                let e = AdlvEngine::for_datum(d.clone(), Limits::default());
                let basic = e.basic_class(&d.kottwitz(&d.aff_identity())).unwrap();
                for w in ws {
                    black_box(e.dim_adlv(w, &basic).unwrap().dim);
                }
            })
        });
    }
    g.finish();
}

fn bruhat(c: &mut Criterion) {
    let d = datum("SL3");
    let elements = window(&d, 6);
    c.bench_function("bruhat_leq_SL3_len6", |b| {
        b.iter(|| {
            let mut n = 0usize;
            for x in elements.iter().step_by(7) {
                for y in &elements {
                    n += usize::from(d.bruhat_leq(x, y));
                }
            }
            black_box(n)
        })
    });
}

criterion_group!(
    benches,
    enumeration,
    class_polynomials,
    dimension_scan,
    bruhat
);
criterion_main!(benches);
