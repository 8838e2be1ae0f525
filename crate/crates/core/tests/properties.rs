use std::sync::{Arc, OnceLock};

use adlv_core::{AdlvEngine, AffElt, Dim, Limits, RootDatum};
use proptest::prelude::*;

fn engine(name: &'static str) -> &'static AdlvEngine {
    static ENGINES: OnceLock<Vec<(&'static str, AdlvEngine)>> = OnceLock::new();
    let all = ENGINES.get_or_init(|| {
        ["SL3", "C2", "PGL2"]
            .into_iter()
            .map(|n| {
                let d = Arc::new(RootDatum::preset(n).unwrap());
                (n, AdlvEngine::for_datum(d, Limits::default()))
            })
            .collect()
    });
    &all.iter().find(|(n, _)| *n == name).unwrap().1
}

fn from_word(e: &AdlvEngine, word: &[usize]) -> AffElt {
    let d = e.datum();
    let gens = d.affine_simples();
    word.iter()
        .fold(d.aff_identity(), |w, &i| w.mul(&gens[i % gens.len()]))
}

fn preset() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("SL3"), Just("C2"), Just("PGL2")]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn own_class_is_nonempty(name in preset(), word in prop::collection::vec(0usize..3, 0..7)) {
        let e = engine(name);
        let w = from_word(e, &word);
        let b = e.sigma_class_of(&w).unwrap();
        let r = e.dim_adlv(&w, &b).unwrap();
        prop_assert!(r.nonempty);
    }

    #[test]
    fn dimension_bounded_by_length(name in preset(), word in prop::collection::vec(0usize..3, 0..7)) {
        let e = engine(name);
        let d = e.datum();
        let w = from_word(e, &word);
        let basic = e.basic_class(&d.kottwitz(&w)).unwrap();
        let len = d.length(&w) as i64;
        for b in [basic, e.sigma_class_of(&w).unwrap()] {
            if let Dim::Finite(x) = e.dim_adlv(&w, &b).unwrap().dim {
                prop_assert!(x <= len.into(), "{} dim {x} > {len}", d.encode(&w));
            }
        }
    }

    #[test]
    fn wrong_kottwitz_class_is_empty(word in prop::collection::vec(0usize..2, 0..6)) {
        let e = engine("PGL2");
        let d = e.datum();
        let w = from_word(e, &word);
        let other = d
            .pi_one_window(1)
            .into_iter()
            .find(|k| *k != d.kottwitz(&w))
            .unwrap();
        let b = e.basic_class(&other).unwrap();
        prop_assert!(e.dim_adlv(&w, &b).unwrap().dim.is_empty());
    }

    #[test]
    fn length_preserving_cyclic_shift(name in preset(), word in prop::collection::vec(0usize..3, 1..7), s in 0usize..3) {
        let e = engine(name);
        let d = e.datum();
        let w = from_word(e, &word);
        let s = s % d.affine_simples().len();
        let v = d.conj_by_simple(s, &w);
        prop_assume!(d.length(&v) == d.length(&w));
        let basic = e.basic_class(&d.kottwitz(&w)).unwrap();
        for b in [basic, e.sigma_class_of(&w).unwrap()] {
            prop_assert_eq!(e.dim_adlv(&w, &b).unwrap().dim, e.dim_adlv(&v, &b).unwrap().dim);
        }
    }

    #[test]
    fn full_report_is_self_consistent(name in preset(), word in prop::collection::vec(0usize..3, 0..6)) {
        let e = engine(name);
        let d = e.datum();
        let w = from_word(e, &word);
        let b = e.basic_class(&d.kottwitz(&w)).unwrap();
        let r = e.full_report(&w, &b).unwrap();
        prop_assert_eq!(r.nonempty, !r.dim.is_empty());
        prop_assert_ne!(r.agreement, Some(false));
    }
}
