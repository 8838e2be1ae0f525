use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::*;

fn engine(name: &str, pivot: PivotRule) -> CocenterEngine {
    CocenterEngine::for_datum(
        Arc::new(RootDatum::preset(name).unwrap()),
        Limits::default(),
        pivot,
    )
}

fn el(d: &RootDatum, s: &str) -> AffElt {
    d.parse_element(s).unwrap()
}

fn window(d: &RootDatum, max_len: usize) -> Vec<AffElt> {
    d.pi_one_window(0)
        .iter()
        .flat_map(|k| d.elements_by_length(&d.omega_element(k), max_len).concat())
        .collect()
}

fn z() -> LaurentPoly {
    LaurentPoly::z()
}

#[test]
fn generator_products() {
    let e = engine("SL2", PivotRule::Canonical);
    let d = e.datum();
    let s1 = el(d, "s1");
    assert_eq!(
        generator_product(d, 1, &d.aff_identity(), Side::Left),
        vec![(LaurentPoly::one(), s1.clone())]
    );
    assert_eq!(
        generator_product(d, 1, &s1, Side::Left),
        vec![(z(), s1.clone()), (LaurentPoly::one(), d.aff_identity())]
    );
    let w = el(d, "s0 s1 s0");
    assert_eq!(
        generator_product(d, 0, &w, Side::Left),
        vec![(z(), w.clone()), (LaurentPoly::one(), el(d, "s1 s0"))]
    );
    assert_eq!(
        generator_product(d, 0, &w, Side::Right),
        vec![(z(), w.clone()), (LaurentPoly::one(), el(d, "s0 s1"))]
    );
}

#[test]
fn pgl2_hand_reductions() {
    let e = engine("PGL2", PivotRule::Canonical);
    let d = e.datum().clone();
    let r = e.registry();
    let dec = e.class_polynomials(&el(&d, "s0 s1 s0")).unwrap();
    let c_s1 = r.class_of(&el(&d, "s1")).unwrap();
    let c_t = r.class_of(&el(&d, "t[-2]")).unwrap();
    let polys = dec.polynomials();
    assert_eq!(polys.len(), 2);
    assert_eq!(polys[&c_s1.id], LaurentPoly::one());
    assert_eq!(polys[&c_t.id], z());

    let dec = e.class_polynomials(&el(&d, "t[3] s1")).unwrap();
    let c_tau = r.class_of(&el(&d, "t[1] s1")).unwrap();
    let c_t = r.class_of(&el(&d, "t[-1]")).unwrap();
    let polys = dec.polynomials();
    assert_eq!(polys.len(), 2);
    assert_eq!(polys[&c_tau.id], LaurentPoly::one());
    assert_eq!(polys[&c_t.id], z());
}

#[test]
fn minimal_elements_are_their_own_class() {
    let e = engine("PGL2", PivotRule::Canonical);
    let d = e.datum().clone();
    for w in ["t[1] s1", "1", "s0", "t[-1]"] {
        let w = el(&d, w);
        let dec = e.class_polynomials(&w).unwrap();
        assert_eq!(dec.terms.len(), 1);
        let t = dec.terms.values().next().unwrap();
        assert_eq!(t.poly, LaurentPoly::one());
        assert_eq!(t.class.id, e.registry().class_of(&w).unwrap().id);
    }
}

#[test]
fn pivot_rules_agree() {
    for name in ["SL2", "PGL2", "SL3", "C2"] {
        let a = engine(name, PivotRule::Canonical);
        let b = engine(name, PivotRule::Reversed);
        let c = engine(name, PivotRule::Seeded(7));
        let d = a.datum().clone();
        for w in window(&d, 7) {
            let x = a.class_polynomials(&w).unwrap().polynomials();
            assert_eq!(
                x,
                b.class_polynomials(&w).unwrap().polynomials(),
                "{name} {}",
                d.encode(&w)
            );
            assert_eq!(
                x,
                c.class_polynomials(&w).unwrap().polynomials(),
                "{name} {}",
                d.encode(&w)
            );
        }
    }
}

#[test]
fn positivity_degree_and_specialization() {
    for name in ["SL2", "PGL2", "SL3", "C2", "G2"] {
        let e = engine(name, PivotRule::Canonical);
        let d = e.datum().clone();
        for w in window(&d, 6) {
            let dec = e.class_polynomials(&w).unwrap();
            assert_eq!(dec.total_at_one(), BigInt::one());
            for t in dec.terms.values() {
                assert!(t.poly.is_nonneg_in_z(), "{name}");
                let Degree::Finite(deg) = t.poly.degree() else {
                    panic!("zero term")
                };
                assert!(deg <= d.length(&w) as i64 - t.class.min_length as i64);
                // Parity: ℓ(w) - ℓ(O) - deg is even.
                assert_eq!(
                    (d.length(&w) as i64 - t.class.min_length as i64 - deg) % 2,
                    0
                );
            }
            for s in 0..d.affine_simples().len() {
                let sws = d.conj_by_simple(s, &w);
                if d.length(&sws) == d.length(&w) {
                    assert_eq!(
                        dec.polynomials(),
                        e.class_polynomials(&sws).unwrap().polynomials()
                    );
                }
            }
        }
    }
}

#[test]
fn node_limit_is_enforced() {
    let d = Arc::new(RootDatum::preset("SL3").unwrap());
    let limits = Limits {
        max_nodes: 5,
        ..Limits::default()
    };
    let e = CocenterEngine::for_datum(d.clone(), limits, PivotRule::Canonical);
    let w = el(&d, "s0 s1 s2 s0 s1 s2 s1 s0");
    assert!(matches!(e.class_polynomials(&w), Err(Error::Resource(_))));
}

#[test]
fn pivot_rule_parsing() {
    assert_eq!(
        "canonical".parse::<PivotRule>().unwrap(),
        PivotRule::Canonical
    );
    assert_eq!(
        "reversed".parse::<PivotRule>().unwrap(),
        PivotRule::Reversed
    );
    assert_eq!(
        "seeded:7".parse::<PivotRule>().unwrap(),
        PivotRule::Seeded(7)
    );
    assert!("seeded:x".parse::<PivotRule>().is_err());
    assert_eq!(PivotRule::Seeded(7).to_string(), "seeded:7");
}

#[test]
fn cache_roundtrip_and_conflicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let e = engine("PGL2", PivotRule::Canonical);
    let d = e.datum().clone();
    let decs: Vec<ClassDecomposition> = window(&d, 4)
        .iter()
        .map(|w| e.class_polynomials(w).unwrap())
        .collect();
    let mut cache = CacheFile::open(&path, d.hash()).unwrap();
    assert_eq!(cache.append(&d, &decs).unwrap(), decs.len());
    assert_eq!(cache.append(&d, &decs).unwrap(), 0);

    let reloaded = CacheFile::open(&path, d.hash()).unwrap();
    assert_eq!(reloaded.len(), decs.len());
    let warm = engine("PGL2", PivotRule::Canonical);
    for (key, polys) in reloaded.entries() {
        warm.preload(&d.parse_element(key).unwrap(), polys).unwrap();
    }
    for dec in &decs {
        assert_eq!(warm.class_polynomials(&dec.source).unwrap(), *dec);
    }
    assert_eq!(warm.nodes_used(), 0);

    // Other data sets in the same file are ignored.
    assert!(CacheFile::open(&path, "other").unwrap().is_empty());

    // A line disagreeing with an earlier one is fatal.
    let text = std::fs::read_to_string(&path).unwrap();
    let first = text.lines().next().unwrap();
    let mut rec: CacheRecord = serde_json::from_str(first).unwrap();
    let key = rec.decomposition.keys().next().unwrap().clone();
    rec.decomposition
        .insert(key, vec![(5, serde_json::Value::from(1))]);
    let mut f = std::fs::OpenOptions::new()
        .append(true)
        .open(&path)
        .unwrap();
    use std::io::Write;
    writeln!(f, "{}", serde_json::to_string(&rec).unwrap()).unwrap();
    assert!(matches!(
        CacheFile::open(&path, d.hash()),
        Err(Error::Integrity(_))
    ));
}

#[test]
fn big_coefficients_survive_the_cache_encoding() {
    let p = LaurentPoly::z_pow(70);
    let back = cache::poly_from_json(&cache::poly_to_json(&p)).unwrap();
    assert_eq!(back, p);
}
