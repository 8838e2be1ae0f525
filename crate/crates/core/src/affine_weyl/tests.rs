use std::collections::{HashMap, HashSet, VecDeque};

use super::*;
use crate::linalg::Rat;

fn sl2() -> RootDatum {
    RootDatum::preset("SL2").unwrap()
}

fn pgl2() -> RootDatum {
    RootDatum::preset("PGL2").unwrap()
}

fn el(d: &RootDatum, s: &str) -> AffElt {
    d.parse_element(s).unwrap()
}

/// All elements of length at most `max_len`, over every component of `Ω`.
fn window(d: &RootDatum, max_len: usize) -> Vec<AffElt> {
    d.pi_one_window(1)
        .iter()
        .flat_map(|k| d.elements_by_length(&d.omega_element(k), max_len).concat())
        .collect()
}

/// Word distances in the Cayley graph of `W_a`, by breadth-first search.
fn cayley_distances(d: &RootDatum, max_len: usize) -> HashMap<AffElt, usize> {
    let id = d.aff_identity();
    let mut dist = HashMap::from([(id.clone(), 0)]);
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        let k = dist[&w];
        if k == max_len {
            continue;
        }
        for s in d.affine_simples() {
            let ws = w.mul(s);
            if !dist.contains_key(&ws) {
                dist.insert(ws.clone(), k + 1);
                queue.push_back(ws);
            }
        }
    }
    dist
}

/// Number of affine root hyperplanes separating `A₀` from `w A₀`.
fn separating_hyperplanes(d: &RootDatum, w: &AffElt) -> usize {
    let b = d.barycenter(w);
    d.positive_indices()
        .iter()
        .map(|&p| floor_int(&d.pairing_rat(&b, p)).unsigned_abs() as usize)
        .sum()
}

#[test]
fn semidirect_product_examples() {
    let d = sl2();
    let s0 = el(&d, "s0");
    let s1 = el(&d, "s1");
    assert_eq!(s0, AffElt::new(vec![1], s1.finite.clone()));
    assert!(s0.mul(&s0).is_identity());
    assert_eq!(s1.mul(&s0), AffElt::translation(vec![-1]));
    assert_eq!(d.aff_identity().mul(&s0), s0);
    for w in window(&d, 4) {
        assert!(w.mul(&w.inv()).is_identity());
    }
}

#[test]
fn length_examples() {
    let d = sl2();
    assert_eq!(d.length(&el(&d, "s0")), 1);
    assert_eq!(d.length(&el(&d, "t[3]")), 6);
    let p = pgl2();
    let tau = el(&p, "t[1] s1");
    assert_eq!(p.length(&tau), 0);
    assert!(!p.kottwitz(&tau).is_zero());
    for name in ["SL3", "C2", "G2", "GL3"] {
        let d = RootDatum::preset(name).unwrap();
        for lam in [[2, 1], [1, 0], [0, 3]] {
            let mut v: Vec<i64> = lam.to_vec();
            v.resize(d.rank(), 0);
            let (dom, _) = d.dominant_rep(&crate::root_datum::RationalCoweight::from_lattice(&v));
            let dom = dom.to_lattice().unwrap();
            assert_eq!(
                d.length(&AffElt::translation(dom.clone())) as i64,
                d.two_rho_pairing_int(&dom)
            );
        }
    }
}

#[test]
fn length_matches_gallery_and_cayley_oracles() {
    for name in ["SL2", "PGL2", "SL3", "PGL3", "C2", "Sp4", "G2"] {
        let d = RootDatum::preset(name).unwrap();
        let max = if name == "G2" { 6 } else { 8 };
        let dist = cayley_distances(&d, max);
        for (w, &k) in &dist {
            assert_eq!(d.length(w), k, "{name} {}", d.encode(w));
            assert_eq!(separating_hyperplanes(&d, w), k);
            assert_eq!(d.length(&w.inv()), k);
        }
        for w in window(&d, max) {
            assert_eq!(d.length(&w), separating_hyperplanes(&d, &w));
            assert_eq!(d.length(&w), d.length(&w.inv()));
        }
    }
}

#[test]
fn conjugation_by_simples() {
    let d = sl2();
    let s0s1s0 = el(&d, "s0 s1 s0");
    assert_eq!(d.conj_by_simple(0, &s0s1s0), el(&d, "s1"));
    let x = d.conj_by_simple(1, &el(&d, "s0"));
    assert_eq!(x, AffElt::new(vec![-1], d.simple_reflection(0).clone()));
    assert_eq!(d.length(&x), 3);
    for s in 0..d.affine_simples().len() {
        assert!(d.conj_by_simple(s, &d.aff_identity()).is_identity());
    }
    for name in ["SL2", "PGL2", "SL3", "C2", "G2"] {
        let d = RootDatum::preset(name).unwrap();
        for w in window(&d, 6) {
            for s in 0..d.affine_simples().len() {
                let diff = d.length(&d.conj_by_simple(s, &w)) as i64 - d.length(&w) as i64;
                assert!([-2, 0, 2].contains(&diff));
            }
        }
    }
}

#[test]
fn descents_agree_with_lengths() {
    for name in ["SL3", "PGL2", "C2", "GL2"] {
        let d = RootDatum::preset(name).unwrap();
        for w in window(&d, 5) {
            for (s, se) in d.affine_simples().iter().enumerate() {
                assert_eq!(
                    d.is_affine_left_descent(s, &w),
                    d.length(&se.mul(&w)) < d.length(&w)
                );
                assert_eq!(
                    d.is_affine_right_descent(s, &w),
                    d.length(&w.mul(se)) < d.length(&w)
                );
            }
            let (word, tau) = d.affine_reduced_word(&w);
            assert_eq!(word.len(), d.length(&w));
            assert_eq!(d.length(&tau), 0);
        }
    }
}

#[test]
fn kottwitz_examples_and_homomorphism() {
    let d = sl2();
    assert!(d.kottwitz(&d.aff_identity()).is_zero());
    assert!(d.kottwitz(&el(&d, "t[1]")).is_zero());
    let p = pgl2();
    assert_eq!(p.kottwitz(&el(&p, "t[1] s1")), PiOneElt(vec![1]));
    for name in ["PGL2", "PGL3", "GL2", "SL3"] {
        let d = RootDatum::preset(name).unwrap();
        let wa: HashSet<AffElt> = cayley_distances(&d, 4).into_keys().collect();
        let all = window(&d, 3);
        for a in &all {
            if wa.contains(a) {
                assert!(d.kottwitz(a).is_zero());
            }
            assert_eq!(d.in_affine_weyl(a), d.kottwitz(a).is_zero());
            for b in all.iter().take(20) {
                let sum = d.pi_one().reduce(
                    &d.kottwitz(a)
                        .0
                        .iter()
                        .zip(&d.kottwitz(b).0)
                        .map(|(x, y)| x + y)
                        .collect::<Vec<_>>(),
                );
                assert_eq!(d.kottwitz(&a.mul(b)).0, sum);
            }
        }
    }
}

/// Subword characterisation of the Bruhat order.
fn bruhat_by_subwords(d: &RootDatum, a: &AffElt, b: &AffElt) -> bool {
    let (word, tau) = d.affine_reduced_word(b);
    let n = word.len();
    (0u32..(1 << n)).any(|mask| {
        let mut x = tau.clone();
        for i in (0..n).rev() {
            if mask & (1 << i) != 0 {
                x = d.affine_simples()[word[i]].mul(&x);
            }
        }
        &x == a
    })
}

#[test]
fn bruhat_examples_and_subword_oracle() {
    let d = sl2();
    let w = el(&d, "s0 s1 s0");
    assert!(d.bruhat_leq(&w, &w));
    assert!(d.bruhat_leq(&el(&d, "s1"), &w));
    let p = pgl2();
    assert!(!p.bruhat_leq(&p.aff_identity(), &el(&p, "t[1] s1")));
    for name in ["SL2", "PGL2", "SL3", "C2"] {
        let d = RootDatum::preset(name).unwrap();
        let all = window(&d, 4);
        for a in &all {
            for b in &all {
                assert_eq!(d.bruhat_leq(a, b), bruhat_by_subwords(&d, a, b), "{name}");
            }
        }
    }
}

#[test]
fn alcove_examples() {
    let d = sl2();
    let id = d.aff_identity();
    assert!(d.chamber_of(&id).is_identity());
    assert!(!d.is_shrunken(&id));
    let w = el(&d, "t[2] s1");
    let v = d.pairing_rat(&d.barycenter(&w), 0);
    assert!(v > Rat::from_integer(3) && v < Rat::from_integer(4));
    assert!(d.is_shrunken(&w));
    assert_eq!(d.eta(&w), *d.simple_reflection(0));
    // s0 A₀ is the alcove 1 < <α, x> < 2.
    let s0 = el(&d, "s0");
    assert_eq!(d.pairing_rat(&d.barycenter(&s0), 0), Rat::new(3, 2));
    assert!(d.is_shrunken(&s0));
    for name in ["SL3", "C2", "G2"] {
        let d = RootDatum::preset(name).unwrap();
        for w in window(&d, 6) {
            let b = d.barycenter(&w);
            for &p in d.positive_indices() {
                assert!(!d.pairing_rat(&b, p).is_integer());
            }
            let x = d.chamber_of(&w);
            assert!(d.is_dominant(&crate::root_datum::RationalCoweight(
                x.inverse().apply_rat(&b.0)
            )));
        }
    }
}

#[test]
fn eta_of_dominant_regular_translation() {
    let d = RootDatum::preset("SL3").unwrap();
    let w = AffElt::translation(vec![1, 1]);
    assert!(d.eta2(&w).is_identity());
    assert!(d.eta(&w).is_identity());
}

#[test]
fn dominant_decomposition_examples() {
    let d = sl2();
    let s1 = d.simple_reflection(0).clone();
    let id = d.weyl_identity();
    assert_eq!(
        d.dominant_decomposition(&el(&d, "t[2]")),
        (id.clone(), vec![2], id.clone())
    );
    assert_eq!(
        d.dominant_decomposition(&el(&d, "s0")),
        (id.clone(), vec![1], s1.clone())
    );
    assert_eq!(
        d.dominant_decomposition(&el(&d, "s1 s0 s1")),
        (s1, vec![1], id)
    );
}

#[test]
fn dominant_decomposition_is_unique() {
    for name in ["SL2", "PGL2", "SL3", "PGL3", "C2", "G2"] {
        let d = RootDatum::preset(name).unwrap();
        let weyl = d.weyl_elements().unwrap();
        for w in window(&d, 6) {
            let (x, mu, y) = d.dominant_decomposition(&w);
            let t = AffElt::translation(mu.clone());
            let xa = AffElt::from_finite(x.clone());
            let ya = AffElt::from_finite(y.clone());
            assert_eq!(xa.mul(&t).mul(&ya), w);
            assert_eq!(d.eta(&w), y.compose(&x));
            let valid: Vec<&crate::root_datum::WeylElt> = weyl
                .iter()
                .filter(|x| {
                    let xinv = x.inverse();
                    let rest = AffElt::new(xinv.apply(&w.translation), xinv.compose(&w.finite));
                    d.is_dominant(&d.barycenter(&rest))
                })
                .collect();
            assert_eq!(valid, vec![&x]);
        }
    }
}

#[test]
fn encoding_roundtrip() {
    for name in ["SL2", "PGL2", "SL3", "C2", "G2", "GL3"] {
        let d = RootDatum::preset(name).unwrap();
        for w in window(&d, 4) {
            let e = d.encode(&w);
            assert_eq!(d.parse_element(&e).unwrap(), w, "{e}");
            assert_eq!(d.parse_element(&d.word_string(&w)).unwrap(), w);
        }
    }
    let d = sl2();
    assert_eq!(d.encode(&d.aff_identity()), "t[0].u[]");
    assert_eq!(d.encode(&el(&d, "s0")), "t[1].u[1]");
    assert_eq!(el(&d, "t[ 1 ] s1"), el(&d, "s0"));
    assert!(d.parse_element("s7").is_err());
    assert!(d.parse_element("t[1,2]").is_err());
    assert!(d.parse_element("t[1").is_err());
}
