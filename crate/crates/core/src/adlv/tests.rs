use super::*;

fn engine(name: &str) -> AdlvEngine {
    AdlvEngine::for_datum(
        Arc::new(RootDatum::preset(name).unwrap()),
        Limits::default(),
    )
}

fn el(e: &AdlvEngine, s: &str) -> AffElt {
    e.datum().parse_element(s).unwrap()
}

fn sigma(e: &AdlvEngine, s: &str) -> Arc<SigmaClass> {
    e.sigma_class_of(&el(e, s)).unwrap()
}

fn inv(e: &AdlvEngine, s: &str) -> ClassInvariant {
    crate::conjugacy::parse_invariant(e.datum(), s).unwrap()
}

#[test]
fn sigma_classes() {
    let e = engine("SL2");
    let one = e
        .sigma_class_from_invariant(&inv(&e, "kappa=[] nu=[0]"))
        .unwrap();
    assert!(one.basic);
    assert_eq!(one.defect, 0);
    assert!(one.straight_class.rep.is_identity());
    let b = sigma(&e, "t[1]");
    assert!(!b.basic);
    assert_eq!(b.defect, 0);
    assert_eq!(b.straight_class.min_length, 2);
    assert_eq!(*sigma(&e, "t[-1]"), *b);

    let e = engine("PGL2");
    let tau = e.basic_class(&PiOneElt(vec![1])).unwrap();
    assert!(tau.basic);
    assert_eq!(tau.defect, 1);
    assert!(e
        .sigma_class_from_invariant(&ClassInvariant {
            kappa: PiOneElt(vec![1]),
            newton: RationalCoweight::zero(1),
        })
        .is_ok());
}

#[test]
fn non_image_invariant() {
    let e = engine("PGL2");
    // κ = 0 forces ν ∈ Z α∨ up to averaging; ν = ϖ∨/1 has κ 1.
    let bad = ClassInvariant {
        kappa: PiOneElt(vec![0]),
        newton: RationalCoweight::from_lattice(&[1]),
    };
    assert!(matches!(
        e.sigma_class_from_invariant(&bad),
        Err(Error::NotInImage(_))
    ));
}

#[test]
fn gl_defects() {
    for n in 1..=4usize {
        let e = engine(&format!("GL{n}"));
        for k in -(n as i64)..=(n as i64) {
            let b = e.basic_class(&PiOneElt(vec![k])).unwrap();
            let g = num_integer::gcd(n as i64, k) as usize;
            assert_eq!(b.defect, n - g, "GL{n} κ={k}");
        }
    }
}

#[test]
fn bg_order() {
    let e = engine("SL3");
    let one = sigma(&e, "1");
    let a = sigma(&e, "t[1,0]");
    let rho = sigma(&e, "t[2,2]");
    assert!(e.bg_leq(&one, &a));
    assert!(e.bg_leq(&a, &rho));
    assert!(!e.bg_leq(&rho, &a));
    for (x, y) in [(&one, &a), (&a, &rho), (&rho, &a), (&one, &rho)] {
        assert_eq!(e.bg_leq(x, y), e.bg_leq_bruhat(x, y).unwrap());
    }
}

#[test]
fn dimension_examples() {
    let e = engine("PGL2");
    let w = el(&e, "s0 s1 s0");
    let one = sigma(&e, "1");
    let r = e.dim_adlv(&w, &one).unwrap();
    assert_eq!(r.dim, Dim::int(2));
    let b = sigma(&e, "t[2]");
    let r = e.dim_adlv(&w, &b).unwrap();
    assert_eq!(r.dim, Dim::int(1));
    assert_eq!(r.terms.len(), 1);
    assert_eq!(r.terms[0].deg_f, 1);

    let e = engine("SL2");
    let r = e.dim_adlv(&el(&e, "t[1]"), &sigma(&e, "1")).unwrap();
    assert!(!r.nonempty);
    assert!(r.terms.is_empty());
}

#[test]
fn minimal_length_examples() {
    let e = engine("PGL2");
    let tau = el(&e, "t[1].u[1]");
    let b = e.sigma_class_of(&tau).unwrap();
    assert_eq!(e.dim_min_length(&tau, &b).unwrap().dim, Dim::int(0));
    let s0 = el(&e, "s0");
    assert_eq!(
        e.dim_min_length(&s0, &sigma(&e, "1")).unwrap().dim,
        Dim::int(1)
    );
    let t = el(&e, "t[-2]");
    assert_eq!(
        e.dim_min_length(&t, &sigma(&e, "t[2]")).unwrap().dim,
        Dim::int(0)
    );
    assert!(matches!(
        e.dim_min_length(&el(&e, "s0 s1 s0"), &sigma(&e, "1")),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn parabolic_counts() {
    assert_eq!(engine("SL2").semistandard_parabolics().unwrap().len(), 3);
    assert_eq!(engine("SL3").semistandard_parabolics().unwrap().len(), 13);
    let ps = engine("Sp4").semistandard_parabolics().unwrap().len();
    // G, 8 Borels, two W-orbits of rank-one Levis with 2 roots each giving 2·2·2.
    assert_eq!(ps, 1 + 8 + 8);
}

#[test]
fn p_alcove_examples() {
    let e = engine("SL2");
    let d = e.datum().clone();
    let ps = e.semistandard_parabolics().unwrap();
    let t = el(&e, "t[1]");
    let alpha = d.simple_indices()[0];
    let minus = d.negative_of(alpha);
    let borel = |r: usize| ps.iter().find(|p| p.n_roots == vec![r]).unwrap();
    assert!(e.is_p_alcove(&t, borel(minus)));
    assert!(!e.is_p_alcove(&t, borel(alpha)));
    let s1 = el(&e, "s1");
    assert!(!e.is_p_alcove(&s1, borel(alpha)));
    assert!(!e.is_p_alcove(&s1, borel(minus)));
    let g = ps.iter().find(|p| p.is_whole_group()).unwrap();
    assert!(e.is_p_alcove(&s1, g));

    assert!(!e.basic_nonempty_via_alcoves(&t, &sigma(&e, "1")).unwrap());
    let e = engine("PGL2");
    let tau = el(&e, "t[1].u[1]");
    assert!(e
        .basic_nonempty_via_alcoves(&tau, &e.sigma_class_of(&tau).unwrap())
        .unwrap());
    assert!(!e.basic_nonempty_via_alcoves(&tau, &sigma(&e, "1")).unwrap());
    assert!(matches!(
        e.basic_nonempty_via_alcoves(&tau, &sigma(&e, "t[2]")),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn shrunken_examples() {
    let e = engine("PGL2");
    let w = el(&e, "t[4].u[1]");
    assert_eq!(w, el(&e, "s0 s1 s0"));
    let one = sigma(&e, "1");
    assert!(e.shrunken_nonempty(&w, &one).unwrap());
    assert_eq!(e.shrunken_dim(&w, &one).unwrap(), Dim::int(2));
    assert_eq!(e.dim_adlv(&w, &one).unwrap().dim, Dim::int(2));

    let w = el(&e, "t[3].u[1]");
    let tau = e.basic_class(&PiOneElt(vec![1])).unwrap();
    assert_eq!(e.shrunken_dim(&w, &tau).unwrap(), Dim::int(1));
    assert_eq!(e.dim_adlv(&w, &tau).unwrap().dim, Dim::int(1));
    assert!(!e.shrunken_nonempty(&w, &one).unwrap());
}

#[test]
fn longest_coset_examples() {
    let e = engine("SL2");
    let one = sigma(&e, "1");
    let b = sigma(&e, "t[1]");
    let c = e.longest_coset_case(&[1], &one).unwrap();
    assert_eq!(c.w, el(&e, "s1 s0 s1"));
    assert_eq!((c.formula, c.agree), (Dim::int(2), true));
    let c = e.longest_coset_case(&[1], &b).unwrap();
    assert_eq!((c.formula, c.agree), (Dim::int(1), true));
    let c = e.longest_coset_case(&[0], &one).unwrap();
    assert_eq!((c.formula, c.agree), (Dim::int(1), true));
    assert!(matches!(
        e.longest_coset_case(&[-1], &one),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn split_b_pins() {
    let e = engine("SL2");
    let d = e.datum().clone();
    let s1 = d.simple_reflection(0);
    let id = d.weyl_identity();
    let r = e.split_b_checker(s1, &id, &[0], &[1]).unwrap();
    let v = &r.variants[0];
    assert_eq!(v.w, el(&e, "s1 s0 s1"));
    assert_eq!(
        (v.formula, v.oracle, v.agree),
        (Dim::int(2), Dim::int(2), true)
    );
    let r = e.split_b_checker(&id, s1, &[0], &[1]).unwrap();
    let v = &r.variants[0];
    assert_eq!(v.w, el(&e, "s0"));
    assert_eq!(
        (v.formula, v.oracle, v.agree),
        (Dim::int(2), Dim::int(1), false)
    );
    assert_eq!(r.variants.len(), 4);
}

#[test]
fn ghkr_identity_comparison() {
    let e = engine("SL2");
    let one = sigma(&e, "1");
    let scan = e.ghkr_scan(&one, &one, 5).unwrap();
    assert!(scan.rows.iter().all(|r| r.agree));
    assert_eq!(scan.agreement_from, 0);
    let b = sigma(&e, "t[1]");
    let scan = e.ghkr_scan(&b, &one, 6).unwrap();
    assert_eq!(scan.rows.len(), 1 + 2 * 6);
}

#[test]
fn full_report_agrees() {
    let e = engine("PGL2");
    let one = sigma(&e, "1");
    let r = e.full_report(&el(&e, "s0 s1 s0"), &one).unwrap();
    assert_eq!(r.agreement, Some(true));
    assert!(r.methods.shrunken.is_some());
    assert!(r.methods.p_alcove.is_some());
    let j = r.to_json();
    assert_eq!(j["dim"], 2);
    assert_eq!(j["b"]["nu"][0], "0");
    assert_eq!(
        r.csv_row().split(',').count(),
        csv_header().split(',').count()
    );
}

#[test]
fn split_b_thresholds() {
    let e = engine("SL2");
    let d = e.datum().clone();
    let s1 = d.simple_reflection(0);
    let th = e
        .split_b_thresholds(&d.weyl_identity(), s1, &[0], 3)
        .unwrap();
    assert_eq!(th.len(), 4);
    for t in &th {
        let expected = if t.assembly == "x t y" { None } else { Some(1) };
        assert_eq!(t.from, expected, "{t:?}");
    }
}

#[test]
fn split_b_reference_formula_matches_oracle() {
    for name in ["SL2", "PGL2", "SL3", "C2", "G2-sc"] {
        let e = engine(name);
        let d = e.datum().clone();
        let ws = d.weyl_elements().unwrap();
        let lambda = d.two_rho_coroot_sum();
        for mu in e.dominant_coweights(2).unwrap() {
            for x in ws {
                for y in ws {
                    let r = e.split_b_checker(x, y, &mu, &lambda).unwrap();
                    assert!(r.reference.agree, "{name} mu={mu:?} {:?}", r.reference);
                }
            }
        }
    }
}
