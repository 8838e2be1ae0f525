//! Exhaustive cross-check suites over small windows. Shared by the
//! `selfcheck` command and the acceptance test target.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::adlv::{AdlvEngine, Dim, SigmaClass};
use crate::affine_weyl::{AffElt, PiOneElt};
use crate::error::{Error, Result};
use crate::hecke_cocenter::{CocenterEngine, Degree, PivotRule};
use crate::limits::Limits;
use crate::linalg::Rat;
use crate::root_datum::RootDatum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Criterion::C1,
        Criterion::C2,
        Criterion::C3,
        Criterion::C4,
        Criterion::C5,
        Criterion::C6,
        Criterion::C7,
        Criterion::C8,
        Criterion::C9,
        Criterion::C10,
    ];

    pub fn title(self) -> &'static str {
        match self {
            Criterion::C1 => "class polynomials independent of pivot rule",
            Criterion::C2 => "shrunken route matches dimension formula",
            Criterion::C3 => "minimal-length route matches dimension formula",
            Criterion::C4 => "longest-coset route matches dimension formula",
            Criterion::C5 => "straight classes biject with invariants",
            Criterion::C6 => "class polynomial positivity and degree bounds",
            Criterion::C7 => "Bruhat order on straight classes matches invariant order",
            Criterion::C8 => "defect matches GL_n cycle oracle",
            Criterion::C9 => "P-alcove criterion matches emptiness",
            Criterion::C10 => "report-only scanners: pinned rows and table shape",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown criterion {s:?}")))
    }
}

/// Bounds of the checked windows.
#[derive(Clone, Debug)]
pub struct Window {
    pub presets: Vec<String>,
    /// Maximal `ℓ(w)` for suites ranging over elements.
    pub max_len: usize,
    /// Maximal `<ν, 2ρ>` for straight classes and classes `b`.
    pub nu_bound: usize,
    /// Maximal `<μ, 2ρ>` in the longest-coset suite.
    pub mu_bound: i64,
    /// GL_n presets checked by the defect suite.
    pub gl_max: usize,
    pub ghkr_len: usize,
    pub limits: Limits,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            presets: ["SL2", "PGL2", "SL3", "C2"].map(String::from).to_vec(),
            max_len: 10,
            nu_bound: 10,
            mu_bound: 8,
            gl_max: 5,
            ghkr_len: 10,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub criterion: Criterion,
    pub checks: usize,
    /// Number of failed checks; only the first few are kept in `failures`.
    pub failed: usize,
    pub failures: Vec<String>,
    /// Checks whose outcome is not forced, e.g. nonempty varieties or strict
    /// order relations; a suite with none of these is vacuous.
    pub nontrivial: usize,
    /// Informational lines, such as observed thresholds of report-only scans.
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// `C1 PASS ...` or `C1 FAIL ...`, one line.
    pub fn summary(&self) -> String {
        format!(
            "{} {} {} ({} checks, {} nontrivial, {} failed, {:.1}s)",
            self.criterion,
            if self.passed() { "PASS" } else { "FAIL" },
            self.criterion.title(),
            self.checks,
            self.nontrivial,
            self.failed,
            self.elapsed.as_secs_f64()
        )
    }
}

const KEPT_FAILURES: usize = 20;

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
    nontrivial: usize,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.checks += other.checks;
        self.nontrivial += other.nontrivial;
        self.failed += other.failed;
        let room = KEPT_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self.notes.extend(other.notes);
    }
}

/// Runs suites against lazily built per-preset engines.
pub struct Selfcheck {
    window: Window,
    engines: Mutex<HashMap<String, Arc<AdlvEngine>>>,
}

impl Selfcheck {
    pub fn new(window: Window) -> Self {
        Selfcheck {
            window,
            engines: Mutex::new(HashMap::new()),
        }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    fn engine(&self, preset: &str) -> Result<Arc<AdlvEngine>> {
        if let Some(e) = self.engines.lock().unwrap().get(preset) {
            return Ok(e.clone());
        }
        let d = Arc::new(RootDatum::preset(preset)?);
        let e = Arc::new(AdlvEngine::for_datum(d, self.window.limits));
        Ok(self
            .engines
            .lock()
            .unwrap()
            .entry(preset.to_string())
            .or_insert(e)
            .clone())
    }

    pub fn run(&self, c: Criterion) -> Outcome {
        let start = Instant::now();
        let mut t = Tally::default();
        let res = match c {
            Criterion::C1 => self.pivot_independence(&mut t),
            Criterion::C2 => self.shrunken_route(&mut t),
            Criterion::C3 => self.min_length_route(&mut t),
            Criterion::C4 => self.longest_coset_route(&mut t),
            Criterion::C5 => self.straight_bijection(&mut t),
            Criterion::C6 => self.positivity(&mut t),
            Criterion::C7 => self.order_equivalence(&mut t),
            Criterion::C8 => self.defects(&mut t),
            Criterion::C9 => self.p_alcove_route(&mut t),
            Criterion::C10 => self.scanners(&mut t),
        };
        if let Err(e) = res {
            t.check(false, || format!("aborted: {e}"));
        }
        Outcome {
            criterion: c,
            checks: t.checks,
            failed: t.failed,
            failures: t.failures,
            nontrivial: t.nontrivial,
            notes: t.notes,
            elapsed: start.elapsed(),
        }
    }

    pub fn run_all(&self) -> Vec<Outcome> {
        Criterion::ALL.iter().map(|&c| self.run(c)).collect()
    }

    /// Every element of length `≤ max_len`, over all Kottwitz components in
    /// the torsion window.
    fn elements(&self, e: &AdlvEngine, max_len: usize) -> Result<Vec<AffElt>> {
        let mut out = Vec::new();
        for kappa in e.datum().pi_one_window(0) {
            let levels = e.registry().coset_levels(&kappa, max_len)?;
            out.extend(levels.iter().flatten().cloned());
        }
        Ok(out)
    }

    fn basic_classes(&self, e: &AdlvEngine) -> Result<Vec<Arc<SigmaClass>>> {
        e.datum()
            .pi_one_window(0)
            .iter()
            .map(|k| e.basic_class(k))
            .collect()
    }

    /// σ-classes whose straight class has `<ν, 2ρ> ≤ bound`.
    fn sigma_classes(&self, e: &AdlvEngine, bound: usize) -> Result<Vec<Arc<SigmaClass>>> {
        e.registry()
            .straight_classes(bound, 0)?
            .iter()
            .map(|c| e.sigma_class_from_invariant(&c.invariant))
            .collect()
    }

    /// Runs `f` over `items` in parallel, merging tallies in item order.
    fn par_check<T: Sync>(
        &self,
        t: &mut Tally,
        items: &[T],
        f: impl Fn(&T, &mut Tally) -> Result<()> + Sync,
    ) -> Result<()> {
        let parts = items
            .par_iter()
            .map(|x| {
                let mut local = Tally::default();
                f(x, &mut local).map(|_| local)
            })
            .collect::<Result<Vec<_>>>()?;
        for p in parts {
            t.absorb(p);
        }
        Ok(())
    }

    fn pivot_independence(&self, t: &mut Tally) -> Result<()> {
        for name in &self.window.presets {
            let e = self.engine(name)?;
            let d = e.datum().clone();
            let others: Vec<CocenterEngine> = [PivotRule::Reversed, PivotRule::Seeded(7)]
                .into_iter()
                .map(|p| CocenterEngine::new(e.registry().clone(), p))
                .collect();
            let elements = self.elements(&e, self.window.max_len)?;
            self.par_check(t, &elements, |w, t| {
                let base = e.cocenter().class_polynomials(w)?.polynomials();
                t.nontrivial += usize::from(base.len() > 1);
                for o in &others {
                    let other = o.class_polynomials(w)?.polynomials();
                    t.check(base == other, || {
                        format!("{name} {}: pivot {} differs", d.encode(w), o.pivot())
                    });
                }
                Ok(())
            })?;
        }
        Ok(())
    }

    fn shrunken_route(&self, t: &mut Tally) -> Result<()> {
        for name in &self.window.presets {
            let e = self.engine(name)?;
            let d = e.datum().clone();
            let basics = self.basic_classes(&e)?;
            let shrunken: Vec<AffElt> = self
                .elements(&e, self.window.max_len)?
                .into_iter()
                .filter(|w| d.is_shrunken(w))
                .collect();
            self.par_check(t, &shrunken, |w, t| {
                for b in &basics {
                    let oracle = e.dim_adlv(w, b)?;
                    let nonempty = e.shrunken_nonempty(w, b)?;
                    let dim = e.shrunken_dim(w, b)?;
                    t.nontrivial += usize::from(oracle.nonempty);
                    t.check(nonempty == oracle.nonempty && dim == oracle.dim, || {
                        format!(
                            "{name} w={} b=({}): shrunken {dim} vs formula {}",
                            d.encode(w),
                            b.invariant,
                            oracle.dim
                        )
                    });
                }
                Ok(())
            })?;
        }
        if self.window.presets.iter().any(|p| p == "PGL2") {
            let e = self.engine("PGL2")?;
            let d = e.datum().clone();
            let one = e.basic_class(&PiOneElt(vec![0]))?;
            let tau = e.basic_class(&PiOneElt(vec![1]))?;
            for (w, b, want) in [("s0 s1 s0", &one, 2), ("t[3] s1", &tau, 1)] {
                let w = d.parse_element(w)?;
                let route = e.shrunken_dim(&w, b)?;
                let oracle = e.dim_adlv(&w, b)?.dim;
                t.check(route == Dim::int(want) && oracle == Dim::int(want), || {
                    format!(
                        "PGL2 pinned {}: route {route}, formula {oracle}, expected {want}",
                        d.encode(&w)
                    )
                });
            }
        }
        Ok(())
    }

    fn min_length_route(&self, t: &mut Tally) -> Result<()> {
        for name in &self.window.presets {
            let e = self.engine(name)?;
            let d = e.datum().clone();
            let classes = self.sigma_classes(&e, self.window.nu_bound)?;
            let minimal: Vec<AffElt> = self
                .elements(&e, self.window.max_len)?
                .into_iter()
                .filter(|w| d.is_minimal(w))
                .collect();
            self.par_check(t, &minimal, |w, t| {
                let own = e.sigma_class_of(w)?;
                let mut bs: Vec<&SigmaClass> = classes.iter().map(|b| b.as_ref()).collect();
                if !classes.iter().any(|b| b.invariant == own.invariant) {
                    bs.push(&own);
                }
                for b in bs {
                    let route = e.dim_min_length(w, b)?.dim;
                    let oracle = e.dim_adlv(w, b)?.dim;
                    t.nontrivial += usize::from(!oracle.is_empty());
                    t.check(route == oracle, || {
                        format!(
                            "{name} w={} b=({}): route {route} vs formula {oracle}",
                            d.encode(w),
                            b.invariant
                        )
                    });
                }
                Ok(())
            })?;
        }
        if self.window.presets.iter().any(|p| p == "SL2") {
            let e = self.engine("SL2")?;
            let d = e.datum().clone();
            let one = e.basic_class(&PiOneElt(vec![]))?;
            for (w, want) in [("t[1]", Dim::NegInfinity), ("s0", Dim::int(1))] {
                let w = d.parse_element(w)?;
                let route = e.dim_min_length(&w, &one)?.dim;
                let oracle = e.dim_adlv(&w, &one)?.dim;
                t.check(route == want && oracle == want, || {
                    format!(
                        "SL2 pinned {}: route {route}, formula {oracle}, expected {want}",
                        d.encode(&w)
                    )
                });
            }
        }
        Ok(())
    }

    fn longest_coset_route(&self, t: &mut Tally) -> Result<()> {
        for name in &self.window.presets {
            let e = self.engine(name)?;
            let d = e.datum().clone();
            if d.rank() != d.semisimple_rank() {
                continue;
            }
            let classes = self.sigma_classes(&e, self.window.mu_bound as usize)?;
            let mus = e.dominant_coweights(self.window.mu_bound)?;
            let pairs: Vec<(&Vec<i64>, &Arc<SigmaClass>)> = mus
                .iter()
                .flat_map(|m| classes.iter().map(move |b| (m, b)))
                .collect();
            self.par_check(t, &pairs, |(mu, b), t| {
                let c = e.longest_coset_case(mu, b)?;
                t.nontrivial += usize::from(!c.oracle.is_empty());
                t.check(c.agree, || {
                    format!(
                        "{name} mu={mu:?} b=({}): route {} vs formula {}",
                        b.invariant, c.formula, c.oracle
                    )
                });
                Ok(())
            })?;
        }
        if self.window.presets.iter().any(|p| p == "SL2") {
            let e = self.engine("SL2")?;
            let one = e.basic_class(&PiOneElt(vec![]))?;
            let b = e.sigma_class_of(&AffElt::translation(vec![1]))?;
            for (b, want) in [(&one, 2), (&b, 1)] {
                let c = e.longest_coset_case(&[1], b)?;
                t.check(
                    c.formula == Dim::int(want) && c.oracle == Dim::int(want),
                    || {
                        format!(
                            "SL2 pinned b=({}): route {}, formula {}, expected {want}",
                            b.invariant, c.formula, c.oracle
                        )
                    },
                );
            }
        }
        Ok(())
    }

    fn straight_bijection(&self, t: &mut Tally) -> Result<()> {
        for name in &self.window.presets {
            let e = self.engine(name)?;
            let d = e.datum().clone();
            let bound = self.window.nu_bound;
            let straight = e.registry().straight_classes(bound, 0)?;
            let mut hits: BTreeMap<String, Vec<&str>> = BTreeMap::new();
            for c in &straight {
                t.check(
                    d.class_invariant(&c.rep) == c.invariant && d.is_straight(&c.rep),
                    || format!("{name} {}: representative not straight", c.id),
                );
                hits.entry(c.invariant.to_string()).or_default().push(&c.id);
            }
            for (inv, ids) in &hits {
                t.check(ids.len() == 1, || {
                    format!("{name} invariant {inv} hit by {ids:?}")
                });
            }
            let limit = Rat::from_integer(bound as i64);
            for c in e
                .registry()
                .enumerate_classes(self.window.max_len.max(bound), 0)?
            {
                if d.two_rho_pairing(&c.invariant.newton) > limit {
                    continue;
                }
                let n = hits.get(&c.invariant.to_string()).map_or(0, Vec::len);
                t.check(n == 1, || {
                    format!("{name} invariant of {} hit by {n} straight classes", c.id)
                });
            }
        }
        let e = self.engine("SL2")?;
        let d = e.datum().clone();
        let a = e.registry().class_of(&d.parse_element("s0")?)?;
        let b = e.registry().class_of(&d.parse_element("s1")?)?;
        t.check(
            a.id != b.id && a.invariant == b.invariant && !a.straight,
            || "SL2 s0 and s1 not detected as distinct classes with equal invariant".into(),
        );
        Ok(())
    }

    fn positivity(&self, t: &mut Tally) -> Result<()> {
        for name in &self.window.presets {
            let e = self.engine(name)?;
            let d = e.datum().clone();
            let elements = self.elements(&e, self.window.max_len)?;
            self.par_check(t, &elements, |w, t| {
                let dec = e.cocenter().class_polynomials(w)?;
                let lw = d.length(w) as i64;
                for (id, term) in &dec.terms {
                    t.check(term.poly.is_nonneg_in_z(), || {
                        format!(
                            "{name} {} -> {id}: {} not in N[v - v^-1]",
                            d.encode(w),
                            term.poly
                        )
                    });
                    let bound = lw - term.class.min_length as i64;
                    t.check(term.poly.degree() <= Degree::Finite(bound), || {
                        format!("{name} {} -> {id}: degree above {bound}", d.encode(w))
                    });
                }
                t.check(dec.total_at_one() == BigInt::one(), || {
                    format!(
                        "{name} {}: sum at v = 1 is {}",
                        d.encode(w),
                        dec.total_at_one()
                    )
                });
                Ok(())
            })?;
        }
        Ok(())
    }

    fn order_equivalence(&self, t: &mut Tally) -> Result<()> {
        for name in &self.window.presets {
            let e = self.engine(name)?;
            let d = e.datum().clone();
            let straight = e.registry().straight_classes(self.window.nu_bound, 0)?;
            let pairs: Vec<(usize, usize)> = (0..straight.len())
                .flat_map(|i| (0..straight.len()).map(move |j| (i, j)))
                .collect();
            self.par_check(t, &pairs, |&(i, j), t| {
                let (a, b) = (&straight[i], &straight[j]);
                let bruhat = e.registry().straight_class_leq(a, b)?;
                let inv = d.invariant_leq(&a.invariant, &b.invariant);
                t.nontrivial += usize::from(i != j && bruhat);
                t.check(bruhat == inv, || {
                    format!(
                        "{name} {} vs {}: Bruhat {bruhat}, invariants {inv}",
                        a.id, b.id
                    )
                });
                Ok(())
            })?;
        }
        Ok(())
    }

    fn defects(&self, t: &mut Tally) -> Result<()> {
        for n in 1..=self.window.gl_max {
            let e = self.engine(&format!("GL{n}"))?;
            let n = n as i64;
            for k in -n..=n {
                let b = e.basic_class(&PiOneElt(vec![k]))?;
                let want = (n - num_integer::gcd(n, k)) as usize;
                t.check(b.defect == want, || {
                    format!("GL{n} kappa={k}: defect {} expected {want}", b.defect)
                });
            }
            for lambda in [vec![1], vec![2, 0], vec![1, 0, -1], vec![3, 1]] {
                let mut l = lambda.clone();
                l.resize(n as usize, 0);
                let b = e.sigma_class_of(&AffElt::translation(l.clone()))?;
                t.check(b.defect == 0, || {
                    format!("GL{n} t{l:?}: defect {}", b.defect)
                });
            }
        }
        for name in &self.window.presets {
            let e = self.engine(name)?;
            if e.datum().rank() != e.datum().semisimple_rank() {
                continue;
            }
            for mu in e.dominant_coweights(self.window.mu_bound)? {
                let b = e.sigma_class_of(&AffElt::translation(mu.clone()))?;
                t.check(b.defect == 0, || {
                    format!("{name} t{mu:?}: defect {}", b.defect)
                });
            }
        }
        Ok(())
    }

    fn p_alcove_route(&self, t: &mut Tally) -> Result<()> {
        for name in &self.window.presets {
            let e = self.engine(name)?;
            let d = e.datum().clone();
            let basics = self.basic_classes(&e)?;
            let elements = self.elements(&e, self.window.max_len)?;
            self.par_check(t, &elements, |w, t| {
                for b in &basics {
                    let oracle = e.dim_adlv(w, b)?;
                    if oracle.nonempty {
                        t.nontrivial += 1;
                        for (p, ok) in e.p_alcove_clauses(w, b)? {
                            t.check(ok, || {
                                format!(
                                    "{name} w={} b=({}): clause J={:?} v=\"{}\" fails on a nonempty variety",
                                    d.encode(w),
                                    b.invariant,
                                    p.j,
                                    d.word_string(&AffElt::from_finite(p.witness.clone()))
                                )
                            });
                        }
                    }
                    let route = e.basic_nonempty_via_alcoves(w, b)?;
                    t.check(route == oracle.nonempty, || {
                        format!("{name} w={} b=({}): alcoves {route}, formula {}", d.encode(w), b.invariant, oracle.nonempty)
                    });
                }
                Ok(())
            })?;
        }
        Ok(())
    }

    fn scanners(&self, t: &mut Tally) -> Result<()> {
        let e = self.engine("SL2")?;
        let d = e.datum().clone();
        let s1 = d.simple_reflection(0);
        let id = d.weyl_identity();
        let agree = e.split_b_checker(s1, &id, &[0], &[1])?;
        let v = &agree.variants[0];
        t.check(
            agree.variants.len() == 4
                && v.w == d.parse_element("s1 s0 s1")?
                && v.formula == Dim::int(2)
                && v.oracle == Dim::int(2)
                && v.agree,
            || format!("split b (s1, 1): {v:?}"),
        );
        let disagree = e.split_b_checker(&id, s1, &[0], &[1])?;
        let v = &disagree.variants[0];
        t.check(
            disagree.variants.len() == 4
                && v.w == d.parse_element("s0")?
                && v.formula == Dim::int(2)
                && v.oracle == Dim::int(1)
                && !v.agree,
            || format!("split b (1, s1): {v:?}"),
        );
        for th in e.split_b_thresholds(&id, s1, &[0], 4)? {
            let from = th.from.map_or("never".to_string(), |k| format!("k = {k}"));
            t.notes.push(format!(
                "split b (1, s1, 0, k·2ρ∨), k ≤ 4, {} with chamber on {}: agrees from {from}",
                th.assembly, th.chamber_on
            ));
        }
        let r = &disagree.reference;
        t.notes.push(format!(
            "split b (1, s1) with -ℓ(y): formula {} oracle {}",
            r.formula, r.oracle
        ));

        let basic = e.basic_class(&PiOneElt(vec![]))?;
        let b = e.sigma_class_of(&AffElt::translation(vec![1]))?;
        let len = self.window.ghkr_len;
        let scan = e.ghkr_scan(&b, &basic, len)?;
        t.check(scan.rows.len() == 1 + 2 * len, || {
            format!("ghkr scan has {} rows", scan.rows.len())
        });
        let offset = d.two_rho_pairing(&b.invariant.newton) / 2;
        for r in &scan.rows {
            let predicted = match r.dim_basic {
                Dim::Finite(x) => Dim::Finite(x - offset),
                Dim::NegInfinity => Dim::NegInfinity,
            };
            t.check(
                r.length == d.length(&r.w)
                    && r.length <= len
                    && r.predicted == predicted
                    && r.agree == (r.dim_b == r.predicted),
                || format!("malformed ghkr row {r:?}"),
            );
        }
        t.check(scan.agreement_from <= len + 1, || {
            "ghkr threshold out of range".into()
        });
        t.notes.push(format!(
            "ghkr SL2 b=({}) vs basic: {} rows, agreement from length {}",
            b.invariant,
            scan.rows.len(),
            scan.agreement_from
        ));
        Ok(())
    }
}
