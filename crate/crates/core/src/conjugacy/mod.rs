//! Newton points, the invariant `f = (κ, ν)`, straight elements, reduction to
//! minimal length, exact conjugacy, and enumeration of conjugacy classes.

mod registry;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::affine_weyl::{AffElt, PiOneElt};
use crate::linalg::{self, LatticeQuotient, Rat};
use crate::root_datum::{RationalCoweight, RootDatum};

pub use registry::{ClassRegistry, ConjClass};

/// `f(w) = (κ(w), ν_w)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ClassInvariant {
    pub kappa: PiOneElt,
    pub newton: RationalCoweight,
}

impl fmt::Display for ClassInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kappa={} nu={}", self.kappa, self.newton)
    }
}

/// One step of a reduction: conjugating `element` by the affine simple
/// `simple` changes the length by `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub element: AffElt,
    pub simple: usize,
    pub delta: i64,
}

/// Breadth-first exploration of the length-preserving simple-conjugation orbit.
pub(crate) struct OrbitSearch {
    pub members: Vec<AffElt>,
    parent: HashMap<AffElt, Option<(AffElt, usize)>>,
    /// First member, in discovery order, with a strictly length-reducing
    /// simple conjugation.
    pub descent: Option<(AffElt, usize)>,
}

impl OrbitSearch {
    /// Steps leading from the start of the search to `target`.
    fn path_to(&self, target: &AffElt) -> Vec<Step> {
        let mut steps = Vec::new();
        let mut cur = target.clone();
        while let Some(Some((prev, s))) = self.parent.get(&cur) {
            steps.push(Step {
                element: prev.clone(),
                simple: *s,
                delta: 0,
            });
            cur = prev.clone();
        }
        steps.reverse();
        steps
    }
}

impl RootDatum {
    /// Newton point, computed with `n` = order of the finite part.
    pub fn newton(&self, w: &AffElt) -> RationalCoweight {
        let n = w.finite.order();
        let wn = w.pow(n);
        debug_assert!(wn.is_translation());
        self.dominant_rep(&RationalCoweight::scaled(&wn.translation, n as i64))
            .0
    }

    pub fn class_invariant(&self, w: &AffElt) -> ClassInvariant {
        ClassInvariant {
            kappa: self.kottwitz(w),
            newton: self.newton(w),
        }
    }

    /// `ℓ(w) = <ν_w, 2ρ>`.
    pub fn is_straight(&self, w: &AffElt) -> bool {
        Rat::from_integer(self.length(w) as i64) == self.two_rho_pairing(&self.newton(w))
    }

    pub(crate) fn explore_orbit(&self, w: &AffElt) -> OrbitSearch {
        let len = self.length(w);
        let n = self.affine_simples().len();
        let mut parent = HashMap::from([(w.clone(), None)]);
        let mut members = vec![w.clone()];
        let mut queue = VecDeque::from([w.clone()]);
        let mut descent = None;
        while let Some(x) = queue.pop_front() {
            for s in 0..n {
                let y = self.conj_by_simple(s, &x);
                let ly = self.length(&y);
                if ly < len {
                    if descent.is_none() {
                        descent = Some((x.clone(), s));
                    }
                } else if ly == len && !parent.contains_key(&y) {
                    parent.insert(y.clone(), Some((x.clone(), s)));
                    members.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        OrbitSearch {
            members,
            parent,
            descent,
        }
    }

    /// The orbit of `w` under length-preserving simple conjugations, sorted.
    pub fn orbit(&self, w: &AffElt) -> Vec<AffElt> {
        let mut m = self.explore_orbit(w).members;
        m.sort();
        m
    }

    /// Whether no element reachable by length-preserving simple conjugations
    /// admits a strictly length-reducing one.
    pub fn is_minimal(&self, w: &AffElt) -> bool {
        self.explore_orbit(w).descent.is_none()
    }

    /// Conjugates `w` down to a minimal length element of its class,
    /// recording every conjugation step.
    pub fn minimize(&self, w: &AffElt) -> (AffElt, Vec<Step>) {
        let mut cur = w.clone();
        let mut chain = Vec::new();
        loop {
            let search = self.explore_orbit(&cur);
            let Some((m, s)) = search.descent.clone() else {
                return (cur, chain);
            };
            chain.extend(search.path_to(&m));
            let next = self.conj_by_simple(s, &m);
            chain.push(Step {
                element: m,
                simple: s,
                delta: -2,
            });
            cur = next;
        }
    }

    /// Exact test for `x a x⁻¹ = b` with `x ∈ W̃`.
    pub fn are_conjugate(&self, a: &AffElt, b: &AffElt) -> crate::Result<bool> {
        if a == b {
            return Ok(true);
        }
        if self.kottwitz(a) != self.kottwitz(b) || self.newton(a) != self.newton(b) {
            return Ok(false);
        }
        let r = self.rank();
        let ub = &b.finite;
        let image = unipotent_image(ub, r);
        for y in self.weyl_elements()? {
            if y.compose(&a.finite) != ub.compose(y) {
                continue;
            }
            let ya = y.apply(&a.translation);
            let diff: Vec<i64> = b.translation.iter().zip(&ya).map(|(p, q)| p - q).collect();
            if image.contains(&diff) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `(κ, ν) ≤ (κ', ν')`: equal `κ` and `ν' - ν` a nonnegative rational
    /// combination of simple coroots.
    pub fn invariant_leq(&self, a: &ClassInvariant, b: &ClassInvariant) -> bool {
        a.kappa == b.kappa && self.in_coroot_cone(&b.newton.sub(&a.newton))
    }

    /// Literal Newton map with exponent `|W|`.
    pub fn newton_by_group_order(&self, w: &AffElt) -> crate::Result<RationalCoweight> {
        let n0 = self.weyl_elements()?.len();
        let wn = w.pow(n0);
        Ok(self
            .dominant_rep(&RationalCoweight::scaled(&wn.translation, n0 as i64))
            .0)
    }
}

/// The sublattice `(1 - u) X`.
fn unipotent_image(u: &crate::root_datum::WeylElt, r: usize) -> LatticeQuotient {
    let m = u.matrix();
    let cols: Vec<Vec<i64>> = (0..r)
        .map(|j| (0..r).map(|i| i64::from(i == j) - m[i * r + j]).collect())
        .collect();
    LatticeQuotient::new(r, &cols)
}

/// Parses `kappa=[...] nu=[p/q,...]` into an invariant (not checked against
/// the image of `f`).
pub fn parse_invariant(d: &RootDatum, text: &str) -> crate::Result<ClassInvariant> {
    use crate::error::Error;
    let mut kappa = None;
    let mut nu = None;
    for part in text.split_whitespace() {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        let body = v
            .strip_prefix('[')
            .and_then(|v| v.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..] in {part:?}")))?;
        let items: Vec<&str> = body
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        match k {
            "kappa" => {
                let c = items
                    .iter()
                    .map(|s| {
                        s.parse::<i64>()
                            .map_err(|_| Error::Parse(format!("bad kappa {s:?}")))
                    })
                    .collect::<crate::Result<Vec<_>>>()?;
                kappa = Some(c);
            }
            "nu" => {
                let c = items
                    .iter()
                    .map(|s| {
                        linalg::parse_rat(s)
                            .ok_or_else(|| Error::Parse(format!("bad rational {s:?}")))
                    })
                    .collect::<crate::Result<Vec<_>>>()?;
                nu = Some(c);
            }
            _ => return Err(Error::Parse(format!("unknown key {k:?}"))),
        }
    }
    let kappa = kappa.unwrap_or_else(|| vec![0; d.pi_one().moduli().len()]);
    if kappa.len() != d.pi_one().moduli().len() {
        return Err(Error::Parse(format!(
            "kappa has {} coordinates, X/Q needs {}",
            kappa.len(),
            d.pi_one().moduli().len()
        )));
    }
    let nu = nu.unwrap_or_else(|| vec![Rat::from_integer(0); d.rank()]);
    if nu.len() != d.rank() {
        return Err(Error::Parse(format!(
            "nu has {} coordinates, rank is {}",
            nu.len(),
            d.rank()
        )));
    }
    let nu = RationalCoweight(nu);
    if !d.is_dominant(&nu) {
        return Err(Error::Parse(format!("nu={nu} is not dominant")));
    }
    Ok(ClassInvariant {
        kappa: PiOneElt(d.pi_one().reduce(&kappa)),
        newton: nu,
    })
}
