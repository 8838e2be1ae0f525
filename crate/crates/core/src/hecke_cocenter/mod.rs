//! Class polynomials `f_{w,O}` by memoized Deligne–Lusztig reduction in the
//! cocenter of the Iwahori–Hecke algebra.
//!
//! Normalization: `(T_s - v)(T_s + v⁻¹) = 0`, so `T_s² = (v - v⁻¹) T_s + 1`.

pub(crate) mod cache;
mod laurent;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use dashmap::DashMap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::affine_weyl::AffElt;
use crate::conjugacy::{ClassRegistry, ConjClass};
use crate::error::{Error, Result};
use crate::limits::{Budget, Limits};
use crate::root_datum::RootDatum;

pub use cache::{poly_from_json, poly_to_json, CacheFile, CacheRecord, ENGINE_VERSION};
pub use laurent::{Degree, LaurentPoly};

/// Side of a generator product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `T_s T_w` (or `T_w T_s`) in the standard basis, as `(coefficient, element)`.
pub fn generator_product(
    d: &RootDatum,
    s: usize,
    w: &AffElt,
    side: Side,
) -> Vec<(LaurentPoly, AffElt)> {
    let se = &d.affine_simples()[s];
    let (sw, down) = match side {
        Side::Left => (se.mul(w), d.is_affine_left_descent(s, w)),
        Side::Right => (w.mul(se), d.is_affine_right_descent(s, w)),
    };
    if down {
        vec![(LaurentPoly::z(), w.clone()), (LaurentPoly::one(), sw)]
    } else {
        vec![(LaurentPoly::one(), sw)]
    }
}

/// Rule choosing which strict descent of an orbit to reduce along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PivotRule {
    /// Orbit members in canonical order, simples in index order.
    Canonical,
    /// Both orders reversed.
    Reversed,
    /// Orders shuffled by a generator seeded from the seed and the orbit.
    Seeded(u64),
}

impl FromStr for PivotRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(PivotRule::Canonical),
            "reversed" => Ok(PivotRule::Reversed),
            _ => s
                .strip_prefix("seeded:")
                .and_then(|n| n.parse().ok())
                .map(PivotRule::Seeded)
                .ok_or_else(|| Error::Parse(format!("unknown pivot rule {s:?}"))),
        }
    }
}

impl fmt::Display for PivotRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PivotRule::Canonical => f.write_str("canonical"),
            PivotRule::Reversed => f.write_str("reversed"),
            PivotRule::Seeded(n) => write!(f, "seeded:{n}"),
        }
    }
}

/// One term `f_{w,O}` of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub class: Arc<ConjClass>,
    pub poly: LaurentPoly,
}

type TermMap = BTreeMap<String, Term>;

/// The image of `T_w` in the cocenter: `Σ_O f_{w,O} T_O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecomposition {
    pub source: AffElt,
    pub datum_hash: String,
    /// Keyed by class identifier; every polynomial is nonzero.
    pub terms: BTreeMap<String, Term>,
}

impl ClassDecomposition {
    /// `class id → polynomial`, the part compared across pivot rules and caches.
    pub fn polynomials(&self) -> BTreeMap<String, LaurentPoly> {
        self.terms
            .iter()
            .map(|(k, t)| (k.clone(), t.poly.clone()))
            .collect()
    }

    /// Value at `v = 1` of the sum of all class polynomials.
    pub fn total_at_one(&self) -> num_bigint::BigInt {
        self.terms.values().map(|t| t.poly.eval_at_one()).sum()
    }
}

/// Shared engine computing class polynomials for one datum and pivot rule.
pub struct CocenterEngine {
    registry: Arc<ClassRegistry>,
    pivot: PivotRule,
    memo: DashMap<AffElt, Arc<TermMap>>,
    preloaded: DashMap<AffElt, Arc<TermMap>>,
    budget: Budget,
}

impl CocenterEngine {
    pub fn new(registry: Arc<ClassRegistry>, pivot: PivotRule) -> Self {
        CocenterEngine {
            registry,
            pivot,
            memo: DashMap::new(),
            preloaded: DashMap::new(),
            budget: Budget::default(),
        }
    }

    /// Convenience constructor with a fresh registry.
    pub fn for_datum(datum: Arc<RootDatum>, limits: Limits, pivot: PivotRule) -> Self {
        Self::new(Arc::new(ClassRegistry::new(datum, limits)), pivot)
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        self.registry.datum()
    }

    pub fn registry(&self) -> &Arc<ClassRegistry> {
        &self.registry
    }

    pub fn pivot(&self) -> PivotRule {
        self.pivot
    }

    /// Number of reduction nodes expanded so far.
    pub fn nodes_used(&self) -> u64 {
        self.budget.used()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Seeds a known decomposition (from a cache file) for `w`.
    pub fn preload(&self, w: &AffElt, polys: &BTreeMap<String, LaurentPoly>) -> Result<()> {
        let mut terms = TermMap::new();
        for (id, p) in polys {
            if p.is_zero() {
                return Err(Error::Integrity(format!("zero polynomial for {id}")));
            }
            let class = self.registry.class_by_id(id)?;
            terms.insert(
                id.clone(),
                Term {
                    class,
                    poly: p.clone(),
                },
            );
        }
        self.preloaded.insert(w.clone(), Arc::new(terms));
        Ok(())
    }

    pub fn class_polynomials(&self, w: &AffElt) -> Result<ClassDecomposition> {
        let d = self.datum();
        d.check_elt(w)?;
        let terms = match self.preloaded.get(w).map(|t| t.clone()) {
            Some(t) => t,
            None => self.reduce(w)?,
        };
        Ok(ClassDecomposition {
            source: w.clone(),
            datum_hash: d.hash().to_string(),
            terms: terms.as_ref().clone(),
        })
    }

    fn reduce(&self, w: &AffElt) -> Result<Arc<TermMap>> {
        let d = self.datum();
        let search = d.explore_orbit(w);
        let fingerprint = search
            .members
            .iter()
            .min()
            .expect("orbit contains its start")
            .clone();
        if let Some(t) = self.memo.get(&fingerprint) {
            return Ok(t.clone());
        }
        let limits = self.registry.limits();
        self.budget
            .charge(limits.max_nodes, "class polynomial reduction")?;
        let result = if search.descent.is_none() {
            let class = self.registry.class_of_minimal(w)?;
            let mut t = TermMap::new();
            t.insert(
                class.id.clone(),
                Term {
                    class,
                    poly: LaurentPoly::one(),
                },
            );
            t
        } else {
            let (m, s) = self.choose_pivot(&search.members, &fingerprint);
            let se = &d.affine_simples()[s];
            let sm = se.mul(&m);
            let sms = sm.mul(se);
            let a = self.reduce(&sm)?;
            let b = self.reduce(&sms)?;
            let z = LaurentPoly::z();
            let mut t: TermMap = b.as_ref().clone();
            for (id, term) in a.iter() {
                let add = &z * &term.poly;
                match t.get_mut(id) {
                    Some(existing) => {
                        existing.poly = &existing.poly + &add;
                    }
                    None => {
                        t.insert(
                            id.clone(),
                            Term {
                                class: term.class.clone(),
                                poly: add,
                            },
                        );
                    }
                }
            }
            t.retain(|_, term| !term.poly.is_zero());
            t
        };
        if self.memo.len() >= limits.max_memo_entries {
            return Err(Error::Resource(format!(
                "more than {} memoized decompositions",
                limits.max_memo_entries
            )));
        }
        let result = Arc::new(result);
        Ok(self.memo.entry(fingerprint).or_insert(result).clone())
    }

    /// A member `m` of the orbit and an affine simple `s` with
    /// `ℓ(s m s) = ℓ(m) - 2`, chosen by the pivot rule.
    fn choose_pivot(&self, members: &[AffElt], fingerprint: &AffElt) -> (AffElt, usize) {
        let d = self.datum();
        let mut ms: Vec<&AffElt> = members.iter().collect();
        ms.sort();
        let mut simples: Vec<usize> = (0..d.affine_simples().len()).collect();
        match self.pivot {
            PivotRule::Canonical => {}
            PivotRule::Reversed => {
                ms.reverse();
                simples.reverse();
            }
            PivotRule::Seeded(seed) => {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ fnv1a(d.encode(fingerprint).as_bytes()));
                ms.shuffle(&mut rng);
                simples.shuffle(&mut rng);
            }
        }
        for m in ms {
            let len = d.length(m);
            for &s in &simples {
                if d.length(&d.conj_by_simple(s, m)) + 2 == len {
                    return (m.clone(), s);
                }
            }
        }
        unreachable!("orbit with a descent has a pivot")
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x100000001b3)
    })
}

#[cfg(test)]
mod tests;
