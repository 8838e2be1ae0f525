use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use dashmap::DashMap;

use super::ClassInvariant;
use crate::affine_weyl::{AffElt, PiOneElt};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::linalg::Rat;
use crate::root_datum::RootDatum;

/// A conjugacy class of `W̃`, named by its least minimal-length element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    /// `{datum hash}:{encoding of rep}`.
    pub id: String,
    pub rep: AffElt,
    pub min_length: usize,
    pub invariant: ClassInvariant,
    pub straight: bool,
    /// Every minimal-length element, sorted.
    pub minimal_elements: Vec<AffElt>,
}

struct Level {
    classes: Vec<Arc<ConjClass>>,
    index: HashMap<AffElt, usize>,
}

/// Class data keyed by length and Kottwitz class, filled on demand.
pub struct ClassRegistry {
    datum: Arc<RootDatum>,
    limits: Limits,
    cosets: Mutex<HashMap<PiOneElt, Arc<Vec<Vec<AffElt>>>>>,
    levels: DashMap<(usize, PiOneElt), Arc<Level>>,
}

impl ClassRegistry {
    pub fn new(datum: Arc<RootDatum>, limits: Limits) -> Self {
        ClassRegistry {
            datum,
            limits,
            cosets: Mutex::new(HashMap::new()),
            levels: DashMap::new(),
        }
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// All elements of the `W_a`-coset `kappa` with length at most `max_len`,
    /// grouped by length.
    pub fn coset_levels(&self, kappa: &PiOneElt, max_len: usize) -> Result<Arc<Vec<Vec<AffElt>>>> {
        let d = &self.datum;
        let mut cosets = self.cosets.lock().expect("coset cache poisoned");
        let entry = cosets
            .entry(kappa.clone())
            .or_insert_with(|| Arc::new(vec![vec![d.omega_element(kappa)]]));
        if entry.len() <= max_len {
            let mut levels: Vec<Vec<AffElt>> = entry.as_ref().clone();
            for l in levels.len()..=max_len {
                let next = d.next_length_level(&levels[l - 1], l);
                if next.len() > self.limits.max_level_size {
                    return Err(Error::Resource(format!(
                        "{} elements of length {l} exceed the level limit {}",
                        next.len(),
                        self.limits.max_level_size
                    )));
                }
                levels.push(next);
            }
            *entry = Arc::new(levels);
        }
        Ok(entry.clone())
    }

    fn level(&self, len: usize, kappa: &PiOneElt) -> Result<Arc<Level>> {
        let key = (len, kappa.clone());
        if let Some(l) = self.levels.get(&key) {
            return Ok(l.clone());
        }
        let built = Arc::new(self.build_level(len, kappa)?);
        // Another thread may have raced us; both results are identical.
        Ok(self.levels.entry(key).or_insert(built).clone())
    }

    fn build_level(&self, len: usize, kappa: &PiOneElt) -> Result<Level> {
        let d = &self.datum;
        let levels = self.coset_levels(kappa, len)?;
        let elements = &levels[len];
        let mut visited: HashSet<&AffElt> = HashSet::new();
        // Minimal orbits, each with its invariant.
        let mut groups: Vec<(ClassInvariant, Vec<AffElt>)> = Vec::new();
        for e in elements {
            if visited.contains(e) {
                continue;
            }
            let search = d.explore_orbit(e);
            for m in &search.members {
                let m = elements
                    .binary_search(m)
                    .map(|i| &elements[i])
                    .map_err(|_| Error::Internal("orbit left its length level".into()))?;
                visited.insert(m);
            }
            if search.descent.is_some() {
                continue;
            }
            let inv = d.class_invariant(e);
            let mut merged = false;
            for (ginv, members) in groups.iter_mut() {
                if *ginv == inv && d.are_conjugate(e, &members[0])? {
                    members.extend(search.members.iter().cloned());
                    merged = true;
                    break;
                }
            }
            if !merged {
                groups.push((inv, search.members));
            }
        }
        let mut classes: Vec<ConjClass> = groups
            .into_iter()
            .map(|(invariant, mut members)| {
                members.sort();
                let rep = members[0].clone();
                let straight =
                    Rat::from_integer(len as i64) == d.two_rho_pairing(&invariant.newton);
                ConjClass {
                    id: format!("{}:{}", d.hash(), d.encode(&rep)),
                    rep,
                    min_length: len,
                    invariant,
                    straight,
                    minimal_elements: members,
                }
            })
            .collect();
        classes.sort_by(|a, b| a.rep.cmp(&b.rep));
        let mut index = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            for m in &c.minimal_elements {
                index.insert(m.clone(), i);
            }
        }
        Ok(Level {
            classes: classes.into_iter().map(Arc::new).collect(),
            index,
        })
    }

    /// Classes whose minimal length is exactly `len`, in the coset `kappa`.
    pub fn classes_at(&self, len: usize, kappa: &PiOneElt) -> Result<Vec<Arc<ConjClass>>> {
        Ok(self.level(len, kappa)?.classes.clone())
    }

    /// The class of a minimal-length element.
    pub fn class_of_minimal(&self, w: &AffElt) -> Result<Arc<ConjClass>> {
        let d = &self.datum;
        let level = self.level(d.length(w), &d.kottwitz(w))?;
        match level.index.get(w) {
            Some(&i) => Ok(level.classes[i].clone()),
            None => Err(Error::Precondition(format!(
                "{} is not of minimal length in its class",
                d.encode(w)
            ))),
        }
    }

    pub fn class_of(&self, w: &AffElt) -> Result<Arc<ConjClass>> {
        self.datum.check_elt(w)?;
        let (m, _) = self.datum.minimize(w);
        self.class_of_minimal(&m)
    }

    /// Looks up a class by its identifier string.
    pub fn class_by_id(&self, id: &str) -> Result<Arc<ConjClass>> {
        let d = &self.datum;
        let enc = id
            .strip_prefix(d.hash())
            .and_then(|s| s.strip_prefix(':'))
            .ok_or_else(|| Error::Parse(format!("class id {id:?} belongs to another datum")))?;
        let rep = d.parse_element(enc)?;
        let c = self.class_of_minimal(&rep)?;
        if c.rep != rep {
            return Err(Error::Parse(format!("{id:?} is not a canonical class id")));
        }
        Ok(c)
    }

    /// Every class with an element of length at most `max_len`, over the
    /// components of `Ω` with free coordinates in `[-kappa_window, kappa_window]`.
    /// Sorted by minimal length, then identifier.
    pub fn enumerate_classes(
        &self,
        max_len: usize,
        kappa_window: i64,
    ) -> Result<Vec<Arc<ConjClass>>> {
        let d = &self.datum;
        let mut out = Vec::new();
        for kappa in d.pi_one_window(kappa_window) {
            for len in 0..=max_len {
                out.extend(self.classes_at(len, &kappa)?);
            }
        }
        out.sort_by(|a, b| (a.min_length, &a.id).cmp(&(b.min_length, &b.id)));
        Ok(out)
    }

    /// Straight classes with `<ν, 2ρ> ≤ max_pairing`.
    pub fn straight_classes(
        &self,
        max_pairing: usize,
        kappa_window: i64,
    ) -> Result<Vec<Arc<ConjClass>>> {
        Ok(self
            .enumerate_classes(max_pairing, kappa_window)?
            .into_iter()
            .filter(|c| c.straight)
            .collect())
    }

    /// The straight class with the given invariant.
    pub fn straight_class_with(&self, inv: &ClassInvariant) -> Result<Arc<ConjClass>> {
        let d = &self.datum;
        let not_in_image = || Error::NotInImage(inv.to_string());
        let p = d.two_rho_pairing(&inv.newton);
        if !p.is_integer() || p < Rat::from_integer(0) || !d.is_dominant(&inv.newton) {
            return Err(not_in_image());
        }
        let len = p.to_integer() as usize;
        let kappa = PiOneElt(d.pi_one().reduce(&inv.kappa.0));
        self.classes_at(len, &kappa)?
            .into_iter()
            .find(|c| c.straight && c.invariant == *inv)
            .ok_or_else(not_in_image)
    }

    /// `O ≤ O'`: some minimal element of `O` lies below some minimal element
    /// of `O'` in the Bruhat order.
    pub fn straight_class_leq(&self, a: &ConjClass, b: &ConjClass) -> Result<bool> {
        if !a.straight || !b.straight {
            return Err(Error::Precondition(
                "straight_class_leq needs straight classes".into(),
            ));
        }
        let d = &self.datum;
        Ok(a.minimal_elements
            .iter()
            .any(|x| b.minimal_elements.iter().any(|y| d.bruhat_leq(x, y))))
    }
}
