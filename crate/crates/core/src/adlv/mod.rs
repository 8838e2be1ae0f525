//! σ-conjugacy classes, the dimension formula for affine Deligne–Lusztig
//! varieties `X_w(b)` via class polynomials, and the closed-form criteria
//! used as independent cross-checks.

mod parabolic;
mod report;
mod routes;

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::{Signed, Zero};

use crate::affine_weyl::{AffElt, PiOneElt};
use crate::conjugacy::{ClassInvariant, ClassRegistry, ConjClass};
use crate::error::{Error, Result};
use crate::hecke_cocenter::{CocenterEngine, Degree, PivotRule};
use crate::limits::Limits;
use crate::linalg::{fmt_rat, Rat};
use crate::root_datum::{RationalCoweight, RootDatum};

pub use parabolic::ParabolicDatum;
pub use report::{csv_header, AdlvReport, MethodResult, ReportTerm};
pub use routes::{
    GhkrRow, GhkrScan, LongestCoset, SplitBRecord, SplitBReference, SplitBThreshold, SplitBVariant,
};

/// A dimension: `-∞` for the empty variety, otherwise an exact rational
/// (integral whenever the variety is nonempty).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    NegInfinity,
    Finite(Rat),
}

impl Dim {
    pub fn int(n: i64) -> Self {
        Dim::Finite(Rat::from_integer(n))
    }

    pub fn is_empty(&self) -> bool {
        *self == Dim::NegInfinity
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Dim::NegInfinity => "-inf".into(),
            Dim::Finite(r) if r.is_integer() => r.to_integer().into(),
            Dim::Finite(r) => fmt_rat(r).into(),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::NegInfinity => f.write_str("-inf"),
            Dim::Finite(r) => f.write_str(&fmt_rat(r)),
        }
    }
}

/// A σ-conjugacy class `[b]`, named by its invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaClass {
    pub invariant: ClassInvariant,
    /// The straight conjugacy class with the same invariant.
    pub straight_class: Arc<ConjClass>,
    pub basic: bool,
    pub defect: usize,
}

/// Entry point for every ADLV computation on one datum.
pub struct AdlvEngine {
    cocenter: Arc<CocenterEngine>,
    sigma: DashMap<ClassInvariant, Arc<SigmaClass>>,
    parabolics: std::sync::OnceLock<Vec<ParabolicDatum>>,
}

impl AdlvEngine {
    pub fn new(cocenter: Arc<CocenterEngine>) -> Self {
        AdlvEngine {
            cocenter,
            sigma: DashMap::new(),
            parabolics: Default::default(),
        }
    }

    pub fn for_datum(datum: Arc<RootDatum>, limits: Limits) -> Self {
        Self::new(Arc::new(CocenterEngine::for_datum(
            datum,
            limits,
            PivotRule::Canonical,
        )))
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        self.cocenter.datum()
    }

    pub fn registry(&self) -> &Arc<ClassRegistry> {
        self.cocenter.registry()
    }

    pub fn cocenter(&self) -> &Arc<CocenterEngine> {
        &self.cocenter
    }

    pub fn sigma_class_from_invariant(&self, inv: &ClassInvariant) -> Result<Arc<SigmaClass>> {
        if let Some(s) = self.sigma.get(inv) {
            return Ok(s.clone());
        }
        let d = self.datum();
        let straight_class = self.registry().straight_class_with(inv)?;
        let basic = d.is_central(&inv.newton);
        let defect = self.defect_of(&straight_class)?;
        let s = Arc::new(SigmaClass {
            invariant: inv.clone(),
            straight_class,
            basic,
            defect,
        });
        Ok(self.sigma.entry(inv.clone()).or_insert(s).clone())
    }

    pub fn sigma_class_of(&self, w: &AffElt) -> Result<Arc<SigmaClass>> {
        self.datum().check_elt(w)?;
        self.sigma_class_from_invariant(&self.datum().class_invariant(w))
    }

    /// The basic class with the given Kottwitz invariant.
    pub fn basic_class(&self, kappa: &PiOneElt) -> Result<Arc<SigmaClass>> {
        let d = self.datum();
        let tau = d.omega_element(kappa);
        self.sigma_class_of(&tau)
    }

    /// `[b] ≤ [b']` in the order of invariants.
    pub fn bg_leq(&self, a: &SigmaClass, b: &SigmaClass) -> bool {
        self.datum().invariant_leq(&a.invariant, &b.invariant)
    }

    /// `[b] ≤ [b']` via Bruhat comparison of straight representatives.
    pub fn bg_leq_bruhat(&self, a: &SigmaClass, b: &SigmaClass) -> Result<bool> {
        self.registry()
            .straight_class_leq(&a.straight_class, &b.straight_class)
    }

    pub fn defect(&self, b: &SigmaClass) -> usize {
        b.defect
    }

    /// `rank - dim V^u`, where `t^λ u` is the length-zero element of the
    /// centralizer Levi `W̃_M` in the class.
    fn defect_of(&self, class: &ConjClass) -> Result<usize> {
        let d = self.datum();
        let w = &class.rep;
        let n = w.finite.order();
        let lambda_avg = RationalCoweight::scaled(&w.pow(n).translation, n as i64);
        let (nu, y) = d.dominant_rep(&lambda_avg);
        // y w y⁻¹ has Newton vector exactly ν, hence lies in W̃_M.
        let x = w.conjugate_by(&AffElt::from_finite(y));
        let levi = self.centralizer_levi(&nu)?;
        let tau = levi.omega_element(&levi.kottwitz(&x));
        if levi.length(&tau) != 0 || !levi.in_affine_weyl(&tau.mul(&x.inv())) {
            return Err(Error::Internal("Levi reduction left the Levi".into()));
        }
        Ok(d.rank() - d.fixed_space_dim(&tau.finite))
    }

    /// The standard Levi `M_J` with `J = {i : <ν, α_i> = 0}`.
    pub fn centralizer_levi(&self, nu: &RationalCoweight) -> Result<RootDatum> {
        let d = self.datum();
        let j: Vec<usize> = (0..d.semisimple_rank())
            .filter(|&i| d.pairing_rat(nu, d.simple_indices()[i]).is_zero())
            .collect();
        levi_of(d, &j)
    }

    /// Dimension by the class-polynomial formula
    /// `max_O ½(ℓ(w) + ℓ(O) + deg f_{w,O}) - <ν_b, 2ρ>` over `f(O) = f(b)`.
    pub fn dim_adlv(&self, w: &AffElt, b: &SigmaClass) -> Result<AdlvReport> {
        let d = self.datum();
        let dec = self.cocenter.class_polynomials(w)?;
        let lw = d.length(w) as i64;
        let pairing = d.two_rho_pairing(&b.invariant.newton);
        let mut terms = Vec::new();
        for (id, t) in &dec.terms {
            if t.class.invariant != b.invariant {
                continue;
            }
            let Degree::Finite(deg) = t.poly.degree() else {
                return Err(Error::Internal("zero class polynomial".into()));
            };
            let value = Rat::new(lw + t.class.min_length as i64 + deg, 2) - pairing;
            if !value.is_integer() || value.is_negative() {
                return Err(Error::Internal(format!(
                    "term {id} of {} gives dimension {}",
                    d.encode(w),
                    fmt_rat(&value)
                )));
            }
            terms.push(ReportTerm {
                class_id: id.clone(),
                len_o: t.class.min_length,
                invariant: t.class.invariant.clone(),
                deg_f: deg,
                f: t.poly.clone(),
                value: value.to_integer(),
            });
        }
        let dim = terms
            .iter()
            .map(|t| Dim::int(t.value))
            .max()
            .unwrap_or(Dim::NegInfinity);
        Ok(AdlvReport::new(d, w, b, dim, terms))
    }

    /// Dimension for a minimal-length `w`: empty unless `w` lies in `[b]`,
    /// otherwise `ℓ(w) - <ν_w, 2ρ>`.
    pub fn dim_min_length(&self, w: &AffElt, b: &SigmaClass) -> Result<AdlvReport> {
        let d = self.datum();
        if !d.is_minimal(w) {
            return Err(Error::Precondition(format!(
                "{} is not of minimal length in its class",
                d.encode(w)
            )));
        }
        let f = d.class_invariant(w);
        let dim = if f == b.invariant {
            let v = Rat::from_integer(d.length(w) as i64) - d.two_rho_pairing(&f.newton);
            Dim::Finite(v)
        } else {
            Dim::NegInfinity
        };
        let mut r = AdlvReport::new(d, w, b, dim, vec![]);
        r.methods.dim_degree = MethodResult::new(dim);
        Ok(r)
    }

    /// The dimension-formula report together with every closed-form route
    /// whose hypotheses hold, and an agreement flag over them.
    pub fn full_report(&self, w: &AffElt, b: &SigmaClass) -> Result<AdlvReport> {
        let d = self.datum();
        let mut r = self.dim_adlv(w, b)?;
        if d.is_minimal(w) {
            r.methods.min_length = Some(MethodResult::new(self.dim_min_length(w, b)?.dim));
        }
        if b.basic {
            r.methods.p_alcove = Some(MethodResult::nonempty_only(
                self.basic_nonempty_via_alcoves(w, b)?,
            ));
            if d.is_connected() && d.is_shrunken(w) {
                r.methods.shrunken = Some(MethodResult::new(self.shrunken_dim(w, b)?));
            }
        }
        if let Some((mu, true)) = self.as_longest_coset(w) {
            let lc = self.longest_coset_formula(&mu, b)?;
            r.methods.longest_coset = Some(MethodResult::new(lc));
        }
        r.settle_agreement();
        Ok(r)
    }

    /// `w = w₀ t^μ` with `μ` dominant, if `w` has that shape.
    fn as_longest_coset(&self, w: &AffElt) -> Option<(Vec<i64>, bool)> {
        let d = self.datum();
        if &w.finite != d.longest_element() {
            return None;
        }
        let mu = d.longest_element().apply_inverse(&w.translation);
        let dom = d.is_dominant_lattice(&mu);
        Some((mu, dom))
    }
}

/// The standard Levi datum for the simple positions `j`.
pub(crate) fn levi_of(d: &RootDatum, j: &[usize]) -> Result<RootDatum> {
    let roots: Vec<usize> = (0..d.roots().len())
        .filter(|&k| {
            d.root_coefficients(k)
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 0 || j.contains(&i))
        })
        .collect();
    let simple: Vec<usize> = j.iter().map(|&i| d.simple_indices()[i]).collect();
    d.levi(&roots, &simple)
}

#[cfg(test)]
mod tests;
