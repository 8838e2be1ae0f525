//! Semistandard parabolic subgroups and the P-alcove criterion for basic `b`.

use std::collections::BTreeSet;

use super::{AdlvEngine, SigmaClass};
use crate::affine_weyl::{floor_int, AffElt};
use crate::conjugacy::ClassInvariant;
use crate::error::{Error, Result};
use crate::root_datum::{RationalCoweight, RootDatum, WeylElt};

/// `P = M N` with `M ⊇ T`: the Levi roots and the roots of `N`, together with a
/// witness `(J, v)` such that `M = v M_J v⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicDatum {
    pub levi_roots: Vec<usize>,
    pub n_roots: Vec<usize>,
    pub j: Vec<usize>,
    pub witness: WeylElt,
}

impl ParabolicDatum {
    pub fn is_whole_group(&self) -> bool {
        self.n_roots.is_empty()
    }
}

fn roots_of_levi(d: &RootDatum, j: &[usize]) -> Vec<usize> {
    (0..d.roots().len())
        .filter(|&k| {
            d.root_coefficients(k)
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 0 || j.contains(&i))
        })
        .collect()
}

impl AdlvEngine {
    /// All semistandard parabolics, as `W`-conjugates of standard ones,
    /// deduplicated by `(levi_roots, n_roots)`.
    pub fn semistandard_parabolics(&self) -> Result<&[ParabolicDatum]> {
        if let Some(p) = self.parabolics.get() {
            return Ok(p);
        }
        let d = self.datum();
        let n = d.semisimple_rank();
        let weyl = d.weyl_elements()?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0..(1usize << n) {
            let j: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let lr = roots_of_levi(d, &j);
            let nr: Vec<usize> = d
                .positive_indices()
                .iter()
                .copied()
                .filter(|p| !lr.contains(p))
                .collect();
            for v in weyl {
                let mut l: Vec<usize> = lr.iter().map(|&k| d.root_image(v, k)).collect();
                let mut nn: Vec<usize> = nr.iter().map(|&k| d.root_image(v, k)).collect();
                l.sort_unstable();
                nn.sort_unstable();
                if seen.insert((l.clone(), nn.clone())) {
                    out.push(ParabolicDatum {
                        levi_roots: l,
                        n_roots: nn,
                        j: j.clone(),
                        witness: v.clone(),
                    });
                }
            }
        }
        Ok(self.parabolics.get_or_init(|| out))
    }

    /// `w ∈ W̃_M` and, for every `α ∈ R_N`,
    /// `floor(<α, bary(w A₀)>) ≤ floor(<α, bary(A₀)>)`.
    pub fn is_p_alcove(&self, w: &AffElt, p: &ParabolicDatum) -> bool {
        let d = self.datum();
        let v = &p.witness;
        let u = v.inverse().compose(&w.finite).compose(v);
        if !d.support(&u).iter().all(|i| p.j.contains(i)) {
            return false;
        }
        let bw = d.barycenter(w);
        let b0 = d.base_barycenter();
        p.n_roots
            .iter()
            .all(|&a| floor_int(&d.pairing_rat(&bw, a)) <= floor_int(&d.pairing_rat(b0, a)))
    }

    /// G-invariant induced from the basic `M`-class with `κ_M = κ_M(w)`:
    /// `(κ(w), dominant(pr_M(λ)))`, `pr_M` the average over `W_M`.
    pub fn induced_invariant(&self, w: &AffElt, p: &ParabolicDatum) -> Result<ClassInvariant> {
        let d = self.datum();
        let levi = super::levi_of(d, &p.j)?;
        let v = &p.witness;
        let lam = RationalCoweight::from_lattice(&v.apply_inverse(&w.translation));
        let pr = RationalCoweight(v.apply_rat(&levi.central_projection(&lam).0));
        Ok(ClassInvariant {
            kappa: d.kottwitz(w),
            newton: d.dominant_rep(&pr).0,
        })
    }

    /// Every P-alcove clause that applies to `w`, with whether it passes.
    pub fn p_alcove_clauses(
        &self,
        w: &AffElt,
        b: &SigmaClass,
    ) -> Result<Vec<(ParabolicDatum, bool)>> {
        let mut out = Vec::new();
        for p in self.semistandard_parabolics()? {
            if self.is_p_alcove(w, p) {
                let ok = self.induced_invariant(w, p)? == b.invariant;
                out.push((p.clone(), ok));
            }
        }
        Ok(out)
    }

    /// Nonemptiness of `X_w(b)` for basic `b` by the P-alcove criterion.
    pub fn basic_nonempty_via_alcoves(&self, w: &AffElt, b: &SigmaClass) -> Result<bool> {
        if !b.basic {
            return Err(Error::Precondition(
                "P-alcove criterion needs basic b".into(),
            ));
        }
        Ok(self.p_alcove_clauses(w, b)?.iter().all(|(_, ok)| *ok))
    }
}
