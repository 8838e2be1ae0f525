//! Closed-form routes: shrunken alcoves, `w₀ t^μ`, split `b`, and the
//! report-only scanner comparing a class with the basic class of its `κ`.

use rayon::prelude::*;

use super::{AdlvEngine, Dim, SigmaClass};
use crate::affine_weyl::AffElt;
use crate::conjugacy::ClassInvariant;
use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::root_datum::{RationalCoweight, WeylElt};

/// Result of the `w₀ t^μ` formula next to the class-polynomial oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongestCoset {
    pub w: AffElt,
    pub formula: Dim,
    pub oracle: Dim,
    pub agree: bool,
}

/// One assembly convention of the split-`b` formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBVariant {
    /// `"x t y"` or `"y t x"`.
    pub assembly: &'static str,
    /// `"y"` if the chamber condition is imposed on `t^{μ+λ} y A₀`, else `"x"`.
    pub chamber_on: &'static str,
    pub w: AffElt,
    /// Whether the chosen chamber condition holds.
    pub chamber_ok: bool,
    pub formula: Dim,
    pub oracle: Dim,
    pub agree: bool,
}

/// `w = x t^{μ+λ} y` evaluated with `<λ, ρ> + ½(ℓ(x) - ℓ(y) + ℓ(yx))`, the
/// sign of `ℓ(y)` matching `ℓ(w) = <μ+λ, 2ρ> + ℓ(x) - ℓ(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBReference {
    pub w: AffElt,
    pub formula: Dim,
    pub oracle: Dim,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBRecord {
    pub variants: Vec<SplitBVariant>,
    pub reference: SplitBReference,
}

/// For one split-`b` convention, the smallest `k` from which the formula
/// agrees with the oracle for every `λ = j·2ρ^∨`, `k ≤ j ≤ max_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBThreshold {
    pub assembly: &'static str,
    pub chamber_on: &'static str,
    /// `None` if the convention disagrees at `max_k`.
    pub from: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhkrRow {
    pub w: AffElt,
    pub length: usize,
    pub dim_b: Dim,
    pub dim_basic: Dim,
    /// `dim X_w(b') - <ν_b, ρ> + ½(def(b') - def(b))` when `X_w(b')` is nonempty.
    pub predicted: Dim,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhkrScan {
    pub rows: Vec<GhkrRow>,
    /// Smallest `L` such that every row with `ℓ(w) ≥ L` agrees.
    pub agreement_from: usize,
}

impl AdlvEngine {
    fn check_basic(&self, b: &SigmaClass) -> Result<()> {
        if b.basic {
            Ok(())
        } else {
            Err(Error::Precondition("b must be basic".into()))
        }
    }

    fn check_shrunken(&self, w: &AffElt, b: &SigmaClass) -> Result<()> {
        let d = self.datum();
        self.check_basic(b)?;
        if !d.is_connected() {
            return Err(Error::Precondition(
                "Dynkin diagram must be connected".into(),
            ));
        }
        if !d.is_shrunken(w) {
            return Err(Error::Precondition(format!(
                "{} is not shrunken",
                d.encode(w)
            )));
        }
        Ok(())
    }

    /// `κ(b) = κ(w)` and `η(w)` lies in no proper standard parabolic subgroup.
    pub fn shrunken_nonempty(&self, w: &AffElt, b: &SigmaClass) -> Result<bool> {
        self.check_shrunken(w, b)?;
        let d = self.datum();
        Ok(d.kottwitz(w) == b.invariant.kappa && d.support(&d.eta(w)).len() == d.semisimple_rank())
    }

    /// `½(ℓ(w) + ℓ(η(w)) - def(b))` when nonempty.
    pub fn shrunken_dim(&self, w: &AffElt, b: &SigmaClass) -> Result<Dim> {
        if !self.shrunken_nonempty(w, b)? {
            return Ok(Dim::NegInfinity);
        }
        let d = self.datum();
        let eta = d.eta(w);
        let n = d.length(w) as i64 + d.finite_length(&eta) as i64 - b.defect as i64;
        Ok(Dim::Finite(Rat::new(n, 2)))
    }

    /// Dominant lattice coweights with `<μ, 2ρ> ≤ max_pairing`, for semisimple data.
    pub fn dominant_coweights(&self, max_pairing: i64) -> Result<Vec<Vec<i64>>> {
        let d = self.datum();
        let n = d.semisimple_rank();
        if n != d.rank() {
            return Err(Error::Precondition(
                "dominant coweight windows need a semisimple datum".into(),
            ));
        }
        let fund: Vec<RationalCoweight> = (0..n).map(|i| d.fundamental_coweight(i)).collect();
        let weights: Vec<Rat> = fund.iter().map(|f| d.two_rho_pairing(f)).collect();
        let mut out = Vec::new();
        let mut m = vec![0i64; n];
        loop {
            let mut mu = RationalCoweight::zero(d.rank());
            for (k, f) in fund.iter().enumerate() {
                mu = mu.add(&RationalCoweight(f.0.iter().map(|x| x * m[k]).collect()));
            }
            if let Some(v) = mu.to_lattice() {
                out.push(v);
            }
            // Odometer over m with Σ m_i ⟨ϖ_i, 2ρ⟩ ≤ max_pairing.
            let mut i = 0;
            loop {
                if i == n {
                    out.sort_by_key(|v| (d.two_rho_pairing_int(v), v.clone()));
                    return Ok(out);
                }
                m[i] += 1;
                let total: Rat = m.iter().zip(&weights).map(|(&c, w)| w * c).sum();
                if total <= Rat::from_integer(max_pairing) {
                    break;
                }
                m[i] = 0;
                i += 1;
            }
        }
    }

    /// `<μ - ν_b, ρ> + ℓ(w₀) - ½ def(b)` if `f(b) ≤ f(t^μ)`, else empty.
    pub fn longest_coset_formula(&self, mu: &[i64], b: &SigmaClass) -> Result<Dim> {
        let d = self.datum();
        if !d.is_dominant_lattice(mu) {
            return Err(Error::Precondition("μ must be dominant".into()));
        }
        let t = ClassInvariant {
            kappa: d.kottwitz(&AffElt::translation(mu.to_vec())),
            newton: RationalCoweight::from_lattice(mu),
        };
        if !d.invariant_leq(&b.invariant, &t) {
            return Ok(Dim::NegInfinity);
        }
        let diff = RationalCoweight::from_lattice(mu).sub(&b.invariant.newton);
        let v = d.two_rho_pairing(&diff) / 2
            + Rat::from_integer(d.finite_length(d.longest_element()) as i64)
            - Rat::new(b.defect as i64, 2);
        Ok(Dim::Finite(v))
    }

    pub fn longest_coset_case(&self, mu: &[i64], b: &SigmaClass) -> Result<LongestCoset> {
        let d = self.datum();
        let formula = self.longest_coset_formula(mu, b)?;
        let w =
            AffElt::from_finite(d.longest_element().clone()).mul(&AffElt::translation(mu.to_vec()));
        let oracle = self.dim_adlv(&w, b)?.dim;
        Ok(LongestCoset {
            w,
            agree: formula == oracle,
            formula,
            oracle,
        })
    }

    /// Evaluates `dim X_{x t^{μ+λ} y}(t^μ) = <λ, ρ> + ½(ℓ(x) + ℓ(y) + ℓ(yx))`
    /// (nonempty iff `yx` generates `W`) under four assembly conventions and
    /// compares each with the oracle. Never asserts.
    pub fn split_b_checker(
        &self,
        x: &WeylElt,
        y: &WeylElt,
        mu: &[i64],
        lambda: &[i64],
    ) -> Result<SplitBRecord> {
        let d = self.datum();
        if !d.is_connected() {
            return Err(Error::Precondition(
                "Dynkin diagram must be connected".into(),
            ));
        }
        if !d.is_dominant_lattice(mu) {
            return Err(Error::Precondition("μ must be dominant".into()));
        }
        if !d.in_affine_weyl(&AffElt::translation(lambda.to_vec()))
            || d.simple_indices().iter().any(|&a| d.pairing(lambda, a) < 1)
        {
            return Err(Error::Precondition(
                "λ must be a dominant regular element of Q".into(),
            ));
        }
        let b = self.sigma_class_of(&AffElt::translation(mu.to_vec()))?;
        let ml: Vec<i64> = mu.iter().zip(lambda).map(|(a, c)| a + c).collect();
        let t = AffElt::translation(ml);
        let xa = AffElt::from_finite(x.clone());
        let ya = AffElt::from_finite(y.clone());
        let yx = y.compose(x);
        let full = d.support(&yx).len() == d.semisimple_rank();
        let half_lambda = d.two_rho_pairing(&RationalCoweight::from_lattice(lambda)) / 2;
        let (lx, ly, lyx) = (
            d.finite_length(x) as i64,
            d.finite_length(y) as i64,
            d.finite_length(&yx) as i64,
        );
        let dim_if = |v: Rat| {
            if full {
                Dim::Finite(v)
            } else {
                Dim::NegInfinity
            }
        };
        let formula = dim_if(half_lambda + Rat::new(lx + ly + lyx, 2));
        let mut variants = Vec::new();
        let mut reference = None;
        for (assembly, w) in [
            ("x t y", xa.mul(&t).mul(&ya)),
            ("y t x", ya.mul(&t).mul(&xa)),
        ] {
            let oracle = self.dim_adlv(&w, &b)?.dim;
            if reference.is_none() {
                let formula = dim_if(half_lambda + Rat::new(lx - ly + lyx, 2));
                reference = Some(SplitBReference {
                    w: w.clone(),
                    formula,
                    oracle,
                    agree: formula == oracle,
                });
            }
            for (chamber_on, tail) in [("y", &ya), ("x", &xa)] {
                let chamber_ok = d.is_dominant(&d.barycenter(&t.mul(tail)));
                variants.push(SplitBVariant {
                    assembly,
                    chamber_on,
                    w: w.clone(),
                    chamber_ok,
                    formula,
                    oracle,
                    agree: formula == oracle,
                });
            }
        }
        Ok(SplitBRecord {
            variants,
            reference: reference.expect("two assemblies evaluated"),
        })
    }

    /// Compares `X_w(b)` with `X_w(b')` for `b'` basic with the same `κ`, over
    /// all `w` in that Kottwitz component with `ℓ(w) ≤ max_len`. Report only.
    pub fn ghkr_scan(
        &self,
        b: &SigmaClass,
        b_basic: &SigmaClass,
        max_len: usize,
    ) -> Result<GhkrScan> {
        let d = self.datum();
        if b.invariant.kappa != b_basic.invariant.kappa {
            return Err(Error::Precondition("b and b' must have the same κ".into()));
        }
        self.check_basic(b_basic)?;
        let levels = self.registry().coset_levels(&b.invariant.kappa, max_len)?;
        let elements: Vec<&AffElt> = levels.iter().flatten().collect();
        let offset = d.two_rho_pairing(&b.invariant.newton) / 2
            - Rat::new(b_basic.defect as i64 - b.defect as i64, 2);
        let rows = elements
            .par_iter()
            .map(|&w| {
                let dim_b = self.dim_adlv(w, b)?.dim;
                let dim_basic = self.dim_adlv(w, b_basic)?.dim;
                let predicted = match dim_basic {
                    Dim::Finite(x) => Dim::Finite(x - offset),
                    Dim::NegInfinity => Dim::NegInfinity,
                };
                Ok(GhkrRow {
                    w: w.clone(),
                    length: d.length(w),
                    dim_b,
                    dim_basic,
                    predicted,
                    agree: dim_b == predicted,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let agreement_from = rows
            .iter()
            .filter(|r| !r.agree)
            .map(|r| r.length + 1)
            .max()
            .unwrap_or(0);
        Ok(GhkrScan {
            rows,
            agreement_from,
        })
    }

    /// Runs the split-`b` checker for `λ = k·2ρ^∨`, `k = 1..=max_k`, and
    /// reports per convention where agreement with the oracle starts.
    pub fn split_b_thresholds(
        &self,
        x: &WeylElt,
        y: &WeylElt,
        mu: &[i64],
        max_k: i64,
    ) -> Result<Vec<SplitBThreshold>> {
        let two_rho = self.datum().two_rho_coroot_sum();
        let records = (1..=max_k)
            .map(|k| {
                let lambda: Vec<i64> = two_rho.iter().map(|c| c * k).collect();
                self.split_b_checker(x, y, mu, &lambda)
            })
            .collect::<Result<Vec<_>>>()?;
        let Some(first) = records.first() else {
            return Ok(vec![]);
        };
        Ok((0..first.variants.len())
            .map(|i| {
                let from = records
                    .iter()
                    .rposition(|r| !r.variants[i].agree)
                    .map_or(Some(1), |last| {
                        (last + 1 < records.len()).then_some(last as i64 + 2)
                    });
                SplitBThreshold {
                    assembly: first.variants[i].assembly,
                    chamber_on: first.variants[i].chamber_on,
                    from,
                }
            })
            .collect())
    }
}
