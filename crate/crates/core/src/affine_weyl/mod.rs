//! The extended affine Weyl group `W̃ = X ⋊ W`.
//!
//! An element `t^λ u` acts on `X ⊗ Q` by `x ↦ λ + u(x)`. The base alcove `A₀`
//! is `0 < <α, x> < 1` for all positive roots, so it lies in the dominant chamber.

mod encoding;

use std::fmt;

use dashmap::DashMap;
use num_integer::Integer;
use num_traits::Signed;

use crate::error::Result;
use crate::linalg::Rat;
use crate::root_datum::{RationalCoweight, RootDatum, WeylElt};

pub use encoding::{parse_element, ENCODING_VERSION};

/// `t^translation · finite`. The derived order (translation first, then the
/// finite matrix) is the canonical total order used to pick representatives.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AffElt {
    pub translation: Vec<i64>,
    pub finite: WeylElt,
}

impl AffElt {
    pub fn new(translation: Vec<i64>, finite: WeylElt) -> Self {
        AffElt {
            translation,
            finite,
        }
    }

    pub fn identity(rank: usize) -> Self {
        AffElt::new(vec![0; rank], WeylElt::identity(rank))
    }

    pub fn translation(lambda: Vec<i64>) -> Self {
        let r = lambda.len();
        AffElt::new(lambda, WeylElt::identity(r))
    }

    pub fn from_finite(u: WeylElt) -> Self {
        AffElt::new(vec![0; u.rank()], u)
    }

    pub fn rank(&self) -> usize {
        self.translation.len()
    }

    pub fn is_identity(&self) -> bool {
        self.is_translation() && self.translation.iter().all(|&c| c == 0)
    }

    pub fn is_translation(&self) -> bool {
        self.finite.is_identity()
    }

    /// `t^λu · t^μv = t^{λ+u(μ)} uv`.
    pub fn mul(&self, other: &AffElt) -> AffElt {
        let um = self.finite.apply(&other.translation);
        AffElt::new(
            self.translation
                .iter()
                .zip(um)
                .map(|(a, b)| a + b)
                .collect(),
            self.finite.compose(&other.finite),
        )
    }

    pub fn inv(&self) -> AffElt {
        let t = self.finite.apply_inverse(&self.translation);
        AffElt::new(t.into_iter().map(|c| -c).collect(), self.finite.inverse())
    }

    /// `x · self · x⁻¹`.
    pub fn conjugate_by(&self, x: &AffElt) -> AffElt {
        x.mul(self).mul(&x.inv())
    }

    pub fn pow(&self, n: usize) -> AffElt {
        let mut out = AffElt::identity(self.rank());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Image of a point of `X ⊗ Q`.
    pub fn act(&self, x: &RationalCoweight) -> RationalCoweight {
        let ux = self.finite.apply_rat(&x.0);
        RationalCoweight(
            ux.iter()
                .zip(&self.translation)
                .map(|(a, &l)| a + Rat::from_integer(l))
                .collect(),
        )
    }
}

/// An element of `X/Q` in the canonical coordinates of the datum's quotient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PiOneElt(pub Vec<i64>);

impl PiOneElt {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for PiOneElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The alcove `w·A₀`, represented by its barycenter.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Alcove {
    pub barycenter: RationalCoweight,
}

impl Alcove {
    pub fn of(d: &RootDatum, w: &AffElt) -> Alcove {
        Alcove {
            barycenter: w.act(d.base_barycenter()),
        }
    }

    /// The vertices of `w·A₀` (one simplex per Dynkin component, joined).
    pub fn vertices(d: &RootDatum, w: &AffElt) -> Vec<RationalCoweight> {
        d.base_alcove_vertices().iter().map(|v| w.act(v)).collect()
    }
}

/// Per-datum affine data: the affine simple reflections and the Bruhat memo.
#[derive(Default)]
pub struct AffineData {
    simples: Vec<AffElt>,
    names: Vec<String>,
    /// Affine root `<α, x> + c` positive on `A₀` whose wall each simple fixes.
    walls: Vec<(usize, i64, bool)>,
    bruhat_memo: DashMap<(AffElt, AffElt), bool>,
}

impl AffineData {
    pub(crate) fn new(d: &RootDatum) -> Self {
        let mut simples = Vec::new();
        let mut names = Vec::new();
        let mut walls = Vec::new();
        for (k, &theta) in d.highest_roots().iter().enumerate() {
            let s0 = AffElt::new(d.coroots()[theta].clone(), d.reflection(theta));
            simples.push(s0);
            names.push(if k == 0 {
                "s0".to_string()
            } else {
                format!("s0_{k}")
            });
            // 1 - <θ, x>
            walls.push((theta, 1, true));
            if k == 0 {
                for (i, &a) in d.simple_indices().iter().enumerate() {
                    simples.push(AffElt::from_finite(d.simple_reflection(i).clone()));
                    names.push(format!("s{}", i + 1));
                    walls.push((a, 0, false));
                }
            }
        }
        AffineData {
            simples,
            names,
            walls,
            bruhat_memo: DashMap::new(),
        }
    }
}

impl RootDatum {
    pub fn aff_identity(&self) -> AffElt {
        AffElt::identity(self.rank())
    }

    /// Affine simple reflections: for the first Dynkin component `s0`, then
    /// the finite simples `s1..sn`, then `s0_k` for further components.
    pub fn affine_simples(&self) -> &[AffElt] {
        &self.affine.simples
    }

    pub fn affine_simple_names(&self) -> &[String] {
        &self.affine.names
    }

    pub fn affine_simple_by_name(&self, name: &str) -> Option<usize> {
        self.affine.names.iter().position(|n| n == name)
    }

    /// Iwahori–Matsumoto length.
    pub fn length(&self, w: &AffElt) -> usize {
        let h = self.inverse_sign_vector(&w.finite);
        let mut total = 0i64;
        for &p in self.positive_indices() {
            let pair = self.pairing(&w.translation, p);
            total += if self.inverse_keeps_positive(&h, p) {
                pair.abs()
            } else {
                (pair - 1).abs()
            };
        }
        total as usize
    }

    pub fn is_length_zero(&self, w: &AffElt) -> bool {
        self.length(w) == 0
    }

    /// `s · w · s` for the affine simple with the given position.
    pub fn conj_by_simple(&self, s: usize, w: &AffElt) -> AffElt {
        let s = &self.affine.simples[s];
        s.mul(w).mul(s)
    }

    fn wall_value(&self, s: usize, x: &RationalCoweight) -> Rat {
        let (root, c, flip) = self.affine.walls[s];
        let p = self.pairing_rat(x, root);
        if flip {
            Rat::from_integer(c) - p
        } else {
            p + Rat::from_integer(c)
        }
    }

    /// `ℓ(s w) < ℓ(w)`: the wall of `s` separates `A₀` from `w A₀`.
    pub fn is_affine_left_descent(&self, s: usize, w: &AffElt) -> bool {
        self.wall_value(s, &self.barycenter(w)).is_negative()
    }

    /// `ℓ(w s) < ℓ(w)`.
    pub fn is_affine_right_descent(&self, s: usize, w: &AffElt) -> bool {
        self.is_affine_left_descent(s, &w.inv())
    }

    /// Writes `w = s_{i1} ⋯ s_{ik} τ` with `τ` of length zero, choosing the
    /// smallest left descent at each step.
    pub fn affine_reduced_word(&self, w: &AffElt) -> (Vec<usize>, AffElt) {
        let mut word = Vec::new();
        let mut cur = w.clone();
        let n = self.affine.simples.len();
        while let Some(s) = (0..n).find(|&s| self.is_affine_left_descent(s, &cur)) {
            word.push(s);
            cur = self.affine.simples[s].mul(&cur);
        }
        (word, cur)
    }

    /// Human-readable word such as `s0 s1 s0`, with a trailing length-zero
    /// factor written canonically when it is not the identity.
    pub fn word_string(&self, w: &AffElt) -> String {
        let (word, tau) = self.affine_reduced_word(w);
        let mut parts: Vec<String> = word.iter().map(|&s| self.affine.names[s].clone()).collect();
        if !tau.is_identity() {
            parts.push(self.encode(&tau));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn kottwitz(&self, w: &AffElt) -> PiOneElt {
        PiOneElt(self.pi_one().class_of(&w.translation))
    }

    /// Whether `w` lies in the affine Weyl group `W_a`.
    pub fn in_affine_weyl(&self, w: &AffElt) -> bool {
        self.pi_one().contains(&w.translation)
    }

    /// Bruhat order on `W̃`: equal `W_a`-cosets and the order on `W_a`.
    pub fn bruhat_leq(&self, a: &AffElt, b: &AffElt) -> bool {
        if self.kottwitz(a) != self.kottwitz(b) {
            return false;
        }
        self.bruhat_rec(a, b, self.length(a), self.length(b))
    }

    fn bruhat_rec(&self, a: &AffElt, b: &AffElt, la: usize, lb: usize) -> bool {
        if la > lb {
            return false;
        }
        if lb == 0 || la == lb {
            return a == b;
        }
        if la == 0 {
            // The length-zero element of the coset lies below everything in it.
            return true;
        }
        let key = (a.clone(), b.clone());
        if let Some(v) = self.affine.bruhat_memo.get(&key) {
            return *v;
        }
        let n = self.affine.simples.len();
        let s = (0..n)
            .find(|&s| self.is_affine_left_descent(s, b))
            .expect("positive length element has a descent");
        let sb = self.affine.simples[s].mul(b);
        let res = if self.is_affine_left_descent(s, a) {
            let sa = self.affine.simples[s].mul(a);
            self.bruhat_rec(&sa, &sb, la - 1, lb - 1)
        } else {
            self.bruhat_rec(a, &sb, la, lb - 1)
        };
        self.affine.bruhat_memo.insert(key, res);
        res
    }

    pub fn barycenter(&self, w: &AffElt) -> RationalCoweight {
        w.act(self.base_barycenter())
    }

    /// The `x ∈ W` with `x⁻¹ · (w A₀)` in the dominant chamber.
    pub fn chamber_of(&self, w: &AffElt) -> WeylElt {
        self.dominant_rep(&self.barycenter(w)).1.inverse()
    }

    /// `w A₀` avoids every strip `-1 < <α, x> < 1`, α > 0.
    pub fn is_shrunken(&self, w: &AffElt) -> bool {
        let b = self.barycenter(w);
        self.positive_indices().iter().all(|&p| {
            let f = floor_int(&self.pairing_rat(&b, p));
            f != 0 && f != -1
        })
    }

    pub fn eta1(&self, w: &AffElt) -> WeylElt {
        w.finite.clone()
    }

    pub fn eta2(&self, w: &AffElt) -> WeylElt {
        self.chamber_of(w)
    }

    pub fn eta(&self, w: &AffElt) -> WeylElt {
        let x = self.eta2(w);
        x.inverse().compose(&w.finite).compose(&x)
    }

    /// The unique `w = x t^μ y` with `t^μ y A₀` in the dominant chamber.
    pub fn dominant_decomposition(&self, w: &AffElt) -> (WeylElt, Vec<i64>, WeylElt) {
        let x = self.chamber_of(w);
        let xinv = x.inverse();
        let mu = xinv.apply(&w.translation);
        let y = xinv.compose(&w.finite);
        (x, mu, y)
    }

    /// Whether `v` is dominant and integral, i.e. a dominant lattice coweight.
    pub fn is_dominant_lattice(&self, v: &[i64]) -> bool {
        self.simple_indices()
            .iter()
            .all(|&a| self.pairing(v, a) >= 0)
    }

    /// Elements of `W̃` of length at most `max_len` in the `W_a`-coset of the
    /// length-zero element `tau`, grouped by length.
    pub fn elements_by_length(&self, tau: &AffElt, max_len: usize) -> Vec<Vec<AffElt>> {
        let mut levels = vec![vec![tau.clone()]];
        for l in 1..=max_len {
            let next = self.next_length_level(&levels[l - 1], l);
            levels.push(next);
        }
        levels
    }

    /// Given all elements of length `l - 1` in a `W_a`-coset, the sorted list
    /// of those of length `l`.
    pub fn next_length_level(&self, prev: &[AffElt], l: usize) -> Vec<AffElt> {
        let mut next: std::collections::BTreeSet<AffElt> = Default::default();
        for w in prev {
            for (s, se) in self.affine.simples.iter().enumerate() {
                if !self.is_affine_left_descent(s, w) {
                    let sw = se.mul(w);
                    debug_assert_eq!(self.length(&sw), l);
                    next.insert(sw);
                }
            }
        }
        next.into_iter().collect()
    }

    /// Length-zero element with translation part lifting the given class of
    /// `X/Q`.
    pub fn omega_element(&self, kappa: &PiOneElt) -> AffElt {
        let mut cur = AffElt::translation(self.pi_one().lift(&kappa.0));
        let n = self.affine.simples.len();
        while let Some(s) = (0..n).find(|&s| self.is_affine_left_descent(s, &cur)) {
            cur = self.affine.simples[s].mul(&cur);
        }
        cur
    }

    /// Elements of `X/Q`, with free coordinates restricted to `[-window, window]`.
    pub fn pi_one_window(&self, window: i64) -> Vec<PiOneElt> {
        let mut out = vec![vec![]];
        for &m in self.pi_one().moduli() {
            let range: Vec<i64> = if m == 0 {
                (-window..=window).collect()
            } else {
                (0..m).collect()
            };
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    range.iter().map(move |&c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(PiOneElt).collect()
    }

    /// Checks that every element shares this datum's rank.
    pub fn check_same(&self, elts: &[&AffElt]) -> Result<()> {
        for w in elts {
            self.check_elt(w)?;
        }
        Ok(())
    }
}

/// `floor` of an exact rational, as an integer.
pub fn floor_int(r: &Rat) -> i64 {
    r.numer().div_floor(r.denom())
}

impl fmt::Display for AffElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.translation.iter().map(i64::to_string).collect();
        write!(f, "t[{}]·{:?}", t.join(","), self.finite)
    }
}

#[cfg(test)]
mod tests;
