//! Split reductive root data, finite Weyl group arithmetic, and rational
//! coweights.
//!
//! All vectors are expressed in coordinates for which the coweight lattice `X`
//! is exactly `Z^rank`: coweights and coroots are integer column vectors, roots
//! are integer row vectors (functionals on `X`), and pairings are plain dot
//! products.

mod explicit;
mod presets;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use sha2::{Digest, Sha256};

use crate::affine_weyl::AffElt;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, solve_square, to_rat, LatticeQuotient, Rat};

pub use explicit::{ExplicitDatum, EXPLICIT_FORMAT_VERSION};
pub use presets::preset_names;

/// Largest finite Weyl group the engine will enumerate element by element.
pub const MAX_WEYL_ORDER: usize = 100_000;

/// An element of the finite Weyl group, stored as its action on `X` together
/// with the inverse action. The matrix is canonical, so equality, hashing and
/// ordering are structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt {
    rank: u8,
    mat: Box<[i64]>,
    inv: Box<[i64]>,
}

impl WeylElt {
    pub fn identity(rank: usize) -> Self {
        let mut m = vec![0; rank * rank];
        for i in 0..rank {
            m[i * rank + i] = 1;
        }
        let mat: Box<[i64]> = m.into();
        WeylElt {
            rank: rank as u8,
            inv: mat.clone(),
            mat,
        }
    }

    fn from_matrices(rank: usize, mat: Vec<i64>, inv: Vec<i64>) -> Self {
        WeylElt {
            rank: rank as u8,
            mat: mat.into(),
            inv: inv.into(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    /// Row-major matrix of the action on `X`.
    pub fn matrix(&self) -> &[i64] {
        &self.mat
    }

    pub fn inverse(&self) -> WeylElt {
        WeylElt {
            rank: self.rank,
            mat: self.inv.clone(),
            inv: self.mat.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| (0..r).all(|j| self.mat[i * r + j] == i64::from(i == j)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElt) -> WeylElt {
        let r = self.rank();
        WeylElt::from_matrices(
            r,
            matmul(&self.mat, &other.mat, r),
            matmul(&other.inv, &self.inv, r),
        )
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        apply(&self.mat, v)
    }

    pub fn apply_inverse(&self, v: &[i64]) -> Vec<i64> {
        apply(&self.inv, v)
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                (0..r).fold(Rat::zero(), |acc, j| {
                    acc + Rat::from_integer(self.mat[i * r + j]) * v[j]
                })
            })
            .collect()
    }

    pub fn conjugate_by(&self, y: &WeylElt) -> WeylElt {
        y.compose(self).compose(&y.inverse())
    }

    /// Multiplicative order.
    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }
}

impl fmt::Debug for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElt{:?}", &self.mat[..])
    }
}

fn matmul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut out = vec![0; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            if x != 0 {
                for j in 0..r {
                    out[i * r + j] += x * b[k * r + j];
                }
            }
        }
    }
    out
}

fn apply(m: &[i64], v: &[i64]) -> Vec<i64> {
    let r = v.len();
    (0..r).map(|i| dot(&m[i * r..(i + 1) * r], v)).collect()
}

/// A vector of `X ⊗ Q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RationalCoweight(pub Vec<Rat>);

impl RationalCoweight {
    pub fn zero(rank: usize) -> Self {
        RationalCoweight(vec![Rat::zero(); rank])
    }

    pub fn from_lattice(v: &[i64]) -> Self {
        RationalCoweight(to_rat(v))
    }

    pub fn scaled(v: &[i64], denom: i64) -> Self {
        RationalCoweight(v.iter().map(|&x| Rat::new(x, denom)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn sub(&self, other: &Self) -> Self {
        RationalCoweight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalCoweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The lattice vector, if all coordinates are integers.
    pub fn to_lattice(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|r| r.is_integer().then(|| r.to_integer()))
            .collect()
    }
}

impl fmt::Display for RationalCoweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(linalg::fmt_rat).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Which lattice a Cartan-type preset uses for `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeForm {
    /// `X` = coroot lattice.
    SimplyConnected,
    /// `X` = coweight lattice.
    Adjoint,
}

pub struct RootDatum {
    name: String,
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    positive: Vec<bool>,
    pos_indices: Vec<usize>,
    neg_of: Vec<usize>,
    simple: Vec<usize>,
    /// Coefficients of every root in the simple roots.
    coeffs: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    components: Vec<Vec<usize>>,
    highest: Vec<usize>,
    two_rho: Vec<i64>,
    simple_refl: Vec<WeylElt>,
    coroot_index: HashMap<Vec<i64>, usize>,
    longest: WeylElt,
    quotient: LatticeQuotient,
    base_bary: RationalCoweight,
    hash: String,
    pub(crate) affine: crate::affine_weyl::AffineData,
    weyl: OnceLock<std::result::Result<Vec<WeylElt>, String>>,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootDatum")
            .field("name", &self.name)
            .field("rank", &self.rank)
            .field("roots", &self.roots.len())
            .field("hash", &self.hash)
            .finish()
    }
}

impl RootDatum {
    /// Builds a named preset such as `SL3`, `PGL2`, `GL4`, `Sp4`, `SO5`, `G2`,
    /// `C2`, `A2-sc` or `B3-ad`.
    pub fn preset(name: &str) -> Result<Self> {
        presets::build(name)
    }

    /// Builds a datum from the Cartan matrix `cartan[i][j] = <α_i^∨, α_j>`.
    pub fn from_cartan(name: &str, cartan: &[Vec<i64>], form: LatticeForm) -> Result<Self> {
        let n = cartan.len();
        if n == 0 || cartan.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidDatum("Cartan matrix must be square".into()));
        }
        let (simple_roots, simple_coroots): (Vec<Vec<i64>>, Vec<Vec<i64>>) = match form {
            LatticeForm::SimplyConnected => (
                (0..n)
                    .map(|j| (0..n).map(|i| cartan[i][j]).collect())
                    .collect(),
                (0..n).map(|i| unit(n, i)).collect(),
            ),
            LatticeForm::Adjoint => ((0..n).map(|j| unit(n, j)).collect(), cartan.to_vec()),
        };
        let (roots, coroots) = close_under_reflections(&simple_roots, &simple_coroots)?;
        let simple = (0..n).collect();
        Self::from_parts(name, n, roots, coroots, simple)
    }

    /// Validates and assembles a datum from roots and coroots written in
    /// lattice coordinates.
    pub fn from_parts(
        name: &str,
        rank: usize,
        roots: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
        simple: Vec<usize>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidDatum(m));
        if rank == 0 || rank > 16 {
            return bad(format!("rank {rank} out of range"));
        }
        if roots.len() != coroots.len() {
            return bad("roots and coroots differ in number".into());
        }
        if roots.iter().chain(&coroots).any(|v| v.len() != rank) {
            return Err(Error::Parse(format!(
                "rank mismatch: every root and coroot must have {rank} coordinates"
            )));
        }
        let nroots = roots.len();
        let mut root_index = HashMap::new();
        let mut coroot_index = HashMap::new();
        for (i, (a, c)) in roots.iter().zip(&coroots).enumerate() {
            if a.iter().all(|&x| x == 0) {
                return bad(format!("root {i} is zero"));
            }
            if dot(c, a) != 2 {
                return bad(format!("root {i} pairs with its coroot to {}", dot(c, a)));
            }
            if root_index.insert(a.clone(), i).is_some() {
                return bad(format!("root {i} is repeated"));
            }
            if coroot_index.insert(c.clone(), i).is_some() {
                return bad(format!("coroot {i} is repeated"));
            }
        }
        let mut neg_of = Vec::with_capacity(nroots);
        for (i, (a, c)) in roots.iter().zip(&coroots).enumerate() {
            let na: Vec<i64> = a.iter().map(|x| -x).collect();
            let nc: Vec<i64> = c.iter().map(|x| -x).collect();
            match root_index.get(&na) {
                Some(&j) if coroots[j] == nc => neg_of.push(j),
                _ => return bad(format!("negative of root {i} missing")),
            }
        }
        for i in 0..nroots {
            for j in 0..nroots {
                let p = dot(&coroots[i], &roots[j]);
                if j != i && j != neg_of[i] && p.abs() > 3 {
                    return bad(format!("non-crystallographic pairing {p}"));
                }
            }
        }
        let mut seen = BTreeSet::new();
        if simple.iter().any(|&s| s >= nroots || !seen.insert(s)) {
            return bad("simple root indices invalid".into());
        }
        let ns = simple.len();
        let cartan: Vec<Vec<i64>> = simple
            .iter()
            .map(|&i| {
                simple
                    .iter()
                    .map(|&j| dot(&coroots[i], &roots[j]))
                    .collect()
            })
            .collect();
        for i in 0..ns {
            for j in 0..ns {
                if i == j {
                    continue;
                }
                let (a, b) = (cartan[i][j], cartan[j][i]);
                if a > 0 || (a == 0) != (b == 0) || a * b > 3 {
                    return Err(Error::InvalidDatum(format!(
                        "non-crystallographic pairing matrix entry ({i},{j}) = {a}"
                    )));
                }
            }
        }
        let cartan_rat: Vec<Vec<Rat>> = cartan.iter().map(|r| to_rat(r)).collect();
        if ns > 0 && linalg::rank(&cartan_rat) != ns {
            return bad("simple roots are linearly dependent".into());
        }
        // Coefficients of each root in the simple basis: solve A c = (<α_j^∨, β>)_j.
        let mut coeffs = Vec::with_capacity(nroots);
        let mut positive = Vec::with_capacity(nroots);
        for (k, beta) in roots.iter().enumerate() {
            let b: Vec<Rat> = simple
                .iter()
                .map(|&j| Rat::from_integer(dot(&coroots[j], beta)))
                .collect();
            let c = if ns == 0 {
                Some(vec![])
            } else {
                solve_square(&cartan_rat, &b)
            };
            let c = c.filter(|c| {
                (0..rank).all(|x| {
                    let s = c.iter().zip(&simple).fold(Rat::zero(), |acc, (ci, &j)| {
                        acc + *ci * Rat::from_integer(roots[j][x])
                    });
                    s == Rat::from_integer(beta[x])
                })
            });
            let Some(c) = c.filter(|c| c.iter().all(|x| x.is_integer())) else {
                return bad(format!(
                    "root {k} is not an integral combination of the simple roots"
                ));
            };
            let c: Vec<i64> = c.iter().map(|x| x.to_integer()).collect();
            let pos = c.iter().all(|&x| x >= 0);
            if !pos && !c.iter().all(|&x| x <= 0) {
                return bad(format!("root {k} has mixed-sign coefficients"));
            }
            coeffs.push(c);
            positive.push(pos);
        }
        let simple_refl: Vec<WeylElt> = simple
            .iter()
            .map(|&i| {
                let mut m = vec![0; rank * rank];
                for r in 0..rank {
                    for c in 0..rank {
                        m[r * rank + c] = i64::from(r == c) - coroots[i][r] * roots[i][c];
                    }
                }
                WeylElt::from_matrices(rank, m.clone(), m)
            })
            .collect();
        for (si, s) in simple_refl.iter().enumerate() {
            for k in 0..nroots {
                let img_c = s.apply(&coroots[k]);
                let a = &roots[simple[si]];
                let p = dot(&coroots[simple[si]], &roots[k]);
                let img_a: Vec<i64> = roots[k].iter().zip(a).map(|(x, y)| x - p * y).collect();
                match root_index.get(&img_a) {
                    Some(&j) if coroots[j] == img_c => {}
                    _ => return bad("root set not closed under simple reflections".into()),
                }
            }
        }
        let pos_indices: Vec<usize> = (0..nroots).filter(|&i| positive[i]).collect();
        if pos_indices.len() * 2 != nroots {
            return bad("positive roots are not half of all roots".into());
        }
        let two_rho = (0..rank)
            .map(|x| pos_indices.iter().map(|&p| roots[p][x]).sum())
            .collect();
        let components = dynkin_components(&cartan);
        let mut highest = Vec::new();
        for comp in &components {
            let in_comp = |p: &usize| {
                coeffs[*p]
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| c == 0 || comp.contains(&j))
            };
            let height = |p: usize| coeffs[p].iter().sum::<i64>();
            let top = pos_indices
                .iter()
                .filter(|p| in_comp(p))
                .copied()
                .max_by_key(|&p| height(p))
                .expect("component has a simple root");
            highest.push(top);
        }
        let quotient = LatticeQuotient::new(
            rank,
            &simple
                .iter()
                .map(|&i| coroots[i].clone())
                .collect::<Vec<_>>(),
        );
        let hash = datum_hash(rank, &roots, &coroots, &simple);
        let mut datum = RootDatum {
            name: name.to_string(),
            rank,
            roots,
            coroots,
            positive,
            pos_indices,
            neg_of,
            simple,
            coeffs,
            cartan,
            components,
            highest,
            two_rho,
            simple_refl,
            coroot_index,
            longest: WeylElt::identity(rank),
            quotient,
            base_bary: RationalCoweight::zero(rank),
            hash,
            affine: Default::default(),
            weyl: OnceLock::new(),
        };
        datum.longest = datum.compute_longest();
        datum.base_bary = datum.compute_base_barycenter();
        datum.affine = crate::affine_weyl::AffineData::new(&datum);
        Ok(datum)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Dimension of the ambient coweight space.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of simple roots (semisimple rank).
    pub fn semisimple_rank(&self) -> usize {
        self.simple.len()
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn positive_indices(&self) -> &[usize] {
        &self.pos_indices
    }

    pub fn is_positive(&self, root: usize) -> bool {
        self.positive[root]
    }

    pub fn negative_of(&self, root: usize) -> usize {
        self.neg_of[root]
    }

    pub fn root_coefficients(&self, root: usize) -> &[i64] {
        &self.coeffs[root]
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Connected components of the Dynkin diagram, as lists of simple positions.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Highest root of each Dynkin component.
    pub fn highest_roots(&self) -> &[usize] {
        &self.highest
    }

    /// Sum of the positive roots, as a functional on `X`.
    pub fn two_rho(&self) -> &[i64] {
        &self.two_rho
    }

    /// Sum of the positive coroots, an element of `X`.
    pub fn two_rho_coroot_sum(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.rank()];
        for &p in self.positive_indices() {
            for (t, c) in out.iter_mut().zip(&self.coroots()[p]) {
                *t += c;
            }
        }
        out
    }

    /// Short content hash identifying the datum in caches and class ids.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// The quotient `X/Q` by the coroot lattice.
    pub fn pi_one(&self) -> &LatticeQuotient {
        &self.quotient
    }

    pub fn pairing(&self, v: &[i64], root: usize) -> i64 {
        dot(v, &self.roots[root])
    }

    pub fn pairing_rat(&self, v: &RationalCoweight, root: usize) -> Rat {
        linalg::dot_rat(&v.0, &self.roots[root])
    }

    /// `<v, 2ρ>`.
    pub fn two_rho_pairing(&self, v: &RationalCoweight) -> Rat {
        linalg::dot_rat(&v.0, &self.two_rho)
    }

    pub fn two_rho_pairing_int(&self, v: &[i64]) -> i64 {
        dot(v, &self.two_rho)
    }

    fn coroot_sign_positive(&self, h: &[i64], coroot: usize) -> bool {
        dot(h, &self.coroots[coroot]) > 0
    }

    /// The row vector `2ρ ∘ m` for a row-major matrix `m`.
    fn two_rho_times(&self, m: &[i64]) -> Vec<i64> {
        let r = self.rank;
        (0..r)
            .map(|j| (0..r).map(|i| self.two_rho[i] * m[i * r + j]).sum())
            .collect()
    }

    /// Index of the root `u(α_k)`.
    pub fn root_image(&self, u: &WeylElt, k: usize) -> usize {
        self.coroot_index[&u.apply(&self.coroots[k])]
    }

    /// Whether `u^{-1}(α_k) > 0`.
    pub(crate) fn inverse_keeps_positive(&self, h_inv: &[i64], k: usize) -> bool {
        self.coroot_sign_positive(h_inv, k)
    }

    /// `2ρ ∘ u^{-1}`, used to test the sign of `u^{-1}(α)` for many roots.
    pub(crate) fn inverse_sign_vector(&self, u: &WeylElt) -> Vec<i64> {
        self.two_rho_times(&u.inv)
    }

    /// The reflection `s_α` in the root with the given index.
    pub fn reflection(&self, root: usize) -> WeylElt {
        let r = self.rank;
        let mut m = vec![0; r * r];
        for i in 0..r {
            for j in 0..r {
                m[i * r + j] = i64::from(i == j) - self.coroots[root][i] * self.roots[root][j];
            }
        }
        WeylElt::from_matrices(r, m.clone(), m)
    }

    pub fn simple_reflection(&self, i: usize) -> &WeylElt {
        &self.simple_refl[i]
    }

    pub fn weyl_identity(&self) -> WeylElt {
        WeylElt::identity(self.rank)
    }

    /// Length of `u` = number of positive roots sent to negative roots.
    pub fn finite_length(&self, u: &WeylElt) -> usize {
        let h = self.two_rho_times(&u.mat);
        self.pos_indices
            .iter()
            .filter(|&&p| !self.coroot_sign_positive(&h, p))
            .count()
    }

    /// `s_i u < u`.
    pub fn is_left_descent(&self, u: &WeylElt, i: usize) -> bool {
        let h = self.two_rho_times(&u.inv);
        !self.coroot_sign_positive(&h, self.simple[i])
    }

    /// `u s_i < u`.
    pub fn is_right_descent(&self, u: &WeylElt, i: usize) -> bool {
        let h = self.two_rho_times(&u.mat);
        !self.coroot_sign_positive(&h, self.simple[i])
    }

    pub fn left_descents(&self, u: &WeylElt) -> Vec<usize> {
        (0..self.simple.len())
            .filter(|&i| self.is_left_descent(u, i))
            .collect()
    }

    pub fn right_descents(&self, u: &WeylElt) -> Vec<usize> {
        (0..self.simple.len())
            .filter(|&i| self.is_right_descent(u, i))
            .collect()
    }

    /// Lexicographically smallest reduced word, with letters `1..=n` naming
    /// the simple reflections in order.
    pub fn reduced_word(&self, u: &WeylElt) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = u.clone();
        while let Some(i) = (0..self.simple.len()).find(|&i| self.is_left_descent(&cur, i)) {
            word.push(i + 1);
            cur = self.simple_refl[i].compose(&cur);
        }
        word
    }

    /// Product of simple reflections named by 1-based letters.
    pub fn weyl_from_word(&self, word: &[usize]) -> Result<WeylElt> {
        let mut u = self.weyl_identity();
        for &l in word {
            if l == 0 || l > self.simple.len() {
                return Err(Error::Parse(format!("no simple reflection s{l}")));
            }
            u = u.compose(&self.simple_refl[l - 1]);
        }
        Ok(u)
    }

    /// Simple positions occurring in a reduced word of `u`.
    pub fn support(&self, u: &WeylElt) -> BTreeSet<usize> {
        self.reduced_word(u).into_iter().map(|l| l - 1).collect()
    }

    pub fn longest_element(&self) -> &WeylElt {
        &self.longest
    }

    fn compute_longest(&self) -> WeylElt {
        let mut u = self.weyl_identity();
        while let Some(i) = (0..self.simple.len()).find(|&i| !self.is_right_descent(&u, i)) {
            u = u.compose(&self.simple_refl[i]);
        }
        u
    }

    /// All elements of `W`, sorted by length and then structurally.
    pub fn weyl_elements(&self) -> Result<&[WeylElt]> {
        let res = self.weyl.get_or_init(|| {
            let id = self.weyl_identity();
            let mut seen: std::collections::HashSet<WeylElt> = [id.clone()].into();
            let mut queue = VecDeque::from([id]);
            while let Some(u) = queue.pop_front() {
                for s in &self.simple_refl {
                    let v = u.compose(s);
                    if seen.insert(v.clone()) {
                        if seen.len() > MAX_WEYL_ORDER {
                            return Err(format!(
                                "Weyl group of {} exceeds {MAX_WEYL_ORDER} elements",
                                self.name
                            ));
                        }
                        queue.push_back(v);
                    }
                }
            }
            let mut all: Vec<(usize, WeylElt)> = seen
                .into_iter()
                .map(|u| (self.finite_length(&u), u))
                .collect();
            all.sort();
            Ok(all.into_iter().map(|(_, u)| u).collect())
        });
        res.as_deref().map_err(|e| Error::Resource(e.clone()))
    }

    pub fn is_dominant(&self, v: &RationalCoweight) -> bool {
        self.simple
            .iter()
            .all(|&i| !self.pairing_rat(v, i).is_negative())
    }

    /// The dominant element of the `W`-orbit of `v` and a witness `x` with
    /// `x·v` dominant.
    pub fn dominant_rep(&self, v: &RationalCoweight) -> (RationalCoweight, WeylElt) {
        let mut cur = v.clone();
        let mut x = self.weyl_identity();
        while let Some(i) =
            (0..self.simple.len()).find(|&i| self.pairing_rat(&cur, self.simple[i]).is_negative())
        {
            let p = self.pairing_rat(&cur, self.simple[i]);
            let c = &self.coroots[self.simple[i]];
            for (x, &ci) in cur.0.iter_mut().zip(c) {
                *x -= p * Rat::from_integer(ci);
            }
            x = self.simple_refl[i].compose(&x);
        }
        (cur, x)
    }

    /// Fundamental coweight `ϖ_i^∨` inside the span of the coroots.
    pub fn fundamental_coweight(&self, i: usize) -> RationalCoweight {
        let n = self.simple.len();
        let at: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| Rat::from_integer(self.cartan[k][j]))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = (0..n)
            .map(|j| Rat::from_integer(i64::from(i == j)))
            .collect();
        let y = solve_square(&at, &rhs).expect("Cartan matrix is nonsingular");
        self.coroot_combination(&y)
    }

    fn coroot_combination(&self, y: &[Rat]) -> RationalCoweight {
        let mut x = vec![Rat::zero(); self.rank];
        for (k, &yk) in y.iter().enumerate() {
            for (xi, &c) in x.iter_mut().zip(&self.coroots[self.simple[k]]) {
                *xi += yk * Rat::from_integer(c);
            }
        }
        RationalCoweight(x)
    }

    /// Projection onto the `W`-invariant subspace (the average over `W`).
    pub fn central_projection(&self, v: &RationalCoweight) -> RationalCoweight {
        let n = self.simple.len();
        if n == 0 {
            return v.clone();
        }
        let at: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| Rat::from_integer(self.cartan[k][j]))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = self
            .simple
            .iter()
            .map(|&j| self.pairing_rat(v, j))
            .collect();
        let c = solve_square(&at, &rhs).expect("Cartan matrix is nonsingular");
        v.sub(&self.coroot_combination(&c))
    }

    /// Whether `<v, α> = 0` for every root.
    pub fn is_central(&self, v: &RationalCoweight) -> bool {
        self.simple
            .iter()
            .all(|&i| self.pairing_rat(v, i).is_zero())
    }

    /// Decides whether `v` is a nonnegative rational combination of the
    /// simple coroots.
    pub fn in_coroot_cone(&self, v: &RationalCoweight) -> bool {
        let n = self.simple.len();
        if n == 0 {
            return v.is_zero();
        }
        let at: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| Rat::from_integer(self.cartan[k][j]))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = self
            .simple
            .iter()
            .map(|&j| self.pairing_rat(v, j))
            .collect();
        let c = solve_square(&at, &rhs).expect("Cartan matrix is nonsingular");
        c.iter().all(linalg::is_nonneg) && self.coroot_combination(&c) == *v
    }

    /// Dimension of the subspace of `X ⊗ Q` fixed by `u`.
    pub fn fixed_space_dim(&self, u: &WeylElt) -> usize {
        let r = self.rank;
        let rows: Vec<Vec<Rat>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| Rat::from_integer(u.mat[i * r + j] - i64::from(i == j)))
                    .collect()
            })
            .collect();
        r - linalg::rank(&rows)
    }

    /// Barycenter of the base alcove `0 < <α, x> < 1` (α > 0), taken inside the
    /// span of the coroots.
    pub fn base_barycenter(&self) -> &RationalCoweight {
        &self.base_bary
    }

    /// Vertices of the base alcove for each Dynkin component: the origin and
    /// `ϖ_i^∨ / c_i`, where `θ = Σ c_i α_i` is the component's highest root.
    pub fn base_alcove_vertices(&self) -> Vec<RationalCoweight> {
        let mut verts = vec![RationalCoweight::zero(self.rank)];
        for (comp, &theta) in self.components.iter().zip(&self.highest) {
            for &i in comp {
                let c = self.coeffs[theta][i];
                let w = self.fundamental_coweight(i);
                verts.push(RationalCoweight(
                    w.0.iter().map(|x| x / Rat::from_integer(c)).collect(),
                ));
            }
        }
        verts
    }

    fn compute_base_barycenter(&self) -> RationalCoweight {
        let mut b = RationalCoweight::zero(self.rank);
        for (comp, &theta) in self.components.iter().zip(&self.highest) {
            let mut sum = RationalCoweight::zero(self.rank);
            for &i in comp {
                let c = Rat::from_integer(self.coeffs[theta][i]);
                let w = self.fundamental_coweight(i);
                sum = sum.add(&RationalCoweight(w.0.iter().map(|x| x / c).collect()));
            }
            let k = Rat::from_integer(comp.len() as i64 + 1);
            b = b.add(&RationalCoweight(sum.0.iter().map(|x| x / k).collect()));
        }
        b
    }

    /// The datum of the Levi subgroup with the given roots and simple roots
    /// (indices into this datum's root list), sharing the lattice `X`.
    pub fn levi(&self, root_indices: &[usize], simple_roots: &[usize]) -> Result<RootDatum> {
        let roots = root_indices
            .iter()
            .map(|&i| self.roots[i].clone())
            .collect();
        let coroots = root_indices
            .iter()
            .map(|&i| self.coroots[i].clone())
            .collect();
        let simple = simple_roots
            .iter()
            .map(|s| {
                root_indices
                    .iter()
                    .position(|r| r == s)
                    .ok_or_else(|| Error::InvalidDatum("Levi simple root outside Levi".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        RootDatum::from_parts(
            &format!("{}:M", self.name),
            self.rank,
            roots,
            coroots,
            simple,
        )
    }

    /// Whether `a` and `b` describe the same datum.
    pub fn same_as(&self, other: &RootDatum) -> bool {
        self.hash == other.hash
    }

    /// Checks that an element has the right shape for this datum.
    pub fn check_elt(&self, w: &AffElt) -> Result<()> {
        if w.translation.len() != self.rank || w.finite.rank() != self.rank {
            return Err(Error::MixedData(self.rank, w.translation.len()));
        }
        Ok(())
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|j| i64::from(i == j)).collect()
}

/// Roots and their coroots, index-aligned.
type RootPairs = (Vec<Vec<i64>>, Vec<Vec<i64>>);

fn close_under_reflections(
    simple_roots: &[Vec<i64>],
    simple_coroots: &[Vec<i64>],
) -> Result<RootPairs> {
    let mut roots: Vec<Vec<i64>> = Vec::new();
    let mut coroots: Vec<Vec<i64>> = Vec::new();
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (a, c) in simple_roots.iter().zip(simple_coroots) {
        seen.insert(a.clone(), roots.len());
        queue.push_back(roots.len());
        roots.push(a.clone());
        coroots.push(c.clone());
    }
    while let Some(k) = queue.pop_front() {
        if roots.len() > 2000 {
            return Err(Error::InvalidDatum(
                "Cartan matrix is not of finite type".into(),
            ));
        }
        for (ai, ci) in simple_roots.iter().zip(simple_coroots) {
            let p = dot(ci, &roots[k]);
            let q = dot(&coroots[k], ai);
            let a: Vec<i64> = roots[k].iter().zip(ai).map(|(x, y)| x - p * y).collect();
            let c: Vec<i64> = coroots[k].iter().zip(ci).map(|(x, y)| x - q * y).collect();
            if !seen.contains_key(&a) {
                seen.insert(a.clone(), roots.len());
                queue.push_back(roots.len());
                roots.push(a);
                coroots.push(c);
            }
        }
    }
    Ok((roots, coroots))
}

fn dynkin_components(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = cartan.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut k = 0;
        while k < members.len() {
            let i = members[k];
            for j in 0..n {
                if comp[j] == usize::MAX && cartan[i][j] != 0 {
                    comp[j] = id;
                    members.push(j);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

fn datum_hash(rank: usize, roots: &[Vec<i64>], coroots: &[Vec<i64>], simple: &[usize]) -> String {
    let mut pairs: Vec<(&Vec<i64>, &Vec<i64>)> = roots.iter().zip(coroots).collect();
    pairs.sort();
    let simple_roots: Vec<&Vec<i64>> = simple.iter().map(|&i| &roots[i]).collect();
    let canon = serde_json::json!({ "rank": rank, "pairs": pairs, "simple": simple_roots });
    let digest = Sha256::digest(canon.to_string().as_bytes());
    digest[..6].iter().map(|b| format!("{b:02x}")).collect()
}
