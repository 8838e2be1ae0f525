//! Exact linear algebra over the integers and the rationals.
//!
//! Everything here is sized for root data of rank at most eight, so plain
//! dense `Vec` matrices are used throughout.

use num_rational::Rational64;
use num_traits::{Signed, Zero};

pub type Rat = Rational64;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[i64]) -> Rat {
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, &y)| acc + *x * Rat::from_integer(y))
}

pub fn to_rat(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_integer(x)).collect()
}

/// Solves `a · x = b` for a square nonsingular rational matrix.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in col..=n {
                    let v = m[col][c];
                    m[r][c] -= f * v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n]).collect())
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][col].is_zero() {
                let f = m[i][col] / m[r][col];
                for c in col..ncols {
                    let v = m[r][c];
                    m[i][c] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

/// The quotient `Z^n / L` of the ambient lattice by the sublattice spanned by
/// a list of generators, presented through a Smith normal form.
///
/// With `U · A · V = diag(d_1, .., d_k, 0, ..)` (columns of `A` are the
/// generators), the coordinates `U · x` identify `Z^n / L` with
/// `⊕ Z/d_i ⊕ Z^(n-k)`. Components with `d_i = 1` are dropped, so the
/// remaining coordinates are canonical for the chosen generators.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    u: Vec<Vec<i64>>,
    uinv: Vec<Vec<i64>>,
    /// Indices of the retained rows of `U`.
    kept: Vec<usize>,
    /// Modulus per retained coordinate; 0 marks a free coordinate.
    moduli: Vec<i64>,
    sub_rank: usize,
}

impl LatticeQuotient {
    pub fn new(ambient: usize, generators: &[Vec<i64>]) -> Self {
        let n = generators.len();
        let mut a: Vec<Vec<i128>> = (0..ambient)
            .map(|i| generators.iter().map(|g| g[i] as i128).collect())
            .collect();
        let mut u: Vec<Vec<i128>> = identity(ambient);
        let mut uinv: Vec<Vec<i128>> = identity(ambient);
        let mut k = 0;
        for t in 0..ambient.min(n) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..ambient {
                    for j in t..n {
                        if a[i][j] != 0
                            && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else { break };
                a.swap(t, pi);
                u.swap(t, pi);
                for row in uinv.iter_mut() {
                    row.swap(t, pi);
                }
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                let p = a[t][t];
                let mut clean = true;
                for i in t + 1..ambient {
                    let q = a[i][t] / p;
                    if q != 0 {
                        for j in 0..n {
                            a[i][j] -= q * a[t][j];
                        }
                        for j in 0..ambient {
                            u[i][j] -= q * u[t][j];
                        }
                        for row in uinv.iter_mut() {
                            row[t] += q * row[i];
                        }
                    }
                    clean &= a[i][t] == 0;
                }
                for j in t + 1..n {
                    let q = a[t][j] / p;
                    if q != 0 {
                        for row in a.iter_mut() {
                            row[j] -= q * row[t];
                        }
                    }
                    clean &= a[t][j] == 0;
                }
                if !clean {
                    continue;
                }
                let offender = (t + 1..ambient).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
                if let Some(i) = offender {
                    for j in 0..n {
                        a[t][j] += a[i][j];
                    }
                    for j in 0..ambient {
                        u[t][j] += u[i][j];
                    }
                    for row in uinv.iter_mut() {
                        row[i] -= row[t];
                    }
                    continue;
                }
                break;
            }
            if a[t][t] == 0 {
                break;
            }
            if a[t][t] < 0 {
                a[t][t] = -a[t][t];
                negate_row_col(&mut u, &mut uinv, t);
            }
            k = t + 1;
        }
        // Free coordinates: fix the sign so the first nonzero entry is positive.
        for i in k..ambient {
            if u[i].iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                negate_row_col(&mut u, &mut uinv, i);
            }
        }
        let mut kept = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..ambient {
            let d = if i < k { a[i][i] as i64 } else { 0 };
            if d != 1 {
                kept.push(i);
                moduli.push(d);
            }
        }
        let narrow = |m: Vec<Vec<i128>>| -> Vec<Vec<i64>> {
            m.into_iter()
                .map(|r| r.into_iter().map(|x| x as i64).collect())
                .collect()
        };
        LatticeQuotient {
            u: narrow(u),
            uinv: narrow(uinv),
            kept,
            moduli,
            sub_rank: k,
        }
    }

    /// Moduli of the canonical coordinates (0 = free).
    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    /// Rank of the sublattice.
    pub fn sub_rank(&self) -> usize {
        self.sub_rank
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|&&d| d == 0).count()
    }

    /// Order of the quotient, `None` when it has a free part.
    pub fn order(&self) -> Option<u64> {
        self.moduli
            .iter()
            .try_fold(1u64, |acc, &d| (d != 0).then(|| acc * d as u64))
    }

    pub fn class_of(&self, x: &[i64]) -> Vec<i64> {
        self.kept
            .iter()
            .zip(&self.moduli)
            .map(|(&i, &d)| {
                let y = dot(&self.u[i], x);
                if d == 0 {
                    y
                } else {
                    y.rem_euclid(d)
                }
            })
            .collect()
    }

    pub fn reduce(&self, coords: &[i64]) -> Vec<i64> {
        coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &d)| if d == 0 { c } else { c.rem_euclid(d) })
            .collect()
    }

    /// A lattice vector whose class has the given coordinates.
    pub fn lift(&self, coords: &[i64]) -> Vec<i64> {
        let n = self.u.len();
        let mut y = vec![0; n];
        for (&i, &c) in self.kept.iter().zip(coords) {
            y[i] = c;
        }
        (0..n).map(|r| dot(&self.uinv[r], &y)).collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.class_of(x).iter().all(|&c| c == 0)
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn negate_row_col(u: &mut [Vec<i128>], uinv: &mut [Vec<i128>], t: usize) {
    for x in u[t].iter_mut() {
        *x = -*x;
    }
    for row in uinv.iter_mut() {
        row[t] = -row[t];
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: i64 = q.trim().parse().ok()?;
            (q != 0).then_some(())?;
            Some(Rat::new(p.trim().parse().ok()?, q))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

pub fn is_nonneg(r: &Rat) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_member(gens: &[Vec<i64>], x: &[i64], bound: i64) -> bool {
        // Enumerates small integer combinations of the generators.
        let n = gens.len();
        let mut coeffs = vec![-bound; n];
        loop {
            let v: Vec<i64> = (0..x.len())
                .map(|i| (0..n).map(|g| coeffs[g] * gens[g][i]).sum())
                .collect();
            if v == x {
                return true;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return false;
                }
                coeffs[k] += 1;
                if coeffs[k] > bound {
                    coeffs[k] = -bound;
                    k += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn quotient_of_gl3_roots_is_free_rank_one() {
        let gens = vec![vec![1, -1, 0], vec![0, 1, -1]];
        let q = LatticeQuotient::new(3, &gens);
        assert_eq!(q.moduli(), &[0]);
        assert_eq!(q.class_of(&[1, 0, 0]), vec![1]);
        assert_eq!(q.class_of(&[2, 3, -1]), vec![4]);
        assert!(q.contains(&[1, -1, 0]));
    }

    #[test]
    fn even_sublattice_has_order_two() {
        let q = LatticeQuotient::new(1, &[vec![2]]);
        assert_eq!(q.moduli(), &[2]);
        assert_eq!(q.order(), Some(2));
        assert_eq!(q.class_of(&[3]), vec![1]);
        assert_eq!(q.class_of(&q.lift(&[1])), vec![1]);
    }

    #[test]
    fn zero_generators_keep_everything_free() {
        let q = LatticeQuotient::new(2, &[]);
        assert_eq!(q.free_rank(), 2);
        assert_eq!(q.class_of(&[3, -4]).len(), 2);
    }

    #[test]
    fn solve_and_rank() {
        let a = vec![to_rat(&[2, -1]), to_rat(&[-1, 2])];
        let x = solve_square(&a, &to_rat(&[1, 0])).unwrap();
        assert_eq!(x, vec![Rat::new(2, 3), Rat::new(1, 3)]);
        assert_eq!(rank(&[to_rat(&[1, 2]), to_rat(&[2, 4])]), 1);
    }

    proptest! {
        #[test]
        fn membership_matches_bounded_search(
            g in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 1..3),
            x in proptest::collection::vec(-4i64..=4, 2),
        ) {
            let q = LatticeQuotient::new(2, &g);
            // Brute force only certifies membership; a negative answer needs a bound
            // large enough for these tiny generators.
            if brute_member(&g, &x, 12) {
                prop_assert!(q.contains(&x));
            }
            if q.contains(&x) && q.sub_rank() == 2 {
                prop_assert!(brute_member(&g, &x, 40));
            }
            let c = q.class_of(&x);
            prop_assert_eq!(q.class_of(&q.lift(&c)), c);
        }
    }
}
