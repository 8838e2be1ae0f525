//! Laurent polynomials in `v` with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Degree of a Laurent polynomial; the zero polynomial has degree `-∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(i64),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(power: i64, coeff: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(power, coeff);
        p
    }

    /// `z = v - v⁻¹`.
    pub fn z() -> Self {
        Self::from_terms([(1, 1), (-1, -1)])
    }

    pub fn z_pow(k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * &Self::z())
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    pub fn add_term(&mut self, power: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let e = self.coeffs.entry(power).or_insert_with(BigInt::zero);
        *e += coeff;
        if e.is_zero() {
            self.coeffs.remove(&power);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, power: i64) -> BigInt {
        self.coeffs.get(&power).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing power.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn degree(&self) -> Degree {
        self.coeffs
            .keys()
            .next_back()
            .map_or(Degree::NegInfinity, |&d| Degree::Finite(d))
    }

    pub fn low_degree(&self) -> Degree {
        self.coeffs
            .keys()
            .next()
            .map_or(Degree::NegInfinity, |&d| Degree::Finite(d))
    }

    /// Value at `v = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Coefficients `c_k` with `self = Σ c_k (v - v⁻¹)^k`, `k ≥ 0`.
    ///
    /// Fails if `self` is not in the span of the powers of `v - v⁻¹`.
    pub fn rebase_in_z(&self) -> Result<Vec<BigInt>> {
        let mut rest = self.clone();
        let mut out: Vec<BigInt> = Vec::new();
        while let Degree::Finite(d) = rest.degree() {
            if d < 0 {
                return Err(Error::Internal(format!(
                    "{self} is not a polynomial in v - v^-1"
                )));
            }
            let c = rest.coeff(d);
            let k = d as usize;
            if out.len() <= k {
                out.resize(k + 1, BigInt::zero());
            }
            out[k] = c.clone();
            rest = &rest - &(&Self::z_pow(d as u32) * &Self::constant(c));
        }
        Ok(out)
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(0, c)
    }

    /// Whether `self ∈ N[v - v⁻¹]`.
    pub fn is_nonneg_in_z(&self) -> bool {
        self.rebase_in_z()
            .is_ok_and(|cs| cs.iter().all(|c| !c.is_negative()))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &rhs.coeffs {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&e, c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = abs.is_one();
            match e {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !unit {
                        write!(f, "{abs}*")?;
                    }
                    if e == 1 {
                        f.write_str("v")?;
                    } else {
                        write!(f, "v^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn degree_conventions() {
        assert_eq!(LaurentPoly::zero().degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(-100));
        let p = &LaurentPoly::z() + &LaurentPoly::zero();
        assert_eq!(p.degree(), Degree::Finite(1));
    }

    #[test]
    fn z_squared() {
        let z2 = &LaurentPoly::z() * &LaurentPoly::z();
        assert_eq!(z2, LaurentPoly::from_terms([(2, 1), (0, -2), (-2, 1)]));
        let cs = z2.rebase_in_z().unwrap();
        assert_eq!(cs, vec![BigInt::zero(), BigInt::zero(), BigInt::one()]);
        assert_eq!(z2.to_string(), "v^2 - 2 + v^-2");
    }

    #[test]
    fn rebase_fails_outside_span() {
        assert!(LaurentPoly::from_terms([(1, 1)]).rebase_in_z().is_err());
        assert!(LaurentPoly::from_terms([(-1, 1)]).rebase_in_z().is_err());
        assert!(!(-&LaurentPoly::z()).is_nonneg_in_z());
    }

    #[test]
    fn big_coefficients() {
        let p = LaurentPoly::z_pow(80);
        assert_eq!(p.eval_at_one(), BigInt::zero());
        assert!(p.coeff(0).abs() > BigInt::from(i64::MAX));
        assert_eq!(p.rebase_in_z().unwrap()[80], BigInt::one());
    }

    proptest! {
        #[test]
        fn rebase_roundtrip(cs in prop::collection::vec(-20i64..20, 0..8)) {
            let mut p = LaurentPoly::zero();
            for (k, &c) in cs.iter().enumerate() {
                p = &p + &(&LaurentPoly::z_pow(k as u32) * &LaurentPoly::constant(BigInt::from(c)));
            }
            let back = p.rebase_in_z().unwrap();
            let mut want: Vec<BigInt> = cs.iter().map(|&c| BigInt::from(c)).collect();
            while want.last().is_some_and(Zero::is_zero) {
                want.pop();
            }
            prop_assert_eq!(back, want);
        }

        #[test]
        fn ring_laws(a in prop::collection::vec((-4i64..4, -5i64..5), 0..5),
                     b in prop::collection::vec((-4i64..4, -5i64..5), 0..5),
                     c in prop::collection::vec((-4i64..4, -5i64..5), 0..5)) {
            let (a, b, c) = (LaurentPoly::from_terms(a), LaurentPoly::from_terms(b), LaurentPoly::from_terms(c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() && !b.is_zero() {
                let (Degree::Finite(x), Degree::Finite(y)) = (a.degree(), b.degree()) else { unreachable!() };
                prop_assert_eq!((&a * &b).degree(), Degree::Finite(x + y));
            }
        }
    }
}
