//! Laurent polynomials in a single formal variable `v`.
//!
//! `v` plays the role of a square root of `q`, so a q-power `q^{k/2}` is the
//! v-monomial `v^k`. Everything stays in integer exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntPolyQ;

/// An element of `Z[v, v^{-1}]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentV {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentV {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c * v^exp`.
    pub fn monomial(exp: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// `v^exp`.
    pub fn v_pow(exp: i64) -> Self {
        Self::monomial(exp, 1)
    }

    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// `P(v) -> P(v^{-1})`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Value at `v = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// If every exponent is even and nonnegative, the same element read as a
    /// polynomial in `q = v^2`.
    pub fn to_q_poly(&self) -> Option<IntPolyQ> {
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if *e < 0 || e % 2 != 0 {
                return None;
            }
            let k = (e / 2) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigInt::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(IntPolyQ::from_coeffs(coeffs))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self` in
    /// `Z[v, v^{-1}]`.
    pub fn div_exact(&self, d: &LaurentV) -> Option<LaurentV> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Units of Z[v^±] are ±v^k, so normalise both sides to genuine
        // polynomials with nonzero constant term and do long division from
        // the top degree.
        let d_low = d.min_exp().unwrap();
        let d_high = d.max_exp().unwrap();
        let lead = d.terms[&d_high].clone();
        let mut rem = self.clone();
        let mut quot = LaurentV::zero();
        while let Some(top) = rem.max_exp() {
            if top - d_high < rem.min_exp().unwrap() - d_low {
                return None;
            }
            let (q, r) = rem.terms[&top].div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            let shift = top - d_high;
            quot.add_term(shift, q.clone());
            for (e, c) in &d.terms {
                rem.add_term(e + shift, -(c * &q));
            }
        }
        Some(quot)
    }
}

impl Add for &LaurentV {
    type Output = LaurentV;
    fn add(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentV> for LaurentV {
    fn add_assign(&mut self, rhs: &LaurentV) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Sub for &LaurentV {
    type Output = LaurentV;
    fn sub(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentV {
    type Output = LaurentV;
    fn neg(self) -> LaurentV {
        LaurentV {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentV {
    type Output = LaurentV;
    fn mul(self, rhs: &LaurentV) -> LaurentV {
        let mut out = LaurentV::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
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
            match (*e, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("v")?,
                (1, false) => write!(f, "{abs}*v")?,
                (k, true) => write!(f, "v^{k}")?,
                (k, false) => write!(f, "{abs}*v^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentV({self})")
    }
}
