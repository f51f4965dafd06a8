use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::LaurentV;

/// An integer polynomial in `q`, stored densely by q-exponent.
///
/// Trailing zero coefficients are trimmed, so the zero polynomial has an
/// empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolyQ {
    coeffs: Vec<BigInt>,
}

impl IntPolyQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `q^k`.
    pub fn q_pow(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_u64(&self, q: u64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// The same element in `Z[v^±]` with `q = v^2`.
    pub fn to_laurent(&self) -> LaurentV {
        LaurentV::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (2 * k as i64, c.clone())),
        )
    }
}

impl Add for &IntPolyQ {
    type Output = IntPolyQ;
    fn add(self, rhs: &IntPolyQ) -> IntPolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                let b = rhs.coeffs.get(i).cloned().unwrap_or_default();
                a + b
            })
            .collect();
        IntPolyQ::from_coeffs(coeffs)
    }
}

impl Mul for &IntPolyQ {
    type Output = IntPolyQ;
    fn mul(self, rhs: &IntPolyQ) -> IntPolyQ {
        if self.is_zero() || rhs.is_zero() {
            return IntPolyQ::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolyQ::from_coeffs(coeffs)
    }
}

impl fmt::Display for IntPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
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
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (k, true) => write!(f, "q^{k}")?,
                (k, false) => write!(f, "{abs}*q^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolyQ({self})")
    }
}

/// The Gaussian binomial `[n choose k]_q`; zero when `k > n`.
pub fn gaussian_binomial(n: usize, k: usize) -> IntPolyQ {
    if k > n {
        return IntPolyQ::zero();
    }
    // q-Pascal: [n, k] = [n-1, k-1] + q^k [n-1, k]
    let mut row: Vec<IntPolyQ> = vec![IntPolyQ::one()];
    for i in 1..=n {
        let mut next = Vec::with_capacity(i + 1);
        for j in 0..=i {
            let left = if j >= 1 { row[j - 1].clone() } else { IntPolyQ::zero() };
            let right = if j < i { &IntPolyQ::q_pow(j) * &row[j] } else { IntPolyQ::zero() };
            next.push(&left + &right);
        }
        row = next;
    }
    row.swap_remove(k)
}

/// `[n choose k]_q` evaluated at `q = p`, i.e. the number of `k`-dimensional
/// subspaces of `F_p^n`. `None` on `u128` overflow.
pub fn gaussian_binomial_at(n: usize, k: usize, p: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul(p.checked_pow((n - i) as u32)? - 1)?;
        den = den.checked_mul(p.checked_pow((i + 1) as u32)? - 1)?;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    debug_assert_eq!(den, 1);
    Some(num / den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
