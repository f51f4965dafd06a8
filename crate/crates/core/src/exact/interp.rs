//! Certified interpolation of point counts.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::IntPolyQ;
use crate::error::{CountFailure, Error, Result};

/// Lagrange interpolation over the rationals through `points`; returns the
/// coefficient vector (degree `< points.len()`).
pub fn lagrange_rational(points: &[(BigInt, BigInt)]) -> Vec<BigRational> {
    let n = points.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - xj) / (xi - xj)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRational::from_integer(xj.clone());
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = BigRational::new(yi.clone(), denom);
        for (k, c) in basis.into_iter().enumerate() {
            out[k] += c * &scale;
        }
    }
    out
}

pub(crate) fn eval_rational(coeffs: &[BigRational], x: &BigInt) -> BigRational {
    let x = BigRational::from_integer(x.clone());
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
}

/// Fits a polynomial of degree `<= degree_bound` through the first
/// `degree_bound + 1` samples, checks it on every remaining sample, and
/// requires integer coefficients.
pub fn interpolate_counting_poly(samples: &[(u64, u128)], degree_bound: usize) -> Result<IntPolyQ> {
    let needed = degree_bound + 2;
    if samples.len() < needed {
        return Err(Error::InsufficientSamples { needed, got: samples.len() });
    }
    let mut seen = BTreeSet::new();
    for &(p, _) in samples {
        if !seen.insert(p) {
            return Err(Error::DuplicatePrime(p));
        }
    }
    let points: Vec<(BigInt, BigInt)> =
        samples.iter().map(|&(p, c)| (BigInt::from(p), BigInt::from(c))).collect();
    let (fit, held_out) = points.split_at(degree_bound + 1);
    let coeffs = lagrange_rational(fit);
    for (x, y) in held_out {
        if eval_rational(&coeffs, x) != BigRational::from_integer(y.clone()) {
            return Err(Error::NotPolynomialCount(CountFailure::Consistency));
        }
    }
    if !coeffs.iter().all(|c| c.is_integer()) {
        return Err(Error::NotPolynomialCount(CountFailure::Integrality));
    }
    Ok(IntPolyQ::from_coeffs(coeffs.into_iter().map(|c| c.to_integer()).collect()))
}
