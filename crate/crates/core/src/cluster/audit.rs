use std::fmt;

use crate::error::Result;

use super::fpoly::extract_g_and_f;
use super::pair::{is_unitally_compatible, mutate_matrices_signed, CompatiblePair};
use super::seed::{walk_from, QuantumSeed, DEFAULT_TERM_CEILING};

/// Structural properties every seed reached by mutation must have.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Invariant {
    BarInvariance,
    Positivity,
    SupportSandwich,
    MinimalDegreeIsBasisColumn,
    LambdaTransport,
    UnitalCompatibility,
    SignIndependence,
    MutationInvolution,
    PrincipalPairing,
    ClassicalLimit,
}

impl Invariant {
    pub const ALL: [Invariant; 10] = [
        Invariant::BarInvariance,
        Invariant::Positivity,
        Invariant::SupportSandwich,
        Invariant::MinimalDegreeIsBasisColumn,
        Invariant::LambdaTransport,
        Invariant::UnitalCompatibility,
        Invariant::SignIndependence,
        Invariant::MutationInvolution,
        Invariant::PrincipalPairing,
        Invariant::ClassicalLimit,
    ];
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::BarInvariance => "bar invariance",
            Invariant::Positivity => "positivity",
            Invariant::SupportSandwich => "support sandwich",
            Invariant::MinimalDegreeIsBasisColumn => "minimal degree = basis-change column",
            Invariant::LambdaTransport => "lambda transport",
            Invariant::UnitalCompatibility => "unital compatibility",
            Invariant::SignIndependence => "sign independence",
            Invariant::MutationInvolution => "mutation involution",
            Invariant::PrincipalPairing => "B~^T L B~ = B",
            Invariant::ClassicalLimit => "v=1 limit = commutative engine",
        })
    }
}

/// Checks every [`Invariant`] on `seed`; returns those that fail.
pub fn audit_seed(pair: &CompatiblePair, seed: &QuantumSeed) -> Result<Vec<Invariant>> {
    let mut failed = Vec::new();
    let n = seed.n();
    let mutable = &seed.vars()[..n];

    if !mutable.iter().all(|x| x.bar() == *x) {
        failed.push(Invariant::BarInvariance);
    }
    if !mutable.iter().all(|x| x.has_nonnegative_coeffs()) {
        failed.push(Invariant::Positivity);
    }

    let mut sandwich = true;
    let mut columns = true;
    for (k, x) in mutable.iter().enumerate() {
        let (g, f) = extract_g_and_f(x, pair.b_tilde())?;
        match f.dim_vector() {
            Ok(m) => sandwich &= f.support().all(|e| e.iter().zip(&m).all(|(a, b)| 0 <= *a && a <= b)),
            Err(_) => sandwich = false,
        }
        columns &= g.0 == seed.basis_change().col(k);
    }
    if !sandwich {
        failed.push(Invariant::SupportSandwich);
    }
    if !columns {
        failed.push(Invariant::MinimalDegreeIsBasisColumn);
    }

    let g = seed.basis_change();
    if &g.transpose().mul(pair.lambda().matrix()).mul(g) != seed.lambda().matrix() {
        failed.push(Invariant::LambdaTransport);
    }
    if !is_unitally_compatible(seed.lambda().matrix(), seed.b_tilde()) {
        failed.push(Invariant::UnitalCompatibility);
    }
    let signs_agree = (0..n).all(|k| {
        let (lp, bp, _) = mutate_matrices_signed(seed.lambda(), seed.b_tilde(), k, 1);
        let (lm, bm, _) = mutate_matrices_signed(seed.lambda(), seed.b_tilde(), k, -1);
        lp == lm && bp == bm
    });
    if !signs_agree {
        failed.push(Invariant::SignIndependence);
    }

    let mut involution = true;
    for k in 0..n {
        let back = seed.mutate(k)?.mutate(k)?;
        involution &= back.vars() == seed.vars()
            && back.lambda() == seed.lambda()
            && back.b_tilde() == seed.b_tilde();
    }
    if !involution {
        failed.push(Invariant::MutationInvolution);
    }

    let bt = seed.b_tilde();
    if bt.transpose().mul(seed.lambda().matrix()).mul(bt) != bt.top_rows(n) {
        failed.push(Invariant::PrincipalPairing);
    }

    let classical = walk_from(QuantumSeed::commutative(pair.b_tilde()), seed.word(), DEFAULT_TERM_CEILING)?;
    let classical = classical.last().unwrap();
    let limit_ok = seed
        .vars()
        .iter()
        .zip(classical.vars())
        .all(|(q, c)| q.specialize_v1() == c.specialize_v1());
    if !limit_ok {
        failed.push(Invariant::ClassicalLimit);
    }
    Ok(failed)
}
