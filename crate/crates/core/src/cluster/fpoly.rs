use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{FullRankSolver, IntMatrix, LaurentV};
use crate::report::{BigIntJson, TermRecord};
use crate::torus::{GVector, SkewForm, TorusElement};

/// `Σ_e F(e) y^e` with `e >= 0` in `Z^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FPolynomial {
    n: usize,
    terms: BTreeMap<Vec<i64>, LaurentV>,
}

impl FPolynomial {
    pub fn one(n: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; n], LaurentV::one());
        Self { n, terms }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, LaurentV)>,
    {
        let mut out = Self { n, terms: BTreeMap::new() };
        for (e, c) in terms {
            assert_eq!(e.len(), n, "y-exponent length differs from rank");
            let slot = out.terms.entry(e).or_default();
            *slot += &c;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &LaurentV)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i64]) -> LaurentV {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.terms.keys()
    }

    /// Coefficients at `v = 1`.
    pub fn specialize_v1(&self) -> BTreeMap<Vec<i64>, BigInt> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.eval_at_one()))
            .filter(|(_, c)| *c != BigInt::from(0))
            .collect()
    }

    /// The componentwise maximum of the support, which must itself be in the support.
    pub fn dim_vector(&self) -> Result<Vec<i64>> {
        let mut top = vec![0; self.n];
        for e in self.terms.keys() {
            for (t, x) in top.iter_mut().zip(e) {
                *t = (*t).max(*x);
            }
        }
        if self.terms.is_empty() || !self.terms.contains_key(&top) {
            return Err(Error::FSupportNotInterval);
        }
        Ok(top)
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(e, c)| TermRecord {
                exponent: e.clone(),
                coeff: c.terms().map(|(k, x)| (k, BigIntJson(x.clone()))).collect(),
            })
            .collect()
    }
}

impl fmt::Display for FPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() || e.iter().all(|&x| x == 0) {
                write!(f, "({c})")?;
            }
            for (j, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "y{}", j + 1)?,
                    _ => write!(f, "y{}^{x}", j + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Splits `X = F|_{y^e -> X^{B̃e}} · X^{g̃}` with `g̃` the minimal degree of `X`.
pub fn extract_g_and_f(x: &TorusElement, b_tilde: &IntMatrix) -> Result<(GVector, FPolynomial)> {
    let solver = FullRankSolver::new(b_tilde)?;
    let g = x.minimal_degree_with(&solver)?;
    let form = x.form();
    let mut terms = Vec::with_capacity(x.len());
    for (h, c) in x.terms() {
        let d: Vec<i64> = h.iter().zip(&g.0).map(|(a, b)| a - b).collect();
        let e = solver.solve(&d).filter(|e| e.iter().all(|&x| x >= 0)).ok_or(Error::NotClusterMonomial)?;
        // X^{B̃e} X^{g̃} = v^{Λ(B̃e, g̃)} X^{g̃ + B̃e}
        terms.push((e, c.shift(-form.pair(&d, &g.0))));
    }
    Ok((g, FPolynomial::from_terms(b_tilde.cols(), terms)))
}

/// `F|_{y^e -> X^{B̃e}} · X^{g}` in the torus of `form`.
pub fn rebuild(f: &FPolynomial, g: &GVector, b_tilde: &IntMatrix, form: &Arc<SkewForm>) -> TorusElement {
    let xg = TorusElement::monomial(form, g.0.clone(), LaurentV::one());
    let mut sub = TorusElement::zero(form);
    for (e, c) in f.terms() {
        sub.add_term(b_tilde.mul_vec(e), c);
    }
    &sub * &xg
}
