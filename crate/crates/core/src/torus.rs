//! The based quantum torus: `X^g X^h = v^{λ(g,h)} X^{g+h}` over `Z[v^±]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{FullRankSolver, IntMatrix, LaurentV};
use crate::report::{BigIntJson, TermRecord};

/// A skew-symmetric integer matrix read as a bilinear form on `Z^m`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SkewForm {
    matrix: IntMatrix,
}

impl SkewForm {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_skew_symmetric() {
            return Err(Error::NotSkewSymmetric);
        }
        Ok(Self { matrix })
    }

    /// The zero form: the torus becomes the commutative Laurent ring.
    pub fn zero(m: usize) -> Self {
        Self { matrix: IntMatrix::zeros(m, m) }
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `gᵀ Λ h`.
    pub fn pair(&self, g: &[i64], h: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &gi) in g.iter().enumerate().take(self.rank()) {
            if gi == 0 {
                continue;
            }
            let row = self.matrix.row(i);
            acc += gi * row.iter().zip(h).map(|(a, b)| a * b).sum::<i64>();
        }
        acc
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[(i, j)]
    }
}

/// An exponent vector with a leading coordinate of `g` in the initial lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct GVector(pub Vec<i64>);

impl fmt::Display for GVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Graded lexicographic order: total degree first, then lexicographic.
pub fn grlex_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let sa: i64 = a.iter().sum();
    let sb: i64 = b.iter().sum();
    sa.cmp(&sb).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq)]
struct GrLex(Vec<i64>);

impl Ord for GrLex {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for GrLex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element `Σ P_g(v) X^g` of the quantum torus of a fixed form.
#[derive(Clone)]
pub struct TorusElement {
    form: Arc<SkewForm>,
    terms: BTreeMap<Vec<i64>, LaurentV>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.form, &other.form) || self.form == other.form) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl TorusElement {
    pub fn zero(form: &Arc<SkewForm>) -> Self {
        Self { form: Arc::clone(form), terms: BTreeMap::new() }
    }

    pub fn one(form: &Arc<SkewForm>) -> Self {
        Self::monomial(form, vec![0; form.rank()], LaurentV::one())
    }

    /// `c · X^g`.
    pub fn monomial(form: &Arc<SkewForm>, g: Vec<i64>, c: LaurentV) -> Self {
        assert_eq!(g.len(), form.rank(), "exponent length differs from lattice rank");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(g, c);
        }
        Self { form: Arc::clone(form), terms }
    }

    /// `X^{e_i}` (0-based `i`).
    pub fn generator(form: &Arc<SkewForm>, i: usize) -> Self {
        let mut g = vec![0; form.rank()];
        g[i] = 1;
        Self::monomial(form, g, LaurentV::one())
    }

    pub fn from_terms<I>(form: &Arc<SkewForm>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, LaurentV)>,
    {
        let mut out = Self::zero(form);
        for (g, c) in terms {
            out.add_term(g, &c);
        }
        out
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &LaurentV)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.terms.keys()
    }

    pub fn coeff(&self, g: &[i64]) -> LaurentV {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: Vec<i64>, c: &LaurentV) {
        assert_eq!(g.len(), self.rank(), "exponent length differs from lattice rank");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    fn check_rank(&self, other: &TorusElement) -> Result<()> {
        if self.rank() != other.rank() || !(Arc::ptr_eq(&self.form, &other.form) || self.form == other.form) {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(())
    }

    /// The twisted product `self · other`.
    pub fn try_mul(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_rank(other)?;
        let mut out = TorusElement::zero(&self.form);
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                let twist = self.form.pair(g, h);
                let sum: Vec<i64> = g.iter().zip(h).map(|(x, y)| x + y).collect();
                out.add_term(sum, &(a * b).shift(twist));
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c);
        }
        Ok(out)
    }

    /// Multiply every coefficient by `v^k`.
    pub fn shift(&self, k: i64) -> TorusElement {
        TorusElement {
            form: Arc::clone(&self.form),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.shift(k))).collect(),
        }
    }

    /// `self^k`, `k >= 0`.
    pub fn pow(&self, k: u32) -> TorusElement {
        let mut out = TorusElement::one(&self.form);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// The bar involution: `v -> v^{-1}` on coefficients, exponents fixed.
    pub fn bar(&self) -> TorusElement {
        TorusElement {
            form: Arc::clone(&self.form),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.bar())).collect(),
        }
    }

    /// The `v = 1` specialization into the commutative Laurent ring.
    pub fn specialize_v1(&self) -> CommutativeLaurent {
        let mut out = CommutativeLaurent::default();
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c.eval_at_one());
        }
        out
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.has_nonnegative_coeffs())
    }

    fn leading(&self) -> Option<(&Vec<i64>, &LaurentV)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    fn trailing(&self) -> Option<&Vec<i64>> {
        self.terms.keys().min_by(|a, b| grlex_cmp(a, b))
    }

    /// The unique `c` with `divisor · c = self`, by leading-term elimination
    /// in graded lexicographic order. `max_terms` caps the quotient size.
    pub fn left_divide(&self, divisor: &TorusElement, max_terms: usize) -> Result<TorusElement> {
        self.check_rank(divisor)?;
        let (lead_g, lead_c) = match divisor.leading() {
            Some((g, c)) => (g.clone(), c.clone()),
            None => return Err(Error::DivisionFailed),
        };
        let mut quotient = TorusElement::zero(&self.form);
        if self.is_zero() {
            return Ok(quotient);
        }
        // trailing(self) = trailing(divisor) + trailing(quotient)
        let floor: Vec<i64> = self
            .trailing()
            .unwrap()
            .iter()
            .zip(divisor.trailing().unwrap())
            .map(|(x, y)| x - y)
            .collect();
        // Newton polytopes add under products, so each quotient exponent lies
        // in the box [min(self) - min(divisor), max(self) - max(divisor)].
        let span = |t: &TorusElement, i: usize| {
            let it = t.terms.keys().map(move |g| g[i]);
            (it.clone().min().unwrap(), it.max().unwrap())
        };
        let bounds: Vec<(i64, i64)> = (0..self.rank())
            .map(|i| {
                let ((slo, shi), (dlo, dhi)) = (span(self, i), span(divisor, i));
                (slo - dlo, shi - dhi)
            })
            .collect();
        let mut rem: BTreeMap<GrLex, LaurentV> =
            self.terms.iter().map(|(g, c)| (GrLex(g.clone()), c.clone())).collect();
        while let Some((top, top_c)) = rem.iter().next_back().map(|(g, c)| (g.0.clone(), c.clone())) {
            let gc: Vec<i64> = top.iter().zip(&lead_g).map(|(x, y)| x - y).collect();
            if grlex_cmp(&gc, &floor) == Ordering::Less
                || gc.iter().zip(&bounds).any(|(x, (lo, hi))| x < lo || x > hi)
            {
                return Err(Error::DivisionFailed);
            }
            if quotient.len() >= max_terms {
                return Err(Error::TermCeiling(max_terms));
            }
            let twist = self.form.pair(&lead_g, &gc);
            let pc = top_c.div_exact(&lead_c).ok_or(Error::DivisionFailed)?.shift(-twist);
            for (g, c) in &divisor.terms {
                let twist = self.form.pair(g, &gc);
                let key = GrLex(g.iter().zip(&gc).map(|(x, y)| x + y).collect());
                let delta = (c * &pc).shift(twist);
                let slot = rem.entry(key.clone()).or_default();
                *slot = &*slot - &delta;
                if slot.is_zero() {
                    rem.remove(&key);
                }
            }
            quotient.add_term(gc, &pc);
        }
        Ok(quotient)
    }

    /// The unique minimum of the support under `g >= h ⟺ g - h ∈ B̃·Z^n_{>=0}`.
    pub fn minimal_degree(&self, b_tilde: &IntMatrix) -> Result<GVector> {
        let solver = FullRankSolver::new(b_tilde)?;
        self.minimal_degree_with(&solver)
    }

    pub(crate) fn minimal_degree_with(&self, solver: &FullRankSolver) -> Result<GVector> {
        let support: Vec<&Vec<i64>> = self.terms.keys().collect();
        let mut found = None;
        'outer: for h in &support {
            for g in &support {
                let d: Vec<i64> = g.iter().zip(h.iter()).map(|(x, y)| x - y).collect();
                match solver.solve(&d) {
                    Some(e) if e.iter().all(|&x| x >= 0) => {}
                    _ => continue 'outer,
                }
            }
            if found.is_some() {
                return Err(Error::MinimalDegreeNotUnique);
            }
            found = Some((*h).clone());
        }
        found.map(GVector).ok_or(Error::MinimalDegreeNotUnique)
    }

    /// Report form: one record per exponent, lexicographic.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(g, c)| TermRecord {
                exponent: g.clone(),
                coeff: c.terms().map(|(e, x)| (e, BigIntJson(x.clone()))).collect(),
            })
            .collect()
    }

    pub fn from_records(form: &Arc<SkewForm>, records: &[TermRecord]) -> Result<TorusElement> {
        let mut out = TorusElement::zero(form);
        for r in records {
            if r.exponent.len() != form.rank() {
                return Err(Error::RankMismatch(r.exponent.len(), form.rank()));
            }
            let c = LaurentV::from_terms(r.coeff.iter().map(|(e, x)| (*e, x.0.clone())));
            out.add_term(r.exponent.clone(), &c);
        }
        Ok(out)
    }
}

impl Mul for &TorusElement {
    type Output = TorusElement;
    /// Panics when the operands live in different tori; see [`TorusElement::try_mul`].
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.try_mul(rhs).expect("torus rank mismatch")
    }
}

impl Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        self.try_add(rhs).expect("torus rank mismatch")
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})")?;
            }
            write!(f, "X{}", GVector(g.clone()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement[{self}]")
    }
}

/// Normalised frame monomial `X(c) = v^{-Σ_{i<j} c_i c_j Λ_ij} X_1^{c_1} ⋯ X_m^{c_m}`
/// for a frame `vars` with form `frame_form`, `c >= 0`.
pub fn frame_monomial(c: &[i64], frame_form: &SkewForm, vars: &[TorusElement]) -> Result<TorusElement> {
    if c.len() != vars.len() || c.len() != frame_form.rank() {
        return Err(Error::RankMismatch(c.len(), vars.len()));
    }
    if c.iter().any(|&x| x < 0) {
        return Err(Error::NegativeFrameExponent);
    }
    let form = vars.first().map(|x| Arc::clone(x.form())).ok_or(Error::RankMismatch(0, 0))?;
    let mut twist = 0;
    for i in 0..c.len() {
        for j in (i + 1)..c.len() {
            twist += c[i] * c[j] * frame_form.entry(i, j);
        }
    }
    let mut out = TorusElement::one(&form);
    for (x, &k) in vars.iter().zip(c) {
        if k > 0 {
            out = out.try_mul(&x.pow(k as u32))?;
        }
    }
    Ok(out.shift(-twist))
}

/// The commutative Laurent ring `Z[X_1^±, …, X_m^±]` (the `v = 1` image).
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct CommutativeLaurent {
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl CommutativeLaurent {
    pub fn add_term(&mut self, g: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &[i64]) -> BigInt {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn mul(&self, other: &CommutativeLaurent) -> CommutativeLaurent {
        let mut out = CommutativeLaurent::default();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(g.iter().zip(h).map(|(x, y)| x + y).collect(), a * b);
            }
        }
        out
    }
}
