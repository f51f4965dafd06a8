//! Quantum F-polynomials and cluster variables assembled from Grassmannian
//! counting data, and their comparison with the mutation engine.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::Serialize;

use crate::cluster::{extract_g_and_f, rebuild, CompatiblePair, FPolynomial, IceQuiver, QuantumSeed};
use crate::error::{Error, Result};
use crate::exact::{FullRankSolver, IntMatrix, IntPolyQ};
use crate::grass::{
    certify_rigid_samples, counting_polynomials, degree_bound, euler_characteristic, CountingPolynomial,
    SamplingConfig,
};
use crate::rep::{count_subreps, direct_sum, random_rigid_rep, Quiver, QuiverRep};
use crate::report::{PolyRecord, TermRecord};
use crate::torus::{CommutativeLaurent, GVector, TorusElement};

/// `e ↦ -B̃e`, checked against the arrow-sum definition on the ice quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMap {
    b_tilde: IntMatrix,
}

impl PhiMap {
    pub fn new(ice: &IceQuiver, b_tilde: &IntMatrix) -> Result<Self> {
        let (m, n) = (ice.vertices(), ice.mutable());
        if b_tilde.rows() != m || b_tilde.cols() != n {
            return Err(Error::Shape(format!("B̃ is {}x{}, quiver has {m} vertices, {n} mutable", b_tilde.rows(), b_tilde.cols())));
        }
        for i in 0..n {
            let mut arrow_sum = vec![0i64; m];
            for &(s, t) in ice.arrows() {
                if s == i {
                    arrow_sum[t] += 1;
                }
                if t == i {
                    arrow_sum[s] -= 1;
                }
            }
            let col: Vec<i64> = b_tilde.col(i).iter().map(|x| -x).collect();
            if col != arrow_sum {
                return Err(Error::Shape(format!("B̃ column {} disagrees with the arrows at vertex {}", i + 1, i + 1)));
            }
        }
        Ok(Self { b_tilde: b_tilde.clone() })
    }

    pub fn apply(&self, e: &[i64]) -> Vec<i64> {
        self.b_tilde.mul_vec(e).into_iter().map(|x| -x).collect()
    }
}

/// Everything the assembly needs about one ice quiver.
#[derive(Clone, Debug)]
pub struct CcContext {
    pair: CompatiblePair,
    quiver: Quiver,
    phi: PhiMap,
    solver: FullRankSolver,
}

impl CcContext {
    pub fn new(ice: &IceQuiver, pair: &CompatiblePair) -> Result<Self> {
        Ok(Self {
            pair: pair.clone(),
            quiver: ice.principal(),
            phi: PhiMap::new(ice, pair.b_tilde())?,
            solver: FullRankSolver::new(pair.b_tilde())?,
        })
    }

    pub fn pair(&self) -> &CompatiblePair {
        &self.pair
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn phi(&self) -> &PhiMap {
        &self.phi
    }

    fn euler(&self, d: &[i64], f: &[i64]) -> i64 {
        self.quiver.euler(d, f)
    }
}

fn diff(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn to_i64(e: &[usize]) -> Vec<i64> {
    e.iter().map(|&x| x as i64).collect()
}

/// `Σ_e E_e(q) v^{<e,e>} y^e`.
pub fn assemble_f(quiver: &Quiver, serre: &BTreeMap<Vec<usize>, IntPolyQ>) -> FPolynomial {
    let terms = serre.iter().filter(|(_, p)| !p.is_zero()).map(|(e, p)| {
        let e = to_i64(e);
        let k = quiver.euler(&e, &e);
        (e, p.to_laurent().shift(k))
    });
    FPolynomial::from_terms(quiver.vertices(), terms)
}

/// `Σ_e E_e(q) v^{-<e,m-e>} X^{ind - φ(e)}`.
pub fn assemble_x(ctx: &CcContext, ind: &GVector, m: &[usize], serre: &BTreeMap<Vec<usize>, IntPolyQ>) -> TorusElement {
    let form = ctx.pair.lambda();
    let m = to_i64(m);
    let mut out = TorusElement::zero(form);
    for (e, p) in serre.iter().filter(|(_, p)| !p.is_zero()) {
        let e = to_i64(e);
        let g = diff(&ind.0, &ctx.phi.apply(&e));
        assert!(out.coeff(&g).is_zero(), "φ is injective");
        out.add_term(g, &p.to_laurent().shift(-ctx.euler(&e, &diff(&m, &e))));
    }
    out
}

/// `Σ_e χ(Gr_e) x^{ind - φ(e)}`.
pub fn classical_cc(ctx: &CcContext, ind: &GVector, serre: &BTreeMap<Vec<usize>, IntPolyQ>) -> CommutativeLaurent {
    let mut out = CommutativeLaurent::default();
    for (e, p) in serre {
        let chi = euler_characteristic(p);
        if !chi.is_zero() {
            out.add_term(diff(&ind.0, &ctx.phi.apply(&to_i64(e))), chi);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecializedCheck {
    pub prime: u64,
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

/// Compares every coefficient of `x`, rescaled by `v^{<e,m-e>}`, with the
/// point count of the matching Grassmannian at `q = p`.
pub fn check_specialized_at_prime(
    ctx: &CcContext,
    x: &TorusElement,
    ind: &GVector,
    m: &[usize],
    counts: &BTreeMap<Vec<usize>, u128>,
    p: u64,
) -> SpecializedCheck {
    let mi = to_i64(m);
    let mut diagnostics = Vec::new();
    let mut seen = Vec::new();
    for (g, c) in x.terms() {
        let e = ctx
            .solver
            .solve(&diff(&ind.0, g).iter().map(|x| -x).collect::<Vec<_>>())
            .filter(|e| e.iter().zip(&mi).all(|(a, b)| 0 <= *a && a <= b));
        let Some(e) = e else {
            diagnostics.push(format!("exponent {} is not ind - φ(e) for any 0 <= e <= m", GVector(g.clone())));
            continue;
        };
        let eu: Vec<usize> = e.iter().map(|&x| x as usize).collect();
        seen.push(eu.clone());
        let rescaled = c.shift(ctx.euler(&e, &diff(&mi, &e)));
        let Some(poly) = rescaled.to_q_poly() else {
            diagnostics.push(format!("coefficient at e = {} is not in Z[q] after rescaling", GVector(e)));
            continue;
        };
        let want = BigInt::from(counts.get(&eu).copied().unwrap_or(0));
        let got = poly.eval_u64(p);
        if got != want {
            diagnostics.push(format!("e = {}: coefficient gives {got} at q = {p}, count is {want}", GVector(e)));
        }
    }
    for (e, &c) in counts {
        if c > 0 && !seen.contains(e) {
            diagnostics.push(format!("e = {} has {c} points but no term", GVector(to_i64(e))));
        }
    }
    SpecializedCheck { prime: p, passed: diagnostics.is_empty(), diagnostics }
}

/// Counts of every class in the box `0 <= e <= m` on one model.
pub fn box_counts(rep: &QuiverRep, opts: &crate::rep::CountOptions) -> Result<BTreeMap<Vec<usize>, u128>> {
    box_classes(rep.dims()).into_iter().map(|e| Ok((e.clone(), count_subreps(rep, &e, opts)?))).collect()
}

/// All `e` with `0 <= e <= m`, lexicographic.
pub fn box_classes(m: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &top in m {
        out = out.into_iter().flat_map(|e| (0..=top).map(move |x| [e.clone(), vec![x]].concat())).collect();
    }
    out
}

pub const MATCH: &str = "match";
pub const MISMATCH: &str = "mismatch";
pub const ERROR: &str = "error";

/// Outcome for one engine-produced cluster variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableRecord {
    /// Number of mutations from the initial seed.
    pub position: usize,
    /// 1-based index of the variable in its seed.
    pub index: usize,
    pub g_vector: Vec<i64>,
    pub dim_vector: Vec<usize>,
    /// Nonempty classes only.
    pub polynomials: Vec<PolyRecord>,
    pub empty_classes: usize,
    pub engine: Vec<TermRecord>,
    pub assembled: Vec<TermRecord>,
    pub f_match: bool,
    pub x_match: bool,
    pub classical_match: bool,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Intermediate data of one verification, kept for callers that want more
/// than the record.
#[derive(Clone, Debug)]
pub struct Verification {
    pub record: VariableRecord,
    pub g: GVector,
    pub f: FPolynomial,
    pub m: Vec<usize>,
    pub serre: BTreeMap<Vec<usize>, IntPolyQ>,
    pub assembled: TorusElement,
}

pub fn dim_vector_of(f: &FPolynomial) -> Result<Vec<usize>> {
    Ok(f.dim_vector()?.into_iter().map(|x| x as usize).collect())
}

/// Recovers `(g̃, F, m)` from `x`, counts every Grassmannian of the rigid
/// module of class `m`, and compares first `F`, then `X`.
pub fn verify_variable(ctx: &CcContext, x: &TorusElement, cfg: &SamplingConfig) -> Result<Verification> {
    let (g, f) = extract_g_and_f(x, ctx.pair.b_tilde())?;
    let m = dim_vector_of(&f)?;
    let classes = box_classes(&m);
    let polys: Vec<CountingPolynomial> = counting_polynomials(&ctx.quiver, &m, &classes, cfg)?;
    let serre: BTreeMap<Vec<usize>, IntPolyQ> =
        polys.iter().filter(|c| !c.poly.is_zero()).map(|c| (c.e.clone(), c.poly.clone())).collect();
    let f_match = assemble_f(&ctx.quiver, &serre) == f;
    let assembled = assemble_x(ctx, &g, &m, &serre);
    let x_match = f_match && assembled == *x;
    let classical_match = classical_cc(ctx, &g, &serre) == x.specialize_v1();
    let record = VariableRecord {
        position: 0,
        index: 0,
        g_vector: g.0.clone(),
        dim_vector: m.clone(),
        polynomials: polys.iter().filter(|c| !c.poly.is_zero()).map(CountingPolynomial::to_record).collect(),
        empty_classes: polys.iter().filter(|c| c.poly.is_zero()).count(),
        engine: x.to_records(),
        assembled: assembled.to_records(),
        f_match,
        x_match,
        classical_match,
        verdict: if f_match && x_match && classical_match { MATCH } else { MISMATCH }.into(),
        error: None,
    };
    Ok(Verification { record, g, f, m, serre, assembled })
}

/// [`verify_variable`] with failures folded into an `"error"` record.
pub fn verify_cluster_variable(ctx: &CcContext, x: &TorusElement, cfg: &SamplingConfig) -> VariableRecord {
    verify_variable(ctx, x, cfg).map_or_else(|err| error_record(x, &err), |v| v.record)
}

/// The record reported for `x` when its verification failed with `err`.
pub fn error_record(x: &TorusElement, err: &Error) -> VariableRecord {
    VariableRecord {
        position: 0,
        index: 0,
        g_vector: Vec::new(),
        dim_vector: Vec::new(),
        polynomials: Vec::new(),
        empty_classes: 0,
        engine: x.to_records(),
        assembled: Vec::new(),
        f_match: false,
        x_match: false,
        classical_match: false,
        verdict: ERROR.into(),
        error: Some(err.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialCheck {
    /// Exponents on the mutable variables of the seed.
    pub exponents: Vec<u32>,
    pub dim_vector: Vec<usize>,
    /// `v`-exponent relating the ordered product to the assembled element.
    pub twist: i64,
    pub matches: bool,
}

/// Checks `∏ X_i^{a_i} = v^{Σ_{i<j} λ(g_i, g_j)} X_{⊕ M_i^{a_i}}`, where the
/// right side is assembled from counts on explicit direct sums of rigid models.
pub fn verify_monomial_multiplicativity(
    ctx: &CcContext,
    seed: &QuantumSeed,
    a: &[u32],
    cfg: &SamplingConfig,
) -> Result<MonomialCheck> {
    let n = ctx.pair.n();
    if a.len() != n {
        return Err(Error::Shape(format!("{} exponents for {n} mutable variables", a.len())));
    }
    let form = ctx.pair.lambda().clone();
    let mut product = TorusElement::one(&form);
    let mut summands: Vec<(GVector, Vec<usize>)> = Vec::new();
    for (i, &k) in a.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let x = seed.var(i);
        product = product.try_mul(&x.pow(k))?;
        let (g, f) = extract_g_and_f(x, ctx.pair.b_tilde())?;
        let m = dim_vector_of(&f)?;
        summands.extend(std::iter::repeat_n((g, m), k as usize));
    }
    let mut twist = 0;
    for i in 0..summands.len() {
        for j in i + 1..summands.len() {
            twist += form.pair(&summands[i].0 .0, &summands[j].0 .0);
        }
    }
    let ind = GVector(summands.iter().fold(vec![0; ctx.pair.m()], |acc, (g, _)| {
        acc.iter().zip(&g.0).map(|(x, y)| x + y).collect()
    }));
    let dims: Vec<usize> = summands.iter().fold(vec![0; n], |acc, (_, m)| acc.iter().zip(m).map(|(x, y)| x + y).collect());
    let serre = direct_sum_polynomials(&ctx.quiver, &summands.iter().map(|s| s.1.clone()).collect::<Vec<_>>(), cfg)?;
    let assembled = assemble_x(ctx, &ind, &dims, &serre).shift(twist);
    Ok(MonomialCheck { exponents: a.to_vec(), dim_vector: dims, twist, matches: assembled == product })
}

/// Counting polynomials of every class of `⊕ M_i`, with each `M_i` a
/// rigid model over the same prime. Primes where some summand has no rigid
/// model, or where the sum fails to be rigid, are skipped.
fn direct_sum_polynomials(
    quiver: &Quiver,
    parts: &[Vec<usize>],
    cfg: &SamplingConfig,
) -> Result<BTreeMap<Vec<usize>, IntPolyQ>> {
    let n = quiver.vertices();
    let dims: Vec<usize> = parts.iter().fold(vec![0; n], |acc, m| acc.iter().zip(m).map(|(x, y)| x + y).collect());
    let classes = box_classes(&dims);
    let bounds: Vec<usize> = classes.iter().map(|e| degree_bound(quiver, &dims, e, cfg.bound)).collect();
    let rounds = bounds.iter().map(|b| b + 2).max().unwrap_or(0);
    let mut samples: Vec<Vec<(u64, u128)>> = vec![Vec::new(); classes.len()];
    let mut usable = 0;
    for p in crate::exact::first_primes(cfg.max_primes) {
        if usable == rounds {
            break;
        }
        let Some(rep) = direct_sum_model(quiver, parts, p, cfg)? else {
            continue;
        };
        for (i, e) in classes.iter().enumerate() {
            if bounds[i] + 2 > usable {
                samples[i].push((p, count_subreps(&rep, e, &cfg.count)?));
            }
        }
        usable += 1;
    }
    if usable < rounds {
        return Err(Error::PrimeBudgetExhausted { tried: cfg.max_primes, usable });
    }
    let mut out = BTreeMap::new();
    for ((e, bound), s) in classes.into_iter().zip(bounds).zip(samples) {
        let poly = certify_rigid_samples(&s, bound)?;
        if !poly.is_zero() {
            out.insert(e, poly);
        }
    }
    Ok(out)
}

fn direct_sum_model(quiver: &Quiver, parts: &[Vec<usize>], p: u64, cfg: &SamplingConfig) -> Result<Option<QuiverRep>> {
    let mut sum = QuiverRep::semisimple(quiver.clone(), p, vec![0; quiver.vertices()]);
    for m in parts {
        match random_rigid_rep(quiver, m, p, cfg.seed, cfg.max_trials) {
            Ok(r) => sum = direct_sum(&sum, &r)?,
            Err(Error::NoRigidRep) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    match sum.certify_rigid() {
        Ok(r) => Ok(Some(r)),
        Err(Error::NoRigidRep) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `Σ_{b + d = e} #Gr_b(M) #Gr_d(L) p^{<d, m - b>}` against `#Gr_e(M ⊕ L)`,
/// for every `e` in the box. Returns the classes where the two differ.
pub fn direct_sum_count_defects(
    m: &QuiverRep,
    l: &QuiverRep,
    opts: &crate::rep::CountOptions,
) -> Result<Vec<(Vec<usize>, String, u128)>> {
    let q = m.quiver();
    let p = BigInt::from(m.prime());
    let sum = direct_sum(m, l)?;
    let cm = box_counts(m, opts)?;
    let cl = box_counts(l, opts)?;
    let md = to_i64(m.dims());
    let mut defects = Vec::new();
    for (e, total) in box_counts(&sum, opts)? {
        let mut lhs = BigRational::zero();
        for (b, &nb) in &cm {
            let d: Vec<usize> = match e.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect::<Option<Vec<_>>>() {
                Some(d) => d,
                None => continue,
            };
            let Some(&nd) = cl.get(&d) else { continue };
            let k = q.euler(&to_i64(&d), &diff(&md, &to_i64(b)));
            let weight = BigRational::from_integer(p.clone()).pow(k as i32);
            lhs += BigRational::from_integer(BigInt::from(nb) * BigInt::from(nd)) * weight;
        }
        if lhs != BigRational::from_integer(BigInt::from(total)) {
            defects.push((e, lhs.to_string(), total));
        }
    }
    Ok(defects)
}

/// Records `position`/`index` onto a verification record.
pub fn locate(mut r: VariableRecord, position: usize, index: usize) -> VariableRecord {
    r.position = position;
    r.index = index;
    r
}

/// Identity of the two assembly routes for given counting data.
pub fn decomposition_holds(ctx: &CcContext, ind: &GVector, m: &[usize], serre: &BTreeMap<Vec<usize>, IntPolyQ>) -> bool {
    let f = assemble_f(&ctx.quiver, serre);
    rebuild(&f, ind, ctx.pair.b_tilde(), ctx.pair.lambda()) == assemble_x(ctx, ind, m, serre)
}
