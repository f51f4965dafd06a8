//! Counting polynomials of quiver Grassmannians from finite-field point counts.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{eval_rational, interpolate_counting_poly, is_prime, lagrange_rational, IntPolyQ};
use crate::rep::{
    count_subreps, derive_seed, random_rep, random_rigid_rep, CountOptions, Quiver, QuiverRep,
    DEFAULT_MAX_TRIALS,
};
use crate::report::{poly_record, BigIntJson, PolyRecord, SampleRecord};

pub const REFUTED: &str = "refutation at budget";
pub const NOT_REFUTED: &str = "no refutation found at this budget";

/// How many primes a fit needs: a polynomial of degree `<= bound` is fitted
/// through `bound + 1` counts and checked on one more.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DegreeBound {
    /// `Σ_v e_v (m_v - e_v)`, the dimension of the ambient product of Grassmannians.
    #[default]
    Ambient,
    /// `<e, m - e>` clamped to `[0, ambient]`. For rigid `m` a nonempty
    /// Grassmannian is smooth of exactly this dimension.
    Tangent,
}

pub fn degree_bound(quiver: &Quiver, m: &[usize], e: &[usize], kind: DegreeBound) -> usize {
    if e.iter().zip(m).any(|(a, b)| a > b) {
        return 0;
    }
    let ambient: usize = e.iter().zip(m).map(|(a, b)| a * (b - a)).sum();
    match kind {
        DegreeBound::Ambient => ambient,
        DegreeBound::Tangent => {
            let ei: Vec<i64> = e.iter().map(|&x| x as i64).collect();
            let rest: Vec<i64> = e.iter().zip(m).map(|(a, b)| (b - a) as i64).collect();
            quiver.euler(&ei, &rest).clamp(0, ambient as i64) as usize
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    pub seed: u64,
    /// Rigidity attempts per prime before the prime is skipped.
    pub max_trials: usize,
    /// Primes examined (usable or skipped) before giving up.
    pub max_primes: usize,
    pub bound: DegreeBound,
    pub count: CountOptions,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_trials: DEFAULT_MAX_TRIALS,
            max_primes: 64,
            bound: DegreeBound::Ambient,
            count: CountOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingPolynomial {
    pub e: Vec<usize>,
    pub poly: IntPolyQ,
    pub degree_bound: usize,
    pub evidence: Vec<(u64, u128)>,
    pub held_out: (u64, u128),
    /// Primes passed over because no rigid model was found there.
    pub skipped: Vec<u64>,
}

impl CountingPolynomial {
    pub fn euler_characteristic(&self) -> BigInt {
        euler_characteristic(&self.poly)
    }

    pub fn to_record(&self) -> PolyRecord {
        PolyRecord {
            e: self.e.clone(),
            degree_bound: self.degree_bound,
            samples: self.evidence.iter().map(|&(p, c)| SampleRecord::new(p, c)).collect(),
            held_out: SampleRecord::new(self.held_out.0, self.held_out.1),
            skipped_primes: self.skipped.clone(),
            polynomial: poly_record(&self.poly),
        }
    }
}

/// Value at `q = 1`.
pub fn euler_characteristic(poly: &IntPolyQ) -> BigInt {
    poly.eval(&BigInt::one())
}

/// Interpolates and additionally insists on nonnegative coefficients, which
/// hold for every Grassmannian of a rigid module.
pub fn certify_rigid_samples(samples: &[(u64, u128)], bound: usize) -> Result<IntPolyQ> {
    let poly = interpolate_counting_poly(samples, bound)?;
    if poly.has_nonnegative_coeffs() {
        Ok(poly)
    } else {
        Err(Error::NegativeCoefficient)
    }
}

/// One certified-rigid model per usable prime, in increasing prime order.
/// Models are a pure function of `(seed, prime, dims)`.
pub struct RigidModels {
    quiver: Quiver,
    dims: Vec<usize>,
    seed: u64,
    max_trials: usize,
    max_primes: usize,
    models: Vec<QuiverRep>,
    skipped: Vec<u64>,
    last: u64,
}

impl RigidModels {
    pub fn new(quiver: &Quiver, dims: &[usize], cfg: &SamplingConfig) -> Result<Self> {
        let d: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
        if dims.iter().any(|&x| x > 0) && quiver.euler(&d, &d) < 1 {
            return Err(Error::NoRigidRep);
        }
        Ok(Self {
            quiver: quiver.clone(),
            dims: dims.to_vec(),
            seed: cfg.seed,
            max_trials: cfg.max_trials,
            max_primes: cfg.max_primes,
            models: Vec::new(),
            skipped: Vec::new(),
            last: 1,
        })
    }

    /// Model over the `k`-th usable prime (0-based).
    pub fn get(&mut self, k: usize) -> Result<&QuiverRep> {
        while self.models.len() <= k {
            if self.models.len() + self.skipped.len() >= self.max_primes {
                return Err(Error::PrimeBudgetExhausted {
                    tried: self.max_primes,
                    usable: self.models.len(),
                });
            }
            self.last = (self.last + 1..).find(|&x| is_prime(x)).unwrap();
            match random_rigid_rep(&self.quiver, &self.dims, self.last, self.seed, self.max_trials) {
                Ok(rep) => self.models.push(rep),
                Err(Error::NoRigidRep) => self.skipped.push(self.last),
                Err(e) => return Err(e),
            }
        }
        Ok(&self.models[k])
    }

    pub fn skipped(&self) -> &[u64] {
        &self.skipped
    }
}

/// Certified counting polynomials for several classes of one rigid module,
/// sharing the per-prime models.
pub fn counting_polynomials(
    quiver: &Quiver,
    m: &[usize],
    classes: &[Vec<usize>],
    cfg: &SamplingConfig,
) -> Result<Vec<CountingPolynomial>> {
    let bounds: Vec<usize> = classes.iter().map(|e| degree_bound(quiver, m, e, cfg.bound)).collect();
    let rounds = bounds.iter().map(|b| b + 2).max().unwrap_or(0);
    let mut models = RigidModels::new(quiver, m, cfg)?;
    let mut samples: Vec<Vec<(u64, u128)>> = vec![Vec::new(); classes.len()];
    for k in 0..rounds {
        let rep = models.get(k)?;
        let active: Vec<usize> = (0..classes.len()).filter(|&i| bounds[i] + 2 > k).collect();
        let counts = count_many(rep, classes, &active, &cfg.count)?;
        for (i, c) in active.into_iter().zip(counts) {
            samples[i].push((rep.prime(), c));
        }
    }
    classes
        .iter()
        .zip(bounds)
        .zip(samples)
        .map(|((e, bound), s)| {
            let poly = certify_rigid_samples(&s, bound)?;
            let last = s.last().unwrap().0;
            Ok(CountingPolynomial {
                e: e.clone(),
                poly,
                degree_bound: bound,
                evidence: s[..=bound].to_vec(),
                held_out: s[bound + 1],
                skipped: models.skipped().iter().copied().filter(|&p| p < last).collect(),
            })
        })
        .collect()
}

fn count_many(rep: &QuiverRep, classes: &[Vec<usize>], active: &[usize], opts: &CountOptions) -> Result<Vec<u128>> {
    #[cfg(feature = "parallel")]
    if opts.mode == crate::rep::ExecMode::Parallel {
        return active.par_iter().map(|&i| count_subreps(rep, &classes[i], opts)).collect();
    }
    active.iter().map(|&i| count_subreps(rep, &classes[i], opts)).collect()
}

pub fn counting_polynomial(quiver: &Quiver, m: &[usize], e: &[usize], cfg: &SamplingConfig) -> Result<CountingPolynomial> {
    Ok(counting_polynomials(quiver, m, &[e.to_vec()], cfg)?.remove(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitOutcome {
    Fits,
    Mismatch { prime: u64, predicted: String, observed: BigIntJson },
    NonIntegral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitAttempt {
    pub degree: usize,
    pub outcome: FitOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub e: Vec<usize>,
    pub degree_bound: usize,
    pub samples: Vec<SampleRecord>,
    /// Draws needed at each prime before two counts agreed.
    pub draws: Vec<usize>,
    pub fits: Vec<FitAttempt>,
    pub refuted: bool,
    pub verdict: String,
    /// Lowest-degree polynomial through all samples, when one exists.
    pub polynomial: Option<Vec<BigIntJson>>,
    pub genericity: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefuteConfig {
    pub max_draws: usize,
    pub count: CountOptions,
}

impl Default for RefuteConfig {
    fn default() -> Self {
        Self { max_draws: 64, count: CountOptions::default() }
    }
}

/// Uniformly random models: draw `k` over `p` is a pure function of `(seed, p, dims, k)`.
pub fn generic_builder(quiver: Quiver, dims: Vec<usize>, seed: u64) -> impl Fn(u64, u64) -> Result<QuiverRep> {
    move |p, draw| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, p, &dims, draw + 1));
        Ok(random_rep(&quiver, &dims, p, &mut rng))
    }
}

/// Runs the interpolation pipeline on a possibly non-rigid family and
/// reports whether every candidate degree up to `bound` is contradicted.
///
/// At each prime, models are drawn until two of them give the same count,
/// which is taken as the generic value.
pub fn refute_counting_polynomial<B>(e: &[usize], bound: usize, builder: B, cfg: &RefuteConfig) -> Result<Refutation>
where
    B: Fn(u64, u64) -> Result<QuiverRep>,
{
    let primes = crate::exact::first_primes(bound + 2);
    let mut samples = Vec::new();
    let mut draws = Vec::new();
    for &p in &primes {
        let mut seen = Vec::new();
        let agreed = (0..cfg.max_draws as u64).find_map(|k| {
            let c = builder(p, k).and_then(|rep| count_subreps(&rep, e, &cfg.count));
            match c {
                Err(err) => Some(Err(err)),
                Ok(c) if seen.contains(&c) => Some(Ok(c)),
                Ok(c) => {
                    seen.push(c);
                    None
                }
            }
        });
        match agreed {
            Some(c) => samples.push((p, c?)),
            None => return Err(Error::NoAgreement { prime: p, draws: cfg.max_draws }),
        }
        draws.push(seen.len() + 1);
    }
    let fits: Vec<FitAttempt> = (0..=bound).map(|d| FitAttempt { degree: d, outcome: try_fit(&samples, d) }).collect();
    let refuted = fits.iter().all(|f| f.outcome != FitOutcome::Fits);
    let polynomial = if refuted {
        None
    } else {
        let d = fits.iter().find(|f| f.outcome == FitOutcome::Fits).unwrap().degree;
        Some(poly_record(&interpolate_counting_poly(&samples[..], d).expect("fit already checked")))
    };
    Ok(Refutation {
        e: e.to_vec(),
        degree_bound: bound,
        samples: samples.iter().map(|&(p, c)| SampleRecord::new(p, c)).collect(),
        draws,
        fits,
        refuted,
        verdict: if refuted { REFUTED } else { NOT_REFUTED }.to_string(),
        polynomial,
        genericity: "heuristic: generic count taken as the first value repeated across independent draws".into(),
    })
}

fn try_fit(samples: &[(u64, u128)], degree: usize) -> FitOutcome {
    let points: Vec<(BigInt, BigInt)> = samples.iter().map(|&(p, c)| (BigInt::from(p), BigInt::from(c))).collect();
    let (fit, rest) = points.split_at(degree + 1);
    let coeffs = lagrange_rational(fit);
    for (x, y) in rest {
        let predicted = eval_rational(&coeffs, x);
        if predicted != num_rational::BigRational::from_integer(y.clone()) {
            return FitOutcome::Mismatch {
                prime: x.try_into().unwrap(),
                predicted: predicted.to_string(),
                observed: BigIntJson(y.clone()),
            };
        }
    }
    if coeffs.iter().all(|c| c.is_integer()) {
        FitOutcome::Fits
    } else {
        FitOutcome::NonIntegral
    }
}

/// True when `poly` is the zero polynomial, i.e. the Grassmannian is empty.
pub fn is_empty_class(poly: &IntPolyQ) -> bool {
    poly.coeffs().iter().all(Zero::is_zero)
}
