use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, Context};
use clap::ValueEnum;
use serde::Serialize;

use qcluster::cc::{error_record, locate, verify_variable, CcContext, VariableRecord, MATCH};
use qcluster::cluster::{extract_g_and_f, parse_quiver, walk, CompatiblePair, QuiverFile};
use qcluster::grass::{
    counting_polynomial, degree_bound, generic_builder, refute_counting_polynomial, DegreeBound, Refutation,
    RefuteConfig, SamplingConfig,
};
use qcluster::report::{BigIntJson, CommutativeTerm, GoldenTable, PolyRecord, TermRecord, SCHEMA};
use qcluster::rep::{CountOptions, ExecMode};
use qcluster::torus::TorusElement;
use qcluster::Error;

const A2_QUIVER: &str = include_str!("../../../data/quivers/a2.quiver");
const E6_QUIVER: &str = include_str!("../../../data/quivers/e6.quiver");
const A2_GOLDEN: &str = include_str!("../../../data/golden/a2.json");
const E6_GOLDEN: &str = include_str!("../../../data/golden/e6.json");

pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CEILING: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Table {
    A2,
    E6,
}

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub primes: usize,
    pub ceiling: u128,
    pub seed: u64,
    pub sequential: bool,
    pub tangent: bool,
}

impl Settings {
    fn count(&self) -> CountOptions {
        let mode = if self.sequential { ExecMode::Sequential } else { ExecMode::default() };
        CountOptions { ceiling: self.ceiling, mode }
    }

    fn bound(&self) -> DegreeBound {
        if self.tangent {
            DegreeBound::Tangent
        } else {
            DegreeBound::Ambient
        }
    }

    fn sampling(&self) -> SamplingConfig {
        SamplingConfig {
            seed: self.seed,
            max_primes: self.primes,
            bound: self.bound(),
            count: self.count(),
            ..SamplingConfig::default()
        }
    }

    fn bound_name(&self) -> &'static str {
        if self.tangent {
            "tangent"
        } else {
            "ambient"
        }
    }
}

/// A report plus the exit status it implies.
pub struct Outcome {
    /// Pretty JSON, newline terminated.
    pub report: String,
    pub status: u8,
}

impl Outcome {
    fn new(report: impl Serialize, ok: bool) -> anyhow::Result<Self> {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        Ok(Self { report: text, status: if ok { 0 } else { EXIT_MISMATCH } })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(String);

pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(e) if is_ceiling(e) => EXIT_CEILING,
        Some(Error::Parse { .. } | Error::NotAcyclic | Error::InvalidQuiver(_) | Error::InvalidVertex(_)) => EXIT_USAGE,
        _ if err.downcast_ref::<std::io::Error>().is_some() => EXIT_USAGE,
        _ => EXIT_MISMATCH,
    }
}

fn is_ceiling(e: &Error) -> bool {
    matches!(e, Error::InstanceTooLarge { .. } | Error::TermCeiling(_))
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn parse_list(text: &str, what: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| usage(format!("{what}: expected a nonnegative integer, got {s:?}"))))
        .collect()
}

/// 1-based word to 0-based mutable indices.
fn parse_word(text: &str, n: usize) -> anyhow::Result<Vec<usize>> {
    let word = parse_list(text, "word")?;
    word.iter()
        .map(|&k| match k {
            1.. if k <= n => Ok(k - 1),
            _ => Err(usage(format!("word: index {k} is not a mutable vertex (expected 1..={n})"))),
        })
        .collect()
}

fn load(path: &Path) -> anyhow::Result<(String, QuiverFile)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok((path.display().to_string(), parse_quiver(&text)?))
}

fn pair_of(file: &QuiverFile) -> anyhow::Result<CompatiblePair> {
    Ok(CompatiblePair::from_file(file)?)
}

#[derive(Serialize)]
struct VariableOut {
    index: usize,
    g_vector: Vec<i64>,
    f_polynomial: Vec<TermRecord>,
    terms: Vec<TermRecord>,
}

#[derive(Serialize)]
struct SeedOut {
    position: usize,
    word: Vec<usize>,
    b_tilde: Vec<Vec<i64>>,
    lambda: Vec<Vec<i64>>,
    variables: Vec<VariableOut>,
}

#[derive(Serialize)]
struct MutateReport {
    schema: &'static str,
    command: &'static str,
    seed: u64,
    quiver: String,
    word: Vec<usize>,
    seeds: Vec<SeedOut>,
}

pub fn mutate(path: &Path, word: &str, s: &Settings) -> anyhow::Result<Outcome> {
    let (name, file) = load(path)?;
    let pair = pair_of(&file)?;
    let w = parse_word(word, pair.n())?;
    let seeds = walk(&pair, &w)?;
    let mut out = Vec::new();
    for (t, seed) in seeds.iter().enumerate() {
        let variables = seed
            .vars()
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let (g, f) = extract_g_and_f(x, pair.b_tilde())?;
                Ok(VariableOut { index: i + 1, g_vector: g.0, f_polynomial: f.to_records(), terms: x.to_records() })
            })
            .collect::<qcluster::Result<Vec<_>>>()?;
        out.push(SeedOut {
            position: t,
            word: seed.word().iter().map(|k| k + 1).collect(),
            b_tilde: seed.b_tilde().to_rows(),
            lambda: seed.lambda().matrix().to_rows(),
            variables,
        });
    }
    let report = MutateReport {
        schema: SCHEMA,
        command: "mutate",
        seed: s.seed,
        quiver: name,
        word: w.iter().map(|k| k + 1).collect(),
        seeds: out,
    };
    Outcome::new(report, true)
}

#[derive(Serialize)]
struct VerifyReport {
    schema: &'static str,
    command: &'static str,
    seed: u64,
    quiver: String,
    word: Vec<usize>,
    degree_bound: &'static str,
    variables: Vec<VariableRecord>,
    all_match: bool,
}

/// Verifies `x`; resource ceilings abort, other failures become error records.
fn verify_one(ctx: &CcContext, x: &TorusElement, position: usize, index: usize, s: &Settings) -> anyhow::Result<VariableRecord> {
    match verify_variable(ctx, x, &s.sampling()) {
        Ok(v) => Ok(locate(v.record, position, index)),
        Err(e) if is_ceiling(&e) => Err(e.into()),
        Err(e) => Ok(locate(error_record(x, &e), position, index)),
    }
}

/// The variables created along `w`, or the initial mutable ones when `w` is empty.
fn targets(w: &[usize], n: usize) -> Vec<(usize, usize)> {
    if w.is_empty() {
        (0..n).map(|k| (0, k)).collect()
    } else {
        w.iter().enumerate().map(|(t, &k)| (t + 1, k)).collect()
    }
}

fn verify_walk(file: &QuiverFile, w: &[usize], s: &Settings) -> anyhow::Result<Vec<VariableRecord>> {
    let pair = pair_of(file)?;
    let ctx = CcContext::new(&file.quiver, &pair)?;
    let seeds = walk(&pair, w)?;
    targets(w, pair.n())
        .into_iter()
        .map(|(t, k)| verify_one(&ctx, seeds[t].var(k), t, k + 1, s))
        .collect()
}

pub fn verify(path: &Path, word: &str, s: &Settings) -> anyhow::Result<Outcome> {
    let (name, file) = load(path)?;
    let w = parse_word(word, file.quiver.mutable())?;
    let variables = verify_walk(&file, &w, s)?;
    let all_match = variables.iter().all(|r| r.verdict == MATCH);
    let report = VerifyReport {
        schema: SCHEMA,
        command: "verify",
        seed: s.seed,
        quiver: name,
        word: w.iter().map(|k| k + 1).collect(),
        degree_bound: s.bound_name(),
        variables,
        all_match,
    };
    Outcome::new(report, all_match)
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum CountResult {
    Polynomial {
        #[serde(flatten)]
        record: PolyRecord,
        euler_characteristic: BigIntJson,
    },
    Refutation(Refutation),
}

#[derive(Serialize)]
struct CountReport {
    schema: &'static str,
    command: &'static str,
    seed: u64,
    quiver: String,
    dims: Vec<usize>,
    e: Vec<usize>,
    degree_bound: &'static str,
    result: CountResult,
}

pub fn count(path: &Path, dims: &str, e: &str, refute: bool, s: &Settings) -> anyhow::Result<Outcome> {
    let (name, file) = load(path)?;
    let quiver = file.quiver.principal();
    let n = quiver.vertices();
    let (m, e) = (parse_list(dims, "dims")?, parse_list(e, "e")?);
    if m.len() != n || e.len() != n {
        return Err(usage(format!("dims and e need {n} entries each")));
    }
    let result = if refute {
        let bound = degree_bound(&quiver, &m, &e, s.bound());
        let cfg = RefuteConfig { count: s.count(), ..RefuteConfig::default() };
        CountResult::Refutation(refute_counting_polynomial(&e, bound, generic_builder(quiver, m.clone(), s.seed), &cfg)?)
    } else {
        let c = counting_polynomial(&quiver, &m, &e, &s.sampling())?;
        CountResult::Polynomial { euler_characteristic: BigIntJson(c.euler_characteristic()), record: c.to_record() }
    };
    let report = CountReport {
        schema: SCHEMA,
        command: "count",
        seed: s.seed,
        quiver: name,
        dims: m,
        e,
        degree_bound: s.bound_name(),
        result,
    };
    Outcome::new(report, true)
}

#[derive(Serialize)]
struct GoldenCheck {
    note: String,
    position: usize,
    index: usize,
    variable_match: bool,
    dim_vector_match: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    g_vector_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f_commutative_match: Option<bool>,
}

impl GoldenCheck {
    fn ok(&self) -> bool {
        self.variable_match && self.dim_vector_match && self.g_vector_match != Some(false) && self.f_commutative_match != Some(false)
    }
}

#[derive(Serialize)]
struct ReproduceReport {
    schema: &'static str,
    command: &'static str,
    table: String,
    seed: u64,
    quiver: String,
    word: Vec<usize>,
    word_order: String,
    degree_bound: &'static str,
    golden: Vec<GoldenCheck>,
    variables: Vec<VariableRecord>,
    all_match: bool,
}

fn commutative_map(terms: &[CommutativeTerm]) -> BTreeMap<Vec<i64>, num_bigint::BigInt> {
    terms.iter().map(|t| (t.exponent.clone(), t.coeff.0.clone())).collect()
}

pub fn reproduce(table: Table, s: &Settings) -> anyhow::Result<Outcome> {
    let (quiver_text, golden_text) = match table {
        Table::A2 => (A2_QUIVER, A2_GOLDEN),
        Table::E6 => (E6_QUIVER, E6_GOLDEN),
    };
    let file = parse_quiver(quiver_text)?;
    let golden: GoldenTable = serde_json::from_str(golden_text)?;
    let pair = pair_of(&file)?;
    let ctx = CcContext::new(&file.quiver, &pair)?;
    let w: Vec<usize> = golden.word.iter().map(|k| k - 1).collect();
    let seeds = walk(&pair, &w)?;
    let mut checks = Vec::new();
    let mut variables = Vec::new();
    for entry in &golden.entries {
        let seed = seeds.get(entry.position).ok_or_else(|| anyhow!("golden position {} past the word", entry.position))?;
        let x = seed.var(entry.index - 1);
        let expected = TorusElement::from_records(pair.lambda(), &entry.variable)?;
        let (g, f) = extract_g_and_f(x, pair.b_tilde())?;
        checks.push(GoldenCheck {
            note: entry.note.clone(),
            position: entry.position,
            index: entry.index,
            variable_match: *x == expected,
            dim_vector_match: f.dim_vector()? == entry.dim_vector,
            g_vector_match: entry.g_vector.as_ref().map(|want| *want == g.0),
            f_commutative_match: entry.f_commutative.as_ref().map(|t| f.specialize_v1() == commutative_map(t)),
        });
        variables.push(verify_one(&ctx, x, entry.position, entry.index, s)?);
    }
    let all_match = checks.iter().all(GoldenCheck::ok) && variables.iter().all(|r| r.verdict == MATCH);
    let report = ReproduceReport {
        schema: SCHEMA,
        command: "reproduce",
        table: golden.table,
        seed: s.seed,
        quiver: golden.quiver,
        word: golden.word,
        word_order: golden.word_order,
        degree_bound: s.bound_name(),
        golden: checks,
        variables,
        all_match,
    };
    Outcome::new(report, all_match)
}
