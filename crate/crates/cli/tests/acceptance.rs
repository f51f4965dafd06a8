//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! This target is a report rather than a gate. It always exits 0 so that an
//! honestly failing criterion is printed instead of hidden; the assertions
//! that gate the build live in the crate test suites.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use qcluster::cc::{
    box_counts, check_specialized_at_prime, direct_sum_count_defects, verify_monomial_multiplicativity,
    verify_variable, CcContext, MATCH,
};
use qcluster::cluster::{
    audit_seed, distinct_variables, extract_g_and_f, mutation_ball, parse_quiver, walk, CompatiblePair, IceQuiver,
    QuantumSeed, DEFAULT_TERM_CEILING,
};
use qcluster::exact::{enumerate_subspaces, FpMatrix, IntPolyQ, LaurentV};
use qcluster::grass::{
    counting_polynomial, degree_bound, generic_builder, refute_counting_polynomial, DegreeBound, RefuteConfig,
    SamplingConfig,
};
use qcluster::report::GoldenTable;
use qcluster::rep::{count_subreps, random_rigid_rep, CountOptions, Quiver, QuiverRep};
use qcluster::torus::TorusElement;

type Outcome = Result<(bool, String), String>;

fn read(rel: &str) -> String {
    std::fs::read_to_string(format!("{}/../../data/{rel}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn golden(name: &str) -> GoldenTable {
    serde_json::from_str(&read(&format!("golden/{name}.json"))).unwrap()
}

fn ctx_for(ice: &IceQuiver) -> Result<CcContext, String> {
    let pair = CompatiblePair::from_quiver(ice).map_err(|e| e.to_string())?;
    CcContext::new(ice, &pair).map_err(|e| e.to_string())
}

fn file_ctx(name: &str) -> Result<CcContext, String> {
    let file = parse_quiver(&read(&format!("quivers/{name}.quiver"))).map_err(|e| e.to_string())?;
    ctx_for(&file.quiver)
}

fn zero_based(word: &[usize]) -> Vec<usize> {
    word.iter().map(|k| k - 1).collect()
}

fn tangent() -> SamplingConfig {
    SamplingConfig { bound: DegreeBound::Tangent, ..SamplingConfig::default() }
}

fn unit_sum(ctx: &CcContext, exps: &[&[i64]]) -> TorusElement {
    let mut x = TorusElement::zero(ctx.pair().lambda());
    for e in exps {
        x.add_term(e.to_vec(), &LaurentV::one());
    }
    x
}

fn criterion_1() -> Outcome {
    let ctx = file_ctx("a2")?;
    let table = golden("a2");
    let seeds = walk(ctx.pair(), &zero_based(&table.word)).map_err(|e| e.to_string())?;
    let mut ok = seeds[1].var(0) == &unit_sum(&ctx, &[&[-1, 0, 1, 0], &[-1, 1, 0, 0]])
        && seeds[2].var(1) == &unit_sum(&ctx, &[&[-1, -1, 1, 0], &[-1, 0, 0, 0], &[0, -1, 0, 1]]);
    let mut matched = 0;
    for entry in &table.entries {
        let x = seeds[entry.position].var(entry.index - 1);
        let want = TorusElement::from_records(ctx.pair().lambda(), &entry.variable).map_err(|e| e.to_string())?;
        let v = verify_variable(&ctx, x, &SamplingConfig::default()).map_err(|e| e.to_string())?;
        if *x == want && v.record.verdict == MATCH {
            matched += 1;
        }
    }
    ok &= matched == 5 && table.entries.len() == 5;
    Ok((ok, format!("{matched}/5 reference variables equal and verified")))
}

fn criterion_2() -> Outcome {
    let ctx = file_ctx("e6")?;
    let table = golden("e6");
    let entry = &table.entries[0];
    let seeds = walk(ctx.pair(), &zero_based(&table.word)).map_err(|e| e.to_string())?;
    let x = seeds[entry.position].var(entry.index - 1);
    let (g, f) = extract_g_and_f(x, ctx.pair().b_tilde()).map_err(|e| e.to_string())?;
    let a = Some(&g.0) == entry.g_vector.as_ref();
    let b = f.dim_vector().map_err(|e| e.to_string())? == entry.dim_vector;
    let reference = TorusElement::from_records(ctx.pair().lambda(), &entry.variable).map_err(|e| e.to_string())?;
    let mass: BigInt = x.terms().map(|(_, c)| c.eval_at_one()).sum();
    let c = *x == reference && mass == BigInt::from(36);
    let special: Vec<_> = x.terms().filter(|(_, c)| !c.is_one()).collect();
    let d = special.len() == 1
        && special[0].0 == &vec![-2, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0]
        && special[0].1 == &LaurentV::from_terms([(-1, 1), (1, 1)]);
    let reference_f: BTreeMap<Vec<i64>, BigInt> = entry
        .f_commutative
        .as_ref()
        .ok_or("golden file lacks the commutative F-polynomial")?
        .iter()
        .map(|t| (t.exponent.clone(), t.coeff.0.clone()))
        .collect();
    let e = f.specialize_v1() == reference_f;
    let v = verify_variable(&ctx, x, &SamplingConfig::default()).map_err(|e| e.to_string())?;
    let cc = v.record.verdict == MATCH;
    Ok((
        a && b && c && d && e && cc,
        format!(
            "g {a}, dim {b}, reference support {c} ({} monomials, coefficient mass {mass}), \
             special coefficient {d}, ev_1 F {e}, counting formula {cc}",
            x.len()
        ),
    ))
}

fn ball_contexts() -> Result<Vec<(&'static str, CcContext)>, String> {
    [("A2", Quiver::linear_a(2)), ("A3", Quiver::linear_a(3)), ("K2", Quiver::kronecker(2))]
        .into_iter()
        .map(|(name, q)| Ok((name, ctx_for(&IceQuiver::principal_framing(&q))?)))
        .collect()
}

fn balls(contexts: &[(&'static str, CcContext)]) -> Result<Vec<Vec<QuantumSeed>>, String> {
    contexts
        .iter()
        .map(|(_, ctx)| mutation_ball(&QuantumSeed::initial(ctx.pair()), 6, DEFAULT_TERM_CEILING).map_err(|e| e.to_string()))
        .collect()
}

fn criterion_3_4(contexts: &[(&'static str, CcContext)], balls: &[Vec<QuantumSeed>]) -> (Outcome, Outcome) {
    let mut lines3 = Vec::new();
    let mut lines4 = Vec::new();
    let (mut ok3, mut ok4) = (true, true);
    for ((name, ctx), seeds) in contexts.iter().zip(balls) {
        let vars = distinct_variables(seeds);
        let (mut matched, mut spec_ok, mut spec_total) = (0, 0, 0);
        for bv in &vars {
            let v = match verify_variable(ctx, &bv.var, &tangent()) {
                Ok(v) => v,
                Err(e) => return (Err(format!("{name}: {e}")), Err("criterion 3 aborted".into())),
            };
            if v.record.f_match && v.record.x_match && v.record.verdict == MATCH {
                matched += 1;
            }
            for p in [2, 3, 5] {
                spec_total += 1;
                let passed = random_rigid_rep(ctx.quiver(), &v.m, p, 0xACCE97, 4096)
                    .and_then(|rep| box_counts(&rep, &CountOptions::default()))
                    .map(|counts| check_specialized_at_prime(ctx, &bv.var, &v.g, &v.m, &counts, p).passed)
                    .unwrap_or(false);
                spec_ok += usize::from(passed);
            }
        }
        ok3 &= matched == vars.len();
        ok4 &= spec_ok == spec_total;
        lines3.push(format!("{name} {matched}/{}", vars.len()));
        lines4.push(format!("{name} {spec_ok}/{spec_total}"));
    }
    (
        Ok((ok3, format!("depth 6, tangent degree bound: {}", lines3.join(", ")))),
        Ok((ok4, format!("p in {{2,3,5}} with fresh rigid models: {}", lines4.join(", ")))),
    )
}

fn criterion_5(contexts: &[(&'static str, CcContext)], balls: &[Vec<QuantumSeed>]) -> Outcome {
    let mut audited = 0;
    let mut failures = Vec::new();
    let mut audit = |ctx: &CcContext, seeds: &[QuantumSeed]| -> Result<(), String> {
        for s in seeds {
            audited += 1;
            let bad = audit_seed(ctx.pair(), s).map_err(|e| e.to_string())?;
            failures.extend(bad.iter().map(|i| format!("{i} at {:?}", s.word())));
        }
        Ok(())
    };
    for name in ["a2", "e6"] {
        let ctx = file_ctx(name)?;
        let table = golden(name);
        audit(&ctx, &walk(ctx.pair(), &zero_based(&table.word)).map_err(|e| e.to_string())?)?;
    }
    for ((_, ctx), seeds) in contexts.iter().zip(balls) {
        audit(ctx, seeds)?;
    }
    let detail = format!("{audited} seeds audited, {} violations", failures.len());
    Ok((failures.is_empty(), failures.first().map_or(detail.clone(), |f| format!("{detail}; first: {f}"))))
}

/// `[n, k]_q` by the q-Pascal rule `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
fn pascal_coeffs(n: usize, k: usize) -> Vec<i64> {
    if k == 0 || k == n {
        return vec![1];
    }
    let mut out = vec![0; k * (n - k) + 1];
    for (i, c) in pascal_coeffs(n - 1, k - 1).into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in pascal_coeffs(n - 1, k).into_iter().enumerate() {
        out[i + k] += c;
    }
    out
}

fn pascal(n: usize, k: usize) -> IntPolyQ {
    IntPolyQ::from_i64s(&pascal_coeffs(n, k))
}

fn criterion_6() -> Outcome {
    let one = Quiver::new(1, vec![]).map_err(|e| e.to_string())?;
    let primes = [2u64, 3, 5, 7, 11];
    let mut checked = 0;
    for n in 0..=4 {
        for k in 0..=n {
            let c = counting_polynomial(&one, &[n], &[k], &SamplingConfig::default()).map_err(|e| e.to_string())?;
            let want = pascal(n, k);
            if c.poly != want {
                return Ok((false, format!("[{n},{k}] gave {:?}", c.poly)));
            }
            for p in primes {
                let rep = QuiverRep::semisimple(one.clone(), p, vec![n]);
                let counted = count_subreps(&rep, &[k], &CountOptions::default()).map_err(|e| e.to_string())?;
                let listed = enumerate_subspaces(n, k, p).count() as u128;
                if BigInt::from(counted) != want.eval_u64(p) || counted != listed {
                    return Ok((false, format!("[{n},{k}] at p={p}")));
                }
                checked += 1;
            }
        }
    }
    let mut sums = 0;
    for (q, dims) in [
        (Quiver::linear_a(3), vec![2, 1, 2]),
        (Quiver::kronecker(2), vec![2, 2]),
        (Quiver::new(3, vec![(0, 1), (2, 1)]).map_err(|e| e.to_string())?, vec![1, 2, 1]),
    ] {
        for p in primes {
            let rep = QuiverRep::semisimple(q.clone(), p, dims.clone());
            let total: u128 = qcluster::cc::box_classes(&dims)
                .iter()
                .map(|e| count_subreps(&rep, e, &CountOptions::default()))
                .sum::<Result<u128, _>>()
                .map_err(|e| e.to_string())?;
            let product: BigInt =
                dims.iter().map(|&d| (0..=d).map(|r| pascal(d, r).eval_u64(p)).sum::<BigInt>()).product();
            if BigInt::from(total) != product {
                return Ok((false, format!("zero-map sum for {dims:?} at p={p}")));
            }
            sums += 1;
        }
    }
    Ok((true, format!("{checked} single-vertex checks, {sums} zero-map sums over primes {primes:?}")))
}

fn criterion_7() -> Outcome {
    let a2 = Quiver::linear_a(2);
    let mut pairs = 0;
    for p in [2, 3, 5] {
        let s1 = QuiverRep::semisimple(a2.clone(), p, vec![1, 0]);
        let s2 = QuiverRep::semisimple(a2.clone(), p, vec![0, 1]);
        let proj = QuiverRep::new(a2.clone(), p, vec![1, 1], vec![FpMatrix::from_rows(p, &[vec![1]])])
            .map_err(|e| e.to_string())?;
        for (m, l) in [(&s1, &s1), (&s1, &proj), (&s2, &proj)] {
            let defects = direct_sum_count_defects(m, l, &CountOptions::default()).map_err(|e| e.to_string())?;
            if !defects.is_empty() {
                return Ok((false, format!("counting identity fails at p={p}: {defects:?}")));
            }
            pairs += 1;
        }
    }
    let ctx = file_ctx("a2")?;
    let table = golden("a2");
    let mut monomials = 0;
    for seed in walk(ctx.pair(), &zero_based(&table.word)).map_err(|e| e.to_string())? {
        for a in [[2, 0], [1, 1], [0, 2]] {
            let r = verify_monomial_multiplicativity(&ctx, &seed, &a, &tangent()).map_err(|e| e.to_string())?;
            if !r.matches {
                return Ok((false, format!("monomial {a:?} at word {:?}", seed.word())));
            }
            monomials += 1;
        }
    }
    Ok((true, format!("{pairs} direct-sum counting checks, {monomials} degree-2 monomials")))
}

const SEEDS: u64 = 10;

fn refutations(e: &[usize]) -> Result<(u64, Vec<u64>), String> {
    let q = Quiver::kronecker(4);
    let bound = degree_bound(&q, &[3, 4], e, DegreeBound::Ambient);
    let mut refuted = 0;
    let mut zero_certified = Vec::new();
    for seed in 0..SEEDS {
        let r = refute_counting_polynomial(e, bound, generic_builder(q.clone(), vec![3, 4], seed), &RefuteConfig::default())
            .map_err(|e| e.to_string())?;
        if r.refuted {
            refuted += 1;
        } else if r.polynomial.as_ref().is_some_and(|p| p.is_empty()) {
            zero_certified.push(seed);
        }
    }
    Ok((refuted, zero_certified))
}

fn criterion_8() -> Outcome {
    let (refuted, zero) = refutations(&[1, 1])?;
    Ok((
        refuted == SEEDS,
        format!(
            "e=(1,1): refuted for {refuted}/{SEEDS} seeds, zero polynomial certified for {}/{SEEDS}; \
             this class is generically empty here and refutations come from sporadic points over F_2 or F_3",
            zero.len()
        ),
    ))
}

fn supplementary_8() -> Outcome {
    let (refuted, _) = refutations(&[2, 1])?;
    Ok((refuted == SEEDS, format!("e=(2,1), the genus 3 curve in this convention: refuted for {refuted}/{SEEDS} seeds")))
}

fn line(label: &str, started: Instant, outcome: Outcome) -> bool {
    let secs = started.elapsed().as_secs_f64();
    let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    println!("{} {label}: {detail} ({secs:.1}s)", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() {
    let mut passed = 0;
    let t = Instant::now();
    passed += usize::from(line("criterion 1 (A2 walk)", t, criterion_1()));
    let t = Instant::now();
    passed += usize::from(line("criterion 2 (affine E6 variable)", t, criterion_2()));
    let t = Instant::now();
    let setup = ball_contexts().and_then(|c| Ok((balls(&c)?, c)));
    match setup {
        Ok((seeds, contexts)) => {
            let (c3, c4) = criterion_3_4(&contexts, &seeds);
            let t3 = t.elapsed();
            passed += usize::from(line("criterion 3 (counting formula on depth-6 balls)", t, c3));
            println!("     (criteria 3 and 4 share one pass over the variables; {:.1}s combined)", t3.as_secs_f64());
            let t = Instant::now();
            passed += usize::from(line("criterion 4 (specialized check)", t, c4));
            let t = Instant::now();
            passed += usize::from(line("criterion 5 (invariant audit)", t, criterion_5(&contexts, &seeds)));
        }
        Err(e) => {
            for n in 3..=5 {
                line(&format!("criterion {n}"), t, Err(e.clone()));
            }
        }
    }
    let t = Instant::now();
    passed += usize::from(line("criterion 6 (counting oracle)", t, criterion_6()));
    let t = Instant::now();
    passed += usize::from(line("criterion 7 (direct sums)", t, criterion_7()));
    let t = Instant::now();
    passed += usize::from(line("criterion 8 (4-Kronecker negative control)", t, criterion_8()));
    let t = Instant::now();
    line("supplementary 8", t, supplementary_8());
    println!("{passed}/8 criteria passed");
}
