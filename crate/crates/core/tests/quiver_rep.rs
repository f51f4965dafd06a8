use std::collections::BTreeSet;

use proptest::prelude::*;
use qcluster::exact::{enumerate_subspaces, gaussian_binomial_at, FpMatrix, Subspace};
use qcluster::grass::{counting_polynomial, SamplingConfig};
use qcluster::rep::{
    count_subreps, direct_sum, ext_dim, hom_dim, plan_count, random_rep, random_rigid_rep, CountOptions, ExecMode,
    Quiver, QuiverRep, DEFAULT_MAX_TRIALS,
};
use qcluster::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every vector of `F_p^d`.
fn all_vectors(d: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|v| (0..p).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Number of `r`-dimensional subspaces, found as the set of spans of all
/// `r`-tuples of vectors.
fn brute_subspace_count(d: usize, r: usize, p: u64) -> usize {
    let vecs = all_vectors(d, p);
    let mut spans = BTreeSet::new();
    let mut idx = vec![0usize; r];
    loop {
        let s = Subspace::span(p, d, idx.iter().map(|&i| vecs[i].clone()));
        if s.dim() == r {
            spans.insert(s.basis().to_vec());
        }
        let mut k = 0;
        while k < r {
            idx[k] += 1;
            if idx[k] < vecs.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == r {
            return spans.len();
        }
    }
}

/// Tries every tuple of subspaces and tests `M_a(U_j) ⊆ U_i` directly.
fn brute_count(rep: &QuiverRep, e: &[usize]) -> u128 {
    let p = rep.prime();
    let per_vertex: Vec<Vec<Subspace>> = rep
        .dims()
        .iter()
        .zip(e)
        .map(|(&d, &r)| enumerate_subspaces(d, r, p).map(|b| Subspace::span(p, d, b)).collect())
        .collect();
    let mut total = 0;
    let mut idx = vec![0usize; per_vertex.len()];
    if per_vertex.iter().any(|v| v.is_empty()) {
        return 0;
    }
    loop {
        let ok = rep.quiver().arrows().iter().zip(rep.maps()).all(|(&(i, j), m)| {
            per_vertex[j][idx[j]].basis().iter().all(|u| per_vertex[i][idx[i]].contains(&m.mul_vec(u)))
        });
        total += u128::from(ok);
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < per_vertex[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            return total;
        }
    }
}

fn seq() -> CountOptions {
    CountOptions { mode: ExecMode::Sequential, ..CountOptions::default() }
}

fn projective(p: u64) -> QuiverRep {
    QuiverRep::new(Quiver::linear_a(2), p, vec![1, 1], vec![FpMatrix::from_rows(p, &[vec![1]])]).unwrap()
}

#[test]
fn subspace_enumeration_matches_span_oracle() {
    for p in [2, 3] {
        for d in 0..=4 {
            for r in 0..=d {
                if p == 3 && d == 4 && r > 1 {
                    continue;
                }
                let n = enumerate_subspaces(d, r, p).count();
                assert_eq!(n, brute_subspace_count(d, r, p), "d={d} r={r} p={p}");
                assert_eq!(n as u128, gaussian_binomial_at(d, r, p).unwrap());
            }
        }
    }
}

#[test]
fn calibration_right_module_convention() {
    let q = Quiver::linear_a(2);
    assert_eq!(q.euler(&[1, 0], &[0, 1]), 0);
    assert_eq!(q.euler(&[1, 1], &[1, 1]), 1);
    let pr = projective(5);
    assert_eq!(count_subreps(&pr, &[1, 0], &seq()).unwrap(), 1);
    assert_eq!(count_subreps(&pr, &[0, 1], &seq()).unwrap(), 0);
    assert_eq!(count_subreps(&pr, &[1, 1], &seq()).unwrap(), 1);
}

#[test]
fn hom_examples() {
    let q = Quiver::linear_a(2);
    let s1 = QuiverRep::simple(q.clone(), 3, 0);
    let s2 = QuiverRep::simple(q, 3, 1);
    assert_eq!(hom_dim(&s1, &s1).unwrap(), 1);
    assert_eq!(hom_dim(&s1, &s2).unwrap(), 0);
    assert_eq!(hom_dim(&projective(3), &projective(3)).unwrap(), 1);
}

#[test]
fn rigid_sampling_examples() {
    let q = Quiver::linear_a(2);
    let r = random_rigid_rep(&q, &[1, 1], 5, 0, DEFAULT_MAX_TRIALS).unwrap();
    assert_ne!(r.maps()[0].get(0, 0), 0);
    assert_eq!(hom_dim(&r, &r).unwrap(), 1);
    let s = random_rigid_rep(&q, &[0, 1], 5, 0, DEFAULT_MAX_TRIALS).unwrap();
    assert_eq!(hom_dim(&s, &s).unwrap(), 1);
    assert_eq!(
        random_rigid_rep(&Quiver::kronecker(4), &[3, 4], 5, 0, DEFAULT_MAX_TRIALS).unwrap_err(),
        Error::NoRigidRep
    );
}

#[test]
fn e6_projective_line() {
    let q = Quiver::new(7, vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
    let m = [2, 1, 1, 1, 1, 1, 1];
    let s1 = [1usize, 0, 0, 0, 0, 0, 0];
    let mi: Vec<i64> = m.iter().map(|&x| x as i64).collect();
    let rest: Vec<i64> = mi.iter().zip(s1).map(|(a, b)| a - b as i64).collect();
    assert_eq!(q.euler(&[1, 0, 0, 0, 0, 0, 0], &rest), 1);
    assert_eq!(q.euler(&[1, 0, 0, 0, 0, 0, 0], &[1, 1, 1, 1, 1, 1, 1]), 1);
    // Generic models are rare over F_2: three distinct lines and nonzero arm maps.
    for p in [2, 3, 5, 7] {
        let rep = random_rigid_rep(&q, &m, p, 4, 4096).unwrap();
        assert_eq!(count_subreps(&rep, &s1, &seq()).unwrap(), u128::from(p) + 1);
    }
    let c = counting_polynomial(&q, &m, &s1, &SamplingConfig::default()).unwrap();
    assert_eq!(c.poly.coeffs().len(), 2);
}

#[test]
fn ceiling_reports_instance_too_large() {
    let rep = QuiverRep::semisimple(Quiver::linear_a(2), 7, vec![5, 5]);
    let opts = CountOptions { ceiling: 1000, ..seq() };
    assert!(matches!(count_subreps(&rep, &[2, 2], &opts), Err(Error::InstanceTooLarge { .. })));
    assert_eq!(count_subreps(&rep, &[6, 0], &opts).unwrap(), 0);
}

#[test]
fn plan_is_independent_set() {
    let q = Quiver::linear_a(4);
    let plan = plan_count(&q, &[3, 3, 3, 3], &[1, 1, 1, 1], 5);
    for &(s, t) in q.arrows() {
        assert!(!(plan.closed.contains(&s) && plan.closed.contains(&t)));
    }
    assert_eq!(plan.closed.len() + plan.enumerated.len(), 4);
}

fn rep_strategy() -> impl Strategy<Value = (Quiver, Vec<usize>, u64, u64)> {
    let quivers = prop_oneof![
        Just(Quiver::linear_a(2)),
        Just(Quiver::linear_a(3)),
        Just(Quiver::kronecker(2)),
        Just(Quiver::new(3, vec![(0, 1), (2, 1)]).unwrap()),
        Just(Quiver::new(3, vec![(1, 0), (1, 2), (0, 2)]).unwrap()),
    ];
    (quivers, prop::sample::select(vec![2u64, 3]), any::<u64>()).prop_flat_map(|(q, p, seed)| {
        let n = q.vertices();
        (Just(q), prop::collection::vec(0usize..3, n), Just(p), Just(seed))
    })
}

fn build(q: &Quiver, dims: &[usize], p: u64, seed: u64) -> QuiverRep {
    random_rep(q, dims, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn classes(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &top in dims {
        out = out.into_iter().flat_map(|e| (0..=top).map(move |x| [e.clone(), vec![x]].concat())).collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_matches_brute_force((q, dims, p, seed) in rep_strategy()) {
        let rep = build(&q, &dims, p, seed);
        for e in classes(&dims) {
            prop_assert_eq!(count_subreps(&rep, &e, &seq()).unwrap(), brute_count(&rep, &e), "e = {:?}", e);
        }
    }

    #[test]
    fn parallel_agrees_with_sequential((q, dims, p, seed) in rep_strategy()) {
        let rep = build(&q, &dims, p, seed);
        let par = CountOptions { mode: ExecMode::Parallel, ..CountOptions::default() };
        for e in classes(&dims) {
            prop_assert_eq!(count_subreps(&rep, &e, &seq()).unwrap(), count_subreps(&rep, &e, &par).unwrap());
        }
    }

    #[test]
    fn trivial_classes_count_once((q, dims, p, seed) in rep_strategy()) {
        let rep = build(&q, &dims, p, seed);
        prop_assert_eq!(count_subreps(&rep, &vec![0; dims.len()], &seq()).unwrap(), 1);
        prop_assert_eq!(count_subreps(&rep, &dims, &seq()).unwrap(), 1);
    }

    #[test]
    fn zero_maps_give_product_formula((q, dims, p, _seed) in rep_strategy()) {
        let rep = QuiverRep::semisimple(q, p, dims.clone());
        let total: u128 = classes(&dims).iter().map(|e| count_subreps(&rep, e, &seq()).unwrap()).sum();
        let product: u128 = dims
            .iter()
            .map(|&d| (0..=d).map(|r| gaussian_binomial_at(d, r, p).unwrap()).sum::<u128>())
            .product();
        prop_assert_eq!(total, product);
    }

    #[test]
    fn ext_is_nonnegative((q, dims, p, seed) in rep_strategy(), other in prop::collection::vec(0usize..3, 3)) {
        let m = build(&q, &dims, p, seed);
        let n = build(&q, &other[..dims.len()], p, seed ^ 1);
        let mi: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
        let ni: Vec<i64> = other[..dims.len()].iter().map(|&x| x as i64).collect();
        let ext = ext_dim(&m, &n).unwrap();
        prop_assert_eq!(ext as i64, hom_dim(&m, &n).unwrap() as i64 - q.euler(&mi, &ni));
    }

    #[test]
    fn direct_sum_dims_add((q, dims, p, seed) in rep_strategy()) {
        let m = build(&q, &dims, p, seed);
        let s = direct_sum(&m, &m).unwrap();
        prop_assert_eq!(s.dims().to_vec(), dims.iter().map(|d| 2 * d).collect::<Vec<_>>());
        let zero = QuiverRep::semisimple(q.clone(), p, vec![0; dims.len()]);
        prop_assert_eq!(&direct_sum(&m, &zero).unwrap(), &m);
    }
}

#[test]
fn rigid_models_agree_on_every_class() {
    for (q, m) in [
        (Quiver::kronecker(2), vec![3, 2]),
        (Quiver::linear_a(3), vec![1, 2, 1]),
        (Quiver::new(3, vec![(0, 1), (2, 1)]).unwrap(), vec![1, 1, 1]),
    ] {
        for p in [2, 3, 5] {
            let a = random_rigid_rep(&q, &m, p, 1, DEFAULT_MAX_TRIALS).unwrap();
            let b = random_rigid_rep(&q, &m, p, 2, DEFAULT_MAX_TRIALS).unwrap();
            for e in classes(&m) {
                assert_eq!(count_subreps(&a, &e, &seq()).unwrap(), count_subreps(&b, &e, &seq()).unwrap());
            }
        }
    }
}
