use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::torus::{frame_monomial, SkewForm, TorusElement};

use super::pair::{fomin_zelevinsky_mutation, mutate_matrices, CompatiblePair};

/// Default cap on the number of terms of a new cluster variable.
pub const DEFAULT_TERM_CEILING: usize = 200_000;

/// A seed reached from the root by a mutation word.
///
/// `vars` are expansions in the initial torus. `basis_change` maps current
/// coordinates to initial ones, so that `Λ_t = Gᵀ Λ_0 G`. Each step uses the
/// tropical sign (the sign of the c-vector at `k`), which makes the mutable
/// columns of `basis_change` the extended g-vectors.
#[derive(Clone, Debug)]
pub struct QuantumSeed {
    lambda: SkewForm,
    b_tilde: IntMatrix,
    vars: Vec<TorusElement>,
    basis_change: IntMatrix,
    c_matrix: IntMatrix,
    word: Vec<usize>,
}

impl QuantumSeed {
    pub fn initial(pair: &CompatiblePair) -> Self {
        Self::root(pair.lambda(), pair.b_tilde().clone())
    }

    /// The root seed of the `v = 1` theory: every `Λ` is zero.
    pub fn commutative(b_tilde: &IntMatrix) -> Self {
        Self::root(&Arc::new(SkewForm::zero(b_tilde.rows())), b_tilde.clone())
    }

    fn root(form: &Arc<SkewForm>, b_tilde: IntMatrix) -> Self {
        let (m, n) = (b_tilde.rows(), b_tilde.cols());
        Self {
            lambda: form.as_ref().clone(),
            b_tilde,
            vars: (0..m).map(|i| TorusElement::generator(form, i)).collect(),
            basis_change: IntMatrix::identity(m),
            c_matrix: IntMatrix::identity(n),
            word: Vec::new(),
        }
    }

    pub fn lambda(&self) -> &SkewForm {
        &self.lambda
    }

    pub fn b_tilde(&self) -> &IntMatrix {
        &self.b_tilde
    }

    pub fn vars(&self) -> &[TorusElement] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &TorusElement {
        &self.vars[i]
    }

    pub fn basis_change(&self) -> &IntMatrix {
        &self.basis_change
    }

    /// c-vectors as columns, tracked by classical mutation of `[B; C]`.
    pub fn c_matrix(&self) -> &IntMatrix {
        &self.c_matrix
    }

    /// 0-based mutation word from the root.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn m(&self) -> usize {
        self.b_tilde.rows()
    }

    pub fn n(&self) -> usize {
        self.b_tilde.cols()
    }

    /// Mutation at `k` (0-based).
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed> {
        self.mutate_bounded(k, DEFAULT_TERM_CEILING)
    }

    pub fn mutate_bounded(&self, k: usize, term_ceiling: usize) -> Result<QuantumSeed> {
        if k >= self.n() {
            return Err(Error::InvalidVertex(k + 1));
        }
        let mu = mutate_matrices(&self.lambda, &self.b_tilde, k)?;
        let m = self.m();
        let col = self.b_tilde.col(k);
        let a: Vec<i64> = col.iter().map(|&b| b.max(0)).collect();
        let b: Vec<i64> = col.iter().map(|&b| (-b).max(0)).collect();
        let mut ek = vec![0; m];
        ek[k] = 1;
        // X_k · X_k' = v^{Λ(e_k,a)} X(a) + v^{Λ(e_k,b)} X(b)
        let rhs = &frame_monomial(&a, &self.lambda, &self.vars)?.shift(self.lambda.pair(&ek, &a))
            + &frame_monomial(&b, &self.lambda, &self.vars)?.shift(self.lambda.pair(&ek, &b));
        let new_var = rhs.left_divide(&self.vars[k], term_ceiling)?;
        let mut vars = self.vars.clone();
        vars[k] = new_var;
        let mut word = self.word.clone();
        word.push(k);
        let n = self.n();
        let mut stacked = self.b_tilde.top_rows(n).to_rows();
        stacked.extend(self.c_matrix.to_rows());
        let stacked = fomin_zelevinsky_mutation(&IntMatrix::from_rows(&stacked), k);
        let c_matrix = IntMatrix::from_rows(&stacked.to_rows()[n..]);
        let tropical = if self.c_matrix.col(k).iter().any(|&c| c > 0) { &mu.e_plus } else { &mu.e_minus };
        Ok(QuantumSeed {
            lambda: mu.lambda,
            b_tilde: mu.b_tilde,
            vars,
            basis_change: self.basis_change.mul(tropical),
            c_matrix,
            word,
        })
    }

    /// The cluster monomial `X(t)(a)` for `a >= 0` in current coordinates.
    pub fn monomial(&self, a: &[i64]) -> Result<TorusElement> {
        frame_monomial(a, &self.lambda, &self.vars)
    }
}

/// The seeds along `word` (0-based, applied left to right), root first.
pub fn walk(pair: &CompatiblePair, word: &[usize]) -> Result<Vec<QuantumSeed>> {
    walk_from(QuantumSeed::initial(pair), word, DEFAULT_TERM_CEILING)
}

pub fn walk_from(root: QuantumSeed, word: &[usize], term_ceiling: usize) -> Result<Vec<QuantumSeed>> {
    let mut seeds = vec![root];
    for &k in word {
        let next = seeds.last().unwrap().mutate_bounded(k, term_ceiling)?;
        seeds.push(next);
    }
    Ok(seeds)
}

/// Where a cluster variable was first met: seed index in the input, and
/// 0-based position in that seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallVariable {
    pub seed: usize,
    pub index: usize,
    pub var: TorusElement,
}

/// The distinct mutable cluster variables of `seeds`, in order of appearance.
pub fn distinct_variables(seeds: &[QuantumSeed]) -> Vec<BallVariable> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (s, seed) in seeds.iter().enumerate() {
        for (i, x) in seed.vars().iter().enumerate().take(seed.n()) {
            if seen.insert(x.to_string()) {
                out.push(BallVariable { seed: s, index: i, var: x.clone() });
            }
        }
    }
    out
}

/// Every reduced mutation word of length at most `depth` (no letter repeated
/// twice in a row), with the seed it reaches. Seeds are not deduplicated.
pub fn mutation_ball(root: &QuantumSeed, depth: usize, term_ceiling: usize) -> Result<Vec<QuantumSeed>> {
    let mut out = vec![root.clone()];
    let mut frontier = vec![root.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for k in 0..s.n() {
                if s.word().last() == Some(&k) {
                    continue;
                }
                next.push(s.mutate_bounded(k, term_ceiling)?);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}
