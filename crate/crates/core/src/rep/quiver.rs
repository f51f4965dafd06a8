use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::IntMatrix;

/// An acyclic quiver on vertices `0..n`; arrows are `(source, target)` and may repeat.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Quiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(n: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        for &(s, t) in &arrows {
            if s >= n || t >= n {
                return Err(Error::InvalidQuiver(format!("arrow {} -> {} out of range", s + 1, t + 1)));
            }
        }
        if topological_order(n, &arrows).is_none() {
            return Err(Error::NotAcyclic);
        }
        Ok(Self { n, arrows })
    }

    /// The linearly oriented `A_n`: `1 -> 2 -> ... -> n`.
    pub fn linear_a(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i)).collect()).unwrap()
    }

    /// The `r`-arrow Kronecker quiver `1 => 2`.
    pub fn kronecker(r: usize) -> Self {
        Self::new(2, vec![(0, 1); r]).unwrap()
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// Sources before targets.
    pub fn topological_order(&self) -> Vec<usize> {
        topological_order(self.n, &self.arrows).expect("quiver checked acyclic")
    }

    /// `b_ij = #(i -> j) - #(j -> i)`.
    pub fn b_matrix(&self) -> IntMatrix {
        let mut b = IntMatrix::zeros(self.n, self.n);
        for &(s, t) in &self.arrows {
            b[(s, t)] += 1;
            b[(t, s)] -= 1;
        }
        b
    }

    /// `<d, f> = Σ_v d_v f_v - Σ_{i -> j} d_j f_i`.
    pub fn euler(&self, d: &[i64], f: &[i64]) -> i64 {
        let diag: i64 = d.iter().zip(f).map(|(a, b)| a * b).sum();
        diag - self.arrows.iter().map(|&(i, j)| d[j] * f[i]).sum::<i64>()
    }

    /// `<d, f> - <f, d>`.
    pub fn euler_antisym(&self, d: &[i64], f: &[i64]) -> i64 {
        self.euler(d, f) - self.euler(f, d)
    }
}

/// Kahn's algorithm; `None` on a cycle (loops count as cycles).
pub(crate) fn topological_order(n: usize, arrows: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for &(_, t) in arrows {
        indeg[t] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).rev().collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for &(s, t) in arrows {
            if s == v {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.push(t);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}
