//! Counting subrepresentations with fixed dimension vector over `F_p`.
//!
//! Vertices split into an independent set counted in closed form and the
//! rest, enumerated depth first. Once every neighbour of a closed vertex `v`
//! is fixed, admissible `U_v` are exactly the `e_v`-subspaces sandwiched
//! between `W = Σ M_a(U_j)` (arrows `v -> j`) and `K = ∩ M_a^{-1}(U_i)`
//! (arrows `i -> v`), so their number is a Gaussian binomial.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{gaussian_binomial_at, inv_mod, FpMatrix, Subspace, SubspaceSpace};

use super::{Quiver, QuiverRep};

pub const DEFAULT_CEILING: u128 = 100_000_000;

/// Largest modulus the counting kernel accepts.
pub const MAX_COUNT_PRIME: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Splits the outermost enumeration across the rayon pool; identical to
    /// `Sequential` when the `parallel` feature is off.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    /// Bound on the estimated number of enumerated subspace tuples.
    pub ceiling: u128,
    pub mode: ExecMode,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self { ceiling: DEFAULT_CEILING, mode: ExecMode::default() }
    }
}

/// Which vertices are enumerated (in order) and which are counted in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountPlan {
    pub enumerated: Vec<usize>,
    pub closed: Vec<usize>,
    /// `∏_{v enumerated} [m_v choose e_v]_p`, saturating.
    pub estimate: u128,
}

pub fn plan_count(quiver: &Quiver, dims: &[usize], e: &[usize], p: u64) -> CountPlan {
    let n = quiver.vertices();
    let size: Vec<u128> = (0..n).map(|v| gaussian_binomial_at(dims[v], e[v], p).unwrap_or(u128::MAX)).collect();
    let independent = |mask: u64| quiver.arrows().iter().all(|&(s, t)| mask >> s & 1 == 0 || mask >> t & 1 == 0);
    let estimate = |mask: u64| (0..n).filter(|&v| mask >> v & 1 == 0).fold(1u128, |acc, v| acc.saturating_mul(size[v]));
    let best = if n <= 16 {
        (0..1u64 << n)
            .filter(|&m| independent(m))
            .min_by_key(|&m| (estimate(m), n as u32 - m.count_ones()))
            .unwrap_or(0)
    } else {
        let mut by_size: Vec<usize> = (0..n).collect();
        by_size.sort_by_key(|&v| std::cmp::Reverse(size[v]));
        by_size.into_iter().fold(0u64, |m, v| if independent(m | 1 << v) { m | 1 << v } else { m })
    };
    let mut enumerated: Vec<usize> = (0..n).filter(|&v| best >> v & 1 == 0).collect();
    enumerated.sort_by_key(|&v| std::cmp::Reverse(size[v]));
    let closed = (0..n).filter(|&v| best >> v & 1 == 1).collect();
    CountPlan { enumerated, closed, estimate: estimate(best) }
}

/// `#Gr_e(M)(F_p)`. Out-of-range `e` counts zero.
pub fn count_subreps(rep: &QuiverRep, e: &[usize], opts: &CountOptions) -> Result<u128> {
    let dims = rep.dims();
    if e.len() != dims.len() {
        return Err(Error::Shape(format!("class has {} entries, quiver has {} vertices", e.len(), dims.len())));
    }
    if e.iter().zip(dims).any(|(a, b)| a > b) {
        return Ok(0);
    }
    let p = rep.prime();
    if p >= MAX_COUNT_PRIME {
        return Err(Error::Shape(format!("prime {p} too large for counting")));
    }
    let plan = plan_count(rep.quiver(), dims, e, p);
    if plan.estimate > opts.ceiling {
        return Err(Error::InstanceTooLarge { estimate: plan.estimate, ceiling: opts.ceiling });
    }
    Kernel::new(rep, e, plan).run(opts.mode).ok_or_else(|| Error::Shape("point count exceeds 128 bits".into()))
}

/// Reduction modulo a fixed `p` without hardware division; exact for all `u64`.
#[derive(Clone, Copy)]
struct Barrett {
    p: u64,
    m: u64,
}

impl Barrett {
    fn new(p: u64) -> Self {
        Self { p, m: (u64::MAX / p) }
    }

    #[inline(always)]
    fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

struct Kernel<'a> {
    p: u64,
    red: Barrett,
    inv: Vec<u64>,
    dims: &'a [usize],
    e: &'a [usize],
    arrows: &'a [(usize, usize)],
    /// Row-major `dims[i] × dims[j]` for arrow `i -> j`.
    maps: Vec<Vec<u64>>,
    out_arrows: Vec<Vec<usize>>,
    in_arrows: Vec<Vec<usize>>,
    /// Source of some arrow, so `K` at the target needs this annihilator.
    needs_ann: Vec<bool>,
    plan: CountPlan,
    binom: Vec<Vec<Option<u128>>>,
}

#[derive(Clone)]
struct State {
    chosen: Vec<bool>,
    basis: Vec<Vec<u64>>,
    ann: Vec<Vec<u64>>,
    wbuf: Vec<u64>,
    kbuf: Vec<u64>,
}

impl<'a> Kernel<'a> {
    fn new(rep: &'a QuiverRep, e: &'a [usize], plan: CountPlan) -> Self {
        let p = rep.prime();
        let dims = rep.dims();
        let arrows = rep.quiver().arrows();
        let n = dims.len();
        let mut out_arrows = vec![Vec::new(); n];
        let mut in_arrows = vec![Vec::new(); n];
        for (a, &(s, t)) in arrows.iter().enumerate() {
            out_arrows[s].push(a);
            in_arrows[t].push(a);
        }
        let maps = rep.maps().iter().map(|m| m.data().to_vec()).collect();
        let top = dims.iter().copied().max().unwrap_or(0);
        let binom = (0..=top).map(|a| (0..=top).map(|b| gaussian_binomial_at(a, b, p)).collect()).collect();
        let inv = (0..p).map(|x| if x == 0 { 0 } else { inv_mod(x, p) }).collect();
        let needs_ann = (0..n).map(|v| !out_arrows[v].is_empty()).collect();
        let red = Barrett::new(p);
        Self { p, red, inv, dims, e, arrows, maps, out_arrows, in_arrows, needs_ann, plan, binom }
    }

    fn fresh_state(&self) -> State {
        let n = self.dims.len();
        State {
            chosen: vec![false; n],
            basis: vec![Vec::new(); n],
            ann: vec![Vec::new(); n],
            wbuf: Vec::new(),
            kbuf: Vec::new(),
        }
    }

    fn run(&self, mode: ExecMode) -> Option<u128> {
        let Some(&v0) = self.plan.enumerated.first() else {
            return self.leaf(&mut self.fresh_state());
        };
        let space = SubspaceSpace::new(self.dims[v0], self.e[v0], self.p);
        let len = space.len();
        let chunk = |lo: u128, hi: u128| -> Option<u128> {
            let mut st = self.fresh_state();
            let mut total: Option<u128> = Some(0);
            space.for_each_in(lo, hi, |rows, pivots| {
                if total.is_none() {
                    return;
                }
                self.choose_rref(&mut st, v0, rows, pivots);
                total = total.zip(self.descend(1, &mut st)).and_then(|(a, b)| a.checked_add(b));
            });
            total
        };
        let pieces: u128 = if mode == ExecMode::Parallel { len.min(1024) } else { 1 };
        let bounds: Vec<(u128, u128)> = (0..pieces).map(|i| (len * i / pieces, len * (i + 1) / pieces)).collect();
        let partial: Vec<Option<u128>> = match mode {
            #[cfg(feature = "parallel")]
            ExecMode::Parallel => bounds.into_par_iter().map(|(lo, hi)| chunk(lo, hi)).collect(),
            _ => bounds.into_iter().map(|(lo, hi)| chunk(lo, hi)).collect(),
        };
        partial.into_iter().try_fold(0u128, |acc, x| acc.checked_add(x?))
    }

    fn descend(&self, level: usize, st: &mut State) -> Option<u128> {
        if level == self.plan.enumerated.len() {
            return self.leaf(st);
        }
        let v = self.plan.enumerated[level];
        let (p, d) = (self.p, self.dims[v]);
        let nw = self.gather_w(v, st);
        let w = Subspace::span(p, d, st.wbuf.chunks(d.max(1)).take(nw).map(|r| r.to_vec()));
        let nk = self.gather_k(v, st);
        let k = if nk == 0 {
            Subspace::full(p, d)
        } else {
            Subspace::span(p, d, FpMatrix::from_raw(p, nk, d, st.kbuf[..nk * d].to_vec()).nullspace())
        };
        if !k.contains_space(&w) || self.e[v] < w.dim() || self.e[v] > k.dim() {
            return Some(0);
        }
        let comp = w.complement_in(&k);
        let space = SubspaceSpace::new(comp.len(), self.e[v] - w.dim(), p);
        let mut total = 0u128;
        for sel in space.iter() {
            let extra = sel.iter().map(|coeffs| {
                let mut x = vec![0u64; d];
                for (c, vec) in coeffs.iter().zip(&comp) {
                    for (xi, vi) in x.iter_mut().zip(vec) {
                        *xi = (*xi + c * vi) % p;
                    }
                }
                x
            });
            let u = Subspace::span(p, d, w.basis().iter().cloned().chain(extra));
            let pivots: Vec<usize> = u.basis().iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
            self.choose_rref(st, v, &u.basis().concat(), &pivots);
            total = total.checked_add(self.descend(level + 1, st)?)?;
        }
        st.chosen[v] = false;
        Some(total)
    }

    fn leaf(&self, st: &mut State) -> Option<u128> {
        let mut product = 1u128;
        for &v in &self.plan.closed {
            let d = self.dims[v];
            let nw = self.gather_w(v, st);
            let dim_w = rank_in_place(&mut st.wbuf, nw, d, self.red, &self.inv);
            if dim_w > self.e[v] {
                return Some(0);
            }
            let nk = self.gather_k(v, st);
            let mut rank_k = 0;
            if nk > 0 {
                for krow in st.kbuf[..nk * d].chunks(d) {
                    for wrow in st.wbuf[..dim_w * d].chunks(d) {
                        if self.red.reduce(krow.iter().zip(wrow).map(|(a, b)| a * b).sum::<u64>()) != 0 {
                            return Some(0);
                        }
                    }
                }
                rank_k = rank_in_place(&mut st.kbuf, nk, d, self.red, &self.inv);
            }
            let dim_k = d - rank_k;
            if dim_k < self.e[v] {
                return Some(0);
            }
            product = product.checked_mul(self.binom[dim_k - dim_w][self.e[v] - dim_w]?)?;
            if product == 0 {
                return Some(0);
            }
        }
        Some(product)
    }

    /// Images `M_a(U_j)` for arrows `a: v -> j` with `U_j` fixed, into `wbuf`.
    fn gather_w(&self, v: usize, st: &mut State) -> usize {
        let d = self.dims[v];
        st.wbuf.clear();
        let mut rows = 0;
        for &a in &self.out_arrows[v] {
            let j = self.arrows[a].1;
            if !st.chosen[j] || self.dims[j] == 0 {
                continue;
            }
            let dj = self.dims[j];
            let m = &self.maps[a];
            for u in st.basis[j].chunks(dj) {
                for r in 0..d {
                    let row = &m[r * dj..(r + 1) * dj];
                    st.wbuf.push(self.red.reduce(row.iter().zip(u).map(|(x, y)| x * y).sum::<u64>()));
                }
                rows += 1;
            }
        }
        rows
    }

    /// Rows `y · M_a` for arrows `a: i -> v` with `U_i` fixed and `y` in its
    /// annihilator; their common kernel is `K`.
    fn gather_k(&self, v: usize, st: &mut State) -> usize {
        let d = self.dims[v];
        st.kbuf.clear();
        let mut rows = 0;
        for &a in &self.in_arrows[v] {
            let i = self.arrows[a].0;
            if !st.chosen[i] || d == 0 {
                continue;
            }
            let di = self.dims[i];
            let m = &self.maps[a];
            for y in st.ann[i].chunks(di.max(1)).filter(|_| di > 0) {
                for c in 0..d {
                    st.kbuf.push(self.red.reduce((0..di).map(|s| y[s] * m[s * d + c]).sum::<u64>()));
                }
                rows += 1;
            }
        }
        rows
    }

    /// Records `U_v` from an RREF basis and derives its annihilator.
    fn choose_rref(&self, st: &mut State, v: usize, rows: &[u64], pivots: &[usize]) {
        let d = self.dims[v];
        let p = self.p;
        st.basis[v].clear();
        st.basis[v].extend_from_slice(rows);
        st.chosen[v] = true;
        let ann = &mut st.ann[v];
        ann.clear();
        if !self.needs_ann[v] {
            return;
        }
        for c in (0..d).filter(|c| !pivots.contains(c)) {
            let start = ann.len();
            ann.resize(start + d, 0);
            ann[start + c] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                ann[start + pc] = (p - rows[r * d + c]) % p;
            }
        }
    }
}

/// Row-reduces the first `rows` rows of `buf` (width `cols`) and moves a
/// basis of their span to the front; returns the rank.
fn rank_in_place(buf: &mut [u64], rows: usize, cols: usize, red: Barrett, inv: &[u64]) -> usize {
    let p = red.p;
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| buf[r * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for k in 0..cols {
                buf.swap(piv * cols + k, rank * cols + k);
            }
        }
        let s = inv[buf[rank * cols + c] as usize];
        for k in c..cols {
            buf[rank * cols + k] = red.reduce(buf[rank * cols + k] * s);
        }
        for r in (rank + 1)..rows {
            let f = buf[r * cols + c];
            if f != 0 {
                for k in c..cols {
                    buf[r * cols + k] = red.reduce(buf[r * cols + k] + (p - f) * buf[rank * cols + k]);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
