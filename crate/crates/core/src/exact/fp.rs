//! Linear algebra over a prime field `F_p`.

use std::fmt;

use crate::error::{Error, Result};

/// Primality by trial division; the primes used here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `k` primes in increasing order.
pub fn first_primes(k: usize) -> Vec<u64> {
    (2u64..).filter(|&n| is_prime(n)).take(k).collect()
}

#[inline]
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

#[inline]
pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// A dense matrix over `F_p`, entries kept reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        assert!(p < 1 << 31, "modulus too large for u64 products");
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = x.rem_euclid(p as i64) as u64;
            }
        }
        m
    }

    pub(crate) fn from_raw(p: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < p));
        Self { p, rows, cols, data }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.cols);
        let p = self.p;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (a, b)| (acc + a * b) % p))
            .collect()
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = (out.data[idx] + a * rhs.get(k, j)) % p;
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        rref_rows(&mut self.data, self.rows, self.cols, self.p)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m.get(r, f)) % p;
                }
                v
            })
            .collect()
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, other.p);
        let mut out = FpMatrix::zeros(self.p, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * out.cols + j] = self.get(i, j);
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.data[(self.rows + i) * out.cols + self.cols + j] = other.get(i, j);
            }
        }
        out
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Row-reduces a flat row-major buffer; returns pivot columns.
pub(crate) fn rref_rows(data: &mut [u64], rows: usize, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(r * cols + j, pr * cols + j);
            }
        }
        let inv = inv_mod(data[r * cols + c], p);
        for j in c..cols {
            data[r * cols + j] = data[r * cols + j] * inv % p;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = data[i * cols + c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = f * data[r * cols + j] % p;
                data[i * cols + j] = (data[i * cols + j] + p - sub) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel of a homogeneous system over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nullspace {
    pub nullity: usize,
    pub basis: Vec<Vec<u64>>,
}

pub fn solve_linear_fp(a: &FpMatrix) -> Nullspace {
    let basis = a.nullspace();
    Nullspace { nullity: basis.len(), basis }
}

/// A subspace of `F_p^d` held as an RREF basis (rows).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    p: u64,
    ambient: usize,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u64, ambient: usize) -> Self {
        Self { p, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Self { p, ambient, basis, pivots: (0..ambient).collect() }
    }

    /// Span of arbitrary vectors.
    pub fn span<I>(p: u64, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let mut data = Vec::new();
        let mut rows = 0;
        for v in vectors {
            debug_assert_eq!(v.len(), ambient);
            if v.iter().any(|&x| x != 0) {
                data.extend(v);
                rows += 1;
            }
        }
        let pivots = rref_rows(&mut data, rows, ambient, p);
        let basis = (0..pivots.len()).map(|i| data[i * ambient..(i + 1) * ambient].to_vec()).collect();
        Self { p, ambient, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    /// Reduce `v` against the basis; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &mut [u64]) {
        let p = self.p;
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + p - f * r % p) % p;
                }
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Image under `m` (maps `F_p^{cols}` to `F_p^{rows}`).
    pub fn image(&self, m: &FpMatrix) -> Subspace {
        Subspace::span(self.p, m.rows(), self.basis.iter().map(|v| m.mul_vec(v)))
    }

    /// Row vectors spanning the annihilator `{y : y . u = 0 for all u}`.
    pub fn annihilator(&self) -> Vec<Vec<u64>> {
        let m = FpMatrix::from_raw(self.p, self.dim(), self.ambient, self.basis.concat());
        m.nullspace()
    }

    /// Extends this basis to a basis of `outer`; returns the added vectors.
    /// `outer` must contain `self`.
    pub fn complement_in(&self, outer: &Subspace) -> Vec<Vec<u64>> {
        let mut acc = self.clone();
        let mut added = Vec::new();
        for v in &outer.basis {
            let mut w = v.clone();
            acc.reduce(&mut w);
            if w.iter().any(|&x| x != 0) {
                added.push(v.clone());
                acc = Subspace::span(self.p, self.ambient, acc.basis.iter().cloned().chain([w]));
            }
        }
        added
    }
}

/// All `r`-dimensional subspaces of `F_p^d`, indexed `0..len()` through their
/// reduced row echelon forms.
///
/// Index order: pivot sets in lexicographic order, then the free entries read
/// as a base-`p` number. Random access lets callers split the range across
/// threads without materialising it.
#[derive(Clone, Debug)]
pub struct SubspaceSpace {
    p: u64,
    d: usize,
    r: usize,
    blocks: Vec<PivotBlock>,
    len: u128,
}

#[derive(Clone, Debug)]
struct PivotBlock {
    pivots: Vec<usize>,
    /// (row, column) positions of free entries.
    free: Vec<(usize, usize)>,
    start: u128,
}

impl SubspaceSpace {
    pub fn new(d: usize, r: usize, p: u64) -> Self {
        let mut blocks = Vec::new();
        let mut start: u128 = 0;
        if r <= d {
            for pivots in combinations(d, r) {
                let free: Vec<(usize, usize)> = pivots
                    .iter()
                    .enumerate()
                    .flat_map(|(row, &pc)| {
                        let pivots = &pivots;
                        ((pc + 1)..d).filter(move |c| !pivots.contains(c)).map(move |c| (row, c))
                    })
                    .collect();
                let size = (p as u128).pow(free.len() as u32);
                blocks.push(PivotBlock { pivots, free, start });
                start += size;
            }
        }
        Self { p, d, r, blocks, len: start }
    }

    pub fn len(&self) -> u128 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The RREF basis (r rows of length d) at `idx`.
    pub fn get(&self, idx: u128) -> Vec<Vec<u64>> {
        assert!(idx < self.len, "subspace index out of range");
        let b = match self.blocks.binary_search_by(|b| b.start.cmp(&idx)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let block = &self.blocks[b];
        let mut rest = idx - block.start;
        let mut rows = vec![vec![0u64; self.d]; self.r];
        for (row, &pc) in block.pivots.iter().enumerate() {
            rows[row][pc] = 1;
        }
        for &(row, col) in &block.free {
            rows[row][col] = (rest % self.p as u128) as u64;
            rest /= self.p as u128;
        }
        rows
    }

    /// Streams the subspaces with index in `lo..hi` into `f` as a flat
    /// `r × d` RREF buffer together with its pivot columns. Consecutive
    /// indices are produced by an odometer, without re-decoding.
    pub fn for_each_in<F>(&self, lo: u128, hi: u128, mut f: F)
    where
        F: FnMut(&[u64], &[usize]),
    {
        let hi = hi.min(self.len);
        if lo >= hi {
            return;
        }
        let (d, p) = (self.d, self.p);
        let mut b = match self.blocks.binary_search_by(|b| b.start.cmp(&lo)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let mut buf = vec![0u64; self.r * d];
        let load = |buf: &mut Vec<u64>, block: &PivotBlock, mut rest: u128| {
            buf.iter_mut().for_each(|x| *x = 0);
            for (row, &pc) in block.pivots.iter().enumerate() {
                buf[row * d + pc] = 1;
            }
            for &(row, col) in &block.free {
                buf[row * d + col] = (rest % p as u128) as u64;
                rest /= p as u128;
            }
        };
        load(&mut buf, &self.blocks[b], lo - self.blocks[b].start);
        let mut idx = lo;
        loop {
            f(&buf, &self.blocks[b].pivots);
            idx += 1;
            if idx == hi {
                return;
            }
            let block = &self.blocks[b];
            let mut carried = true;
            for &(row, col) in &block.free {
                let x = &mut buf[row * d + col];
                *x += 1;
                if *x == p {
                    *x = 0;
                } else {
                    carried = false;
                    break;
                }
            }
            if carried {
                b += 1;
                load(&mut buf, &self.blocks[b], 0);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<Vec<u64>>> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

/// `r`-element subsets of `0..d` in lexicographic order.
fn combinations(d: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, d: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, d, r, cur, out);
            cur.pop();
        }
    }
    rec(0, d, r, &mut cur, &mut out);
    out
}

/// Canonical subspace iterator: each `r`-dimensional subspace of `F_p^d`
/// exactly once, as an RREF basis.
pub fn enumerate_subspaces(d: usize, r: usize, p: u64) -> impl Iterator<Item = Vec<Vec<u64>>> {
    let space = SubspaceSpace::new(d, r, p);
    (0..space.len()).map(move |i| space.get(i))
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) && p < 1 << 31 {
        Ok(())
    } else {
        Err(Error::Shape(format!("{p} is not a usable prime modulus")))
    }
}
