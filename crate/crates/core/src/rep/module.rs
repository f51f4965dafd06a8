use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{check_prime, FpMatrix};

use super::Quiver;

/// A representation over `F_p` in the right-module convention: arrow
/// `a: i -> j` carries a `dims[i] × dims[j]` matrix `V_j -> V_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuiverRep {
    quiver: Quiver,
    prime: u64,
    dims: Vec<usize>,
    maps: Vec<FpMatrix>,
    rigid: bool,
}

impl QuiverRep {
    pub fn new(quiver: Quiver, prime: u64, dims: Vec<usize>, maps: Vec<FpMatrix>) -> Result<Self> {
        check_prime(prime)?;
        if dims.len() != quiver.vertices() || maps.len() != quiver.arrows().len() {
            return Err(Error::Shape("dimension vector or arrow count mismatch".into()));
        }
        for (&(i, j), m) in quiver.arrows().iter().zip(&maps) {
            if m.rows() != dims[i] || m.cols() != dims[j] || m.modulus() != prime {
                return Err(Error::Shape(format!("arrow {} -> {} needs a {}x{} matrix", i + 1, j + 1, dims[i], dims[j])));
            }
        }
        Ok(Self { quiver, prime, dims, maps, rigid: false })
    }

    /// All structure maps zero.
    pub fn semisimple(quiver: Quiver, prime: u64, dims: Vec<usize>) -> Self {
        let maps = quiver.arrows().iter().map(|&(i, j)| FpMatrix::zeros(prime, dims[i], dims[j])).collect();
        Self::new(quiver, prime, dims, maps).expect("shapes built from dims")
    }

    /// The simple module at `v`.
    pub fn simple(quiver: Quiver, prime: u64, v: usize) -> Self {
        let mut dims = vec![0; quiver.vertices()];
        dims[v] = 1;
        Self::semisimple(quiver, prime, dims)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dims_i64(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn maps(&self) -> &[FpMatrix] {
        &self.maps
    }

    /// Set only by [`QuiverRep::certify_rigid`] and [`random_rigid_rep`].
    pub fn is_certified_rigid(&self) -> bool {
        self.rigid
    }

    /// Checks `dim Hom(M, M) = <m, m>` and records the certificate.
    pub fn certify_rigid(mut self) -> Result<Self> {
        let d = self.dims_i64();
        if hom_dim(&self, &self)? as i64 != self.quiver.euler(&d, &d) {
            return Err(Error::NoRigidRep);
        }
        self.rigid = true;
        Ok(self)
    }

    /// Plain-text dump: prime, dims, then each arrow matrix row-major.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "prime {}", self.prime).unwrap();
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        writeln!(out, "dims {}", dims.join(" ")).unwrap();
        for (&(i, j), m) in self.quiver.arrows().iter().zip(&self.maps) {
            writeln!(out, "arrow {} {}", i + 1, j + 1).unwrap();
            for r in 0..m.rows() {
                let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
                writeln!(out, "  {}", row.join(" ")).unwrap();
            }
        }
        out
    }
}

/// `dim_F_p` of the intertwiners `φ_v: M_v -> N_v` with `φ_i M_a = N_a φ_j`
/// for every arrow `a: i -> j`.
pub fn hom_dim(m: &QuiverRep, n: &QuiverRep) -> Result<usize> {
    if m.prime != n.prime || m.quiver != n.quiver {
        return Err(Error::Shape("Hom between representations of different quivers or fields".into()));
    }
    let p = m.prime;
    let verts = m.quiver.vertices();
    // unknown φ_v[r][c] (N_v × M_v) at offset[v] + r * dims_m[v] + c
    let mut offset = vec![0; verts + 1];
    for v in 0..verts {
        offset[v + 1] = offset[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = offset[verts];
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (a, &(i, j)) in m.quiver.arrows().iter().enumerate() {
        let (ma, na) = (&m.maps[a], &n.maps[a]);
        // entry (r, c) of φ_i M_a - N_a φ_j, an N_i × M_j matrix
        for r in 0..n.dims[i] {
            for c in 0..m.dims[j] {
                let mut eq = vec![0i64; unknowns];
                for s in 0..m.dims[i] {
                    eq[offset[i] + r * m.dims[i] + s] += ma.get(s, c) as i64;
                }
                for t in 0..n.dims[j] {
                    eq[offset[j] + t * m.dims[j] + c] -= na.get(r, t) as i64;
                }
                rows.push(eq);
            }
        }
    }
    if rows.is_empty() {
        return Ok(unknowns);
    }
    Ok(unknowns - FpMatrix::from_rows(p, &rows).rank())
}

/// `dim Ext^1(M, N) = dim Hom(M, N) - <m, n>` (the path algebra is hereditary).
pub fn ext_dim(m: &QuiverRep, n: &QuiverRep) -> Result<usize> {
    let h = hom_dim(m, n)? as i64;
    let e = h - m.quiver.euler(&m.dims_i64(), &n.dims_i64());
    usize::try_from(e).map_err(|_| Error::Shape(format!("negative Ext dimension {e}")))
}

/// Block-diagonal sum.
pub fn direct_sum(m: &QuiverRep, n: &QuiverRep) -> Result<QuiverRep> {
    if m.prime != n.prime || m.quiver != n.quiver {
        return Err(Error::Shape("direct sum of representations of different quivers or fields".into()));
    }
    let dims = m.dims.iter().zip(&n.dims).map(|(a, b)| a + b).collect();
    let maps = m.maps.iter().zip(&n.maps).map(|(a, b)| a.block_diag(b)).collect();
    QuiverRep::new(m.quiver.clone(), m.prime, dims, maps)
}

/// Uniformly random structure maps.
pub fn random_rep<R: Rng>(quiver: &Quiver, dims: &[usize], prime: u64, rng: &mut R) -> QuiverRep {
    let maps = quiver
        .arrows()
        .iter()
        .map(|&(i, j)| {
            let mut mat = FpMatrix::zeros(prime, dims[i], dims[j]);
            for r in 0..dims[i] {
                for c in 0..dims[j] {
                    mat.set(r, c, rng.gen_range(0..prime));
                }
            }
            mat
        })
        .collect();
    QuiverRep::new(quiver.clone(), prime, dims.to_vec(), maps).expect("shapes built from dims")
}

/// Mixes a user seed with the sampling context so that every
/// `(seed, prime, dims, salt)` gets an independent, reproducible stream.
pub fn derive_seed(seed: u64, prime: u64, dims: &[usize], salt: u64) -> u64 {
    let mut h = splitmix(seed ^ 0x5163_6c75_7374_6572);
    for x in [prime, salt].into_iter().chain(dims.iter().map(|&d| d as u64)) {
        h = splitmix(h ^ x);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub const DEFAULT_MAX_TRIALS: usize = 64;

/// Samples random representations until one is certified rigid.
pub fn random_rigid_rep(quiver: &Quiver, dims: &[usize], prime: u64, seed: u64, max_trials: usize) -> Result<QuiverRep> {
    let d: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
    let target = quiver.euler(&d, &d);
    // Hom(M, M) contains the scalars as soon as M is nonzero.
    if target < i64::from(dims.iter().any(|&x| x > 0)) {
        return Err(Error::NoRigidRep);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, prime, dims, 0));
    for _ in 0..max_trials {
        let rep = random_rep(quiver, dims, prime, &mut rng);
        if hom_dim(&rep, &rep)? as i64 == target {
            return Ok(QuiverRep { rigid: true, ..rep });
        }
    }
    Err(Error::NoRigidRep)
}
