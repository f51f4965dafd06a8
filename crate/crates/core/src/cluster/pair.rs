use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{invert_integer_matrix, IntMatrix};
use crate::torus::SkewForm;

use super::ice::{IceQuiver, LambdaSpec, QuiverFile};

/// `(Λ, B̃)` with `Λ(-B̃) = [I_n; 0]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompatiblePair {
    lambda: Arc<SkewForm>,
    b_tilde: IntMatrix,
}

impl CompatiblePair {
    pub fn new(lambda: SkewForm, b_tilde: IntMatrix) -> Result<Self> {
        if lambda.rank() != b_tilde.rows() {
            return Err(Error::RankMismatch(lambda.rank(), b_tilde.rows()));
        }
        if !is_unitally_compatible(lambda.matrix(), &b_tilde) || b_tilde.rank() != b_tilde.cols() {
            return Err(Error::NotCompatible);
        }
        Ok(Self { lambda: Arc::new(lambda), b_tilde })
    }

    pub fn from_quiver(q: &IceQuiver) -> Result<Self> {
        lambda_from_extended(&q.extended_matrix(), q.mutable())
    }

    pub fn from_file(f: &QuiverFile) -> Result<Self> {
        match &f.lambda {
            LambdaSpec::Auto => Self::from_quiver(&f.quiver),
            LambdaSpec::Explicit(l) => Self::new(SkewForm::new(l.clone())?, f.quiver.b_tilde()),
        }
    }

    pub fn lambda(&self) -> &Arc<SkewForm> {
        &self.lambda
    }

    pub fn b_tilde(&self) -> &IntMatrix {
        &self.b_tilde
    }

    pub fn m(&self) -> usize {
        self.b_tilde.rows()
    }

    pub fn n(&self) -> usize {
        self.b_tilde.cols()
    }

    /// Principal part `B` (top `n` rows).
    pub fn b_principal(&self) -> IntMatrix {
        self.b_tilde.top_rows(self.n())
    }
}

pub fn is_unitally_compatible(lambda: &IntMatrix, b_tilde: &IntMatrix) -> bool {
    let prod = lambda.mul(&b_tilde.neg());
    (0..prod.rows()).all(|i| (0..prod.cols()).all(|j| prod[(i, j)] == i64::from(i == j)))
}

/// `Λ = (B̃°)^{-T}` paired with the left `n` columns of `B̃°`.
pub fn lambda_from_extended(b_circ: &IntMatrix, n: usize) -> Result<CompatiblePair> {
    if !b_circ.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let inv = match invert_integer_matrix(b_circ) {
        Ok(inv) => inv,
        Err(Error::NotInvertible) => return Err(Error::ExtendedSingular),
        Err(e) => return Err(e),
    };
    let lambda = inv.transpose().to_integer().ok_or(Error::LambdaNotIntegral)?;
    CompatiblePair::new(SkewForm::new(lambda)?, b_circ.left_columns(n))
}

/// `E_ε` for mutation at `k` (0-based).
pub fn e_matrix(b_tilde: &IntMatrix, k: usize, eps: i64) -> IntMatrix {
    let m = b_tilde.rows();
    let mut e = IntMatrix::identity(m);
    for i in 0..m {
        e[(i, k)] = if i == k { -1 } else { (-eps * b_tilde[(i, k)]).max(0) };
    }
    e
}

/// `F_ε` for mutation at `k` (0-based).
pub fn f_matrix(b_tilde: &IntMatrix, k: usize, eps: i64) -> IntMatrix {
    let n = b_tilde.cols();
    let mut f = IntMatrix::identity(n);
    for j in 0..n {
        f[(k, j)] = if j == k { -1 } else { (eps * b_tilde[(k, j)]).max(0) };
    }
    f
}

/// Result of mutating a compatible pair at one vertex.
#[derive(Clone, Debug)]
pub struct MatrixMutation {
    pub lambda: SkewForm,
    pub b_tilde: IntMatrix,
    pub e_plus: IntMatrix,
    pub e_minus: IntMatrix,
}

/// `(E_εᵀ Λ E_ε, E_ε B̃ F_ε, E_ε)` for one sign `eps`.
pub fn mutate_matrices_signed(lambda: &SkewForm, b_tilde: &IntMatrix, k: usize, eps: i64) -> (IntMatrix, IntMatrix, IntMatrix) {
    let e = e_matrix(b_tilde, k, eps);
    let f = f_matrix(b_tilde, k, eps);
    let l = e.transpose().mul(lambda.matrix()).mul(&e);
    let b = e.mul(b_tilde).mul(&f);
    (l, b, e)
}

/// `Λ' = E_εᵀ Λ E_ε`, `B̃' = E_ε B̃ F_ε`; both signs are computed and must agree.
pub fn mutate_matrices(lambda: &SkewForm, b_tilde: &IntMatrix, k: usize) -> Result<MatrixMutation> {
    if k >= b_tilde.cols() {
        return Err(Error::InvalidVertex(k + 1));
    }
    let (l_plus, b_plus, e_plus) = mutate_matrices_signed(lambda, b_tilde, k, 1);
    let (l_minus, b_minus, e_minus) = mutate_matrices_signed(lambda, b_tilde, k, -1);
    assert!(l_plus == l_minus && b_plus == b_minus, "mutation depends on the sign choice");
    Ok(MatrixMutation { lambda: SkewForm::new(l_plus)?, b_tilde: b_plus, e_plus, e_minus })
}

/// Classical matrix mutation, used as an independent oracle.
pub fn fomin_zelevinsky_mutation(b: &IntMatrix, k: usize) -> IntMatrix {
    let mut out = b.clone();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            out[(i, j)] = if i == k || j == k {
                -b[(i, j)]
            } else {
                let (x, y) = (b[(i, k)], b[(k, j)]);
                b[(i, j)] + (x.abs() * y + x * y.abs()) / 2
            };
        }
    }
    out
}
