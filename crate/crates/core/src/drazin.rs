//! Drazin inverse, index, group inverse and spectral idempotent.
//!
//! The Drazin inverse of a square `A` is the unique `X` with `AX = XA`,
//! `XAX = X` and `A - A²X` nilpotent; it always exists for square matrices
//! over a field. It is computed here constructively: split the space into
//! the column space and nullspace of `A^n`, read off the invertible core and
//! nilpotent blocks, invert the core, and transport back.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::Matrix;
use crate::Result;

/// `A^D` together with the index and the spectral idempotent `I - A·A^D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrazinResult {
    pub dinv: Matrix,
    pub index: usize,
    pub spectral_idempotent: Matrix,
}

/// Similarity `A = S · blockdiag(C, N) · S^{-1}` with `C` invertible
/// (`r x r`, `r = rank(A^n)`) and `N` nilpotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreNilpotentDecomposition {
    pub basis_change: Matrix,
    pub core: Matrix,
    pub nil: Matrix,
}

/// Smallest `k >= 0` with `rank(A^k) = rank(A^{k+1})` (`A^0 = I`).
///
/// Invertible matrices get index 0 under this rank-stabilization convention;
/// formulas weighting terms by the spectral idempotent are insensitive to the
/// 0-vs-1 choice there, which a dedicated test asserts.
pub fn index_of(a: &Matrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let mut power = Matrix::identity(a.rows(), a.field());
    let mut rank = power.rank();
    for k in 0..=a.rows() {
        let next = power.mul(a)?;
        let next_rank = next.rank();
        if next_rank == rank {
            return Ok(k);
        }
        power = next;
        rank = next_rank;
    }
    unreachable!("rank stabilizes within n steps for an n x n matrix")
}

/// Core-nilpotent decomposition of a square matrix.
///
/// The basis is deterministic: the first `r` columns of `S` are the columns
/// of `A^n` at its pivot indices (a basis of the column space of `A^n` in
/// rref pivot order), the rest are the nullspace basis of `A^n` in
/// free-column order.
pub fn core_nilpotent(a: &Matrix) -> Result<CoreNilpotentDecomposition> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let stabilized = a.pow(n)?;
    let reduced = stabilized.rref();
    let r = reduced.rank;

    let mut columns: Vec<Matrix> = reduced
        .pivot_columns
        .iter()
        .map(|&c| stabilized.column(c))
        .collect();
    columns.extend(stabilized.nullspace_basis());
    let basis_change = Matrix::from_columns(n, a.field(), &columns)?;

    // col(A^n) ⊕ null(A^n) = F^n once the rank has stabilized, so S is
    // invertible; a failure here is an internal bug, not an input condition.
    let s_inv = basis_change
        .inverse()
        .expect("column space and nullspace of A^n span the whole space");
    let b = s_inv.mul(a)?.mul(&basis_change)?;

    debug_assert!(
        b.submatrix(r, 0, n, r).is_zero() && b.submatrix(0, r, r, n).is_zero(),
        "similarity transform must be block-diagonal"
    );

    Ok(CoreNilpotentDecomposition {
        core: b.submatrix(0, 0, r, r),
        nil: b.submatrix(r, r, n, n),
        basis_change,
    })
}

/// Drazin inverse via the core-nilpotent decomposition:
/// `A^D = S · blockdiag(C^{-1}, 0) · S^{-1}`.
pub fn drazin(a: &Matrix) -> Result<DrazinResult> {
    let dec = core_nilpotent(a)?;
    let r = dec.core.rows();
    let n = a.rows();
    let core_inv = dec.core.inverse().expect("core block is invertible");
    let zero_block = Matrix::zero(n - r, n - r, a.field());
    let block = Matrix::block_diag(&core_inv, &zero_block)?;
    let s_inv = dec
        .basis_change
        .inverse()
        .expect("basis change is invertible");
    let dinv = dec.basis_change.mul(&block)?.mul(&s_inv)?;

    let index = index_of(a)?;
    let spectral_idempotent = Matrix::identity(n, a.field()).sub(&a.mul(&dinv)?)?;

    let result = DrazinResult {
        dinv,
        index,
        spectral_idempotent,
    };
    debug_assert!(
        is_drazin_of(a, &result.dinv, result.index.max(1))?,
        "computed inverse must satisfy the defining equations"
    );
    Ok(result)
}

/// The group inverse `A^#`: the Drazin inverse when the index is at most 1.
pub fn group_inverse(a: &Matrix) -> Result<Matrix> {
    let result = drazin(a)?;
    if result.index >= 2 {
        return Err(Error::NoGroupInverse(result.index));
    }
    Ok(result.dinv)
}

/// Definitional check: `AX = XA`, `XAX = X`, `A - A²X` nilpotent, and the
/// power form `A^k = A^{k+1}X` (`k` clamped to >= 1 so invertible inputs
/// check `A = A²X`). For `k >= max(index, 1)` the two forms agree.
pub fn is_drazin_of(a: &Matrix, x: &Matrix, k: usize) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != x.rows() || a.cols() != x.cols() {
        return Err(Error::DimensionMismatch(format!(
            "candidate is {}x{}, matrix is {}x{}",
            x.rows(),
            x.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let ax = a.mul(x)?;
    let xa = x.mul(a)?;
    if ax != xa {
        return Ok(false);
    }
    if xa.mul(x)? != *x {
        return Ok(false);
    }
    let residual = a.sub(&a.mul(&ax)?)?;
    if !residual.is_nilpotent()? {
        return Ok(false);
    }
    let k = k.max(1);
    let ak = a.pow(k)?;
    Ok(ak == a.pow(k + 1)?.mul(x)?)
}

/// `A^π = I - A·A^D`.
pub fn spectral_idempotent(a: &Matrix) -> Result<Matrix> {
    Ok(drazin(a)?.spectral_idempotent)
}
