//! Canonical 2x2 witness pairs: they satisfy `a²b = aba` and `b²a = bab`
//! without commuting, over any field, and anchor tests, block embeddings
//! and CLI examples.

use crate::matrix::Matrix;
use crate::scalar::FieldTag;
use crate::Result;

/// `a = [[1,0],[0,0]]` (a projection), `b = [[0,0],[1,0]]` (a nilpotent
/// shift). Here `ab = 0` while `ba = b`, so the pair is noncommuting.
pub fn projection_shift_pair(field: FieldTag) -> Result<(Matrix, Matrix)> {
    Ok((
        Matrix::from_i64(field, &[&[1, 0], &[0, 0]])?,
        Matrix::from_i64(field, &[&[0, 0], &[1, 0]])?,
    ))
}

/// `a = [[1,0],[1,0]]`, `b = [[1,0],[0,0]]`: two idempotents with `ab = a`
/// and `ba = b`, the standard witness that `a^D b^D` and `b^D a^D` differ.
pub fn skew_projection_pair(field: FieldTag) -> Result<(Matrix, Matrix)> {
    Ok((
        Matrix::from_i64(field, &[&[1, 0], &[1, 0]])?,
        Matrix::from_i64(field, &[&[1, 0], &[0, 0]])?,
    ))
}
