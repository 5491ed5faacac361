//! Dense exact matrices over a single scalar field.
//!
//! Matrices are immutable values: every operation returns a fresh matrix, so
//! they can be shared freely across search workers. Pivoting is deterministic
//! (first nonzero entry scanning rows top-down within each column, columns
//! left-to-right); with exact arithmetic pivot quality is irrelevant and
//! determinism makes every output reproducible.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::scalar::{FieldTag, Scalar};
use crate::Result;

/// Row-major dense matrix with all entries in one field.
///
/// Zero-dimensional matrices are permitted (the core-nilpotent decomposition
/// produces 0x0 core or nilpotent blocks for nilpotent or invertible inputs);
/// the JSON interface only accepts `rows, cols >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldTag,
    entries: Vec<Scalar>,
}

/// Outcome of reduced row-echelon elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrefResult {
    pub rref: Matrix,
    /// Strictly increasing pivot column indices; `rank == pivot_columns.len()`.
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

impl Matrix {
    pub fn from_entries(
        rows: usize,
        cols: usize,
        field: FieldTag,
        entries: Vec<Scalar>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::FieldMismatch(
                    field.to_string(),
                    e.field().to_string(),
                ));
            }
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            entries,
        })
    }

    pub fn from_rows(field: FieldTag, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::from_entries(r, c, field, rows.into_iter().flatten().collect())
    }

    /// Test/fixture convenience: integer entries mapped into `field`.
    pub fn from_i64(field: FieldTag, rows: &[&[i64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&n| Scalar::from_integer(field, n)))
            .collect();
        Matrix::from_entries(r, c, field, entries)
    }

    pub fn zero(rows: usize, cols: usize, field: FieldTag) -> Self {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldTag) -> Self {
        let mut m = Matrix::zero(n, n, field);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::one(field);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    fn require_same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.require_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x.add(y))
            .collect::<Result<_>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> Result<Matrix> {
        if k.field() != self.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                k.field().to_string(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .map(|x| x.mul(k))
            .collect::<Result<_>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.require_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero(self.field);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `A^k` with `A^0 = I`, by binary exponentiation. Exact arithmetic makes
    /// the result identical to repeated multiplication.
    pub fn pow(&self, k: usize) -> Result<Matrix> {
        self.require_square()?;
        let mut result = Matrix::identity(self.rows, self.field);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Reduced row-echelon form with deterministic pivot choice.
    pub fn rref(&self) -> RrefResult {
        let mut m = self.clone();
        let mut pivot_columns = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // first nonzero entry scanning rows top-down
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.entries.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inverse().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv).expect("same field");
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m
                        .get(i, j)
                        .sub(&factor.mul(m.get(r, j)).expect("same field"))
                        .expect("same field");
                    m.set(i, j, v);
                }
            }
            pivot_columns.push(c);
            r += 1;
        }
        RrefResult {
            rref: m,
            rank: pivot_columns.len(),
            pivot_columns,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : Ax = 0}` as column vectors, one per free column of the
    /// reduced form, in increasing free-column order. Empty iff A is injective.
    pub fn nullspace_basis(&self) -> Vec<Matrix> {
        let RrefResult {
            rref,
            pivot_columns,
            ..
        } = self.rref();
        let mut basis = Vec::with_capacity(self.cols - pivot_columns.len());
        for f in 0..self.cols {
            if pivot_columns.contains(&f) {
                continue;
            }
            let mut v = Matrix::zero(self.cols, 1, self.field);
            v.set(f, 0, Scalar::one(self.field));
            for (row, &pc) in pivot_columns.iter().enumerate() {
                v.set(pc, 0, rref.get(row, f).neg());
            }
            basis.push(v);
        }
        basis
    }

    /// `A^{-1}` by Gauss-Jordan elimination on `[A | I]`.
    pub fn inverse(&self) -> Result<Matrix> {
        self.require_square()?;
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n, self.field))?;
        let reduced = aug.rref();
        let invertible = reduced.rank >= n && reduced.pivot_columns[..n].iter().copied().eq(0..n);
        if !invertible {
            return Err(Error::Singular);
        }
        Ok(reduced.rref.submatrix(0, n, n, 2 * n))
    }

    /// Nilpotency test via `A^n = 0` with `n` the dimension: necessary and
    /// sufficient for matrices, and field-agnostic.
    pub fn is_nilpotent(&self) -> Result<bool> {
        self.require_square()?;
        Ok(self.pow(self.rows)?.is_zero())
    }

    pub fn commutes_with(&self, other: &Matrix) -> Result<bool> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    /// Column `j` as an `n x 1` matrix.
    pub fn column(&self, j: usize) -> Matrix {
        let entries = (0..self.rows).map(|i| self.get(i, j).clone()).collect();
        Matrix {
            rows: self.rows,
            cols: 1,
            field: self.field,
            entries,
        }
    }

    /// Assembles a square matrix from `n x 1` columns.
    pub fn from_columns(n: usize, field: FieldTag, columns: &[Matrix]) -> Result<Matrix> {
        if columns.len() != n || columns.iter().any(|c| c.rows != n || c.cols != 1) {
            return Err(Error::DimensionMismatch(format!(
                "need {n} columns of size {n}x1"
            )));
        }
        let mut m = Matrix::zero(n, n, field);
        for (j, col) in columns.iter().enumerate() {
            m.require_same_field(col)?;
            for i in 0..n {
                m.set(i, j, col.get(i, 0).clone());
            }
        }
        Ok(m)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.require_same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Matrix::zero(self.rows, self.cols + other.cols, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// Copy of the half-open block `[r0, r1) x [c0, c1)`.
    pub fn submatrix(&self, r0: usize, c0: usize, r1: usize, c1: usize) -> Matrix {
        let mut m = Matrix::zero(r1 - r0, c1 - c0, self.field);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        m
    }

    /// `blockdiag(a, b)`; either block may be 0-dimensional.
    pub fn block_diag(a: &Matrix, b: &Matrix) -> Result<Matrix> {
        a.require_same_field(b)?;
        let mut m = Matrix::zero(a.rows + b.rows, a.cols + b.cols, a.field);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Wire format: `{"field": "q"|"gf:<p>", "rows": n, "cols": m,
/// "entries": [["1","0"],["1/2","-3"]]}`; entries are scalar strings so
/// exact values survive JSON.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    field: String,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        MatrixRepr {
            field: self.field.to_string(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let field = FieldTag::parse(&repr.field).map_err(D::Error::custom)?;
        if repr.rows == 0 || repr.cols == 0 {
            return Err(D::Error::custom("rows and cols must be positive"));
        }
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom(format!(
                "entries must be a {}x{} nested array",
                repr.rows, repr.cols
            )));
        }
        let mut entries = Vec::with_capacity(repr.rows * repr.cols);
        for row in &repr.entries {
            for s in row {
                entries.push(Scalar::parse(field, s).map_err(D::Error::custom)?);
            }
        }
        Matrix::from_entries(repr.rows, repr.cols, field, entries).map_err(D::Error::custom)
    }
}
