//! Dense exact-rational matrices and the row-reduction solvers built on
//! them: reduced row echelon form, rank, null-space bases, span membership
//! with explicit coefficients, determinants and inverses.
//!
//! All solvers use Gauss–Jordan elimination with the leftmost nonzero pivot
//! and eager reduction to lowest terms (the rational type reduces after
//! every operation), so results are canonical: `rref` is unique, and
//! null-space basis vectors carry a `1` in their free coordinate.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rat::{format_rat, Rat};

/// Shape mismatch between matrix operands.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("shape mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
pub struct ShapeError {
    /// Operation that failed.
    pub op: &'static str,
    /// Rows of the left operand.
    pub left_rows: usize,
    /// Columns of the left operand.
    pub left_cols: usize,
    /// Rows of the right operand.
    pub right_rows: usize,
    /// Columns of the right operand.
    pub right_cols: usize,
}

/// Dense matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, ShapeError> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != nc {
                return Err(ShapeError {
                    op: "from_rows",
                    left_rows: nr,
                    left_cols: nc,
                    right_rows: 1,
                    right_cols: r.len(),
                });
            }
        }
        Ok(RatMatrix { rows: nr, cols: nc, data: rows.concat() })
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// Column vector from a slice.
    pub fn column(entries: &[Rat]) -> Self {
        RatMatrix { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(row, col)`, zero-indexed.
    pub fn at(&self, row: usize, col: usize) -> &Rat {
        &self.data[row * self.cols + col]
    }

    /// Sets the entry at `(row, col)`, zero-indexed.
    pub fn set(&mut self, row: usize, col: usize, value: Rat) {
        self.data[row * self.cols + col] = value;
    }

    /// Row `r` as a slice.
    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    /// True for a square matrix equal to its transpose.
    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (i + 1..self.cols).all(|j| self.at(i, j) == self.at(j, i)))
    }

    /// Transposed copy.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    fn shape_err(&self, other: &Self, op: &'static str) -> ShapeError {
        ShapeError {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Result<Self, ShapeError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(self.shape_err(other, "add"));
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c)))
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Self) -> Result<Self, ShapeError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(self.shape_err(other, "sub"));
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - other.at(r, c)))
    }

    /// Scalar multiple.
    pub fn scale(&self, k: &Rat) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * k)
    }

    /// Matrix product `self * other`.
    pub fn mat_mul(&self, other: &Self) -> Result<Self, ShapeError> {
        if self.cols != other.rows {
            return Err(self.shape_err(other, "mat_mul"));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        let cur = out.at(r, c) + a * b;
                        out.set(r, c, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form together with the pivot columns.
    ///
    /// The pivot list is strictly increasing and its length is the rank.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..a.cols {
            let Some(p) = (pr..a.rows).find(|&r| !a.at(r, c).is_zero()) else {
                continue;
            };
            if p != pr {
                for k in 0..a.cols {
                    let (low, high) = (pr.min(p), pr.max(p));
                    a.data.swap(low * a.cols + k, high * a.cols + k);
                }
            }
            let inv = Rat::one() / a.at(pr, c).clone();
            for k in c..a.cols {
                let v = a.at(pr, k) * &inv;
                a.set(pr, k, v);
            }
            for r in 0..a.rows {
                if r != pr && !a.at(r, c).is_zero() {
                    let f = a.at(r, c).clone();
                    for k in c..a.cols {
                        let v = a.at(r, k) - &f * a.at(pr, k);
                        a.set(r, k, v);
                    }
                }
            }
            pivots.push(c);
            pr += 1;
            if pr == a.rows {
                break;
            }
        }
        (a, pivots)
    }

    /// Rank (number of pivots in the reduced row echelon form).
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right null space, as column vectors.
    ///
    /// Each basis vector has a `1` in one free coordinate and zeros in the
    /// other free coordinates, so the basis is unique for a given matrix.
    pub fn null_space(&self) -> Vec<RatMatrix> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Rat::zero(); self.cols];
                v[fc] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.at(row, fc).clone();
                }
                RatMatrix::column(&v)
            })
            .collect()
    }

    /// Determinant of a square matrix via fraction-exact elimination.
    ///
    /// # Panics
    /// Panics when the matrix is not square.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.at(r, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                for k in 0..n {
                    a.data.swap(c * n + k, p * n + k);
                }
                det = -det;
            }
            det *= a.at(c, c);
            let inv = Rat::one() / a.at(c, c).clone();
            for r in c + 1..n {
                if !a.at(r, c).is_zero() {
                    let f = a.at(r, c) * &inv;
                    for k in c..n {
                        let v = a.at(r, k) - &f * a.at(c, k);
                        a.set(r, k, v);
                    }
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = RatMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, n + r, Rat::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(RatMatrix::from_fn(n, n, |r, c| red.at(r, n + c).clone()))
    }

    /// Flattens the matrix into a single row-major vector.
    pub fn flatten(&self) -> Vec<Rat> {
        self.data.clone()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(format_rat).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Expresses `v` in the span of `basis`, returning the coefficients when it
/// lies inside and `None` when it does not.
///
/// All inputs are flattened row-major, so matrices of equal shape can be
/// compared as vectors. The coefficient vector is the unique solution with
/// zero weight on redundant (non-pivot) basis elements.
pub fn in_span(v: &RatMatrix, basis: &[RatMatrix]) -> Option<Vec<Rat>> {
    let dim = v.rows() * v.cols();
    if basis.is_empty() {
        return v.is_zero().then(Vec::new);
    }
    let k = basis.len();
    let mut aug = RatMatrix::zeros(dim, k + 1);
    for (j, b) in basis.iter().enumerate() {
        assert_eq!(
            b.rows() * b.cols(),
            dim,
            "span basis element {j} has mismatched size"
        );
        for (i, e) in b.entries().iter().enumerate() {
            aug.set(i, j, e.clone());
        }
    }
    for (i, e) in v.entries().iter().enumerate() {
        aug.set(i, k, e.clone());
    }
    let (red, pivots) = aug.rref();
    if pivots.contains(&k) {
        return None;
    }
    let mut coeffs = vec![Rat::zero(); k];
    for (row, &pc) in pivots.iter().enumerate() {
        coeffs[pc] = red.at(row, k).clone();
    }
    Some(coeffs)
}
