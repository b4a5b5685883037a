//! Structure tensors: the bracket, Jacobi validation, adjoint matrices, and
//! the Cartan–Killing form.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::matrix::RatMatrix;
use crate::rat::Rat;

/// Error constructing a structure tensor.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    /// An index lies outside `1..=dim`.
    #[error("bracket ({i},{j})->{k}: index out of range for dimension {dim}")]
    IndexOutOfRange {
        /// First lower index.
        i: usize,
        /// Second lower index.
        j: usize,
        /// Upper index.
        k: usize,
        /// Basis size.
        dim: usize,
    },
    /// A nonzero coefficient on a repeated lower index pair `(i,i)`.
    #[error("bracket ({i},{i})->{k}: nonzero coefficient on equal lower indices")]
    EqualLowerIndices {
        /// The repeated lower index.
        i: usize,
        /// Upper index.
        k: usize,
    },
    /// The same `(i,j,k)` slot was given twice.
    #[error("bracket ({i},{j})->{k}: duplicate coefficient")]
    Duplicate {
        /// First lower index.
        i: usize,
        /// Second lower index.
        j: usize,
        /// Upper index.
        k: usize,
    },
}

/// Antisymmetric structure constants f_ij^k of an n-dimensional algebra.
///
/// Only slots with `i < j` are stored (1-based); `f_ji^k = -f_ij^k` is
/// implied and `f_ii^k = 0`. Absent slots are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTensor {
    dim: usize,
    f: BTreeMap<(usize, usize, usize), Rat>,
}

impl StructureTensor {
    /// The zero (abelian) tensor.
    pub fn abelian(dim: usize) -> Self {
        StructureTensor { dim, f: BTreeMap::new() }
    }

    /// Builds a tensor from `(i, j, k, coefficient)` tuples, 1-based.
    /// Tuples with `i > j` are normalized by antisymmetry; zero
    /// coefficients are dropped.
    pub fn from_brackets(
        dim: usize,
        brackets: impl IntoIterator<Item = (usize, usize, usize, Rat)>,
    ) -> Result<Self, TensorError> {
        let mut f = BTreeMap::new();
        for (i, j, k, coeff) in brackets {
            if coeff.is_zero() {
                continue;
            }
            if i < 1 || j < 1 || k < 1 || i > dim || j > dim || k > dim {
                return Err(TensorError::IndexOutOfRange { i, j, k, dim });
            }
            if i == j {
                return Err(TensorError::EqualLowerIndices { i, k });
            }
            let (key, value) = if i < j { ((i, j, k), coeff) } else { ((j, i, k), -coeff) };
            if f.insert(key, value).is_some() {
                return Err(TensorError::Duplicate { i: key.0, j: key.1, k: key.2 });
            }
        }
        Ok(StructureTensor { dim, f })
    }

    /// Basis size n.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// f_ij^k with antisymmetry applied (1-based indices).
    pub fn get(&self, i: usize, j: usize, k: usize) -> Rat {
        if i < j {
            self.f.get(&(i, j, k)).cloned().unwrap_or_else(Rat::zero)
        } else if j < i {
            self.f.get(&(j, i, k)).map(|c| -c.clone()).unwrap_or_else(Rat::zero)
        } else {
            Rat::zero()
        }
    }

    /// The stored `i < j` slots in index order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rat)> {
        self.f.iter().map(|(&(i, j, k), c)| (i, j, k, c))
    }

    /// True if every coefficient is zero.
    pub fn is_abelian(&self) -> bool {
        self.f.is_empty()
    }

    /// Bracket of two coordinate vectors: component k is
    /// Σ_{i,j} x_i y_j f_ij^k.
    ///
    /// # Panics
    /// Panics if either vector's length differs from `dim`.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.dim, "left vector length");
        assert_eq!(y.len(), self.dim, "right vector length");
        let mut out = vec![Rat::zero(); self.dim];
        for (&(i, j, k), c) in &self.f {
            let wedge = &x[i - 1] * &y[j - 1] - &x[j - 1] * &y[i - 1];
            if !wedge.is_zero() {
                out[k - 1] += c * wedge;
            }
        }
        out
    }

    /// Checks the Jacobi identity on every triple i<j<k; a violation lists
    /// the triple, the output component l, and the nonzero cyclic residual
    /// Σ_m (f_ij^m f_mk^l + f_jk^m f_mi^l + f_ki^m f_mj^l).
    pub fn jacobi_check(&self) -> JacobiReport {
        let n = self.dim;
        let mut violations = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                for k in (j + 1)..=n {
                    for l in 1..=n {
                        let mut residual = Rat::zero();
                        for m in 1..=n {
                            residual += self.get(i, j, m) * self.get(m, k, l)
                                + self.get(j, k, m) * self.get(m, i, l)
                                + self.get(k, i, m) * self.get(m, j, l);
                        }
                        if !residual.is_zero() {
                            violations.push(JacobiViolation { i, j, k, l, residual });
                        }
                    }
                }
            }
        }
        JacobiReport { violations }
    }

    /// The adjoint matrices: (χ_i)_j^k = −f_ij^k with j the row and k the
    /// column, and the antisymmetric slices (𝒴^k)_ij = −f_ij^k.
    pub fn adjoint(&self) -> AdjointSet {
        let n = self.dim;
        let mut chi = vec![RatMatrix::zeros(n, n); n];
        let mut y = vec![RatMatrix::zeros(n, n); n];
        for (&(i, j, k), c) in &self.f {
            // Stored slot f_ij^k with i<j, plus the implied f_ji^k = -c.
            chi[i - 1].set(j - 1, k - 1, -c.clone());
            chi[j - 1].set(i - 1, k - 1, c.clone());
            y[k - 1].set(i - 1, j - 1, -c.clone());
            y[k - 1].set(j - 1, i - 1, c.clone());
        }
        AdjointSet { chi, y }
    }

    /// Cartan–Killing form K_ij = Σ_{k,l} f_ik^l f_jl^k (symmetric).
    pub fn killing_form(&self) -> RatMatrix {
        let n = self.dim;
        let mut out = RatMatrix::zeros(n, n);
        for i in 1..=n {
            for j in i..=n {
                let mut acc = Rat::zero();
                for k in 1..=n {
                    for l in 1..=n {
                        let a = self.get(i, k, l);
                        if a.is_zero() {
                            continue;
                        }
                        acc += a * self.get(j, l, k);
                    }
                }
                out.set(i - 1, j - 1, acc.clone());
                out.set(j - 1, i - 1, acc);
            }
        }
        out
    }
}

/// One failed Jacobi instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    /// First basis index of the triple.
    pub i: usize,
    /// Second basis index of the triple.
    pub j: usize,
    /// Third basis index of the triple.
    pub k: usize,
    /// Output component with nonzero residual.
    pub l: usize,
    /// The cyclic-sum residual.
    pub residual: Rat,
}

/// Result of `jacobi_check`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    /// Every violated (i,j,k,l), in lexicographic order.
    pub violations: Vec<JacobiViolation>,
}

impl JacobiReport {
    /// True when there were no violations.
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Adjoint matrices of a structure tensor.
#[derive(Clone, Debug)]
pub struct AdjointSet {
    /// χ_i, indexed 0-based by i−1; entry (j,k) is −f_ij^k.
    pub chi: Vec<RatMatrix>,
    /// 𝒴^k, indexed 0-based by k−1; entry (i,j) is −f_ij^k (antisymmetric).
    pub y: Vec<RatMatrix>,
}
