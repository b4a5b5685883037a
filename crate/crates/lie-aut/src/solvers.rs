//! Exact linear solvers for the two invariant spaces of an algebra — the
//! ad-invariant symmetric bilinear forms and the derivation algebra — plus
//! exact exponentials of nilpotent matrices and a nilradical-dimension
//! cross-check.

use num_traits::Zero;
use thiserror::Error;

use crate::lie::StructureTensor;
use crate::matrix::RatMatrix;
use crate::rat::{factorial, rat, Rat};

/// 0-based position of the upper-triangle slot (i,j), 1-based with i ≤ j,
/// in the row-major ordering (1,1),(1,2),…,(1,n),(2,2),…,(n,n).
fn sym_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i <= j && j <= n);
    (i - 1) * (n + 1) - (i - 1) * i / 2 + (j - i)
}

/// Canonical basis of the space of ad-invariant symmetric bilinear forms.
#[derive(Clone, Debug)]
pub struct MetricBasis {
    basis: Vec<RatMatrix>,
    nondegenerate: bool,
}

impl MetricBasis {
    /// The basis matrices (symmetric n×n), canonical kernel order.
    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    /// Dimension of the solution space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// True when some rational combination of the basis is nondegenerate
    /// (witnessed by an exact nonzero determinant at prime coefficients).
    pub fn has_nondegenerate_combination(&self) -> bool {
        self.nondegenerate
    }
}

/// Solves for all symmetric g with χ_i g = −(χ_i g)ᵀ for every i.
///
/// The n(n+1)/2 unknowns are the upper-triangle entries in row-major order;
/// for each i and each slot j ≤ k the equation reads
/// Σ_l (−f_ij^l g_lk − f_ik^l g_lj) = 0.
pub fn metric_basis(t: &StructureTensor) -> MetricBasis {
    let n = t.dim();
    let unknowns = n * (n + 1) / 2;
    let mut rows = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in j..=n {
                let mut row = vec![Rat::zero(); unknowns];
                for l in 1..=n {
                    let a = t.get(i, j, l);
                    if !a.is_zero() {
                        row[sym_index(n, l.min(k), l.max(k))] -= a;
                    }
                    let b = t.get(i, k, l);
                    if !b.is_zero() {
                        row[sym_index(n, l.min(j), l.max(j))] -= b;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        RatMatrix::zeros(1, unknowns).null_space()
    } else {
        RatMatrix::from_rows(rows).expect("equal-length rows").null_space()
    };
    let basis: Vec<RatMatrix> = kernel
        .iter()
        .map(|v| {
            RatMatrix::from_fn(n, n, |r, c| {
                v.at(sym_index(n, (r + 1).min(c + 1), (r + 1).max(c + 1)), 0).clone()
            })
        })
        .collect();
    let nondegenerate = nondegenerate_combination_exists(&basis);
    MetricBasis { basis, nondegenerate }
}

/// Decides whether some combination of symmetric matrices is invertible by
/// evaluating the exact determinant at small shifted prime coefficient
/// tuples (a few deterministic instantiations of a generic combination).
pub fn nondegenerate_combination_exists(basis: &[RatMatrix]) -> bool {
    const PRIMES: [i64; 28] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97, 101, 103, 107,
    ];
    if basis.is_empty() {
        return false;
    }
    let n = basis[0].rows();
    for shift in 0..4 {
        let mut combo = RatMatrix::zeros(n, n);
        for (idx, b) in basis.iter().enumerate() {
            combo = combo.add(&b.scale(&rat(PRIMES[(idx + shift) % PRIMES.len()]))).unwrap();
        }
        if !combo.det().is_zero() {
            return true;
        }
    }
    false
}

/// Canonical basis of the derivation algebra.
#[derive(Clone, Debug)]
pub struct DerivationBasis {
    basis: Vec<RatMatrix>,
}

impl DerivationBasis {
    /// The basis matrices (n×n), canonical kernel order.
    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    /// Dimension of the derivation algebra.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Solves for all D with D_m^j f_lj^k + D_l^i f_im^k = f_lm^n D_n^k for
/// every l < m and k (the infinitesimal form of structure-constant
/// preservation). Unknowns are the n² entries of D in row-major order.
pub fn derivation_basis(t: &StructureTensor) -> DerivationBasis {
    let n = t.dim();
    let unknowns = n * n;
    let cell = |r: usize, c: usize| (r - 1) * n + (c - 1);
    let mut rows = Vec::new();
    for l in 1..=n {
        for m in (l + 1)..=n {
            for k in 1..=n {
                let mut row = vec![Rat::zero(); unknowns];
                for j in 1..=n {
                    let a = t.get(l, j, k);
                    if !a.is_zero() {
                        row[cell(m, j)] += a;
                    }
                    let b = t.get(j, m, k);
                    if !b.is_zero() {
                        row[cell(l, j)] += b;
                    }
                    let c = t.get(l, m, j);
                    if !c.is_zero() {
                        row[cell(j, k)] -= c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        RatMatrix::zeros(1, unknowns).null_space()
    } else {
        RatMatrix::from_rows(rows).expect("equal-length rows").null_space()
    };
    let basis = kernel
        .iter()
        .map(|v| RatMatrix::from_fn(n, n, |r, c| v.at(r * n + c, 0).clone()))
        .collect();
    DerivationBasis { basis }
}

/// Rejection report for a non-nilpotent exponential input: the power at
/// which the rank sequence of D^k stops decreasing, and that stable rank.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("matrix is not nilpotent: rank(D^k) stabilizes at {stable_rank} from k = {stable_power}")]
pub struct NotNilpotent {
    /// Smallest k with rank(D^k) = rank(D^(k+1)) > 0.
    pub stable_power: usize,
    /// The stabilized positive rank.
    pub stable_rank: usize,
}

/// Exact exponential Σ_k D^k / k! of a nilpotent matrix.
///
/// # Panics
/// Panics if `d` is not square.
pub fn exp_nilpotent(d: &RatMatrix) -> Result<RatMatrix, NotNilpotent> {
    assert_eq!(d.rows(), d.cols(), "exponential of a non-square matrix");
    let n = d.rows();
    let mut sum = RatMatrix::identity(n);
    let mut power = RatMatrix::identity(n);
    let mut prev_rank = n;
    for k in 1..=(n + 1) {
        power = power.mat_mul(d).expect("square product");
        if power.is_zero() {
            return Ok(sum);
        }
        let r = power.rank();
        if r == prev_rank {
            return Err(NotNilpotent { stable_power: k - 1, stable_rank: r });
        }
        prev_rank = r;
        sum = sum.add(&power.scale(&(rat(1) / factorial(k)))).unwrap();
    }
    unreachable!("rank sequence strictly decreases or stabilizes within n+1 steps");
}

/// Canonical nonzero rref rows of a list of vectors.
fn span_rows(vecs: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let rows: Vec<Vec<Rat>> =
        vecs.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    if rows.is_empty() {
        return Vec::new();
    }
    let m = RatMatrix::from_rows(rows).expect("uniform length");
    let (r, pivots) = m.rref();
    debug_assert!(r.cols() == n);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Lower-central-series nilpotency test of the subspace spanned by `w`:
/// iterate V ← span[w, V] and report whether it reaches zero.
fn lcs_nilpotent(t: &StructureTensor, w: &[Vec<Rat>]) -> bool {
    let n = t.dim();
    let mut cur: Vec<Vec<Rat>> = w.to_vec();
    for _ in 0..8 {
        let mut prods = Vec::new();
        for a in w {
            for b in &cur {
                prods.push(t.bracket(a, b));
            }
        }
        let nxt = span_rows(&prods, n);
        if nxt.is_empty() {
            return true;
        }
        if nxt.len() == cur.len() {
            return false;
        }
        cur = nxt;
    }
    false
}

/// Dimension of the largest nilpotent ideal, found by extending the derived
/// algebra with sign-pattern directions from its complement and testing
/// each candidate by exact lower-central-series descent.
///
/// # Panics
/// Panics if the final candidate fails its nilpotency re-check (cannot
/// happen for a Lie algebra tensor: the span of nilpotent-ideal extensions
/// of the derived algebra is itself a nilpotent ideal).
pub fn nilradical_dim_report(t: &StructureTensor) -> usize {
    let n = t.dim();
    let eye: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(1) } else { Rat::zero() }).collect())
        .collect();
    if lcs_nilpotent(t, &eye) {
        return n;
    }
    let mut pair_brackets = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pair_brackets.push(t.bracket(&eye[i], &eye[j]));
        }
    }
    let derived = span_rows(&pair_brackets, n);
    let pivots: Vec<usize> = if derived.is_empty() {
        Vec::new()
    } else {
        RatMatrix::from_rows(derived.clone()).expect("uniform length").rref().1
    };
    let comp: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut good: Vec<Vec<Rat>> = Vec::new();
    // Sign patterns over the complement coordinates: entries in {0,1,−1},
    // not all zero, first nonzero entry +1 (each line counted once).
    let total = 3usize.pow(comp.len() as u32);
    for code in 0..total {
        let mut digits = Vec::with_capacity(comp.len());
        let mut rest = code;
        for _ in 0..comp.len() {
            digits.push(match rest % 3 {
                0 => 0i64,
                1 => 1,
                _ => -1,
            });
            rest /= 3;
        }
        let first_nonzero = digits.iter().find(|&&d| d != 0);
        if first_nonzero != Some(&1) {
            continue;
        }
        let mut v = vec![Rat::zero(); n];
        for (&c, &d) in comp.iter().zip(&digits) {
            v[c] = rat(d);
        }
        let mut candidate = derived.clone();
        candidate.push(v.clone());
        if lcs_nilpotent(t, &candidate) {
            good.push(v);
        }
    }
    let mut all = derived;
    all.extend(good);
    let w = span_rows(&all, n);
    assert!(lcs_nilpotent(t, &w), "candidate nilradical is not nilpotent");
    w.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::StructureTensor;
    use crate::matrix::in_span;
    use crate::rat::ratio;

    fn h3() -> StructureTensor {
        StructureTensor::from_brackets(3, [(1, 2, 3, rat(1))]).unwrap()
    }

    /// Solvable (not nilpotent) with a five-dimensional nilradical.
    fn sol6() -> StructureTensor {
        StructureTensor::from_brackets(
            6,
            [
                (2, 4, 1, rat(1)),
                (2, 6, 4, rat(1)),
                (3, 5, 1, rat(1)),
                (3, 6, 5, rat(1)),
                (4, 6, 2, rat(1)),
                (5, 6, 3, rat(-1)),
            ],
        )
        .unwrap()
    }

    fn diag6(c: [Rat; 5]) -> StructureTensor {
        StructureTensor::from_brackets(
            6,
            c.into_iter().enumerate().map(|(i, v)| (i + 1, 6, i + 1, v)),
        )
        .unwrap()
    }

    /// Applies a row-convention matrix to a coordinate vector:
    /// (Dx)_k = Σ_i x_i D_i^k.
    fn apply(d: &RatMatrix, x: &[Rat]) -> Vec<Rat> {
        (0..d.cols())
            .map(|k| (0..d.rows()).map(|i| &x[i] * d.at(i, k)).sum())
            .collect()
    }

    #[test]
    fn sym_index_orders_upper_triangle() {
        assert_eq!(sym_index(6, 1, 1), 0);
        assert_eq!(sym_index(6, 1, 6), 5);
        assert_eq!(sym_index(6, 2, 2), 6);
        assert_eq!(sym_index(6, 2, 3), 7);
        assert_eq!(sym_index(6, 6, 6), 20);
    }

    #[test]
    fn abelian_spaces_are_everything() {
        let t = StructureTensor::abelian(6);
        let mb = metric_basis(&t);
        assert_eq!(mb.dim(), 21);
        assert!(mb.has_nondegenerate_combination());
        assert_eq!(derivation_basis(&t).dim(), 36);
    }

    #[test]
    fn heisenberg_metric_space() {
        let mb = metric_basis(&h3());
        assert_eq!(mb.dim(), 3);
        // Free entries g11, g12, g22; the rest forced to zero.
        let e11 = RatMatrix::from_fn(3, 3, |r, c| if (r, c) == (0, 0) { rat(1) } else { rat(0) });
        let e12 = RatMatrix::from_fn(3, 3, |r, c| {
            if (r, c) == (0, 1) || (r, c) == (1, 0) {
                rat(1)
            } else {
                rat(0)
            }
        });
        let e22 = RatMatrix::from_fn(3, 3, |r, c| if (r, c) == (1, 1) { rat(1) } else { rat(0) });
        assert_eq!(mb.basis(), &[e11, e12, e22]);
        // Every combination leaves the third row zero: degenerate space.
        assert!(!mb.has_nondegenerate_combination());
    }

    #[test]
    fn metric_basis_satisfies_invariance_identity() {
        for t in [h3(), sol6(), diag6([rat(1), rat(2), rat(3), rat(4), rat(5)])] {
            let adj = t.adjoint();
            for g in metric_basis(&t).basis() {
                assert!(g.is_symmetric());
                for chi in &adj.chi {
                    let m = chi.mat_mul(g).unwrap();
                    assert!(m.add(&m.transpose()).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn nilpotent_six_dim_metric_family_is_contained() {
        let mb = metric_basis(&sol6());
        assert_eq!(mb.dim(), 2);
        // Family: −g1 at (1,6) and (2,2); +g1 at (3,3),(4,4),(5,5); g2 at
        // (6,6). Check membership at (g1,g2) = (2,5).
        let g1 = rat(2);
        let g2 = rat(5);
        let fam = RatMatrix::from_fn(6, 6, |r, c| match (r + 1, c + 1) {
            (1, 6) | (6, 1) | (2, 2) => -g1.clone(),
            (3, 3) | (4, 4) | (5, 5) => g1.clone(),
            (6, 6) => g2.clone(),
            _ => rat(0),
        });
        assert!(in_span(&fam, mb.basis()).is_some());
        assert!(mb.has_nondegenerate_combination());
    }

    #[test]
    fn killing_form_lies_in_metric_span() {
        for t in [h3(), sol6(), diag6([rat(1), ratio(1, 2), ratio(1, 3), ratio(1, 5), ratio(1, 7)])]
        {
            let mb = metric_basis(&t);
            assert!(in_span(&t.killing_form(), mb.basis()).is_some());
        }
    }

    #[test]
    fn heisenberg_derivations() {
        let db = derivation_basis(&h3());
        assert_eq!(db.dim(), 6);
    }

    #[test]
    fn diagonal_action_derivation_dimension_counts_parameters() {
        // Pairwise-distinct weights 1, 1/2, 1/3, 1/5, 1/7: the derivation
        // algebra has dimension 10.
        let t = diag6([rat(1), ratio(1, 2), ratio(1, 3), ratio(1, 5), ratio(1, 7)]);
        assert_eq!(derivation_basis(&t).dim(), 10);
    }

    #[test]
    fn derivations_satisfy_product_rule() {
        let e: Vec<Vec<Rat>> = (0..6)
            .map(|i| (0..6).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
            .collect();
        for t in [sol6(), diag6([rat(1), rat(2), rat(3), rat(4), rat(5)])] {
            for d in derivation_basis(&t).basis() {
                for i in 0..6 {
                    for j in (i + 1)..6 {
                        let lhs = apply(d, &t.bracket(&e[i], &e[j]));
                        let mut rhs = t.bracket(&apply(d, &e[i]), &e[j]);
                        for (a, b) in rhs.iter_mut().zip(t.bracket(&e[i], &apply(d, &e[j]))) {
                            *a += b;
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(exp_nilpotent(&RatMatrix::zeros(4, 4)).unwrap(), RatMatrix::identity(4));
    }

    #[test]
    fn exp_of_single_cell_is_identity_plus_cell() {
        // Row convention: the map sending the first basis line to the third
        // has the 1 in row 1, column 3.
        let mut d = RatMatrix::zeros(3, 3);
        d.set(0, 2, rat(1));
        let o = exp_nilpotent(&d).unwrap();
        assert_eq!(o, RatMatrix::identity(3).add(&d).unwrap());
    }

    #[test]
    fn exp_of_superdiagonal_has_factorial_reciprocals() {
        let d = RatMatrix::from_fn(6, 6, |r, c| if c == r + 1 { rat(1) } else { rat(0) });
        let o = exp_nilpotent(&d).unwrap();
        for r in 0..6 {
            for c in 0..6 {
                let expected =
                    if c >= r { rat(1) / factorial(c - r) } else { rat(0) };
                assert_eq!(*o.at(r, c), expected, "entry ({r},{c})");
            }
        }
    }

    #[test]
    fn non_nilpotent_is_rejected_with_stable_rank() {
        let d = RatMatrix::from_fn(3, 3, |r, c| if r == 0 && c == 0 { rat(1) } else { rat(0) });
        assert_eq!(
            exp_nilpotent(&d).unwrap_err(),
            NotNilpotent { stable_power: 1, stable_rank: 1 }
        );
        // For an invertible matrix the rank never drops below full, so the
        // sequence is already stable at the zeroth power.
        assert_eq!(
            exp_nilpotent(&RatMatrix::identity(2)).unwrap_err(),
            NotNilpotent { stable_power: 0, stable_rank: 2 }
        );
    }

    #[test]
    fn nilradical_dimensions() {
        assert_eq!(nilradical_dim_report(&StructureTensor::abelian(6)), 6);
        assert_eq!(nilradical_dim_report(&h3()), 3);
        // Solvable with five-dimensional nilradical: the derived algebra
        // span(e1..e5) is the largest nilpotent ideal.
        assert_eq!(nilradical_dim_report(&sol6()), 5);
        // Diagonal action with distinct nonzero weights: the nilradical is
        // the five-dimensional abelian ideal.
        let t = diag6([rat(1), ratio(1, 2), ratio(1, 3), ratio(1, 5), ratio(1, 7)]);
        assert_eq!(nilradical_dim_report(&t), 5);
    }
}
