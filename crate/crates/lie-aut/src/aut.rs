//! Verification of automorphism families and metric invariance at exact
//! rational parameter instances, plus the deterministic admissible-sample
//! generator used by the command-line tools.
//!
//! An n×n matrix O acts on the basis by O X_l = O_l^j X_j (rows index the
//! source basis line). O is an automorphism when
//! O_l^i O_m^j f_ij^k = f_lm^n O_n^k for all l, m, k; a symmetric form g is
//! invariant when O g Oᵀ = g (the matrix form of g_ij = O_i^k O_j^l g_kl).

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{
    Constraint, EnvError, Expr, ExprMatrix, MatrixEvalError, MatrixParseError, ParamEnv,
};
use crate::lie::StructureTensor;
use crate::matrix::RatMatrix;
use crate::rat::{rat, ratio, Rat};

/// One nonzero structure-constant residual, 1-based, with l < m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    /// First transformed lower index.
    pub l: usize,
    /// Second transformed lower index.
    pub m: usize,
    /// Output component.
    pub k: usize,
    /// O_l^i O_m^j f_ij^k − f_lm^n O_n^k, exactly.
    pub value: Rat,
}

/// Outcome of a structure-constant preservation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    /// All nonzero residuals in lexicographic (l,m,k) order.
    pub residuals: Vec<Residual>,
}

impl VerificationReport {
    /// True when no residual was found.
    pub fn is_pass(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Antisymmetric coefficient slices F_k with (F_k)_ij = f_ij^k.
fn coefficient_slices(t: &StructureTensor) -> Vec<RatMatrix> {
    t.adjoint().y.iter().map(|y| y.scale(&rat(-1))).collect()
}

/// Checks O_l^i O_m^j f_ij^k = f_lm^n O_n^k for all l < m and k.
///
/// # Panics
/// Panics if `o` is not dim×dim.
pub fn verify_automorphism(t: &StructureTensor, o: &RatMatrix) -> VerificationReport {
    let n = t.dim();
    assert_eq!((o.rows(), o.cols()), (n, n), "matrix shape must match the algebra");
    let slices = coefficient_slices(t);
    let ot = o.transpose();
    let mut residuals = Vec::new();
    for k in 1..=n {
        // (O F_k Oᵀ)_{lm} = O_l^i O_m^j f_ij^k; Σ_n O_n^k F_n gives the
        // right side f_lm^n O_n^k entrywise.
        let mut rhs = RatMatrix::zeros(n, n);
        for (idx, slice) in slices.iter().enumerate() {
            let c = o.at(idx, k - 1);
            if !c.is_zero() {
                rhs = rhs.add(&slice.scale(c)).unwrap();
            }
        }
        let lhs = o.mat_mul(&slices[k - 1]).unwrap().mat_mul(&ot).unwrap();
        let diff = lhs.sub(&rhs).unwrap();
        for l in 1..=n {
            for m in (l + 1)..=n {
                let value = diff.at(l - 1, m - 1);
                if !value.is_zero() {
                    residuals.push(Residual { l, m, k, value: value.clone() });
                }
            }
        }
    }
    residuals.sort_by_key(|r| (r.l, r.m, r.k));
    VerificationReport { residuals }
}

/// The same check contracted through the adjoint matrices: for each l,
/// Σ_i O_l^i (O χ_i) must equal χ_l O. Violations are normalized to the
/// same (l,m,k, residual) tuples as [`verify_automorphism`]; the two
/// reports agree exactly on every input.
///
/// # Panics
/// Panics if `o` is not dim×dim.
pub fn verify_automorphism_adjoint(t: &StructureTensor, o: &RatMatrix) -> VerificationReport {
    let n = t.dim();
    assert_eq!((o.rows(), o.cols()), (n, n), "matrix shape must match the algebra");
    let adj = t.adjoint();
    let ochi: Vec<RatMatrix> = adj.chi.iter().map(|chi| o.mat_mul(chi).unwrap()).collect();
    let mut residuals = Vec::new();
    for l in 1..=n {
        let mut lhs = RatMatrix::zeros(n, n);
        for (i, oc) in ochi.iter().enumerate() {
            let c = o.at(l - 1, i);
            if !c.is_zero() {
                lhs = lhs.add(&oc.scale(c)).unwrap();
            }
        }
        let diff = lhs.sub(&adj.chi[l - 1].mat_mul(o).unwrap()).unwrap();
        // diff (row m, col k) equals −(O_l^i O_m^j f_ij^k − f_lm^n O_n^k);
        // rows with m ≤ l duplicate the antisymmetric partner or vanish.
        for m in (l + 1)..=n {
            for k in 1..=n {
                let value = diff.at(m - 1, k - 1);
                if !value.is_zero() {
                    residuals.push(Residual { l, m, k, value: -value.clone() });
                }
            }
        }
    }
    residuals.sort_by_key(|r| (r.l, r.m, r.k));
    VerificationReport { residuals }
}

/// Outcome of a metric invariance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricInvarianceReport {
    /// O g Oᵀ − g, exactly.
    pub residual: RatMatrix,
}

impl MetricInvarianceReport {
    /// True when the form is fixed exactly.
    pub fn is_pass(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Checks O g Oᵀ = g exactly.
///
/// # Panics
/// Panics if shapes disagree.
pub fn verify_metric_invariance(g: &RatMatrix, o: &RatMatrix) -> MetricInvarianceReport {
    let congruence = o.mat_mul(g).unwrap().mat_mul(&o.transpose()).unwrap();
    MetricInvarianceReport { residual: congruence.sub(g).unwrap() }
}

/// Error in family construction or instance evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    /// A matrix cell failed to parse.
    #[error(transparent)]
    Parse(#[from] MatrixParseError),
    /// The environment violates a family constraint.
    #[error(transparent)]
    Env(#[from] EnvError),
    /// A matrix cell failed to evaluate at the environment.
    #[error(transparent)]
    Eval(#[from] MatrixEvalError),
}

/// A parameterized family of candidate automorphisms: a matrix of
/// expressions, its parameter names, admissibility constraints, and the
/// shipped sample environments (the identity instance first).
#[derive(Clone, Debug)]
pub struct AutFamily {
    matrix: ExprMatrix,
    params: Vec<String>,
    constraints: Vec<Constraint>,
    sample_envs: Vec<ParamEnv>,
}

impl AutFamily {
    /// Builds a family; every sample environment is validated against the
    /// constraints at construction.
    pub fn new(
        matrix: ExprMatrix,
        params: Vec<String>,
        constraints: Vec<Constraint>,
        samples: Vec<BTreeMap<String, Rat>>,
    ) -> Result<Self, FamilyError> {
        let sample_envs = samples
            .into_iter()
            .map(|bindings| ParamEnv::new(bindings, constraints.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AutFamily { matrix, params, constraints, sample_envs })
    }

    /// The expression matrix.
    pub fn matrix(&self) -> &ExprMatrix {
        &self.matrix
    }

    /// Parameter names in catalog order.
    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// The admissibility constraints.
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Shipped sample environments; index 0 is the identity instance.
    pub fn sample_envs(&self) -> &[ParamEnv] {
        &self.sample_envs
    }

    /// Evaluates the family matrix at an environment after checking the
    /// constraints against it.
    pub fn instantiate(&self, env: &ParamEnv) -> Result<RatMatrix, FamilyError> {
        let checked = ParamEnv::new(env.bindings().clone(), self.constraints.clone())?;
        Ok(self.matrix.eval(&checked)?)
    }
}

/// Verification result for one family instance.
#[derive(Clone, Debug)]
pub struct FamilyInstanceReport {
    /// The environment the instance was evaluated at.
    pub env: ParamEnv,
    /// The evaluated matrix.
    pub matrix: RatMatrix,
    /// Structure-constant residuals.
    pub report: VerificationReport,
    /// Whether the instance is exactly invertible.
    pub invertible: bool,
}

impl FamilyInstanceReport {
    /// Passes only when the structure constants are preserved and the
    /// matrix is invertible.
    pub fn is_pass(&self) -> bool {
        self.report.is_pass() && self.invertible
    }
}

/// Evaluates and verifies one instance of a family against a tensor.
pub fn verify_family_instance(
    t: &StructureTensor,
    fam: &AutFamily,
    env: &ParamEnv,
) -> Result<FamilyInstanceReport, FamilyError> {
    let matrix = fam.instantiate(env)?;
    let report = verify_automorphism(t, &matrix);
    let invertible = matrix.inverse().is_some();
    Ok(FamilyInstanceReport { env: env.clone(), matrix, report, invertible })
}

/// Verifies a family at several environments against one fixed tensor
/// (use the per-instance form when the structure constants themselves
/// depend on the environment).
pub fn verify_family(
    t: &StructureTensor,
    fam: &AutFamily,
    envs: &[ParamEnv],
) -> Result<Vec<FamilyInstanceReport>, FamilyError> {
    envs.iter().map(|env| verify_family_instance(t, fam, env)).collect()
}

/// A square-root parameter relation `target² = Σ plus² − Σ minus² + c`,
/// recognized from an equation constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootRelation {
    /// The solved parameter (left side).
    pub target: String,
    /// Names squared with positive sign on the right side.
    pub plus: Vec<String>,
    /// Names squared with negative sign.
    pub minus: Vec<String>,
    /// Constant term.
    pub constant: Rat,
}

/// Flattens a ±-tree into signed leaves.
fn signed_leaves<'e>(e: &'e Expr, negate: bool, out: &mut Vec<(bool, &'e Expr)>) {
    match e {
        Expr::Add(l, r) => {
            signed_leaves(l, negate, out);
            signed_leaves(r, negate, out);
        }
        Expr::Sub(l, r) => {
            signed_leaves(l, negate, out);
            signed_leaves(r, !negate, out);
        }
        Expr::Neg(x) => signed_leaves(x, !negate, out),
        other => out.push((negate, other)),
    }
}

/// Recognizes `x^2 = Σ ±name² ± integer` equations.
pub fn detect_root_relation(c: &Constraint) -> Option<RootRelation> {
    let Constraint::Equation { lhs, rhs, .. } = c else {
        return None;
    };
    let Expr::Pow(base, 2) = lhs else {
        return None;
    };
    let Expr::Ident(target) = base.as_ref() else {
        return None;
    };
    let mut leaves = Vec::new();
    signed_leaves(rhs, false, &mut leaves);
    let mut relation = RootRelation {
        target: target.clone(),
        plus: Vec::new(),
        minus: Vec::new(),
        constant: Rat::zero(),
    };
    for (negated, leaf) in leaves {
        match leaf {
            Expr::Pow(b, 2) => {
                let Expr::Ident(name) = b.as_ref() else {
                    return None;
                };
                if negated {
                    relation.minus.push(name.clone());
                } else {
                    relation.plus.push(name.clone());
                }
            }
            Expr::Rational(v) => {
                if negated {
                    relation.constant -= v;
                } else {
                    relation.constant += v;
                }
            }
            _ => return None,
        }
    }
    if relation.plus.is_empty() && relation.minus.is_empty() {
        // A bare `x² = constant` (e.g. a sign pin) is not a root relation.
        return None;
    }
    Some(relation)
}

/// Deterministic generator of admissible rational environments.
///
/// Parameters are drawn as p/q with p ∈ [−9,9]∖{0} and q ∈ [1,9]. Square
/// relations are solved exactly (rational parametrization), `x² = 1`
/// equations pin a sign, `x·y = 0` equations zero one factor, and the
/// candidate is accepted only if every checkable constraint holds.
#[derive(Clone, Debug)]
pub struct EnvSampler {
    rng: ChaCha8Rng,
}

impl EnvSampler {
    /// Seeded sampler; equal seeds give equal draw sequences.
    pub fn new(seed: u64) -> Self {
        EnvSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// One nonzero small rational.
    pub fn rand_rat(&mut self) -> Rat {
        let mut p = 0i64;
        while p == 0 {
            p = self.rng.gen_range(-9..=9);
        }
        let q = self.rng.gen_range(1..=9);
        ratio(p, q)
    }

    /// Draws an environment over `params` satisfying `constraints`, or
    /// None after `max_tries` rejections.
    pub fn draw(
        &mut self,
        params: &[String],
        constraints: &[Constraint],
        max_tries: usize,
    ) -> Option<ParamEnv> {
        let root = constraints.iter().find_map(detect_root_relation);
        'tries: for _ in 0..max_tries {
            let mut env: BTreeMap<String, Rat> = BTreeMap::new();
            let mut derived: Vec<String> = Vec::new();
            if let Some(ro) = &root {
                if let Some(x) = ro.plus.first() {
                    // target² − x² = Σ rest² − Σ minus² + c =: K, solved by
                    // target = (u + K/u)/2, x = (K/u − u)/2 for any u ≠ 0.
                    for v in &ro.plus[1..] {
                        env.entry(v.clone()).or_insert_with(|| self.rand_rat());
                    }
                    for v in &ro.minus {
                        env.entry(v.clone()).or_insert_with(|| self.rand_rat());
                    }
                    let mut k = ro.constant.clone();
                    for v in &ro.plus[1..] {
                        k += env[v].clone() * &env[v];
                    }
                    for v in &ro.minus {
                        k -= env[v].clone() * &env[v];
                    }
                    let u = self.rand_rat();
                    let k_over_u = k / &u;
                    env.insert(ro.target.clone(), (&u + &k_over_u) / rat(2));
                    env.insert(x.clone(), (k_over_u - u) / rat(2));
                } else if ro.constant.is_one() && ro.minus.len() == 1 {
                    // target² + x² = 1: rational points of the unit circle.
                    let x = ro.minus[0].clone();
                    let t = self.rand_rat();
                    let t2 = &t * &t;
                    let denom = rat(1) + &t2;
                    env.insert(ro.target.clone(), (rat(1) - t2) / &denom);
                    env.insert(x, (rat(2) * t) / denom);
                } else {
                    // No rational parametrization encoded for this shape.
                    return None;
                }
                derived.push(ro.target.clone());
                derived.extend(ro.plus.iter().cloned());
                derived.extend(ro.minus.iter().cloned());
            }
            for c in constraints {
                if let Constraint::Equation { lhs, rhs, .. } = c {
                    if let (Expr::Pow(b, 2), Expr::Rational(one)) = (lhs, rhs) {
                        if one.is_one() {
                            if let Expr::Ident(name) = b.as_ref() {
                                if !derived.contains(name) {
                                    let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
                                    env.insert(name.clone(), rat(sign));
                                }
                            }
                        }
                    }
                    if let (Expr::Mul(a, b), Expr::Rational(zero)) = (lhs, rhs) {
                        if zero.is_zero() {
                            if let (Expr::Ident(na), Expr::Ident(nb)) = (a.as_ref(), b.as_ref()) {
                                let pick = if self.rng.gen_bool(0.5) { na } else { nb };
                                env.insert(pick.clone(), Rat::zero());
                            }
                        }
                    }
                }
            }
            for p in params {
                if !env.contains_key(p) {
                    env.insert(p.clone(), self.rand_rat());
                }
            }
            match ParamEnv::new(env, constraints.to_vec()) {
                Ok(good) => return Some(good),
                Err(_) => continue 'tries,
            }
        }
        None
    }
}
