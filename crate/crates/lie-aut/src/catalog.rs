//! The embedded algebra catalog: schema records, a validated runtime
//! representation, name lookup with near-match suggestions, seeded
//! admissible-instance sampling, and a whole-catalog validation report.
//!
//! The catalog file is UTF-8 JSON with top level `{"version": 1,
//! "entries": [...]}`. Every numeric value is an exact rational string
//! (`"p/q"` or `"p"`), and every formula is an expression string in the
//! grammar of [`crate::expr`]. The canonical serialization produced by
//! [`Catalog::canonical_json`] round-trips the shipped file byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{verify_family_instance, AutFamily, EnvSampler, FamilyError};
use crate::expr::{
    eval_expr, parse_constraint, parse_expr, Constraint, EnvError, EvalError, Expr, ExprMatrix,
    ParamEnv, ParseError,
};
use crate::lie::StructureTensor;
use crate::matrix::{in_span, RatMatrix};
use crate::rat::{format_rat, parse_rat, Rat, RatParseError};
use crate::solvers::{derivation_basis, metric_basis, nilradical_dim_report};

/// Expected schema version of the catalog file.
pub const SCHEMA_VERSION: u32 = 1;

const EMBEDDED_JSON: &str = include_str!("../data/catalog.json");

// ---------------------------------------------------------------------------
// On-disk schema records (field order matches the canonical JSON layout).
// ---------------------------------------------------------------------------

/// Top-level catalog file: schema version plus entry records in table order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    /// Schema version; this crate reads [`SCHEMA_VERSION`].
    pub version: u32,
    /// Entry records in printed-table order.
    pub entries: Vec<EntryRecord>,
}

/// One catalog entry as stored on disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRecord {
    /// Unique entry name, e.g. `g_6_91` or `N_6_22_eps1`.
    pub name: String,
    /// Table label: `table1`, `table2`, or `table3`.
    pub family: String,
    /// Dimension of the algebra (6 throughout the shipped catalog).
    pub dim: usize,
    /// Structure parameters with constraints and shipped sample values.
    pub params: Vec<ParamRecord>,
    /// Nonzero bracket coefficients, stored with `i < j` only.
    pub brackets: Vec<BracketRecord>,
    /// Automorphism family, or `null` when none is encoded.
    pub automorphism: Option<AutRecord>,
    /// Invariant-metric families, or `null` when the entry carries none.
    pub metrics: Option<Vec<MetricRecord>>,
    /// Data-correction and anomaly annotations.
    pub notes: Vec<String>,
}

/// A named structure parameter with its constraints and samples.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamRecord {
    /// Parameter name.
    pub name: String,
    /// Constraint strings (e.g. `gamma != 0`).
    pub constraints: Vec<String>,
    /// Shipped sample assignments. Samples bind every parameter of the
    /// entry jointly and are attached to the first parameter record.
    pub samples: Vec<SampleRecord>,
}

/// One shipped sample assignment.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    /// Parameter values as exact rational strings.
    pub bindings: BTreeMap<String, String>,
    /// Auxiliary witness values (e.g. a square-root witness `r`); always
    /// consistent with `bindings` where the keys overlap.
    pub witnesses: BTreeMap<String, String>,
}

/// One nonzero structure constant `f_ij^k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketRecord {
    /// First lower index (1-based); must be smaller than `j`.
    pub i: usize,
    /// Second lower index (1-based).
    pub j: usize,
    /// Upper index (1-based).
    pub k: usize,
    /// Coefficient expression in the structure parameters.
    pub coeff: String,
}

/// A stored automorphism family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutRecord {
    /// 6×6 matrix of expression strings.
    pub matrix: Vec<Vec<String>>,
    /// Declared parameter names (family parameters, any structure
    /// parameters the matrix references, and the root witness `r`).
    pub params: Vec<String>,
    /// Admissibility constraint strings.
    pub constraints: Vec<String>,
    /// Shipped sample assignments; every sample satisfies the constraints.
    pub samples: Vec<SampleRecord>,
}

/// A stored invariant-metric family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricRecord {
    /// Upper-triangle entries keyed `"(i,j)"` with `i ≤ j`, as expression
    /// strings in the metric parameters (and possibly structure parameters).
    pub upper: BTreeMap<String, String>,
    /// Metric parameter names (`g1`, `g2`, …).
    pub gparams: Vec<String>,
    /// Conditions on structure parameters under which the family applies
    /// (e.g. `alpha = 0`).
    pub conditions: Vec<String>,
}

// ---------------------------------------------------------------------------
// Table labels.
// ---------------------------------------------------------------------------

/// Which of the three printed tables an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Solvable algebras with five-dimensional nilradical.
    Table1,
    /// Solvable algebras with four-dimensional nilradical.
    Table2,
    /// Nilpotent algebras.
    Table3,
}

impl Family {
    /// Parses a table label string.
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "table1" => Some(Family::Table1),
            "table2" => Some(Family::Table2),
            "table3" => Some(Family::Table3),
            _ => None,
        }
    }

    /// The label string used in the catalog file.
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Table1 => "table1",
            Family::Table2 => "table2",
            Family::Table3 => "table3",
        }
    }

    /// Expected nilradical dimension for members of this table.
    pub fn nilradical_label(self) -> usize {
        match self {
            Family::Table1 => 5,
            Family::Table2 => 4,
            Family::Table3 => 6,
        }
    }

    /// All table labels in catalog order.
    pub fn all() -> [Family; 3] {
        [Family::Table1, Family::Table2, Family::Table3]
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

// ---------------------------------------------------------------------------
// Errors.
// ---------------------------------------------------------------------------

/// Errors raised while loading or validating the catalog file.
#[derive(Debug, Error)]
pub enum CatalogError {
    /// The file is not valid JSON for the schema.
    #[error("catalog JSON: {0}")]
    Json(#[from] serde_json::Error),
    /// The file could not be read.
    #[error("reading catalog file `{path}`: {source}")]
    Io {
        /// Path that failed to read.
        path: String,
        /// Underlying I/O error.
        source: std::io::Error,
    },
    /// The schema version is not supported.
    #[error("unsupported catalog version {found} (expected {SCHEMA_VERSION})")]
    Version {
        /// Version found in the file.
        found: u32,
    },
    /// Two entries share a name.
    #[error("duplicate entry name `{0}`")]
    DuplicateName(String),
    /// An entry declares an unknown table label.
    #[error("entry `{entry}`: unknown family label `{family}`")]
    BadFamily {
        /// Entry name.
        entry: String,
        /// Offending label.
        family: String,
    },
    /// A bracket record is stored with `i ≥ j`.
    #[error("entry `{entry}`: bracket ({i},{j},{k}) stored with i >= j")]
    BracketOrder {
        /// Entry name.
        entry: String,
        /// First lower index.
        i: usize,
        /// Second lower index.
        j: usize,
        /// Upper index.
        k: usize,
    },
    /// A bracket index lies outside `1..=dim`.
    #[error("entry `{entry}`: bracket ({i},{j},{k}) index out of range for dimension {dim}")]
    BracketIndex {
        /// Entry name.
        entry: String,
        /// First lower index.
        i: usize,
        /// Second lower index.
        j: usize,
        /// Upper index.
        k: usize,
        /// Entry dimension.
        dim: usize,
    },
    /// The same bracket slot appears twice.
    #[error("entry `{entry}`: duplicate bracket slot ({i},{j},{k})")]
    BracketDuplicate {
        /// Entry name.
        entry: String,
        /// First lower index.
        i: usize,
        /// Second lower index.
        j: usize,
        /// Upper index.
        k: usize,
    },
    /// An expression or constraint string failed to parse.
    #[error("entry `{entry}`, {field}: {source}")]
    Parse {
        /// Entry name.
        entry: String,
        /// Which field failed.
        field: String,
        /// Parser error with byte offset.
        source: ParseError,
    },
    /// A rational string failed to parse.
    #[error("entry `{entry}`, {field}: {source}")]
    BadRational {
        /// Entry name.
        entry: String,
        /// Which field failed.
        field: String,
        /// Underlying error.
        source: RatParseError,
    },
    /// A parametrized entry ships no sample environment.
    #[error("entry `{entry}`: parametrized entry has no sample environments")]
    NoSamples {
        /// Entry name.
        entry: String,
    },
    /// A shipped sample violates the entry constraints.
    #[error("entry `{entry}`: sample {index}: {source}")]
    BadSample {
        /// Entry name.
        entry: String,
        /// Sample index.
        index: usize,
        /// Constraint violation.
        source: EnvError,
    },
    /// The automorphism matrix is not 6×6 (or otherwise malformed).
    #[error("entry `{entry}`: automorphism matrix must be {dim}x{dim}")]
    MatrixShape {
        /// Entry name.
        entry: String,
        /// Entry dimension.
        dim: usize,
    },
    /// The automorphism family failed to build (parse, constraint, or
    /// sample validation error).
    #[error("entry `{entry}`: automorphism family: {source}")]
    Automorphism {
        /// Entry name.
        entry: String,
        /// Underlying family error.
        source: FamilyError,
    },
    /// A metric upper-triangle key is not of the form `(i,j)` with
    /// `1 ≤ i ≤ j ≤ dim`.
    #[error("entry `{entry}`, metric {index}: bad upper-triangle key `{key}`")]
    MetricKey {
        /// Entry name.
        entry: String,
        /// Metric index within the entry.
        index: usize,
        /// Offending key.
        key: String,
    },
}

/// Lookup failure carrying near-match suggestions.
#[derive(Clone, Debug)]
pub struct LookupError {
    /// The name that was requested.
    pub name: String,
    /// Closest catalog names, best match first.
    pub suggestions: Vec<String>,
}

impl fmt::Display for LookupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown catalog entry `{}`", self.name)?;
        if !self.suggestions.is_empty() {
            write!(f, "; closest matches: {}", self.suggestions.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for LookupError {}

/// Failure to evaluate the structure constants at an environment.
#[derive(Debug, Error)]
pub enum TensorEvalError {
    /// A bracket coefficient failed to evaluate.
    #[error("bracket ({i},{j},{k}) coefficient: {source}")]
    Coeff {
        /// First lower index.
        i: usize,
        /// Second lower index.
        j: usize,
        /// Upper index.
        k: usize,
        /// Underlying evaluation error.
        source: EvalError,
    },
}

/// Failure to sample admissible automorphism instances.
#[derive(Debug, Error)]
pub enum SampleError {
    /// The entry carries no automorphism family.
    #[error("entry has no automorphism family")]
    NoFamily,
    /// The sampler exhausted its rejection budget.
    #[error("no admissible instance found after {tries} attempts")]
    Exhausted {
        /// Number of draw attempts made.
        tries: usize,
    },
}

// ---------------------------------------------------------------------------
// Runtime types.
// ---------------------------------------------------------------------------

/// A structure parameter with parsed constraints.
#[derive(Clone, Debug)]
pub struct ParamSpec {
    /// Parameter name.
    pub name: String,
    /// Parsed admissibility constraints.
    pub constraints: Vec<Constraint>,
}

/// An automorphism family together with its declared continuous-parameter
/// count (declared parameters minus structure parameters and the root
/// witness `r`).
#[derive(Clone, Debug)]
pub struct EncodedFamily {
    family: AutFamily,
    continuous_param_count: usize,
}

impl EncodedFamily {
    /// The underlying verifiable family.
    pub fn family(&self) -> &AutFamily {
        &self.family
    }

    /// Number of free continuous parameters of the family.
    pub fn continuous_param_count(&self) -> usize {
        self.continuous_param_count
    }
}

/// A symmetric invariant-metric family in parameters `g1, g2, …`.
#[derive(Clone, Debug)]
pub struct MetricFamilySpec {
    upper: Vec<((usize, usize), Expr)>,
    gparams: Vec<String>,
    conditions: Vec<Constraint>,
}

impl MetricFamilySpec {
    /// Upper-triangle entries `((i, j), expression)` with `i ≤ j`, 1-based.
    pub fn upper(&self) -> &[((usize, usize), Expr)] {
        &self.upper
    }

    /// Metric parameter names.
    pub fn gparams(&self) -> &[String] {
        &self.gparams
    }

    /// Conditions on the structure parameters under which the family
    /// applies.
    pub fn conditions(&self) -> &[Constraint] {
        &self.conditions
    }

    /// Parameter pins induced by equality conditions such as `alpha = 0`:
    /// pairs `(name, value)` for conditions whose left side is a bare
    /// identifier and whose right side is closed.
    pub fn condition_overrides(&self) -> Vec<(String, Rat)> {
        let empty = ParamEnv::empty();
        let mut out = Vec::new();
        for c in &self.conditions {
            if let Constraint::Equation { lhs: Expr::Ident(name), rhs, .. } = c {
                if let Ok(value) = eval_expr(rhs, &empty) {
                    out.push((name.clone(), value));
                }
            }
        }
        out
    }

    /// Evaluates the symmetric matrix at an environment binding both the
    /// structure parameters it references and the metric parameters.
    pub fn evaluate(&self, dim: usize, env: &ParamEnv) -> Result<RatMatrix, EvalError> {
        let mut m = RatMatrix::zeros(dim, dim);
        for ((i, j), expr) in &self.upper {
            let v = eval_expr(expr, env)?;
            m.set(i - 1, j - 1, v.clone());
            m.set(j - 1, i - 1, v);
        }
        Ok(m)
    }

    /// One matrix per metric parameter: that parameter set to 1 and the
    /// others to 0, evaluated on top of `base_env`.
    pub fn unit_instances(
        &self,
        dim: usize,
        base_env: &ParamEnv,
    ) -> Result<Vec<(String, RatMatrix)>, EvalError> {
        let mut out = Vec::with_capacity(self.gparams.len());
        for unit in &self.gparams {
            let mut bindings = base_env.bindings().clone();
            for g in &self.gparams {
                let value = if g == unit { Rat::from_integer(1.into()) } else { Rat::default() };
                bindings.insert(g.clone(), value);
            }
            let env = ParamEnv::from_pairs(bindings);
            out.push((unit.clone(), self.evaluate(dim, &env)?));
        }
        Ok(out)
    }
}

/// A fully parsed catalog entry.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    name: String,
    family: Family,
    dim: usize,
    params: Vec<ParamSpec>,
    brackets: Vec<(usize, usize, usize, Expr)>,
    sample_envs: Vec<ParamEnv>,
    automorphism: Option<EncodedFamily>,
    metrics: Vec<MetricFamilySpec>,
    notes: Vec<String>,
}

impl CatalogEntry {
    /// Entry name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Printed-row name with variant suffixes stripped.
    pub fn base_name(&self) -> String {
        base_name(&self.name)
    }

    /// Table label.
    pub fn family(&self) -> Family {
        self.family
    }

    /// Algebra dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Structure parameters with parsed constraints.
    pub fn params(&self) -> &[ParamSpec] {
        &self.params
    }

    /// Bracket records `(i, j, k, coefficient)`, 1-based with `i < j`.
    pub fn brackets(&self) -> &[(usize, usize, usize, Expr)] {
        &self.brackets
    }

    /// Shipped sample environments (one empty environment for
    /// parameter-free entries).
    pub fn sample_envs(&self) -> &[ParamEnv] {
        &self.sample_envs
    }

    /// The encoded automorphism family, when present.
    pub fn automorphism(&self) -> Option<&EncodedFamily> {
        self.automorphism.as_ref()
    }

    /// Invariant-metric families carried by the entry.
    pub fn metrics(&self) -> &[MetricFamilySpec] {
        &self.metrics
    }

    /// Annotation notes.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Evaluates the structure constants at an environment.
    pub fn tensor_at(&self, env: &ParamEnv) -> Result<StructureTensor, TensorEvalError> {
        let mut tuples = Vec::with_capacity(self.brackets.len());
        for (i, j, k, coeff) in &self.brackets {
            let value = eval_expr(coeff, env)
                .map_err(|source| TensorEvalError::Coeff { i: *i, j: *j, k: *k, source })?;
            tuples.push((*i, *j, *k, value));
        }
        Ok(StructureTensor::from_brackets(self.dim, tuples)
            .expect("bracket indices validated at load"))
    }

    /// The environment a metric family is checked at: the chosen sample
    /// with the metric's equality conditions overriding the pinned
    /// parameters. Constraints are dropped because the pinned point may
    /// lie outside the generic stratum the entry samples.
    ///
    /// Panics when `sample` is out of range.
    pub fn metric_point_env(&self, metric: &MetricFamilySpec, sample: usize) -> ParamEnv {
        let mut bindings = self.sample_envs[sample].bindings().clone();
        for (name, value) in metric.condition_overrides() {
            bindings.insert(name, value);
        }
        ParamEnv::from_pairs(bindings)
    }

    /// Draws `count` admissible automorphism instances: seeded environments
    /// satisfying the family and parameter constraints at which the
    /// structure constants evaluate cleanly and the family matrix evaluates
    /// to an invertible map. Equal seeds give equal environments.
    pub fn sample_instance_envs(
        &self,
        count: usize,
        seed: u64,
    ) -> Result<Vec<ParamEnv>, SampleError> {
        let enc = self.automorphism.as_ref().ok_or(SampleError::NoFamily)?;
        let fam = enc.family();
        let mut names: Vec<String> = fam.params().to_vec();
        for p in &self.params {
            if !names.contains(&p.name) {
                names.push(p.name.clone());
            }
        }
        let mut constraints = fam.constraints().to_vec();
        for p in &self.params {
            constraints.extend(p.constraints.iter().cloned());
        }
        let mut sampler = EnvSampler::new(seed ^ fnv1a64(&self.name));
        let budget = 60 * count.max(1) + 400;
        let mut tries = 0usize;
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            tries += 1;
            if tries > budget {
                return Err(SampleError::Exhausted { tries: tries - 1 });
            }
            let Some(env) = sampler.draw(&names, &constraints, 64) else {
                continue;
            };
            // A draw can still make an expression denominator vanish;
            // reject and redraw.
            if self.tensor_at(&env).is_err() {
                continue;
            }
            // The family parametrizes invertible maps; the printed
            // constraints are necessary but need not exclude every point
            // where the determinant vanishes, so a singular draw falls
            // outside the family and is redrawn.
            match fam.instantiate(&env) {
                Ok(m) if m.det() != crate::rat::rat(0) => {}
                _ => continue,
            }
            out.push(env);
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Catalog.
// ---------------------------------------------------------------------------

/// The loaded catalog: schema records plus parsed entries, immutable after
/// load and safe to share across threads.
#[derive(Clone, Debug)]
pub struct Catalog {
    file: CatalogFile,
    entries: Vec<CatalogEntry>,
    index: BTreeMap<String, usize>,
}

impl Catalog {
    /// Parses a catalog from JSON text.
    pub fn from_json(json: &str) -> Result<Catalog, CatalogError> {
        let file: CatalogFile = serde_json::from_str(json)?;
        if file.version != SCHEMA_VERSION {
            return Err(CatalogError::Version { found: file.version });
        }
        let mut entries = Vec::with_capacity(file.entries.len());
        let mut index = BTreeMap::new();
        for (pos, record) in file.entries.iter().enumerate() {
            let entry = build_entry(record)?;
            if index.insert(entry.name.clone(), pos).is_some() {
                return Err(CatalogError::DuplicateName(entry.name));
            }
            entries.push(entry);
        }
        Ok(Catalog { file, entries, index })
    }

    /// Reads and parses a catalog file from disk.
    pub fn from_file(path: &Path) -> Result<Catalog, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Catalog::from_json(&text)
    }

    /// Loads the catalog compiled into the crate.
    pub fn embedded() -> Result<Catalog, CatalogError> {
        Catalog::from_json(EMBEDDED_JSON)
    }

    /// Loads the catalog named by the `LIE_AUT_CATALOG` environment
    /// variable, falling back to the embedded catalog.
    pub fn load_default() -> Result<Catalog, CatalogError> {
        match std::env::var_os("LIE_AUT_CATALOG") {
            Some(path) => Catalog::from_file(Path::new(&path)),
            None => Catalog::embedded(),
        }
    }

    /// Schema version of the loaded file.
    pub fn version(&self) -> u32 {
        self.file.version
    }

    /// The raw schema records, in file order.
    pub fn records(&self) -> &[EntryRecord] {
        &self.file.entries
    }

    /// Parsed entries, in file order.
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    /// Looks an entry up by exact name; unknown names report the closest
    /// catalog names as suggestions.
    pub fn get_entry(&self, name: &str) -> Result<&CatalogEntry, LookupError> {
        match self.index.get(name) {
            Some(&pos) => Ok(&self.entries[pos]),
            None => Err(LookupError { name: name.to_string(), suggestions: self.suggest(name) }),
        }
    }

    fn suggest(&self, name: &str) -> Vec<String> {
        let lowered = name.to_lowercase();
        let mut scored: Vec<(usize, usize, &str)> = self
            .entries
            .iter()
            .enumerate()
            .map(|(pos, e)| {
                let contained = e.name.to_lowercase().contains(&lowered)
                    || lowered.contains(&e.name.to_lowercase());
                let dist = if contained { 1 } else { levenshtein(&e.name, name) };
                (dist, pos, e.name.as_str())
            })
            .collect();
        scored.sort();
        scored
            .into_iter()
            .take_while(|(dist, _, _)| *dist <= 3)
            .take(3)
            .map(|(_, _, n)| n.to_string())
            .collect()
    }

    /// Canonical serialization: pretty-printed JSON with a trailing
    /// newline, byte-identical to the shipped file.
    pub fn canonical_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(&self.file).expect("catalog serializes to JSON");
        text.push('\n');
        text
    }

    /// Number of catalog entries per table (variant entries counted
    /// individually).
    pub fn family_row_counts(&self) -> BTreeMap<Family, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            *counts.entry(e.family).or_insert(0) += 1;
        }
        counts
    }

    /// Number of printed table rows per table (variant entries grouped by
    /// base name).
    pub fn family_base_counts(&self) -> BTreeMap<Family, usize> {
        let mut bases: BTreeMap<Family, BTreeSet<String>> = BTreeMap::new();
        for e in &self.entries {
            bases.entry(e.family).or_default().insert(e.base_name());
        }
        bases.into_iter().map(|(f, set)| (f, set.len())).collect()
    }

    /// Printed-row groups in catalog order, optionally restricted to one
    /// table: each base name with the entries encoding its case splits.
    pub fn base_groups(&self, family: Option<Family>) -> Vec<(String, Vec<&CatalogEntry>)> {
        let mut order: Vec<(String, Vec<&CatalogEntry>)> = Vec::new();
        let mut at: BTreeMap<(Family, String), usize> = BTreeMap::new();
        for e in &self.entries {
            if family.is_some_and(|f| f != e.family) {
                continue;
            }
            let base = e.base_name();
            match at.get(&(e.family, base.clone())) {
                Some(&pos) => order[pos].1.push(e),
                None => {
                    at.insert((e.family, base.clone()), order.len());
                    order.push((base, vec![e]));
                }
            }
        }
        order
    }
}

// ---------------------------------------------------------------------------
// Loading helpers.
// ---------------------------------------------------------------------------

/// Variant suffix tokens produced by the naming scheme; stripping them
/// from the right of a name yields the printed-row base name.
pub const VARIANT_TOKENS: [&str; 12] = [
    "eps1", "eps0", "epsm1", "epspm1", "omega1", "omega0", "alpha2", "alpha0", "alphanz", "p0",
    "pnz", "star",
];

/// Strips trailing variant tokens from an entry name, yielding the name of
/// the printed table row the entry encodes.
pub fn base_name(name: &str) -> String {
    let mut parts: Vec<&str> = name.split('_').collect();
    while parts.len() > 1 && VARIANT_TOKENS.contains(parts.last().expect("nonempty")) {
        parts.pop();
    }
    parts.join("_")
}

fn fnv1a64(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn parse_sample_bindings(
    entry: &str,
    field: &str,
    sample: &SampleRecord,
) -> Result<BTreeMap<String, Rat>, CatalogError> {
    let mut bindings = BTreeMap::new();
    for (name, value) in sample.bindings.iter().chain(sample.witnesses.iter()) {
        let parsed = parse_rat(value).map_err(|source| CatalogError::BadRational {
            entry: entry.to_string(),
            field: format!("{field} value for `{name}`"),
            source,
        })?;
        bindings.insert(name.clone(), parsed);
    }
    Ok(bindings)
}

fn parse_constraints(
    entry: &str,
    field: &str,
    texts: &[String],
) -> Result<Vec<Constraint>, CatalogError> {
    texts
        .iter()
        .map(|text| {
            parse_constraint(text).map_err(|source| CatalogError::Parse {
                entry: entry.to_string(),
                field: format!("{field} constraint `{text}`"),
                source,
            })
        })
        .collect()
}

fn parse_metric_key(key: &str, dim: usize) -> Option<(usize, usize)> {
    let inner = key.strip_prefix('(')?.strip_suffix(')')?;
    let (i, j) = inner.split_once(',')?;
    let i: usize = i.trim().parse().ok()?;
    let j: usize = j.trim().parse().ok()?;
    (1 <= i && i <= j && j <= dim).then_some((i, j))
}

fn build_entry(record: &EntryRecord) -> Result<CatalogEntry, CatalogError> {
    let name = record.name.clone();
    let family = Family::parse(&record.family).ok_or_else(|| CatalogError::BadFamily {
        entry: name.clone(),
        family: record.family.clone(),
    })?;
    let dim = record.dim;

    let mut params = Vec::with_capacity(record.params.len());
    for p in &record.params {
        let constraints = parse_constraints(&name, &format!("parameter `{}`", p.name), &p.constraints)?;
        params.push(ParamSpec { name: p.name.clone(), constraints });
    }

    let mut brackets = Vec::with_capacity(record.brackets.len());
    let mut seen = BTreeSet::new();
    for b in &record.brackets {
        if b.i >= b.j {
            return Err(CatalogError::BracketOrder { entry: name, i: b.i, j: b.j, k: b.k });
        }
        if b.i < 1 || b.j > dim || b.k < 1 || b.k > dim {
            return Err(CatalogError::BracketIndex { entry: name, i: b.i, j: b.j, k: b.k, dim });
        }
        if !seen.insert((b.i, b.j, b.k)) {
            return Err(CatalogError::BracketDuplicate { entry: name, i: b.i, j: b.j, k: b.k });
        }
        let coeff = parse_expr(&b.coeff).map_err(|source| CatalogError::Parse {
            entry: name.clone(),
            field: format!("bracket ({},{},{}) coefficient `{}`", b.i, b.j, b.k, b.coeff),
            source,
        })?;
        brackets.push((b.i, b.j, b.k, coeff));
    }

    let joint_constraints: Vec<Constraint> =
        params.iter().flat_map(|p| p.constraints.iter().cloned()).collect();
    let mut sample_envs = Vec::new();
    if record.params.is_empty() {
        sample_envs.push(ParamEnv::empty());
    } else {
        for (index, sample) in record.params[0].samples.iter().enumerate() {
            let bindings = parse_sample_bindings(&name, &format!("sample {index}"), sample)?;
            let env =
                ParamEnv::new(bindings, joint_constraints.clone()).map_err(|source| {
                    CatalogError::BadSample { entry: name.clone(), index, source }
                })?;
            sample_envs.push(env);
        }
        if sample_envs.is_empty() {
            return Err(CatalogError::NoSamples { entry: name });
        }
    }

    let automorphism = match &record.automorphism {
        None => None,
        Some(a) => {
            if a.matrix.len() != dim || a.matrix.iter().any(|row| row.len() != dim) {
                return Err(CatalogError::MatrixShape { entry: name, dim });
            }
            let matrix = ExprMatrix::from_strings(&a.matrix).map_err(|source| {
                CatalogError::Automorphism { entry: name.clone(), source: source.into() }
            })?;
            let constraints = parse_constraints(&name, "automorphism", &a.constraints)?;
            let mut samples = Vec::with_capacity(a.samples.len());
            for (index, sample) in a.samples.iter().enumerate() {
                samples.push(parse_sample_bindings(
                    &name,
                    &format!("automorphism sample {index}"),
                    sample,
                )?);
            }
            let fam =
                AutFamily::new(matrix, a.params.clone(), constraints, samples).map_err(
                    |source| CatalogError::Automorphism { entry: name.clone(), source },
                )?;
            let structure: BTreeSet<&str> = params.iter().map(|p| p.name.as_str()).collect();
            let continuous_param_count = a
                .params
                .iter()
                .filter(|p| !structure.contains(p.as_str()) && p.as_str() != "r")
                .count();
            Some(EncodedFamily { family: fam, continuous_param_count })
        }
    };

    let mut metrics = Vec::new();
    for (index, m) in record.metrics.as_deref().unwrap_or(&[]).iter().enumerate() {
        let mut upper = Vec::with_capacity(m.upper.len());
        for (key, text) in &m.upper {
            let (i, j) = parse_metric_key(key, dim).ok_or_else(|| CatalogError::MetricKey {
                entry: name.clone(),
                index,
                key: key.clone(),
            })?;
            let expr = parse_expr(text).map_err(|source| CatalogError::Parse {
                entry: name.clone(),
                field: format!("metric {index} entry ({i},{j}) `{text}`"),
                source,
            })?;
            upper.push(((i, j), expr));
        }
        let conditions = parse_constraints(&name, &format!("metric {index}"), &m.conditions)?;
        metrics.push(MetricFamilySpec { upper, gparams: m.gparams.clone(), conditions });
    }

    Ok(CatalogEntry {
        name: record.name.clone(),
        family,
        dim,
        params,
        brackets,
        sample_envs,
        automorphism,
        metrics,
        notes: record.notes.clone(),
    })
}

// ---------------------------------------------------------------------------
// Whole-catalog validation.
// ---------------------------------------------------------------------------

/// Severity of a validation check result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    /// The check passed everywhere it applies.
    Pass,
    /// The check found a documented anomaly (an annotated data
    /// correction or suspected misprint); not a failure.
    Flag,
    /// The check failed.
    Fail,
}

/// One named validation check on one entry.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    /// Check label.
    pub label: &'static str,
    /// Outcome severity.
    pub status: CheckStatus,
    /// Human-readable details.
    pub detail: String,
}

/// All validation checks for one entry.
#[derive(Clone, Debug, Serialize)]
pub struct EntryValidation {
    /// Entry name.
    pub name: String,
    /// Individual check results.
    pub checks: Vec<CheckResult>,
}

impl EntryValidation {
    /// The worst status among the entry's checks.
    pub fn worst(&self) -> CheckStatus {
        self.checks.iter().map(|c| c.status).max().unwrap_or(CheckStatus::Pass)
    }
}

/// Validation results for the whole catalog, in catalog order.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// Per-entry results.
    pub entries: Vec<EntryValidation>,
}

impl ValidationReport {
    /// True when no check failed (documented flags allowed).
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.worst() != CheckStatus::Fail)
    }

    /// All failed checks as `(entry name, check)` pairs.
    pub fn failures(&self) -> Vec<(&str, &CheckResult)> {
        self.with_status(CheckStatus::Fail)
    }

    /// All flagged checks as `(entry name, check)` pairs — the aggregated
    /// list of documented anomalies.
    pub fn flags(&self) -> Vec<(&str, &CheckResult)> {
        self.with_status(CheckStatus::Flag)
    }

    fn with_status(&self, status: CheckStatus) -> Vec<(&str, &CheckResult)> {
        self.entries
            .iter()
            .flat_map(|e| {
                e.checks
                    .iter()
                    .filter(move |c| c.status == status)
                    .map(move |c| (e.name.as_str(), c))
            })
            .collect()
    }
}

fn pass(label: &'static str, detail: String) -> CheckResult {
    CheckResult { label, status: CheckStatus::Pass, detail }
}

fn outcome(
    label: &'static str,
    failures: Vec<String>,
    ok_detail: String,
    flagged: bool,
) -> CheckResult {
    if failures.is_empty() {
        pass(label, ok_detail)
    } else {
        let status = if flagged { CheckStatus::Flag } else { CheckStatus::Fail };
        CheckResult { label, status, detail: failures.join("; ") }
    }
}

/// Runs every validation check on one entry.
pub fn validate_entry(entry: &CatalogEntry) -> EntryValidation {
    let mut checks = Vec::new();
    let envs = entry.sample_envs();
    let notes_mention = |needle: &str| entry.notes().iter().any(|n| n.contains(needle));

    // Structure constants: antisymmetry is structural; check the Jacobi
    // identity at every shipped environment.
    let mut tensors: Vec<Option<StructureTensor>> = Vec::with_capacity(envs.len());
    let mut jacobi_failures = Vec::new();
    for (k, env) in envs.iter().enumerate() {
        match entry.tensor_at(env) {
            Ok(t) => {
                let report = t.jacobi_check();
                if !report.is_pass() {
                    let v = &report.violations[0];
                    jacobi_failures.push(format!(
                        "env {k}: {} violation(s), first at ({},{},{}) component {} with residual {}",
                        report.violations.len(),
                        v.i,
                        v.j,
                        v.k,
                        v.l,
                        format_rat(&v.residual)
                    ));
                }
                tensors.push(Some(t));
            }
            Err(err) => {
                jacobi_failures.push(format!("env {k}: {err}"));
                tensors.push(None);
            }
        }
    }
    checks.push(outcome(
        "jacobi",
        jacobi_failures,
        format!("clean at {} environment(s)", envs.len()),
        notes_mention("Jacobi"),
    ));

    // Automorphism family at its shipped samples.
    match entry.automorphism() {
        None => {
            let why = entry
                .notes()
                .first()
                .cloned()
                .unwrap_or_else(|| "no family encoded".to_string());
            checks.push(CheckResult {
                label: "automorphism",
                status: CheckStatus::Flag,
                detail: format!("skipped: {why}"),
            });
        }
        Some(enc) => {
            let fam = enc.family();
            let mut failures = Vec::new();
            for (k, env) in fam.sample_envs().iter().enumerate() {
                let t = match entry.tensor_at(env) {
                    Ok(t) => t,
                    Err(err) => {
                        failures.push(format!("sample {k}: {err}"));
                        continue;
                    }
                };
                match verify_family_instance(&t, fam, env) {
                    Err(err) => failures.push(format!("sample {k}: {err}")),
                    Ok(rep) => {
                        if !rep.report.is_pass() {
                            let r = &rep.report.residuals[0];
                            failures.push(format!(
                                "sample {k}: {} residual(s), first at ({},{},{}) = {}",
                                rep.report.residuals.len(),
                                r.l,
                                r.m,
                                r.k,
                                format_rat(&r.value)
                            ));
                        } else if !rep.invertible {
                            failures.push(format!("sample {k}: matrix not invertible"));
                        }
                    }
                }
            }
            checks.push(outcome(
                "automorphism",
                failures,
                format!("verified at {} shipped sample(s)", fam.sample_envs().len()),
                false,
            ));
        }
    }

    // Killing form: identically zero on the nilpotent table, and always a
    // member of the invariant-metric span.
    let mut killing_failures = Vec::new();
    for (k, t) in tensors.iter().enumerate() {
        let Some(t) = t else { continue };
        let kf = t.killing_form();
        if entry.family() == Family::Table3 && !kf.is_zero() {
            killing_failures.push(format!("env {k}: nonzero Killing form on a nilpotent entry"));
        }
        let mb = metric_basis(t);
        if in_span(&kf, mb.basis()).is_none() {
            killing_failures
                .push(format!("env {k}: Killing form outside the invariant-metric span"));
        }
    }
    checks.push(outcome(
        "killing",
        killing_failures,
        format!("in the invariant-metric span at {} environment(s)", envs.len()),
        false,
    ));

    // Nilradical dimension against the table label.
    let expected_nilradical = entry.family().nilradical_label();
    let mut nilradical_failures = Vec::new();
    for (k, t) in tensors.iter().enumerate() {
        let Some(t) = t else { continue };
        let got = nilradical_dim_report(t);
        if got != expected_nilradical {
            nilradical_failures
                .push(format!("env {k}: nilradical dimension {got} (label says {expected_nilradical})"));
        }
    }
    checks.push(outcome(
        "nilradical",
        nilradical_failures,
        format!("dimension {expected_nilradical} at every environment"),
        false,
    ));

    // Derivation-algebra dimension against the family's declared count of
    // continuous parameters.
    if let Some(enc) = entry.automorphism() {
        let declared = enc.continuous_param_count();
        let mut failures = Vec::new();
        for (k, t) in tensors.iter().enumerate() {
            let Some(t) = t else { continue };
            let got = derivation_basis(t).dim();
            if got != declared {
                failures.push(format!(
                    "env {k}: derivation dimension {got} vs {declared} family parameter(s)"
                ));
            }
        }
        checks.push(outcome(
            "derivation-dimension",
            failures,
            format!("dimension {declared} at every environment"),
            notes_mention("dimension"),
        ));
    }

    // Metric families: computed space at least as large as the printed
    // one, and every unit instance of the printed family inside the
    // computed span.
    if !entry.metrics().is_empty() {
        let mut dim_failures = Vec::new();
        let mut span_failures = Vec::new();
        for (mi, m) in entry.metrics().iter().enumerate() {
            for s in 0..envs.len() {
                let env = entry.metric_point_env(m, s);
                let t = match entry.tensor_at(&env) {
                    Ok(t) => t,
                    Err(err) => {
                        span_failures.push(format!("metric {mi}, env {s}: {err}"));
                        continue;
                    }
                };
                let mb = metric_basis(&t);
                if mb.dim() < m.gparams().len() {
                    dim_failures.push(format!(
                        "metric {mi}, env {s}: computed dimension {} < {} printed parameter(s)",
                        mb.dim(),
                        m.gparams().len()
                    ));
                }
                match m.unit_instances(entry.dim(), &env) {
                    Err(err) => span_failures.push(format!("metric {mi}, env {s}: {err}")),
                    Ok(instances) => {
                        for (g, mat) in instances {
                            if in_span(&mat, mb.basis()).is_none() {
                                span_failures.push(format!(
                                    "metric {mi}, env {s}: unit {g} instance outside the computed span"
                                ));
                            }
                        }
                    }
                }
            }
        }
        checks.push(outcome(
            "metric-dimension",
            dim_failures,
            "computed dimension covers the printed parameters".to_string(),
            false,
        ));
        checks.push(outcome(
            "metric-containment",
            span_failures,
            "all unit instances inside the computed span".to_string(),
            false,
        ));
    }

    EntryValidation { name: entry.name().to_string(), checks }
}

/// Validates every entry, running entries concurrently; results are
/// returned in catalog order.
pub fn validate_catalog(catalog: &Catalog) -> ValidationReport {
    let entries = catalog.entries();
    if entries.is_empty() {
        return ValidationReport { entries: Vec::new() };
    }
    let workers = std::thread::available_parallelism().map(|p| p.get()).unwrap_or(4).min(8);
    let chunk = entries.len().div_ceil(workers).max(1);
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = entries
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(validate_entry).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("validation worker panicked"))
            .collect::<Vec<_>>()
    });
    ValidationReport { entries: results }
}
