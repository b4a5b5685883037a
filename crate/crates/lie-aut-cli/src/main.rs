//! `lie-aut`: command-line surface over the exact-rational Lie algebra
//! catalog. Subcommands inspect entries, run the metric/derivation solvers,
//! verify automorphism families and invariant metrics at exact rational
//! instances, validate the whole catalog, and export machine-readable data.
//!
//! Exit codes: 0 = all checks pass, 1 = a verification failed, 2 = usage or
//! I/O error. Output is deterministic for a fixed seed. The environment
//! variable `LIE_AUT_CATALOG` overrides the embedded catalog file.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lie_aut::aut::{verify_family_instance, verify_metric_invariance};
use lie_aut::catalog::{validate_catalog, Catalog, CatalogEntry, CheckStatus, Family};
use lie_aut::expr::ParamEnv;
use lie_aut::matrix::{in_span, RatMatrix};
use lie_aut::rat::{format_rat, rat};
use lie_aut::solvers::{derivation_basis, metric_basis};

#[derive(Parser)]
#[command(
    name = "lie-aut",
    version,
    about = "Exact-rational catalog of six-dimensional solvable Lie algebras: solvers and verifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Table1,
    Table2,
    Table3,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Table1 => Family::Table1,
            FamilyArg::Table2 => Family::Table2,
            FamilyArg::Table3 => Family::Table3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List printed table rows (variant entries grouped by base name).
    List {
        /// Restrict to one table.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
    },
    /// Print one entry: parameters, samples, brackets, family, metrics, notes.
    Show {
        /// Entry name, e.g. g_6_91.
        name: String,
    },
    /// Check the Jacobi identity at a shipped sample environment.
    Jacobi {
        /// Entry name.
        name: String,
        /// Sample environment index.
        #[arg(long, default_value_t = 0)]
        sample: usize,
    },
    /// Print the six adjoint matrices at a shipped sample environment.
    Adjoint {
        /// Entry name.
        name: String,
        /// Sample environment index.
        #[arg(long, default_value_t = 0)]
        sample: usize,
    },
    /// Print the Killing form at a shipped sample environment.
    Killing {
        /// Entry name.
        name: String,
        /// Sample environment index.
        #[arg(long, default_value_t = 0)]
        sample: usize,
    },
    /// Solve for the space of invariant symmetric forms.
    MetricBasis {
        /// Entry name.
        name: String,
        /// Sample environment index.
        #[arg(long, default_value_t = 0)]
        sample: usize,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Solve for the derivation algebra.
    Derivations {
        /// Entry name.
        name: String,
        /// Sample environment index.
        #[arg(long, default_value_t = 0)]
        sample: usize,
    },
    /// Verify the automorphism family at shipped samples and seeded random
    /// admissible instances.
    VerifyAut {
        /// Entry name.
        name: String,
        /// Number of random instances.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Random seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify the entry's printed metric families: span containment,
    /// dimension, and pointwise invariance under family instances.
    VerifyMetric {
        /// Entry name.
        name: String,
        /// Number of random instances.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Random seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every validation check on every catalog entry.
    ValidateAll {
        /// Emit the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Export the catalog (json) or the adjoint/Killing matrices (csv).
    Export {
        /// Output format.
        #[arg(long, value_enum)]
        format: ExportFormat,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            // A consumer closing the pipe early (e.g. `lie-aut show x | head`)
            // is not a failure of ours.
            if let Some(ioe) = err.downcast_ref::<io::Error>() {
                if ioe.kind() == io::ErrorKind::BrokenPipe {
                    return ExitCode::from(0);
                }
            }
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<u8> {
    let catalog = Catalog::load_default().context("loading catalog")?;
    match command {
        Command::List { family } => cmd_list(&catalog, family.map(Family::from), out),
        Command::Show { name } => cmd_show(&catalog, &name, out),
        Command::Jacobi { name, sample } => cmd_jacobi(&catalog, &name, sample, out),
        Command::Adjoint { name, sample } => cmd_adjoint(&catalog, &name, sample, out),
        Command::Killing { name, sample } => cmd_killing(&catalog, &name, sample, out),
        Command::MetricBasis { name, sample, json } => {
            cmd_metric_basis(&catalog, &name, sample, json, out)
        }
        Command::Derivations { name, sample } => cmd_derivations(&catalog, &name, sample, out),
        Command::VerifyAut { name, trials, seed } => {
            cmd_verify_aut(&catalog, &name, trials, seed, out)
        }
        Command::VerifyMetric { name, trials, seed } => {
            cmd_verify_metric(&catalog, &name, trials, seed, out)
        }
        Command::ValidateAll { json } => cmd_validate_all(&catalog, json, out),
        Command::Export { format, out: path } => cmd_export(&catalog, format, &path, out),
    }
}

fn lookup<'c>(catalog: &'c Catalog, name: &str) -> Result<&'c CatalogEntry> {
    catalog.get_entry(name).map_err(|e| anyhow!("{e}"))
}

fn entry_env<'e>(entry: &'e CatalogEntry, sample: usize) -> Result<&'e ParamEnv> {
    entry.sample_envs().get(sample).ok_or_else(|| {
        anyhow!(
            "sample index {sample} out of range; `{}` ships {} sample environment(s)",
            entry.name(),
            entry.sample_envs().len()
        )
    })
}

fn bindings_line(env: &ParamEnv) -> String {
    if env.bindings().is_empty() {
        return "(no parameters)".to_string();
    }
    env.bindings()
        .iter()
        .map(|(k, v)| format!("{k}={}", format_rat(v)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_matrix(out: &mut dyn Write, m: &RatMatrix, indent: &str) -> Result<()> {
    let cells: Vec<Vec<String>> =
        (0..m.rows()).map(|r| (0..m.cols()).map(|c| format_rat(m.at(r, c))).collect()).collect();
    let mut widths = vec![0usize; m.cols()];
    for row in &cells {
        for (c, cell) in row.iter().enumerate() {
            widths[c] = widths[c].max(cell.len());
        }
    }
    for row in &cells {
        let line: Vec<String> =
            row.iter().enumerate().map(|(c, cell)| format!("{cell:>w$}", w = widths[c])).collect();
        writeln!(out, "{indent}{}", line.join("  "))?;
    }
    Ok(())
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| format_rat(m.at(r, c))).collect()).collect()
}

// ---------------------------------------------------------------------------
// list / show
// ---------------------------------------------------------------------------

fn cmd_list(catalog: &Catalog, family: Option<Family>, out: &mut dyn Write) -> Result<u8> {
    for (base, members) in catalog.base_groups(family) {
        let fam = members[0].family();
        if members.len() == 1 && members[0].name() == base {
            writeln!(out, "{fam} {base}")?;
        } else {
            let names: Vec<&str> = members.iter().map(|e| e.name()).collect();
            writeln!(out, "{fam} {base} ({})", names.join(", "))?;
        }
    }
    let bases = catalog.family_base_counts();
    let rows = catalog.family_row_counts();
    let wanted: Vec<Family> =
        Family::all().into_iter().filter(|f| family.map_or(true, |want| want == *f)).collect();
    let base_part: Vec<String> =
        wanted.iter().map(|f| format!("{f}={}", bases.get(f).copied().unwrap_or(0))).collect();
    let row_part: Vec<String> =
        wanted.iter().map(|f| format!("{f}={}", rows.get(f).copied().unwrap_or(0))).collect();
    writeln!(out, "total: {} (entries: {})", base_part.join(" "), row_part.join(" "))?;
    Ok(0)
}

fn cmd_show(catalog: &Catalog, name: &str, out: &mut dyn Write) -> Result<u8> {
    let e = lookup(catalog, name)?;
    writeln!(out, "name:   {}", e.name())?;
    writeln!(out, "family: {} (printed row {})", e.family(), e.base_name())?;
    writeln!(out, "dim:    {}", e.dim())?;

    if e.params().is_empty() {
        writeln!(out, "parameters: none")?;
    } else {
        writeln!(out, "parameters:")?;
        for p in e.params() {
            if p.constraints.is_empty() {
                writeln!(out, "  {}", p.name)?;
            } else {
                let texts: Vec<&str> = p.constraints.iter().map(|c| c.text()).collect();
                writeln!(out, "  {}  [{}]", p.name, texts.join("; "))?;
            }
        }
        writeln!(out, "samples:")?;
        for (k, env) in e.sample_envs().iter().enumerate() {
            writeln!(out, "  {k}: {}", bindings_line(env))?;
        }
    }

    writeln!(out, "brackets:")?;
    for (i, j, k, coeff) in e.brackets() {
        writeln!(out, "  [e{i}, e{j}] = ({coeff}) e{k}")?;
    }

    match e.automorphism() {
        None => writeln!(out, "automorphism family: none encoded")?,
        Some(enc) => {
            let fam = enc.family();
            writeln!(
                out,
                "automorphism family: {} declared parameter(s), {} continuous; {} shipped sample(s)",
                fam.params().len(),
                enc.continuous_param_count(),
                fam.sample_envs().len()
            )?;
            if !fam.constraints().is_empty() {
                let texts: Vec<&str> = fam.constraints().iter().map(|c| c.text()).collect();
                writeln!(out, "  constraints: {}", texts.join("; "))?;
            }
        }
    }

    if e.metrics().is_empty() {
        writeln!(out, "metric families: none")?;
    } else {
        writeln!(out, "metric families:")?;
        for (mi, m) in e.metrics().iter().enumerate() {
            let conds: Vec<&str> = m.conditions().iter().map(|c| c.text()).collect();
            let conds = if conds.is_empty() { "none".to_string() } else { conds.join("; ") };
            writeln!(out, "  {mi}: parameters {}; conditions: {conds}", m.gparams().join(", "))?;
            for ((i, j), expr) in m.upper() {
                writeln!(out, "     ({i},{j}) = {expr}")?;
            }
        }
    }

    if !e.notes().is_empty() {
        writeln!(out, "notes:")?;
        for n in e.notes() {
            writeln!(out, "  - {n}")?;
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// solver commands
// ---------------------------------------------------------------------------

fn cmd_jacobi(catalog: &Catalog, name: &str, sample: usize, out: &mut dyn Write) -> Result<u8> {
    let e = lookup(catalog, name)?;
    let env = entry_env(e, sample)?;
    let t = e.tensor_at(env).with_context(|| format!("evaluating `{name}` at sample {sample}"))?;
    let report = t.jacobi_check();
    if report.is_pass() {
        writeln!(out, "{name} sample {sample}: jacobi ok")?;
        Ok(0)
    } else {
        writeln!(
            out,
            "{name} sample {sample}: jacobi FAILED ({} violation(s))",
            report.violations.len()
        )?;
        for v in &report.violations {
            writeln!(
                out,
                "  ({},{},{}) component {}: residual {}",
                v.i,
                v.j,
                v.k,
                v.l,
                format_rat(&v.residual)
            )?;
        }
        Ok(1)
    }
}

fn cmd_adjoint(catalog: &Catalog, name: &str, sample: usize, out: &mut dyn Write) -> Result<u8> {
    let e = lookup(catalog, name)?;
    let env = entry_env(e, sample)?;
    let t = e.tensor_at(env).with_context(|| format!("evaluating `{name}` at sample {sample}"))?;
    let adj = t.adjoint();
    writeln!(out, "{name} sample {sample}: adjoint matrices")?;
    for (i, chi) in adj.chi.iter().enumerate() {
        writeln!(out, "chi_{}:", i + 1)?;
        write_matrix(out, chi, "  ")?;
    }
    Ok(0)
}

fn cmd_killing(catalog: &Catalog, name: &str, sample: usize, out: &mut dyn Write) -> Result<u8> {
    let e = lookup(catalog, name)?;
    let env = entry_env(e, sample)?;
    let t = e.tensor_at(env).with_context(|| format!("evaluating `{name}` at sample {sample}"))?;
    let k = t.killing_form();
    writeln!(out, "{name} sample {sample}: Killing form (zero: {})", k.is_zero())?;
    write_matrix(out, &k, "  ")?;
    Ok(0)
}

#[derive(Serialize)]
struct MetricBasisOut {
    entry: String,
    sample: usize,
    dimension: usize,
    nondegenerate_combination: bool,
    basis: Vec<Vec<Vec<String>>>,
}

fn cmd_metric_basis(
    catalog: &Catalog,
    name: &str,
    sample: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<u8> {
    let e = lookup(catalog, name)?;
    let env = entry_env(e, sample)?;
    let t = e.tensor_at(env).with_context(|| format!("evaluating `{name}` at sample {sample}"))?;
    let mb = metric_basis(&t);
    if json {
        let payload = MetricBasisOut {
            entry: e.name().to_string(),
            sample,
            dimension: mb.dim(),
            nondegenerate_combination: mb.has_nondegenerate_combination(),
            basis: mb.basis().iter().map(matrix_strings).collect(),
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&payload)?)?;
    } else {
        writeln!(
            out,
            "{name} sample {sample}: invariant-metric space dimension {} (nondegenerate combination: {})",
            mb.dim(),
            mb.has_nondegenerate_combination()
        )?;
        for (i, b) in mb.basis().iter().enumerate() {
            writeln!(out, "basis[{i}]:")?;
            write_matrix(out, b, "  ")?;
        }
    }
    Ok(0)
}

fn cmd_derivations(
    catalog: &Catalog,
    name: &str,
    sample: usize,
    out: &mut dyn Write,
) -> Result<u8> {
    let e = lookup(catalog, name)?;
    let env = entry_env(e, sample)?;
    let t = e.tensor_at(env).with_context(|| format!("evaluating `{name}` at sample {sample}"))?;
    let db = derivation_basis(&t);
    writeln!(out, "{name} sample {sample}: derivation algebra dimension {}", db.dim())?;
    for (i, b) in db.basis().iter().enumerate() {
        writeln!(out, "basis[{i}]:")?;
        write_matrix(out, b, "  ")?;
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verification commands
// ---------------------------------------------------------------------------

fn cmd_verify_aut(
    catalog: &Catalog,
    name: &str,
    trials: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<u8> {
    let e = lookup(catalog, name)?;
    let Some(enc) = e.automorphism() else {
        let note = e.notes().first().map(|n| format!(" ({n})")).unwrap_or_default();
        bail!("entry `{name}` has no automorphism family encoded{note}");
    };
    let fam = enc.family();
    writeln!(
        out,
        "{name}: family with {} continuous parameter(s), {} shipped sample(s)",
        enc.continuous_param_count(),
        fam.sample_envs().len()
    )?;

    for (k, env) in fam.sample_envs().iter().enumerate() {
        let t = e.tensor_at(env).with_context(|| format!("shipped sample {k}"))?;
        let rep =
            verify_family_instance(&t, fam, env).with_context(|| format!("shipped sample {k}"))?;
        if !rep.is_pass() {
            writeln!(out, "shipped sample {k}: FAIL at bindings {}", bindings_line(env))?;
            for r in &rep.report.residuals {
                writeln!(out, "  residual ({},{},{}) = {}", r.l, r.m, r.k, format_rat(&r.value))?;
            }
            if !rep.invertible {
                writeln!(out, "  matrix not invertible")?;
            }
            return Ok(1);
        }
    }
    writeln!(out, "shipped samples: {}/{} pass", fam.sample_envs().len(), fam.sample_envs().len())?;

    let envs = e
        .sample_instance_envs(trials, seed)
        .with_context(|| format!("sampling admissible instances for `{name}`"))?;
    for (k, env) in envs.iter().enumerate() {
        let t = e.tensor_at(env).with_context(|| format!("instance {k}"))?;
        let rep = verify_family_instance(&t, fam, env).with_context(|| format!("instance {k}"))?;
        if !rep.is_pass() {
            writeln!(out, "instance {k}: FAIL at bindings {}", bindings_line(env))?;
            for r in &rep.report.residuals {
                writeln!(out, "  residual ({},{},{}) = {}", r.l, r.m, r.k, format_rat(&r.value))?;
            }
            if !rep.invertible {
                writeln!(out, "  matrix not invertible")?;
            }
            return Ok(1);
        }
    }
    writeln!(
        out,
        "random admissible instances (seed {seed}): {}/{} pass, all exactly invertible",
        envs.len(),
        envs.len()
    )?;
    Ok(0)
}

fn cmd_verify_metric(
    catalog: &Catalog,
    name: &str,
    trials: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<u8> {
    let e = lookup(catalog, name)?;
    if e.metrics().is_empty() {
        bail!("entry `{name}` carries no printed metric family");
    }
    let mut failed = false;

    for (mi, m) in e.metrics().iter().enumerate() {
        let conds: Vec<&str> = m.conditions().iter().map(|c| c.text()).collect();
        let conds = if conds.is_empty() { "none".to_string() } else { conds.join("; ") };
        writeln!(out, "metric {mi}: parameter(s) {}; conditions: {conds}", m.gparams().join(", "))?;

        let point = e.metric_point_env(m, 0);
        let t = e.tensor_at(&point).with_context(|| format!("metric {mi} point"))?;
        let mb = metric_basis(&t);
        let dim_ok = mb.dim() >= m.gparams().len();
        writeln!(
            out,
            "  computed invariant-metric dimension at the pinned point: {} ({} printed parameter(s))",
            mb.dim(),
            m.gparams().len()
        )?;
        if !dim_ok {
            writeln!(out, "  FAIL: computed dimension below the printed parameter count")?;
            failed = true;
        }

        let units = m.unit_instances(e.dim(), &point).with_context(|| format!("metric {mi}"))?;
        let mut contained = 0usize;
        for (g, mat) in &units {
            if in_span(mat, mb.basis()).is_some() {
                contained += 1;
            } else {
                writeln!(out, "  FAIL: unit {g} instance lies outside the computed span")?;
                failed = true;
            }
        }
        writeln!(out, "  unit instances inside the computed span: {contained}/{}", units.len())?;

        let Some(enc) = e.automorphism() else {
            writeln!(out, "  instance invariance: skipped (no automorphism family encoded)")?;
            continue;
        };
        let fam = enc.family();
        let envs = e
            .sample_instance_envs(trials, seed)
            .with_context(|| format!("sampling admissible instances for `{name}`"))?;
        let mut fixing = 0usize;
        let mut counterexample: Option<(usize, String, (usize, usize), String, String)> = None;
        for (k, env) in envs.iter().enumerate() {
            let t_env = e.tensor_at(env).with_context(|| format!("instance {k}"))?;
            let rep =
                verify_family_instance(&t_env, fam, env).with_context(|| format!("instance {k}"))?;
            if !rep.is_pass() {
                writeln!(out, "  FAIL: instance {k} is not an automorphism at its own environment")?;
                failed = true;
                continue;
            }
            let mut point_bindings = env.bindings().clone();
            for (cond_name, value) in m.condition_overrides() {
                point_bindings.insert(cond_name, value);
            }
            let point_i = ParamEnv::from_pairs(point_bindings);
            let units_i =
                m.unit_instances(e.dim(), &point_i).with_context(|| format!("instance {k}"))?;
            let mut moves = false;
            for (g, gm) in &units_i {
                let inv = verify_metric_invariance(gm, &rep.matrix);
                if !inv.is_pass() {
                    moves = true;
                    if counterexample.is_none() {
                        let r = &inv.residual;
                        let cell = (0..r.rows())
                            .flat_map(|a| (0..r.cols()).map(move |b| (a, b)))
                            .find(|(a, b)| *r.at(*a, *b) != rat(0))
                            .expect("nonzero residual has a nonzero cell");
                        counterexample = Some((
                            k,
                            g.clone(),
                            (cell.0 + 1, cell.1 + 1),
                            format_rat(r.at(cell.0, cell.1)),
                            bindings_line(env),
                        ));
                    }
                }
            }
            if !moves {
                fixing += 1;
            }
        }
        writeln!(
            out,
            "  instances fixing every unit metric pointwise (trials {}, seed {seed}): {fixing}/{}",
            envs.len(),
            envs.len()
        )?;
        if let Some((k, g, (r, c), value, bindings)) = counterexample {
            failed = true;
            writeln!(out, "  FAIL: instance {k} moves unit metric {g}: residual ({r},{c}) = {value}")?;
            writeln!(out, "        instance bindings: {bindings}")?;
            writeln!(
                out,
                "        (the family acts linearly on the metric space; it does not fix each basis metric pointwise)"
            )?;
        }
    }
    Ok(if failed { 1 } else { 0 })
}

// ---------------------------------------------------------------------------
// validate-all / export
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ValidateOut<'a> {
    failed: usize,
    flagged: usize,
    entries: &'a [lie_aut::catalog::EntryValidation],
}

fn cmd_validate_all(catalog: &Catalog, json: bool, out: &mut dyn Write) -> Result<u8> {
    let report = validate_catalog(catalog);
    let failures = report.failures();
    let flags = report.flags();
    if json {
        let payload =
            ValidateOut { failed: failures.len(), flagged: flags.len(), entries: &report.entries };
        writeln!(out, "{}", serde_json::to_string_pretty(&payload)?)?;
    } else {
        for entry in &report.entries {
            let status = match entry.worst() {
                CheckStatus::Pass => "PASS",
                CheckStatus::Flag => "FLAG",
                CheckStatus::Fail => "FAIL",
            };
            writeln!(out, "{status} {}", entry.name)?;
            for check in &entry.checks {
                if check.status != CheckStatus::Pass {
                    let tag = match check.status {
                        CheckStatus::Flag => "flag",
                        _ => "fail",
                    };
                    writeln!(out, "  [{tag}] {}: {}", check.label, check.detail)?;
                }
            }
        }
        writeln!(
            out,
            "summary: {} entries, {} failed check(s), {} documented flag(s)",
            report.entries.len(),
            failures.len(),
            flags.len()
        )?;
    }
    Ok(if failures.is_empty() { 0 } else { 1 })
}

fn cmd_export(
    catalog: &Catalog,
    format: ExportFormat,
    path: &std::path::Path,
    out: &mut dyn Write,
) -> Result<u8> {
    let text = match format {
        ExportFormat::Json => catalog.canonical_json(),
        ExportFormat::Csv => export_csv(catalog)?,
    };
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(0)
}

/// One CSV row per (entry, matrix): the six adjoint matrices and the Killing
/// form at sample 0, flattened row-major with exact `p/q` cells.
fn export_csv(catalog: &Catalog) -> Result<String> {
    let mut out = String::from("entry,matrix");
    for r in 1..=6 {
        for c in 1..=6 {
            out.push_str(&format!(",r{r}c{c}"));
        }
    }
    out.push('\n');
    for e in catalog.entries() {
        let env = &e.sample_envs()[0];
        let t = e.tensor_at(env).with_context(|| format!("evaluating `{}`", e.name()))?;
        let adj = t.adjoint();
        let killing = t.killing_form();
        let mut rows: Vec<(String, &RatMatrix)> = Vec::with_capacity(7);
        for (i, chi) in adj.chi.iter().enumerate() {
            rows.push((format!("chi_{}", i + 1), chi));
        }
        rows.push(("killing".to_string(), &killing));
        for (label, m) in rows {
            out.push_str(e.name());
            out.push(',');
            out.push_str(&label);
            for r in 0..6 {
                for c in 0..6 {
                    out.push(',');
                    out.push_str(&format_rat(m.at(r, c)));
                }
            }
            out.push('\n');
        }
    }
    Ok(out)
}
