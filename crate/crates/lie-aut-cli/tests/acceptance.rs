//! Acceptance checks for the shipped artifact. Each test covers one
//! acceptance criterion and emits a single `ACCEPTANCE NN PASS — …` line on
//! success (visible with `--nocapture`); on failure it panics with a single
//! `ACCEPTANCE NN FAIL — …` line carrying the evidence.
//!
//! Criterion 06 asks that every verified automorphism-family instance fix
//! every printed unit metric pointwise. That does not hold for this data —
//! the families act linearly on the invariant-metric space rather than
//! fixing each basis metric — so that test fails honestly and prints an
//! exact counterexample. All other criteria pass.
//!
//! Timed checks take a shared lock so wall-clock budgets are measured
//! without contention from sibling tests.

use std::collections::BTreeSet;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lie_aut::aut::{verify_automorphism, verify_automorphism_adjoint, verify_family_instance,
    verify_metric_invariance};
use lie_aut::catalog::{Catalog, CatalogEntry, Family};
use lie_aut::expr::ParamEnv;
use lie_aut::lie::StructureTensor;
use lie_aut::matrix::{in_span, RatMatrix};
use lie_aut::rat::{format_rat, rat, ratio, Rat};
use lie_aut::solvers::{derivation_basis, exp_nilpotent, metric_basis};

/// Serializes the heavy tests so per-criterion time budgets are meaningful.
static HEAVY: Mutex<()> = Mutex::new(());

fn heavy_guard() -> std::sync::MutexGuard<'static, ()> {
    // A sibling test that failed while holding the lock (criterion 06 fails
    // by design) must not take the rest of the suite down with it.
    HEAVY.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn catalog() -> Catalog {
    Catalog::embedded().expect("embedded catalog loads")
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(4).min(8)
}

/// Applies `f` to every item on a small thread pool, preserving order.
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if items.is_empty() {
        return Vec::new();
    }
    let chunk = items.len().div_ceil(workers());
    std::thread::scope(|scope| {
        let handles: Vec<_> =
            items.chunks(chunk).map(|part| scope.spawn(|| part.iter().map(&f).collect())).collect();
        let mut out: Vec<R> = Vec::with_capacity(items.len());
        for h in handles {
            let part: Vec<R> = h.join().expect("worker thread");
            out.extend(part);
        }
        out
    })
}

fn assert_within(n: u32, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed <= budget,
        "ACCEPTANCE {n:02} FAIL — exceeded time budget: {elapsed:.2?} > {budget:?}"
    );
}

// ---------------------------------------------------------------------------
// 01 — `list` reports the printed row counts quickly
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_list_reports_printed_row_counts_within_a_second() {
    let _g = heavy_guard();
    let start = Instant::now();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_lie-aut"))
        .arg("list")
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(out.status.success(), "ACCEPTANCE 01 FAIL — `list` exited nonzero");
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let counts = [
        ("table1 ", 99usize),
        ("table2 ", 40),
        ("table3 ", 22),
    ];
    for (prefix, want) in counts {
        let got = text.lines().filter(|l| l.starts_with(prefix)).count();
        assert_eq!(
            got, want,
            "ACCEPTANCE 01 FAIL — {prefix}rows: got {got}, want {want}"
        );
    }
    let total = text.lines().last().unwrap_or_default();
    assert_eq!(
        total,
        "total: table1=99 table2=40 table3=22 (entries: table1=119 table2=43 table3=22)",
        "ACCEPTANCE 01 FAIL — unexpected totals line"
    );
    assert_within(1, elapsed, Duration::from_secs(1));
    println!("ACCEPTANCE 01 PASS — list printed 99/40/22 rows (119/43/22 entries) in {elapsed:.2?}");
}

// ---------------------------------------------------------------------------
// 02 — the bracket tables satisfy the Jacobi identity at every shipped sample
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_jacobi_holds_at_every_shipped_sample() {
    let _g = heavy_guard();
    let cat = catalog();
    let start = Instant::now();
    let mut checked = 0usize;
    let mut failing: Vec<String> = Vec::new();
    for e in cat.entries() {
        for (k, env) in e.sample_envs().iter().enumerate() {
            let t = e.tensor_at(env).expect("entry evaluates at its own sample");
            checked += 1;
            if !t.jacobi_check().is_pass() {
                failing.push(format!("{} sample {k}", e.name()));
            }
        }
    }
    let elapsed = start.elapsed();
    // Failures are tolerated only for entries whose notes document a Jacobi
    // defect, and at most three such entries may exist.
    let documented: BTreeSet<&str> = cat
        .entries()
        .iter()
        .filter(|e| e.notes().iter().any(|n| n.contains("Jacobi")))
        .map(|e| e.name())
        .collect();
    let undocumented: Vec<&String> = failing
        .iter()
        .filter(|f| !documented.iter().any(|d| f.starts_with(*d)))
        .collect();
    assert!(
        undocumented.is_empty(),
        "ACCEPTANCE 02 FAIL — undocumented Jacobi failures: {undocumented:?}"
    );
    let failing_entries: BTreeSet<&str> =
        failing.iter().map(|f| f.rsplit_once(" sample ").unwrap().0).collect();
    assert!(
        failing_entries.len() <= 3,
        "ACCEPTANCE 02 FAIL — {} entries fail Jacobi (max 3): {failing_entries:?}",
        failing_entries.len()
    );
    assert_within(2, elapsed, Duration::from_secs(5));
    println!(
        "ACCEPTANCE 02 PASS — Jacobi holds at {checked} (entry, sample) pairs, {} documented exceptions, in {elapsed:.2?}",
        failing_entries.len()
    );
}

// ---------------------------------------------------------------------------
// 03 — every encoded automorphism family verifies at 100 random instances
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_family_instances_verify_and_invert_exactly() {
    let _g = heavy_guard();
    let cat = catalog();
    let with_family: Vec<&CatalogEntry> =
        cat.entries().iter().filter(|e| e.automorphism().is_some()).collect();
    assert_eq!(
        with_family.len(),
        183,
        "ACCEPTANCE 03 FAIL — expected 183 encoded families, found {}",
        with_family.len()
    );

    let start = Instant::now();
    let results: Vec<Result<usize, String>> = par_map(&with_family, |e| {
        let enc = e.automorphism().expect("filtered to Some");
        let fam = enc.family();
        let mut instances = 0usize;
        for (k, env) in fam.sample_envs().iter().enumerate() {
            let t = e.tensor_at(env).map_err(|err| format!("{}: {err}", e.name()))?;
            let rep = verify_family_instance(&t, fam, env)
                .map_err(|err| format!("{}: {err}", e.name()))?;
            if !rep.is_pass() {
                return Err(format!("{} shipped sample {k}: residuals or singular", e.name()));
            }
            instances += 1;
        }
        let envs = e
            .sample_instance_envs(100, 7)
            .map_err(|err| format!("{}: sampling: {err}", e.name()))?;
        for (k, env) in envs.iter().enumerate() {
            let t = e.tensor_at(env).map_err(|err| format!("{}: {err}", e.name()))?;
            let rep = verify_family_instance(&t, fam, env)
                .map_err(|err| format!("{}: {err}", e.name()))?;
            if !rep.report.is_pass() {
                return Err(format!(
                    "{} random instance {k}: {} residual(s), first {:?}",
                    e.name(),
                    rep.report.residuals.len(),
                    rep.report.residuals.first()
                ));
            }
            if !rep.invertible {
                return Err(format!("{} random instance {k}: matrix not invertible", e.name()));
            }
            instances += 1;
        }
        Ok(instances)
    });
    let elapsed = start.elapsed();

    let mut total = 0usize;
    for r in results {
        match r {
            Ok(n) => total += n,
            Err(msg) => panic!("ACCEPTANCE 03 FAIL — {msg}"),
        }
    }
    assert_within(3, elapsed, Duration::from_secs(30));
    println!(
        "ACCEPTANCE 03 PASS — {} families, {total} instances verified and exactly invertible, in {elapsed:.2?}",
        with_family.len()
    );
}

// ---------------------------------------------------------------------------
// 04 — printed metric families lie in the computed invariant span
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_printed_metrics_lie_in_computed_span() {
    let _g = heavy_guard();
    let cat = catalog();
    let start = Instant::now();
    let mut entries_seen = 0usize;
    let mut units_checked = 0usize;
    for e in cat.entries() {
        if e.metrics().is_empty() {
            continue;
        }
        entries_seen += 1;
        for (mi, m) in e.metrics().iter().enumerate() {
            let point = e.metric_point_env(m, 0);
            let t = e.tensor_at(&point).expect("metric point evaluates");
            let mb = metric_basis(&t);
            let units = m.unit_instances(e.dim(), &point).expect("unit instances evaluate");
            for (g, mat) in &units {
                assert!(
                    in_span(mat, mb.basis()).is_some(),
                    "ACCEPTANCE 04 FAIL — {} metric {mi}: unit {g} outside computed span",
                    e.name()
                );
                units_checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(
        entries_seen, 11,
        "ACCEPTANCE 04 FAIL — expected 11 entries with printed metrics, found {entries_seen}"
    );

    // Named pins for three printed patterns.
    let g91 = cat.get_entry("g_6_91").expect("g_6_91");
    let m91 = &g91.metrics()[0];
    assert_eq!(m91.gparams(), ["g1", "g2"], "ACCEPTANCE 04 FAIL — g_6_91 parameter list");
    let p91 = g91.metric_point_env(m91, 0);
    let units91 = m91.unit_instances(6, &p91).expect("g_6_91 units");
    let g1 = &units91.iter().find(|(g, _)| g == "g1").expect("g1 unit").1;
    for ((r, c), want) in [((0, 5), -1), ((5, 0), -1), ((1, 1), -1), ((2, 2), 1), ((3, 3), 1), ((4, 4), 1)]
    {
        assert_eq!(
            g1.at(r, c),
            &rat(want),
            "ACCEPTANCE 04 FAIL — g_6_91 unit g1 cell ({},{})",
            r + 1,
            c + 1
        );
    }
    let a63 = cat.get_entry("A_6_3").expect("A_6_3");
    assert_eq!(
        a63.metrics()[0].gparams(),
        ["g1", "g2", "g3", "g4", "g5", "g6", "g7"],
        "ACCEPTANCE 04 FAIL — A_6_3 parameter list"
    );
    let p0 = cat.get_entry("g_6_92_star_p0").expect("g_6_92_star_p0");
    assert_eq!(
        p0.metrics()[0].gparams(),
        ["g1", "g2"],
        "ACCEPTANCE 04 FAIL — g_6_92_star_p0 parameter list"
    );

    assert_within(4, elapsed, Duration::from_secs(5));
    println!(
        "ACCEPTANCE 04 PASS — {units_checked} unit metrics across {entries_seen} entries lie in the computed spans, in {elapsed:.2?}"
    );
}

// ---------------------------------------------------------------------------
// 05 — solver dimensions dominate printed parameter counts; brute-force oracle
// ---------------------------------------------------------------------------

/// Row-reduction rank over exact rationals, written out locally so the oracle
/// shares no code with the library solvers.
fn oracle_rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &pivot;
                for c in col..cols {
                    let delta = &rows[rank][c] * &factor;
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Dimension of the space of symmetric bilinear forms `B` with
/// `B([x,y],z) + B(y,[x,z]) = 0`, found by enumerating that condition over
/// every basis triple and row-reducing the resulting linear system directly.
fn invariant_form_dim_bruteforce(t: &StructureTensor) -> usize {
    let n = t.dim();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut index_of = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in a..n {
            index_of[a][b] = pairs.len();
            index_of[b][a] = pairs.len();
            pairs.push((a, b));
        }
    }
    let unit = |i: usize| -> Vec<Rat> {
        let mut v = vec![rat(0); n];
        v[i] = rat(1);
        v
    };
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let cij = t.bracket(&unit(i), &unit(j));
            for k in 0..n {
                let cik = t.bracket(&unit(i), &unit(k));
                let mut row = vec![rat(0); pairs.len()];
                for (l, c) in cij.iter().enumerate() {
                    if !c.is_zero() {
                        let idx = index_of[l][k];
                        row[idx] = &row[idx] + c;
                    }
                }
                for (l, c) in cik.iter().enumerate() {
                    if !c.is_zero() {
                        let idx = index_of[j][l];
                        row[idx] = &row[idx] + c;
                    }
                }
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    pairs.len() - oracle_rank(rows)
}

#[test]
fn criterion_05_metric_dimension_dominates_and_matches_bruteforce_oracle() {
    let _g = heavy_guard();
    let cat = catalog();
    for e in cat.entries() {
        for (mi, m) in e.metrics().iter().enumerate() {
            let point = e.metric_point_env(m, 0);
            let t = e.tensor_at(&point).expect("metric point evaluates");
            let dim = metric_basis(&t).dim();
            assert!(
                dim >= m.gparams().len(),
                "ACCEPTANCE 05 FAIL — {} metric {mi}: solver dimension {dim} below printed parameter count {}",
                e.name(),
                m.gparams().len()
            );
        }
    }

    // Three-dimensional algebra with a single bracket [e1, e2] = e3: the
    // invariant symmetric forms are exactly those vanishing against e3.
    let heis = StructureTensor::from_brackets(3, vec![(1, 2, 3, rat(1))]).expect("heis");
    let solver_heis = metric_basis(&heis).dim();
    let oracle_heis = invariant_form_dim_bruteforce(&heis);
    assert_eq!(
        (solver_heis, oracle_heis),
        (3, 3),
        "ACCEPTANCE 05 FAIL — 3-dim one-bracket algebra: solver {solver_heis}, oracle {oracle_heis}, want 3"
    );

    // Abelian in dimension six: every symmetric form is invariant.
    let abelian = StructureTensor::from_brackets(6, Vec::new()).expect("abelian");
    let solver_ab = metric_basis(&abelian).dim();
    let oracle_ab = invariant_form_dim_bruteforce(&abelian);
    assert_eq!(
        (solver_ab, oracle_ab),
        (21, 21),
        "ACCEPTANCE 05 FAIL — abelian-6: solver {solver_ab}, oracle {oracle_ab}, want 21"
    );

    // Cross-check the oracle against the solver on a catalog entry.
    let g91 = cat.get_entry("g_6_91").expect("g_6_91");
    let t91 = g91.tensor_at(&g91.sample_envs()[0]).expect("evaluates");
    let solver_91 = metric_basis(&t91).dim();
    let oracle_91 = invariant_form_dim_bruteforce(&t91);
    assert_eq!(
        solver_91, oracle_91,
        "ACCEPTANCE 05 FAIL — g_6_91: solver {solver_91} vs oracle {oracle_91}"
    );

    println!(
        "ACCEPTANCE 05 PASS — solver dimension ≥ printed parameters on all metric rows; brute-force oracle agrees (3, 21, and g_6_91 = {oracle_91})"
    );
}

// ---------------------------------------------------------------------------
// 06 — family instances pointwise fixing every printed unit metric
//      (fails honestly: the families act on the metric space linearly)
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_family_instances_fix_unit_metrics_pointwise() {
    let _g = heavy_guard();
    let cat = catalog();
    let mut fixing = 0usize;
    let mut moving = 0usize;
    let mut first: Option<String> = None;
    for e in cat.entries() {
        if e.metrics().is_empty() {
            continue;
        }
        let Some(enc) = e.automorphism() else { continue };
        let fam = enc.family();
        let envs = e.sample_instance_envs(25, 11).expect("sampling succeeds");
        for env in &envs {
            let t = e.tensor_at(env).expect("instance evaluates");
            let rep = verify_family_instance(&t, fam, env).expect("instance verifies");
            if !rep.is_pass() {
                continue; // only verified instances are in scope here
            }
            for m in e.metrics() {
                let mut bindings = env.bindings().clone();
                for (name, value) in m.condition_overrides() {
                    bindings.insert(name, value);
                }
                let point = ParamEnv::from_pairs(bindings);
                let units = m.unit_instances(e.dim(), &point).expect("units evaluate");
                for (g, gm) in &units {
                    let inv = verify_metric_invariance(gm, &rep.matrix);
                    if inv.is_pass() {
                        fixing += 1;
                    } else {
                        moving += 1;
                        if first.is_none() {
                            let r = &inv.residual;
                            let cell = (0..r.rows())
                                .flat_map(|a| (0..r.cols()).map(move |b| (a, b)))
                                .find(|&(a, b)| !r.at(a, b).is_zero())
                                .expect("nonzero residual");
                            let bindings: Vec<String> = env
                                .bindings()
                                .iter()
                                .map(|(k, v)| format!("{k}={}", format_rat(v)))
                                .collect();
                            first = Some(format!(
                                "{} unit {g} moves under a verified instance: residual ({},{}) = {} at {}",
                                e.name(),
                                cell.0 + 1,
                                cell.1 + 1,
                                format_rat(r.at(cell.0, cell.1)),
                                bindings.join(", ")
                            ));
                        }
                    }
                }
            }
        }
    }
    if moving > 0 {
        panic!(
            "ACCEPTANCE 06 FAIL — {moving} (instance, unit metric) pairs move, {fixing} fix; the \
             families preserve the invariant-metric space as a whole but act on it linearly \
             instead of fixing each basis metric. First counterexample: {}",
            first.unwrap()
        );
    }
    println!("ACCEPTANCE 06 PASS — {fixing} (instance, unit metric) pairs all fixed pointwise");
}

// ---------------------------------------------------------------------------
// 07 — derivation-algebra dimension equals the family's continuous parameters
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_derivation_dimension_matches_continuous_parameter_count() {
    let _g = heavy_guard();
    let cat = catalog();
    let excluded = cat.get_entry("N_6_25").expect("N_6_25");
    assert!(
        excluded.notes().iter().any(|n| n.contains("excluded from the dimension-match")),
        "ACCEPTANCE 07 FAIL — N_6_25 exclusion is not documented in its notes"
    );

    let scope: Vec<&CatalogEntry> = cat
        .entries()
        .iter()
        .filter(|e| e.automorphism().is_some() && e.name() != "N_6_25")
        .collect();
    let results: Vec<(String, bool, usize, usize)> = par_map(&scope, |e| {
        let enc = e.automorphism().expect("filtered to Some");
        let want = enc.continuous_param_count();
        let mut got = usize::MAX;
        let mut all_match = true;
        for env in e.sample_envs() {
            let t = e.tensor_at(env).expect("entry evaluates");
            got = derivation_basis(&t).dim();
            if got != want {
                all_match = false;
            }
        }
        (e.name().to_string(), all_match, want, got)
    });

    let mismatches: Vec<&(String, bool, usize, usize)> =
        results.iter().filter(|(_, ok, _, _)| !ok).collect();
    let mismatch_names: BTreeSet<&str> =
        mismatches.iter().map(|(n, _, _, _)| n.as_str()).collect();
    let expected_mismatches: BTreeSet<&str> =
        ["g_6_92_alpha0", "g_6_92_star_pnz", "g_6_92_star_p0"].into_iter().collect();
    assert_eq!(
        mismatch_names, expected_mismatches,
        "ACCEPTANCE 07 FAIL — dimension mismatches {mismatch_names:?}, expected exactly {expected_mismatches:?}"
    );
    for (name, _, _, _) in &mismatches {
        let e = cat.get_entry(name).expect("entry");
        assert!(
            e.notes().iter().any(|n| n.contains("dimension")),
            "ACCEPTANCE 07 FAIL — mismatch {name} lacks a documenting note"
        );
    }

    let pin = |name: &str, want: usize| {
        let row = results.iter().find(|(n, _, _, _)| n == name).expect("in scope");
        assert!(
            row.1 && row.2 == want,
            "ACCEPTANCE 07 FAIL — {name}: continuous parameters {} (want {want}), match {}",
            row.2,
            row.1
        );
    };
    pin("g_6_1", 10);
    pin("g_6_91", 8);
    pin("A_6_3", 18);

    let matching = results.iter().filter(|(_, ok, _, _)| *ok).count();
    assert!(
        matching >= 13,
        "ACCEPTANCE 07 FAIL — only {matching} entries match (need at least 13)"
    );
    println!(
        "ACCEPTANCE 07 PASS — {matching}/{} families match the derivation dimension at every sample; 3 documented mismatches",
        scope.len()
    );
}

// ---------------------------------------------------------------------------
// 08 — Killing form: zero on the nilpotent table, always in the invariant span
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_killing_form_zero_on_table3_and_always_in_span() {
    let _g = heavy_guard();
    let cat = catalog();
    let mut table3 = 0usize;
    for e in cat.entries() {
        if e.family() != Family::Table3 {
            continue;
        }
        table3 += 1;
        for env in e.sample_envs() {
            let t = e.tensor_at(env).expect("entry evaluates");
            assert!(
                t.killing_form().is_zero(),
                "ACCEPTANCE 08 FAIL — {}: Killing form nonzero on a nilpotent entry",
                e.name()
            );
        }
    }
    assert_eq!(table3, 22, "ACCEPTANCE 08 FAIL — expected 22 table3 entries, found {table3}");

    let entries: Vec<&CatalogEntry> = cat.entries().iter().collect();
    let failures: Vec<String> = par_map(&entries, |e| {
        let mut out = Vec::new();
        for (k, env) in e.sample_envs().iter().enumerate() {
            let t = e.tensor_at(env).expect("entry evaluates");
            let killing = t.killing_form();
            let mb = metric_basis(&t);
            if in_span(&killing, mb.basis()).is_none() {
                out.push(format!("{} sample {k}", e.name()));
            }
        }
        out
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(
        failures.is_empty(),
        "ACCEPTANCE 08 FAIL — Killing form outside the invariant span at: {failures:?}"
    );
    println!(
        "ACCEPTANCE 08 PASS — Killing form zero on all 22 nilpotent entries and inside the invariant span everywhere"
    );
}

// ---------------------------------------------------------------------------
// 09 — exponentials of nilpotent derivations are exact automorphisms
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_nilpotent_derivation_exponentials_are_automorphisms() {
    let _g = heavy_guard();
    let cat = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nonzero_rat = |lo: i64, hi: i64| -> Rat {
        let mut p = 0i64;
        while p == 0 {
            p = rng.gen_range(lo..=hi);
        }
        ratio(p, rng.gen_range(1..=hi))
    };
    let mut collected = 0usize;
    'entries: for e in cat.entries() {
        let env = &e.sample_envs()[0];
        let t = e.tensor_at(env).expect("entry evaluates");
        let db = derivation_basis(&t);
        if db.dim() == 0 {
            continue;
        }
        let mut candidates: Vec<RatMatrix> = Vec::new();
        for _ in 0..2 {
            let mut combo = RatMatrix::zeros(6, 6);
            for b in db.basis() {
                combo = combo.add(&b.scale(&nonzero_rat(-9, 9))).expect("same shape");
            }
            candidates.push(combo);
        }
        for b in db.basis() {
            candidates.push(b.scale(&nonzero_rat(-9, 9)));
        }
        let mut taken = 0usize;
        for d in candidates {
            let Ok(expd) = exp_nilpotent(&d) else { continue };
            let rep = verify_automorphism(&t, &expd);
            assert!(
                rep.is_pass(),
                "ACCEPTANCE 09 FAIL — {}: exp of a nilpotent derivation violates the product rule, first residual {:?}",
                e.name(),
                rep.residuals.first()
            );
            assert!(
                expd.inverse().is_some(),
                "ACCEPTANCE 09 FAIL — {}: exponential not invertible",
                e.name()
            );
            collected += 1;
            taken += 1;
            if collected == 20 {
                break 'entries;
            }
            if taken == 2 {
                break;
            }
        }
    }
    assert_eq!(
        collected, 20,
        "ACCEPTANCE 09 FAIL — found only {collected} nilpotent derivation exponentials"
    );
    println!(
        "ACCEPTANCE 09 PASS — 20 seeded nilpotent-derivation exponentials verify as exact automorphisms"
    );
}

// ---------------------------------------------------------------------------
// 10 — both verifier formulations agree on pass/fail and on violation sets
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_both_verifier_formulations_agree_on_1000_pairs() {
    let _g = heavy_guard();
    let cat = catalog();
    let entries = cat.entries();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random_matrix = |rng: &mut ChaCha8Rng| {
        RatMatrix::from_fn(6, 6, |_, _| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=5)))
    };
    let mut passes = 0usize;
    let mut fails = 0usize;
    for n in 0..1000usize {
        let e = &entries[n % entries.len()];
        let mut env = e.sample_envs()[n % e.sample_envs().len()].clone();
        let fam = e.automorphism().map(|enc| enc.family());
        let matrix = match n % 4 {
            0 => RatMatrix::identity(6),
            1 | 3 => match fam {
                Some(fam) => {
                    let fenv = &fam.sample_envs()[n % fam.sample_envs().len()];
                    env = fenv.clone();
                    let mut m = fam.instantiate(fenv).expect("shipped sample instantiates");
                    if n % 4 == 3 {
                        // Deliberately damage one cell of a genuine instance.
                        let (r, c) = (rng.gen_range(0..6), rng.gen_range(0..6));
                        let bumped = m.at(r, c) + rat(1);
                        m.set(r, c, bumped);
                    }
                    m
                }
                None => random_matrix(&mut rng),
            },
            _ => random_matrix(&mut rng),
        };
        let t = e.tensor_at(&env).expect("entry evaluates");
        let direct = verify_automorphism(&t, &matrix);
        let adjoint = verify_automorphism_adjoint(&t, &matrix);
        assert_eq!(
            direct.is_pass(),
            adjoint.is_pass(),
            "ACCEPTANCE 10 FAIL — pair {n} ({}): verdicts disagree",
            e.name()
        );
        assert_eq!(
            direct.residuals, adjoint.residuals,
            "ACCEPTANCE 10 FAIL — pair {n} ({}): violation sets differ",
            e.name()
        );
        if direct.is_pass() {
            passes += 1;
        } else {
            fails += 1;
        }
    }
    assert!(
        fails > 100,
        "ACCEPTANCE 10 FAIL — only {fails} non-automorphism pairs (need > 100 for coverage)"
    );
    assert!(
        passes > 100,
        "ACCEPTANCE 10 FAIL — only {passes} automorphism pairs (need > 100 for coverage)"
    );
    println!(
        "ACCEPTANCE 10 PASS — both formulations agree on 1000 pairs ({passes} pass / {fails} fail) with identical violation sets"
    );
}
