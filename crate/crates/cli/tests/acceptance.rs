//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use fmkit::compare::compare_models;
use fmkit::corpus::{
    corpus_annotation_audit, lte_advanced_model, manifest_rows, stub_legacy_model,
    STUB_REUSED_NAMES,
};
use fmkit::model::{FeatureModel, FeaturePath};
use fmkit::ontology::{class_names, emit_dot, emit_fmx, to_ontology, RelationKind};
use fmkit::semantics::{
    analyze, count_by_tree_product, count_configurations, enumerate_configurations,
    validate_configuration, Configuration,
};
use fmkit::testkit::{random_model, rng, GenParams, Oracle, TestRng};
use fmkit::{parse_model, serialize_model, ConfigCount};
use num_traits::One;
use rand::Rng;

const ORACLE_MODELS: usize = 500;
const ORACLE_MAX_FEATURES: usize = 20;
const ORACLE_MAX_CONSTRAINTS: usize = 3;
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(60);
/// Models up to this size are filtered through `validate_configuration`
/// on every subset; larger ones on enumerated and sampled subsets.
const FULL_FILTER_MAX_FEATURES: usize = 12;
const SAMPLED_SUBSETS: usize = 2_000;
const TREE_PRODUCT_MODELS: usize = 200;
const ROUND_TRIP_MODELS: usize = 300;
const ONTOLOGY_MODELS: usize = 200;
const COMPARE_PAIRS: usize = 100;
const TABLE_ROWS: usize = 59;
const SEED: u64 = 0x5EED_F00D;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn parse(src: &str) -> FeatureModel {
    parse_model(&format!("model \"M\" {{ {src} }}")).expect("fixture parses")
}

fn config(paths: &[&str]) -> Configuration {
    paths.iter().copied().collect()
}

/// 1. Relation semantics on 2 to 5 feature models.
fn relation_semantics() -> Verdict {
    let cases: &[(&str, &str, &[&str], bool)] = &[
        (
            "mandatory child is in every product",
            "feature R { mandatory feature A }",
            &["R", "R.A"],
            true,
        ),
        (
            "mandatory child cannot be left out",
            "feature R { mandatory feature A }",
            &["R"],
            false,
        ),
        (
            "mandatory below optional",
            "feature R { optional feature P { mandatory feature Q } }",
            &["R", "R.P"],
            false,
        ),
        (
            "mandatory below optional, both in",
            "feature R { optional feature P { mandatory feature Q } }",
            &["R", "R.P", "R.P.Q"],
            true,
        ),
        (
            "mandatory below optional, both out",
            "feature R { optional feature P { mandatory feature Q } }",
            &["R"],
            true,
        ),
        (
            "optional child may be left out",
            "feature R { optional feature A }",
            &["R"],
            true,
        ),
        (
            "optional child may be included",
            "feature R { optional feature A }",
            &["R", "R.A"],
            true,
        ),
        (
            "optional child needs its parent",
            "feature R { optional feature A { optional feature B } }",
            &["R", "R.A.B"],
            false,
        ),
        (
            "alternative: one member",
            "feature R { alt { feature A feature B feature C } }",
            &["R", "R.B"],
            true,
        ),
        (
            "alternative: no member",
            "feature R { alt { feature A feature B feature C } }",
            &["R"],
            false,
        ),
        (
            "alternative: two members",
            "feature R { alt { feature A feature B feature C } }",
            &["R", "R.A", "R.C"],
            false,
        ),
        (
            "alternative: all members",
            "feature R { alt { feature A feature B feature C } }",
            &["R", "R.A", "R.B", "R.C"],
            false,
        ),
        (
            "alternative under unselected optional",
            "feature R { optional feature P { alt { feature A feature B } } }",
            &["R"],
            true,
        ),
        (
            "alternative member without parent",
            "feature R { optional feature P { alt { feature A feature B } } }",
            &["R", "R.P.A"],
            false,
        ),
        (
            "or: one member",
            "feature R { or { feature A feature B } }",
            &["R", "R.A"],
            true,
        ),
        (
            "or: both members",
            "feature R { or { feature A feature B } }",
            &["R", "R.A", "R.B"],
            true,
        ),
        (
            "or: no member",
            "feature R { or { feature A feature B } }",
            &["R"],
            false,
        ),
        (
            "or: three of four",
            "feature R { or { feature A feature B feature C feature D } }",
            &["R", "R.A", "R.C", "R.D"],
            true,
        ),
        (
            "root is always selected",
            "feature R { optional feature A }",
            &["R.A"],
            false,
        ),
    ];
    let counts: &[(&str, u32)] = &[
        ("feature R { mandatory feature A }", 1),
        ("feature R { optional feature A }", 2),
        ("feature R { alt { feature A feature B feature C } }", 3),
        ("feature R { or { feature A feature B feature C } }", 7),
        (
            "feature R { or { feature A feature B feature C feature D } }",
            15,
        ),
        (
            "feature R { optional feature P { alt { feature A feature B } } mandatory feature Q }",
            3,
        ),
    ];
    for (what, src, sel, expected) in cases {
        let m = parse(src);
        let got = validate_configuration(&m, &config(sel))
            .map_err(|e| e.to_string())?
            .valid();
        check(got == *expected, || {
            format!("{what}: expected valid={expected}")
        })?;
    }
    for (src, n) in counts {
        let got = count_configurations(&parse(src)).map_err(|e| e.to_string())?;
        check(got == ConfigCount::from(*n), || {
            format!("{src}: count {got}, expected {n}")
        })?;
    }
    Ok(format!(
        "{} validity cases, {} counts",
        cases.len(),
        counts.len()
    ))
}

fn filtered_brute_force(m: &FeatureModel, o: &Oracle, r: &mut TestRng) -> Result<(), String> {
    let n = o.len();
    let agree = |mask: u64| -> Result<(), String> {
        let set: Configuration = o.to_set(mask).into_iter().collect();
        let valid = validate_configuration(m, &set)
            .map_err(|e| e.to_string())?
            .valid();
        check(valid == o.is_valid(mask), || {
            format!("subset {mask:b} disagrees")
        })
    };
    if n <= FULL_FILTER_MAX_FEATURES {
        for mask in 0..1u64 << n {
            agree(mask)?;
        }
    } else {
        for _ in 0..SAMPLED_SUBSETS {
            agree(r.gen_range(0..1u64 << n))?;
        }
    }
    Ok(())
}

/// 2. Enumeration and counting against brute force.
fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut r = rng(SEED);
    let mut sample = rng(SEED ^ 1);
    let mut total = 0u64;
    for i in 0..ORACLE_MODELS {
        let m = random_model(
            &mut r,
            GenParams::new(ORACLE_MAX_FEATURES, ORACLE_MAX_CONSTRAINTS),
        );
        let o = Oracle::new(&m);
        let truth = o.solve();
        filtered_brute_force(&m, &o, &mut sample).map_err(|e| format!("model {i}: {e}"))?;
        let e = enumerate_configurations(&m, usize::MAX).map_err(|e| e.to_string())?;
        let got: Vec<BTreeSet<FeaturePath>> =
            e.configurations.iter().map(|c| c.paths().clone()).collect();
        check(got == truth.configurations, || {
            format!("model {i}: enumeration differs")
        })?;
        for c in &e.configurations {
            let ok = validate_configuration(&m, c)
                .map_err(|e| e.to_string())?
                .valid();
            check(ok, || format!("model {i}: enumerated {c} is invalid"))?;
        }
        let count = count_configurations(&m).map_err(|e| e.to_string())?;
        check(count == ConfigCount::from(truth.count), || {
            format!("model {i}: count {count}, brute force {}", truth.count)
        })?;
        total += truth.count;
    }
    let elapsed = start.elapsed();
    check(elapsed < ORACLE_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{ORACLE_MODELS} models, {total} configurations, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

/// 3. Tree product on constraint-free models.
fn counting_formula() -> Verdict {
    let mut r = rng(SEED ^ 3);
    for i in 0..TREE_PRODUCT_MODELS {
        let m = random_model(&mut r, GenParams::constraint_free(ORACLE_MAX_FEATURES));
        let truth = Oracle::new(&m).solve().count;
        let fast: ConfigCount = count_by_tree_product(&m);
        check(fast == ConfigCount::from(truth), || {
            format!("model {i}: tree product {fast}, brute force {truth}")
        })?;
    }
    Ok(format!("{TREE_PRODUCT_MODELS} models"))
}

/// 4. Parse and serialize are inverse.
fn dsl_round_trip() -> Verdict {
    let mut r = rng(SEED ^ 4);
    let mut models: Vec<FeatureModel> = (0..ROUND_TRIP_MODELS)
        .map(|_| random_model(&mut r, GenParams::new(30, 4)))
        .collect();
    models.push(lte_advanced_model());
    models.push(stub_legacy_model());
    for (i, m) in models.iter().enumerate() {
        let text = serialize_model(m);
        let back = parse_model(&text).map_err(|e| format!("model {i}: {e}"))?;
        check(back.structurally_eq(m), || {
            format!("model {i}: structure changed")
        })?;
        check(serialize_model(&back) == text, || {
            format!("model {i}: canonical text changed")
        })?;
    }
    Ok(format!("{} models including the corpus", models.len()))
}

/// 5. Corpus transcription.
fn corpus_fidelity() -> Verdict {
    let m = lte_advanced_model();
    check(m.len() == TABLE_ROWS, || format!("{} features", m.len()))?;
    check(manifest_rows().len() == TABLE_ROWS, || {
        "manifest row count".into()
    })?;
    let audit = corpus_annotation_audit();
    check(audit.is_empty(), || format!("audit: {audit:?}"))?;
    for name in ["NAS", "AS", "PDCP", "RLC", "MAC", "PHY"] {
        let paths: BTreeSet<_> = m
            .features()
            .filter(|f| f.name() == name)
            .map(|f| f.path().clone())
            .collect();
        check(paths.len() == 2, || {
            format!("{name}: {} distinct paths", paths.len())
        })?;
    }
    Ok(format!("{TABLE_ROWS} features, audit empty"))
}

/// 6. Analysis of the corpus.
fn corpus_analysis() -> Verdict {
    let r = analyze(&lte_advanced_model()).map_err(|e| e.to_string())?;
    let p = FeaturePath::new;
    for core in ["Architecture", "Architecture.Physical_A"] {
        check(r.core.contains(&p(core)), || format!("{core} not core"))?;
    }
    check(r.dead.is_empty(), || format!("dead: {:?}", r.dead))?;
    for leaf in [
        "Architecture.Functional_A.Sec_measures.Confidentiality.SNOW",
        "Architecture.Functional_A.Sec_measures.Confidentiality.AES",
        "Architecture.Functional_A.Sec_measures.Integrity.Chunk_cheksum",
        "Architecture.Functional_A.Sec_measures.Integrity.f8",
    ] {
        check(
            !r.core.contains(&p(leaf)) && !r.dead.contains(&p(leaf)),
            || format!("{leaf} is core or dead"),
        )?;
    }
    Ok(format!(
        "{} configurations, {} core",
        r.total_valid_configurations,
        r.core.len()
    ))
}

fn ontology_identities(m: &FeatureModel) -> Result<(), String> {
    let s = m.stats();
    let o = to_ontology(m);
    check(
        o.classes.len() == s.feature_count + s.alternative_groups + s.or_groups,
        || format!("{} classes", o.classes.len()),
    )?;
    check(
        o.count(RelationKind::Composition) == s.mandatory + s.alternative_groups,
        || "composition edge count".into(),
    )?;
    let names: BTreeSet<_> = class_names(m).into_values().collect();
    check(names.len() == m.len(), || {
        "feature to class map is not injective".into()
    })?;
    let again = to_ontology(m);
    check(emit_fmx(&o) == emit_fmx(&again), || {
        "fmx differs between runs".into()
    })?;
    check(emit_dot(&o) == emit_dot(&again), || {
        "dot differs between runs".into()
    })
}

/// 7. Ontology structure.
fn ontology() -> Verdict {
    ontology_identities(&lte_advanced_model()).map_err(|e| format!("corpus: {e}"))?;
    let mut r = rng(SEED ^ 7);
    for i in 0..ONTOLOGY_MODELS {
        let m = random_model(&mut r, GenParams::new(25, 3));
        ontology_identities(&m).map_err(|e| format!("model {i}: {e}"))?;
    }
    Ok(format!("corpus and {ONTOLOGY_MODELS} models"))
}

/// 8. Comparison.
fn comparison() -> Verdict {
    for m in [lte_advanced_model(), stub_legacy_model()] {
        let r = compare_models(&m, &m, None).map_err(|e| e.to_string())?;
        check(r.commonality_index().is_one(), || {
            format!("{} self index", m.name())
        })?;
    }
    let mut r = rng(SEED ^ 8);
    for i in 0..COMPARE_PAIRS {
        let a = random_model(&mut r, GenParams::new(20, 2));
        let b = random_model(&mut r, GenParams::new(20, 2));
        let ab = compare_models(&a, &b, None).map_err(|e| e.to_string())?;
        let ba = compare_models(&b, &a, None).map_err(|e| e.to_string())?;
        check(ab.mirrored() == ba, || format!("pair {i} not mirrored"))?;
        check(
            compare_models(&a, &a, None)
                .unwrap()
                .commonality_index()
                .is_one(),
            || format!("pair {i}: self index"),
        )?;
    }
    let r = compare_models(&lte_advanced_model(), &stub_legacy_model(), None)
        .map_err(|e| e.to_string())?;
    let names: BTreeSet<&str> = r.common.iter().map(|p| p.a.leaf()).collect();
    let expected: BTreeSet<&str> = STUB_REUSED_NAMES.into_iter().collect();
    check(names == expected, || format!("common names {names:?}"))?;
    Ok(format!("{COMPARE_PAIRS} pairs, stub shares {names:?}"))
}

struct Run {
    code: i32,
    stdout: String,
}

fn fmkit(args: &[&str], env_bound: Option<&str>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fmkit"));
    cmd.args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("FMKIT_COUNT_BOUND")
        .stdin(Stdio::null());
    if let Some(b) = env_bound {
        cmd.env("FMKIT_COUNT_BOUND", b);
    }
    let out = cmd.output().expect("run fmkit");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
    }
}

/// 9. Command-line contract.
fn cli_contract() -> Verdict {
    let table: &[(&[&str], Option<&str>, i32)] = &[
        (&["count", "--corpus", "lte-advanced"], None, 0),
        (&["check", "--corpus", "lte-advanced"], None, 0),
        (&["check", "tests/fixtures/dup.fm"], None, 1),
        (
            &[
                "config",
                "validate",
                "--corpus",
                "lte-advanced",
                "--select",
                "Architecture",
            ],
            None,
            1,
        ),
        (&["analyze", "tests/fixtures/void.fm"], None, 1),
        (&["check", "missing_file.fm"], None, 2),
        (&["check", "tests/fixtures/syntax.fm"], None, 2),
        (&["count", "--bogus"], None, 2),
        (&["count", "--corpus", "lte-advanced"], Some("3"), 3),
    ];
    for (args, bound, code) in table {
        let got = fmkit(args, *bound).code;
        check(got == *code, || {
            format!("{args:?}: exit {got}, expected {code}")
        })?;
    }
    let goldens: &[(&str, &[&str])] = &[
        (
            "count_lte.json",
            &["--json", "count", "--corpus", "lte-advanced"],
        ),
        (
            "stats_lte.json",
            &["--json", "stats", "--corpus", "lte-advanced"],
        ),
        (
            "analyze_stub.json",
            &["--json", "analyze", "--corpus", "stub-legacy"],
        ),
        (
            "check_dup.json",
            &["--json", "check", "tests/fixtures/dup.fm"],
        ),
        ("corpus_list.json", &["--json", "corpus", "list"]),
    ];
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (file, args) in goldens {
        let expected =
            std::fs::read_to_string(dir.join(file)).map_err(|e| format!("{file}: {e}"))?;
        let got = fmkit(args, None).stdout;
        check(got == expected, || format!("{file} differs"))?;
        check(fmkit(args, None).stdout == got, || {
            format!("{file} not byte-stable")
        })?;
    }
    Ok(format!(
        "{} exit codes, {} goldens",
        table.len(),
        goldens.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("relation semantics", relation_semantics),
        ("oracle equivalence", oracle_equivalence),
        ("counting formula", counting_formula),
        ("dsl round trip", dsl_round_trip),
        ("corpus fidelity", corpus_fidelity),
        ("corpus analysis", corpus_analysis),
        ("ontology identities", ontology),
        ("comparison properties", comparison),
        ("cli contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
