//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use kjdeps::cli::parse_args;
use kjdeps::harness::{compare, GroundTruth};
use kjdeps::model::{RelationKind, SourceLanguage};
use kjdeps::pipeline::{analyze, discover_sources, run_pipeline, AnalysisOutcome, StageTimings};
use kjdeps::registry::LanguageRegistry;
use kjdeps::resolver::InferenceConfig;

const CORPUS: &str = "fixtures/corpus";
const TRUTH: &str = "fixtures/corpus_truth.json";

fn extract_corpus(config: &InferenceConfig) -> AnalysisOutcome {
    let registry = LanguageRegistry::with_default_processors();
    let processors = registry.processors_for_request("kotlin").unwrap();
    let files = discover_sources(Path::new(CORPUS), &[], false, &processors).unwrap();
    assert!(!files.is_empty(), "fixture corpus must not be empty");
    analyze(&registry, "kotlin", &files, config).unwrap()
}

fn qn(outcome: &AnalysisOutcome, name: &str) -> kjdeps::model::EntityId {
    outcome
        .tree
        .by_qualified_name(name)
        .unwrap_or_else(|| panic!("corpus entity `{name}` missing"))
}

fn pass(number: u32, label: &str) {
    println!("acceptance criterion {number:02} ({label}): PASS");
}

#[test]
fn c01_taxonomy_coverage_with_perfect_oracle_scores() {
    let start = Instant::now();
    let outcome = extract_corpus(&InferenceConfig::default());
    let truth = GroundTruth::load(Path::new(TRUTH)).unwrap();
    let report = compare(&outcome.store, &outcome.tree, &truth);
    let elapsed = start.elapsed();

    let kinds: BTreeSet<RelationKind> = outcome.store.iter().map(|r| r.kind).collect();
    for kind in RelationKind::ALL {
        assert!(
            kinds.contains(&kind),
            "no {kind} relation extracted from the corpus"
        );
    }
    assert_eq!(kinds.len(), 13);
    assert_eq!(
        report.precision,
        Some(1.0),
        "precision below 1.0; notFound relations: {}",
        report.not_found
    );
    assert_eq!(
        report.recall,
        Some(1.0),
        "recall below 1.0; missed: {}",
        report.missed
    );
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "corpus extraction took {elapsed:?}"
    );
    pass(1, "taxonomy coverage, precision=recall=1.0, <5s");
}

#[test]
fn c02_receiver_lambda_semantics() {
    let outcome = extract_corpus(&InferenceConfig::default());
    let caller = qn(&outcome, "Foo.calculateInFoo");
    let bar_x = qn(&outcome, "Bar.x");
    let foo_x = qn(&outcome, "Foo.x");
    assert!(
        outcome
            .store
            .get(caller, bar_x, RelationKind::Use)
            .is_some(),
        "missing Use(Foo.calculateInFoo -> Bar.x)"
    );
    assert!(
        outcome
            .store
            .get(caller, foo_x, RelationKind::Use)
            .is_none(),
        "spurious Use(Foo.calculateInFoo -> Foo.x)"
    );
    pass(2, "bare x inside the receiver lambda is Bar.x, not Foo.x");
}

#[test]
fn c03_java_to_kotlin_accessor_bridging() {
    let outcome = extract_corpus(&InferenceConfig::default());
    let caller = qn(&outcome, "FooJava.func");
    // Synthetic accessors live outside the qualified-name index; reach
    // the getter through its owning class.
    let bar_kotlin = qn(&outcome, "BarKotlin");
    let getter = outcome
        .tree
        .children(bar_kotlin)
        .iter()
        .copied()
        .find(|&c| outcome.tree.entity(c).name == "getX")
        .expect("BarKotlin has a synthetic getX");
    let relation = outcome
        .store
        .get(caller, getter, RelationKind::Call)
        .expect("missing Call(FooJava.func -> BarKotlin.getX)");
    assert_eq!(
        relation.language_pair,
        (SourceLanguage::Java, SourceLanguage::Kotlin)
    );
    assert!(outcome.tree.entity(getter).is_synthetic);
    assert_eq!(
        outcome.tree.accessor_property(getter),
        Some(qn(&outcome, "BarKotlin.x"))
    );
    pass(
        3,
        "Java call lands on the synthetic getter with pair (java, kotlin)",
    );
}

#[test]
fn c04_language_pair_partition() {
    let outcome = extract_corpus(&InferenceConfig::default());
    let legal = [
        (SourceLanguage::Kotlin, SourceLanguage::Kotlin),
        (SourceLanguage::Kotlin, SourceLanguage::Java),
        (SourceLanguage::Java, SourceLanguage::Kotlin),
        (SourceLanguage::Java, SourceLanguage::Java),
    ];
    let mut seen = BTreeSet::new();
    for relation in outcome.store.iter() {
        assert!(
            legal.contains(&relation.language_pair),
            "relation carries pair {:?}",
            relation.language_pair
        );
        seen.insert(relation.language_pair);
        if relation.kind.kotlin_only_source() {
            assert_ne!(
                outcome.tree.entity(relation.source).language,
                SourceLanguage::Java,
                "Java-sourced {} relation",
                relation.kind
            );
        }
    }
    assert_eq!(
        seen.len(),
        4,
        "corpus should exercise all four language pairs"
    );
    pass(
        4,
        "every relation carries one of the four pairs; no J-sourced Delegate/Extension",
    );
}

#[test]
fn c05_inference_fixpoint_on_the_chained_call() {
    let one = extract_corpus(&InferenceConfig { max_rounds: 1 });
    let consume = qn(&one, "corpus.ChainUser.consume");
    let advance = qn(&one, "corpus.Step.advance");
    let make_step = qn(&one, "corpus.makeStep");
    assert!(
        one.store
            .get(consume, advance, RelationKind::Call)
            .is_none(),
        "chained call should be unresolved after round 1"
    );
    assert!(one
        .store
        .get(consume, make_step, RelationKind::Call)
        .is_some());

    let two = extract_corpus(&InferenceConfig { max_rounds: 2 });
    let consume2 = qn(&two, "corpus.ChainUser.consume");
    let advance2 = qn(&two, "corpus.Step.advance");
    assert!(
        two.store
            .get(consume2, advance2, RelationKind::Call)
            .is_some(),
        "chained call should resolve by round 2"
    );

    let full = extract_corpus(&InferenceConfig::default());
    assert!(full.rounds_used <= 5, "rounds used: {}", full.rounds_used);
    let extra = extract_corpus(&InferenceConfig {
        max_rounds: full.rounds_used + 1,
    });
    assert_eq!(
        extra.store.len(),
        full.store.len(),
        "extra round changed the relation set"
    );
    assert_eq!(
        extra.store.total_weight(),
        full.store.total_weight(),
        "extra round changed relation weights"
    );
    pass(5, "round-2 resolution, quiet extra round, rounds <= 5");
}

#[test]
fn c06_extension_on_a_builtin_receiver() {
    let outcome = extract_corpus(&InferenceConfig::default());
    let twice = qn(&outcome, "corpus.twice");
    let int = outcome.tree.builtin("Int").unwrap();
    let run = qn(&outcome, "corpus.ExtensionUser.run");
    assert!(
        outcome
            .store
            .get(twice, int, RelationKind::Extension)
            .is_some(),
        "missing Extension(twice -> Int)"
    );
    assert!(
        outcome.store.get(run, twice, RelationKind::Call).is_some(),
        "missing Call(run -> twice) through the literal receiver"
    );
    pass(
        6,
        "Extension(twice -> Int) and the 3.twice() call site both resolve",
    );
}

#[test]
fn c07_byte_identical_outputs_across_runs() {
    let render = |tag: &str| -> Vec<(String, Vec<u8>)> {
        let dir =
            std::env::temp_dir().join(format!("kjdeps-determinism-{tag}-{}", std::process::id()));
        let mut collected = Vec::new();
        for (format, granularity, name) in [
            ("json", "structure", "detail"),
            ("json", "file", "matrix"),
            ("dot", "file", "graph"),
        ] {
            let request = parse_args([
                "kotlin",
                CORPUS,
                name,
                "-d",
                dir.to_str().unwrap(),
                "-f",
                format,
                "-g",
                granularity,
                "-m",
            ])
            .unwrap();
            let report = run_pipeline(&request).unwrap();
            for output in report.outputs {
                collected.push((
                    output.file_name().unwrap().to_string_lossy().to_string(),
                    std::fs::read(&output).unwrap(),
                ));
            }
        }
        std::fs::remove_dir_all(&dir).ok();
        collected
    };
    let first = render("a");
    let second = render("b");
    assert_eq!(first.len(), second.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in first.iter().zip(second.iter()) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "output `{name_a}` differs between runs");
    }
    pass(
        7,
        "detail, matrix, graph, and map outputs are byte-identical across runs",
    );
}

#[test]
fn c08_precision_recall_arithmetic() {
    use kjdeps::model::{EntityKind, EntityProto, EntityTree, RelationStore, UseSite};

    let mut tree = EntityTree::with_builtins();
    let mut ids = Vec::new();
    for i in 0..14 {
        ids.push(
            tree.intern(EntityProto::new(
                format!("f{i}"),
                EntityKind::Function,
                SourceLanguage::Kotlin,
            ))
            .unwrap(),
        );
    }
    let mut records = Vec::new();
    for i in 0..12 {
        records.push(kjdeps::harness::TruthRecord {
            source_qualified_name: format!("f{i}"),
            target_qualified_name: format!("f{}", i + 1),
            kind: RelationKind::Call,
            language_pair: ("kotlin".to_string(), "kotlin".to_string()),
        });
    }
    let truth = GroundTruth::from_records(records).unwrap();
    let mut store = RelationStore::new();
    for i in 0..9 {
        store
            .record(
                &tree,
                ids[i],
                ids[i + 1],
                RelationKind::Call,
                UseSite {
                    path: "x.kt".to_string(),
                    line: i as u32 + 1,
                },
            )
            .unwrap();
    }
    store
        .record(
            &tree,
            ids[12],
            ids[13],
            RelationKind::Call,
            UseSite {
                path: "x.kt".to_string(),
                line: 99,
            },
        )
        .unwrap();
    let report = compare(&store, &tree, &truth);
    assert_eq!((report.found, report.not_found, report.missed), (9, 1, 3));
    assert!((report.precision.unwrap() - 0.900).abs() < 1e-9);
    assert!((report.recall.unwrap() - 0.750).abs() < 1e-9);
    pass(
        8,
        "found 9 / notFound 1 / missed 3 gives precision 0.900, recall 0.750",
    );
}

#[test]
fn c09_cli_contract_and_stage_names() {
    let request = parse_args(["kotlin", "./sqlex", "result", "-d", "./out"]).unwrap();
    assert_eq!(request.lang, "kotlin");
    assert_eq!(request.src, PathBuf::from("./sqlex"));
    assert_eq!(request.output, "result");
    assert_eq!(request.output_dir, PathBuf::from("./out"));

    let err = parse_args(["kotlin"]).unwrap_err();
    assert!(
        err.use_stderr(),
        "missing positionals must exit nonzero with usage"
    );
    let rendered = err.to_string();
    assert!(
        rendered.to_lowercase().contains("usage"),
        "error output carries usage text"
    );

    let dir = std::env::temp_dir().join(format!("kjdeps-cli-{}", std::process::id()));
    let request = parse_args(["kotlin", CORPUS, "timing", "-d", dir.to_str().unwrap()]).unwrap();
    let report = run_pipeline(&request).unwrap();
    let timing = report.timings.render();
    for stage in StageTimings::STAGE_NAMES {
        assert!(
            timing.contains(stage),
            "timing report misses stage `{stage}`"
        );
    }
    assert!(timing.contains("Total:"));
    std::fs::remove_dir_all(&dir).ok();
    pass(
        9,
        "appendix invocation maps onto the request; all four stages reported",
    );
}

#[test]
fn c10_weight_aggregation_for_repeated_calls() {
    let outcome = extract_corpus(&InferenceConfig::default());
    let pump = qn(&outcome, "corpus.FlowRunner.pump");
    let encode = qn(&outcome, "corpus.jlib.Codec.encode");
    let relation = outcome
        .store
        .get(pump, encode, RelationKind::Call)
        .expect("missing Call(pump -> encode)");
    assert_eq!(
        relation.weight, 3,
        "three call sites should aggregate to weight 3"
    );
    assert_eq!(relation.locations.len(), 3);
    let lines: BTreeSet<u32> = relation.locations.iter().map(|l| l.line).collect();
    assert_eq!(lines.len(), 3, "each occurrence keeps its own location");
    pass(
        10,
        "triple call collapses to one relation with weight 3 and 3 locations",
    );
}
