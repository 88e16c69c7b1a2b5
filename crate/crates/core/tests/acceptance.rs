//! Acceptance gate: one test per release criterion, each ending in a single
//! `criterion N … PASS` line. A failure in any test here means the build is
//! not releasable.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use citgen::generator::{
    choose_neighborhood, initial_solution, Neighborhood, Phase, DEFAULT_NEIGHBORHOOD_WEIGHTS,
};
use citgen::model::{t_tuples_of, Assignment};
use citgen::parser::{Clause, Literal};
use citgen::{
    close_tuples, enumerate_coverable_tuples, generate, parse_model, verify_suite,
    CombinationMatrix, ForbiddenTupleSet, GeneratorConfig, ModelFile, ParameterSpace,
    PartialTuple, Strength,
};

const SURFACE_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../samples/surface.cit");
const UNSAT_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/unsat.cit");

fn surface_model() -> ModelFile {
    let text = std::fs::read_to_string(SURFACE_PATH).expect("sample model file");
    parse_model(&text).expect("sample model parses")
}

fn tuple(pairs: &[(usize, usize)]) -> PartialTuple {
    PartialTuple::from_assignments(pairs.iter().map(|&(p, v)| Assignment::new(p, v)).collect())
        .unwrap()
}

/// A deterministic pseudo-random constrained model with at most 8 parameters
/// of 2–4 values and a handful of CNF clauses.
fn random_model(seed: u64) -> ModelFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(3..=8);
    let parameters: Vec<(String, Vec<String>)> = (0..k)
        .map(|p| {
            let n = rng.random_range(2..=4);
            (format!("p{p}"), (0..n).map(|v| format!("v{v}")).collect())
        })
        .collect();
    let space = ParameterSpace::new(parameters).unwrap();
    let clause_count = rng.random_range(1..=5);
    let clauses: Vec<Clause> = (0..clause_count)
        .map(|_| {
            let width = rng.random_range(1..=3);
            let literals: Vec<Literal> = (0..width)
                .map(|_| {
                    let parameter = rng.random_range(0..k);
                    let value = rng.random_range(0..space.domain_size(parameter));
                    Literal { parameter, value }
                })
                .collect();
            Clause::new(literals).unwrap()
        })
        .collect();
    ModelFile::new(space, clauses).unwrap()
}

/// The first `count` satisfiable random models drawn from `first_seed` up.
fn satisfiable_random_models(first_seed: u64, count: usize) -> Vec<(u64, ModelFile)> {
    let mut out = Vec::new();
    let mut seed = first_seed;
    while out.len() < count {
        let model = random_model(seed);
        if close_tuples(&model).is_ok() {
            out.push((seed, model));
        }
        seed += 1;
    }
    out
}

/// ≥ 10 desk-scale models with their strengths: the reference model at t=2
/// and t=3, an unconstrained 3^4, a mixed-level 2^3·3^2·4, and seven
/// seeded random constrained models with ≤ 8 parameters.
fn corpus() -> Vec<(String, ModelFile, usize)> {
    let mut corpus: Vec<(String, ModelFile, usize)> = vec![
        ("surface t=2".into(), surface_model(), 2),
        ("surface t=3".into(), surface_model(), 3),
        (
            "unconstrained 3^4 t=2".into(),
            parse_model("PARAMETERS\na[0, 1, 2]\nb[0, 1, 2]\nc[0, 1, 2]\nd[0, 1, 2]\n").unwrap(),
            2,
        ),
        (
            "mixed-level 2^3 3^2 4 t=2".into(),
            parse_model(
                "PARAMETERS\na[0, 1]\nb[0, 1]\nc[0, 1]\nd[0, 1, 2]\ne[0, 1, 2]\nf[0, 1, 2, 3]\n",
            )
            .unwrap(),
            2,
        ),
    ];
    for (i, (seed, model)) in satisfiable_random_models(1000, 7).into_iter().enumerate() {
        let t = if i < 5 { 2 } else { 3 };
        corpus.push((format!("random seed={seed} t={t}"), model, t));
    }
    corpus
}

/// The coverable-tuple set an engine-side cleaned matrix reports: every
/// in-domain cell the cleaning pass left non-forbidden.
fn matrix_coverable_set(model: &ModelFile, t: usize) -> BTreeSet<PartialTuple> {
    let set = close_tuples(model).unwrap();
    let strength = Strength::new(t, model.space().k()).unwrap();
    let mut m = CombinationMatrix::build(model.space(), strength);
    m.clean(&set);
    let mut tuples = BTreeSet::new();
    for row in 0..m.rows() {
        for col in 0..m.cols() {
            if m.cell(row, col) >= 0 {
                tuples.insert(m.tuple_at(row, col).expect("non-sentinel cell is in-domain"));
            }
        }
    }
    tuples
}

#[test]
fn criterion_1_forbidden_tuple_closure_golden_set() {
    let started = Instant::now();
    let model = surface_model();
    let closed = close_tuples(&model).unwrap();
    let expected: BTreeSet<PartialTuple> = [
        tuple(&[(0, 0)]),         // {color=black}
        tuple(&[(0, 1), (4, 1)]), // {color=gold, coating=cathodic}
        tuple(&[(0, 1), (3, 2)]), // {color=gold, material=aluminum}
    ]
    .into_iter()
    .collect();
    let actual: BTreeSet<PartialTuple> = closed.tuples().cloned().collect();
    assert_eq!(actual, expected, "closure must equal the golden 3-tuple set");
    assert!(started.elapsed() < Duration::from_secs(1), "closure took too long");
    println!("criterion 1 (forbidden-tuple closure golden set): PASS");
}

#[test]
fn criterion_2_cleaned_combination_matrix_golden_grid() {
    // 10 parameter pairs × 9 columns; -1 marks out-of-domain padding and
    // cells forbidden by the closed constraint set.
    const EXPECTED: [[i32; 9]; 10] = [
        [-1, -1, -1, 0, 0, 0, 0, 0, 0],    // color × shape
        [-1, -1, -1, 0, 0, 0, 0, 0, 0],    // color × state
        [-1, -1, -1, 0, 0, -1, 0, 0, 0],   // color × material
        [-1, -1, -1, 0, -1, -1, 0, 0, -1], // color × coating
        [0, 0, 0, 0, 0, 0, 0, 0, 0],       // shape × state
        [0, 0, 0, 0, 0, 0, 0, 0, 0],       // shape × material
        [0, 0, -1, 0, 0, -1, 0, 0, -1],    // shape × coating
        [0, 0, 0, 0, 0, 0, 0, 0, 0],       // state × material
        [0, 0, -1, 0, 0, -1, 0, 0, -1],    // state × coating
        [0, 0, -1, 0, 0, -1, 0, 0, -1],    // material × coating
    ];
    let started = Instant::now();
    let model = surface_model();
    let set = close_tuples(&model).unwrap();
    let strength = Strength::new(2, model.space().k()).unwrap();
    let mut m = CombinationMatrix::build(model.space(), strength);
    m.clean(&set);
    assert_eq!(m.rows(), 10);
    assert_eq!(m.cols(), 9);
    for (row, expected_row) in EXPECTED.iter().enumerate() {
        for (col, &expected_cell) in expected_row.iter().enumerate() {
            assert_eq!(
                m.cell(row, col),
                expected_cell,
                "cell ({row}, {col}) differs from the golden grid"
            );
        }
    }
    assert!(started.elapsed() < Duration::from_secs(1), "matrix took too long");
    println!("criterion 2 (cleaned combination matrix golden grid): PASS");
}

#[test]
fn criterion_3_suites_cover_everything_on_the_whole_corpus() {
    for (name, model, t) in corpus() {
        let strength = Strength::new(t, model.space().k()).unwrap();
        for seed in 1..=5u64 {
            let config = GeneratorConfig::new(t, seed).with_rounds(20);
            let suite = generate(&model, &config)
                .unwrap_or_else(|e| panic!("{name} seed {seed}: generation failed: {e}"));
            assert!(
                suite.rows.len() <= suite.stats.initial_size,
                "{name} seed {seed}: improvement grew the suite"
            );
            let report = verify_suite(&suite.rows, &model, strength).unwrap();
            assert!(
                report.missing_tuples.is_empty(),
                "{name} seed {seed}: {} coverable tuples missing",
                report.missing_tuples.len()
            );
            assert!(
                report.invalid_rows.is_empty(),
                "{name} seed {seed}: {} invalid rows",
                report.invalid_rows.len()
            );
        }
    }
    println!("criterion 3 (corpus-wide coverage completeness, 5 seeds each): PASS");
}

#[test]
fn criterion_4_oracle_and_cleaned_matrix_agree_on_the_whole_corpus() {
    for (name, model, t) in corpus() {
        let strength = Strength::new(t, model.space().k()).unwrap();
        let oracle = enumerate_coverable_tuples(&model, strength).unwrap();
        let engine = matrix_coverable_set(&model, t);
        assert_eq!(
            oracle, engine,
            "{name}: oracle and cleaned matrix disagree — derive rule incomplete"
        );
    }
    println!("criterion 4 (oracle/engine coverable-set agreement): PASS");
}

#[test]
fn criterion_5_suite_size_properties() {
    // Shrink-only improvement corpus-wide is asserted in criterion 3; here
    // the unconstrained 3^4 model additionally meets the counting lower
    // bound N ≥ 9, with an informational N ≤ 12 target under the default
    // 5-second budget.
    let model =
        parse_model("PARAMETERS\na[0, 1, 2]\nb[0, 1, 2]\nc[0, 1, 2]\nd[0, 1, 2]\n").unwrap();
    for seed in 1..=5u64 {
        let config = GeneratorConfig::new(2, seed).with_rounds(50);
        let suite = generate(&model, &config).unwrap();
        assert!(suite.rows.len() <= suite.stats.initial_size, "seed {seed}: suite grew");
        assert!(
            suite.rows.len() >= 9,
            "seed {seed}: two 3-value parameters force at least 9 rows"
        );
    }
    let budget_run = generate(&model, &GeneratorConfig::new(2, 1)).unwrap();
    assert!(budget_run.rows.len() >= 9);
    assert!(budget_run.rows.len() <= budget_run.stats.initial_size);
    println!(
        "criterion 5 info: 3^4 pairwise suite size {} (target ≤ 12) after {} rounds in 5 s",
        budget_run.rows.len(),
        budget_run.stats.improve_iterations
    );
    println!("criterion 5 (shrink-only improvement and 3^4 lower bound): PASS");
}

#[test]
fn criterion_6_neighborhood_frequencies() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let draws = 10_000usize;
    let mut counts = [0usize; 3];
    for _ in 0..draws {
        match choose_neighborhood(&DEFAULT_NEIGHBORHOOD_WEIGHTS, &mut rng) {
            Neighborhood::SingleCell => counts[0] += 1,
            Neighborhood::FullColumn => counts[1] += 1,
            Neighborhood::UncoveredTuple => counts[2] += 1,
        }
    }
    let targets = [0.1f64, 0.1, 0.8];
    for (i, (&count, target)) in counts.iter().zip(targets).enumerate() {
        let freq = count as f64 / draws as f64;
        assert!(
            (freq - target).abs() <= 0.02,
            "neighborhood {i}: frequency {freq} outside {target} ± 0.02"
        );
    }
    println!("criterion 6 (neighborhood selection frequencies 0.1/0.1/0.8 ± 0.02): PASS");
}

#[test]
fn criterion_7_byte_identical_json_for_identical_runs() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_citgen"))
            .args([
                SURFACE_PATH,
                "--strength",
                "2",
                "--seed",
                "7",
                "--improve-rounds",
                "50",
                "--max-modifications",
                "600",
                "--format",
                "json",
            ])
            .output()
            .expect("run the generator binary")
    };
    let first = run();
    let second = run();
    assert!(first.status.success(), "first run failed: {:?}", first);
    assert!(second.status.success(), "second run failed: {:?}", second);
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout, "JSON output differs between identical runs");
    println!("criterion 7 (byte-identical JSON under a fixed seed and round budget): PASS");
}

#[test]
fn criterion_8_phase_switch_law_on_100_random_models() {
    let mut checked = 0usize;
    for (seed, model) in satisfiable_random_models(5000, 100) {
        let set = close_tuples(&model).unwrap();
        let t = 2.min(model.space().k());
        let strength = Strength::new(t, model.space().k()).unwrap();
        let mut m = CombinationMatrix::build(model.space(), strength);
        m.clean(&set);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (rows, trace) = initial_solution(&mut m, model.space(), &set, &mut rng).unwrap();
        assert_eq!(rows.len(), trace.len());
        for record in trace {
            if record.phase == Phase::DisjunctMerge {
                assert!(
                    record.uncovered_before <= record.multi_covered_before,
                    "model seed {seed}: merge-phase row emitted while uncovered {} > multi-covered {}",
                    record.uncovered_before,
                    record.multi_covered_before
                );
            }
        }
        checked += 1;
    }
    assert_eq!(checked, 100);
    println!("criterion 8 (phase-switch law over 100 random models): PASS");
}

#[test]
fn criterion_9_unsatisfiable_model_exits_2_with_diagnostic() {
    let output = Command::new(env!("CARGO_BIN_EXE_citgen"))
        .args([UNSAT_PATH, "--seed", "0", "--improve-rounds", "1"])
        .output()
        .expect("run the generator binary");
    assert_eq!(output.status.code(), Some(2), "unsatisfiable model must exit 2");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("unsatisfiable") && stderr.contains("every value of parameter 'p'"),
        "diagnostic must name the contradiction, got: {stderr}"
    );
    println!("criterion 9 (unsatisfiable model: exit 2 and named contradiction): PASS");
}

/// Companion check for criterion 9's premise: the closure really does reduce
/// the fixture to an empty (all-values-forbidden) contradiction rather than
/// failing for an unrelated reason.
#[test]
fn criterion_9_fixture_closure_derives_the_contradiction() {
    let text = std::fs::read_to_string(UNSAT_PATH).unwrap();
    let model = parse_model(&text).unwrap();
    let before = ForbiddenTupleSet::from_model_clauses(&model);
    assert_eq!(before.len(), 3, "fixture starts from three ordinary clauses");
    let err = close_tuples(&model).unwrap_err();
    assert!(err.to_string().contains("every value of parameter 'p'"));
}

/// Sanity check on the corpus builder itself: enough models, both reference
/// strengths present, all random models within the documented bounds.
#[test]
fn corpus_is_well_formed() {
    let corpus = corpus();
    assert!(corpus.len() >= 10, "need at least 10 corpus models");
    assert!(corpus.iter().any(|(n, _, t)| n.starts_with("surface") && *t == 2));
    assert!(corpus.iter().any(|(n, _, t)| n.starts_with("surface") && *t == 3));
    for (name, model, t) in &corpus {
        let k = model.space().k();
        assert!(k <= 8, "{name}: too many parameters");
        assert!(*t <= k, "{name}: strength exceeds parameter count");
        assert!(model.space().total_test_cases() <= 100_000, "{name}: not desk-scale");
    }
}

/// The t-tuples the oracle collects from a full row equal the matrix cells
/// that row covers; spot check on one reference row so the two tuple
/// enumerations cannot drift apart silently.
#[test]
fn oracle_and_matrix_tuple_enumerations_agree_on_a_row()
{
    let model = surface_model();
    let set = close_tuples(&model).unwrap();
    let strength = Strength::new(2, model.space().k()).unwrap();
    let mut m = CombinationMatrix::build(model.space(), strength);
    m.clean(&set);
    let row = citgen::TestCase::new(vec![2, 2, 2, 1, 0], model.space()).unwrap();
    let tuples = t_tuples_of(&row, strength, model.space());
    assert_eq!(tuples.len(), 10, "C(5,2) sub-tuples of one full row");
    m.cover_combinations(&row);
    for tuple in &tuples {
        let (r, c) = m.cell_for_tuple(tuple);
        assert_eq!(m.cell(r, c), 1);
    }
}
