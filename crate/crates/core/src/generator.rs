//! Suite generation: a diversified greedy initial solution followed by
//! mixed-neighborhood local search that repeatedly deletes one row and tries
//! to repair full coverage with a bounded number of modifications.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constraints::{close_tuples, ForbiddenTupleSet};
use crate::coverage::CombinationMatrix;
use crate::error::{Error, Result};
use crate::model::{hamming_distance, ParameterSpace, PartialTuple, Strength, TestCase};
use crate::parser::ModelFile;

/// Modification budget per improvement round.
pub const DEFAULT_MAX_MODIFICATIONS: usize = 600;
/// Probability of picking each neighborhood (single cell, full column,
/// uncovered tuple).
pub const DEFAULT_NEIGHBORHOOD_WEIGHTS: [f64; 3] = [0.1, 0.1, 0.8];
/// Default wall-clock budget for the improvement loop.
pub const DEFAULT_TIME_BUDGET_MS: u64 = 5000;

/// Uniform resampling attempts before falling back to guided construction.
const RANDOM_RETRIES: usize = 1000;
/// Random fill attempts for a partially fixed row before guided construction.
const FILL_RETRIES: usize = 100;

/// How long the improvement loop runs: a fixed number of rounds (fully
/// deterministic) or a wall-clock budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Rounds(u64),
    TimeMs(u64),
}

/// Knobs for [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub strength: usize,
    pub seed: u64,
    pub budget: Budget,
    pub max_modifications: usize,
    pub neighborhood_weights: [f64; 3],
}

impl GeneratorConfig {
    pub fn new(strength: usize, seed: u64) -> Self {
        Self {
            strength,
            seed,
            budget: Budget::TimeMs(DEFAULT_TIME_BUDGET_MS),
            max_modifications: DEFAULT_MAX_MODIFICATIONS,
            neighborhood_weights: DEFAULT_NEIGHBORHOOD_WEIGHTS,
        }
    }

    pub fn with_rounds(mut self, rounds: u64) -> Self {
        self.budget = Budget::Rounds(rounds);
        self
    }

    pub fn with_time_budget_ms(mut self, ms: u64) -> Self {
        self.budget = Budget::TimeMs(ms);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_modifications < 1 {
            return Err(Error::InvalidConfig(
                "max modifications must be at least 1".into(),
            ));
        }
        let w = &self.neighborhood_weights;
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidConfig(
                "neighborhood weights must be nonnegative".into(),
            ));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidConfig(format!(
                "neighborhood weights must sum to 1 (got {sum})"
            )));
        }
        Ok(())
    }
}

/// Counters reported alongside a generated suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerationStats {
    /// Coverable cells of the cleaned combination matrix.
    pub coverable_tuples: usize,
    /// Row count of the initial solution, before improvement.
    pub initial_size: usize,
    /// Improvement rounds actually executed.
    pub improve_iterations: u64,
}

/// A complete, constraint-valid covering suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSuite {
    pub strength: usize,
    pub seed: u64,
    pub rows: Vec<TestCase>,
    pub stats: GenerationStats,
}

/// Which strategy produced an initial-solution row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Best-of-two random rows by summed Hamming distance.
    RandomPair,
    /// Merge of a parameter-disjoint set of uncovered tuples.
    DisjunctMerge,
}

/// Per-row trace of the initial solution, for auditing the phase switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseRecord {
    pub phase: Phase,
    pub uncovered_before: usize,
    pub multi_covered_before: usize,
}

/// The three local-search moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighborhood {
    /// Best value for one random cell.
    SingleCell,
    /// Per-cell re-optimization of one random column.
    FullColumn,
    /// Best single-row overwrite that covers a chosen uncovered tuple.
    UncoveredTuple,
}

/// Samples a neighborhood according to the configured probabilities.
pub fn choose_neighborhood(weights: &[f64; 3], rng: &mut impl Rng) -> Neighborhood {
    let x: f64 = rng.random();
    if x < weights[0] {
        Neighborhood::SingleCell
    } else if x < weights[0] + weights[1] {
        Neighborhood::FullColumn
    } else {
        Neighborhood::UncoveredTuple
    }
}

/// True when no forbidden tuple is fully contained in the assigned prefix.
fn partial_allowed(values: &[Option<usize>], set: &ForbiddenTupleSet) -> bool {
    !set.tuples().any(|t| {
        t.assignments()
            .iter()
            .all(|a| values[a.parameter] == Some(a.value))
    })
}

fn backtrack_fill(
    depth: usize,
    order: &[usize],
    values: &mut Vec<Option<usize>>,
    value_orders: &[Vec<usize>],
    set: &ForbiddenTupleSet,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let p = order[depth];
    for &v in &value_orders[p] {
        values[p] = Some(v);
        if partial_allowed(values, set)
            && backtrack_fill(depth + 1, order, values, value_orders, set)
        {
            return true;
        }
        values[p] = None;
    }
    false
}

/// Completes a partial assignment to a full valid test case: random fill
/// first, then randomized backtracking over the remaining parameters.
/// `None` when no completion exists.
fn try_complete(
    partial: &PartialTuple,
    space: &ParameterSpace,
    set: &ForbiddenTupleSet,
    rng: &mut impl Rng,
    retries: usize,
) -> Option<TestCase> {
    let fixed: Vec<Option<usize>> = (0..space.k()).map(|p| partial.value_of(p)).collect();
    if !partial_allowed(&fixed, set) {
        return None;
    }
    for _ in 0..retries {
        let values: Vec<usize> = fixed
            .iter()
            .enumerate()
            .map(|(p, v)| v.unwrap_or_else(|| rng.random_range(0..space.domain_size(p))))
            .collect();
        let tc = TestCase::new(values, space).expect("constructed in-domain");
        if set.is_valid(&tc) {
            return Some(tc);
        }
    }
    let mut order: Vec<usize> = (0..space.k()).filter(|p| fixed[*p].is_none()).collect();
    order.shuffle(rng);
    let value_orders: Vec<Vec<usize>> = (0..space.k())
        .map(|p| {
            let mut vs: Vec<usize> = (0..space.domain_size(p)).collect();
            vs.shuffle(rng);
            vs
        })
        .collect();
    let mut values = fixed;
    if backtrack_fill(0, &order, &mut values, &value_orders, set) {
        let values: Vec<usize> = values.into_iter().map(|v| v.unwrap()).collect();
        Some(TestCase::new(values, space).expect("constructed in-domain"))
    } else {
        None
    }
}

/// Draws a uniformly random valid test case, falling back to randomized
/// guided construction when rejection sampling keeps failing.
pub fn random_valid_test_case(
    space: &ParameterSpace,
    set: &ForbiddenTupleSet,
    rng: &mut impl Rng,
) -> Result<TestCase> {
    try_complete(&PartialTuple::empty(), space, set, rng, RANDOM_RETRIES).ok_or_else(|| {
        Error::Unsatisfiable {
            reason: "no valid test case exists".into(),
        }
    })
}

/// Builds a complete solution on a cleaned matrix. While uncovered cells
/// outnumber multi-covered ones, rows are the more Hamming-distant of two
/// random valid test cases; afterwards rows merge a greedy maximal
/// parameter-disjoint set of uncovered tuples and fill the rest randomly.
/// Returns the rows plus a per-row phase trace.
pub fn initial_solution(
    m: &mut CombinationMatrix,
    space: &ParameterSpace,
    set: &ForbiddenTupleSet,
    rng: &mut impl Rng,
) -> Result<(Vec<TestCase>, Vec<PhaseRecord>)> {
    let mut rows: Vec<TestCase> = Vec::new();
    let mut trace: Vec<PhaseRecord> = Vec::new();
    while m.uncovered_count() != 0 {
        let uncovered_before = m.uncovered_count();
        let multi_covered_before = m.multi_covered_count();
        let (phase, row) = if uncovered_before > multi_covered_before {
            let first = random_valid_test_case(space, set, rng)?;
            let second = random_valid_test_case(space, set, rng)?;
            let sum_distance = |tc: &TestCase| -> usize {
                rows.iter()
                    .map(|r| hamming_distance(tc, r).expect("uniform row length"))
                    .sum()
            };
            // Ties keep the first-drawn candidate.
            let row = if sum_distance(&second) > sum_distance(&first) {
                second
            } else {
                first
            };
            (Phase::RandomPair, row)
        } else {
            let mut uncovered = m.uncovered_tuples();
            uncovered.sort();
            let mut merged = PartialTuple::empty();
            for tuple in &uncovered {
                if !merged.parameters_disjoint_with(tuple) {
                    continue;
                }
                let candidate = merged.merge(tuple).expect("disjoint tuples merge");
                if set.tuple_forbidden(&candidate) {
                    continue;
                }
                merged = candidate;
            }
            let row = try_complete(&merged, space, set, rng, FILL_RETRIES).ok_or_else(|| {
                Error::Search(format!(
                    "cannot complete partial test case {}",
                    merged.render(space)
                ))
            })?;
            (Phase::DisjunctMerge, row)
        };
        debug_assert!(set.is_valid(&row));
        m.cover_combinations(&row);
        rows.push(row);
        trace.push(PhaseRecord {
            phase,
            uncovered_before,
            multi_covered_before,
        });
    }
    Ok((rows, trace))
}

/// Re-optimizes one cell: evaluates every domain value (the current one
/// included) whose row stays valid and keeps a best-scoring one, ties broken
/// uniformly at random.
fn best_value_for_cell(
    rows: &mut [TestCase],
    m: &mut CombinationMatrix,
    set: &ForbiddenTupleSet,
    row: usize,
    parameter: usize,
    rng: &mut impl Rng,
) {
    let space = set.space();
    let old_row = rows[row].clone();
    let removal = m.uncover_combinations(&old_row);
    let mut best_score = 0usize;
    let mut best: Vec<usize> = Vec::new();
    for v in 0..space.domain_size(parameter) {
        let candidate = old_row.with_value(parameter, v);
        if !set.is_valid(&candidate) {
            continue;
        }
        let delta = m.cover_combinations(&candidate);
        let score = m.coverage_score();
        m.undo(&delta);
        if score > best_score || best.is_empty() {
            best_score = score;
            best = vec![v];
        } else if score == best_score {
            best.push(v);
        }
    }
    if best.is_empty() {
        // Unreachable while rows stay valid, but restore defensively.
        m.undo(&removal);
        return;
    }
    let chosen = best[rng.random_range(0..best.len())];
    let new_row = old_row.with_value(parameter, chosen);
    m.cover_combinations(&new_row);
    rows[row] = new_row;
}

/// Single-cell move: picks a uniformly random cell of the solution and
/// re-optimizes it.
pub fn improve_random_cell(
    rows: &mut [TestCase],
    m: &mut CombinationMatrix,
    set: &ForbiddenTupleSet,
    rng: &mut impl Rng,
) {
    if rows.is_empty() {
        return;
    }
    let row = rng.random_range(0..rows.len());
    let parameter = rng.random_range(0..set.space().k());
    best_value_for_cell(rows, m, set, row, parameter, rng);
}

/// Full-column move: picks a uniformly random parameter and re-optimizes
/// that cell of every row, top to bottom, each against the updated matrix.
pub fn improve_random_column(
    rows: &mut [TestCase],
    m: &mut CombinationMatrix,
    set: &ForbiddenTupleSet,
    rng: &mut impl Rng,
) {
    if rows.is_empty() {
        return;
    }
    let parameter = rng.random_range(0..set.space().k());
    for row in 0..rows.len() {
        best_value_for_cell(rows, m, set, row, parameter, rng);
    }
}

/// Uncovered-tuple move: picks a uniformly random uncovered combination and
/// overwrites the row where doing so scores best; rows that would become
/// invalid are discarded. Returns the picked tuple, or `None` when nothing
/// is uncovered.
pub fn cover_random_uncovered_tuple(
    rows: &mut [TestCase],
    m: &mut CombinationMatrix,
    set: &ForbiddenTupleSet,
    rng: &mut impl Rng,
) -> Option<PartialTuple> {
    let uncovered = m.uncovered_tuples();
    if uncovered.is_empty() {
        return None;
    }
    let tuple = uncovered[rng.random_range(0..uncovered.len())].clone();
    let mut best_score = 0usize;
    let mut best: Vec<usize> = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let candidate = row.overwrite_with(&tuple);
        if !set.is_valid(&candidate) {
            continue;
        }
        let removal = m.uncover_combinations(row);
        let addition = m.cover_combinations(&candidate);
        let score = m.coverage_score();
        m.undo(&addition);
        m.undo(&removal);
        if score > best_score || best.is_empty() {
            best_score = score;
            best = vec![r];
        } else if score == best_score {
            best.push(r);
        }
    }
    if !best.is_empty() {
        let r = best[rng.random_range(0..best.len())];
        let new_row = rows[r].overwrite_with(&tuple);
        m.uncover_combinations(&rows[r]);
        m.cover_combinations(&new_row);
        rows[r] = new_row;
    }
    Some(tuple)
}

/// One improvement round: deletes a uniformly random row, then spends up to
/// `max_modifications` neighborhood moves trying to restore full coverage.
/// On success the solution has exactly one row fewer and `true` is returned;
/// otherwise solution and matrix are restored and `false` is returned.
pub fn improve_once(
    rows: &mut Vec<TestCase>,
    m: &mut CombinationMatrix,
    set: &ForbiddenTupleSet,
    config: &GeneratorConfig,
    rng: &mut impl Rng,
) -> bool {
    debug_assert_eq!(m.uncovered_count(), 0, "improvement needs a complete solution");
    if rows.is_empty() {
        return false;
    }
    let saved_rows = rows.clone();
    let saved_matrix = m.clone();

    let doomed = rng.random_range(0..rows.len());
    let removed = rows.remove(doomed);
    m.uncover_combinations(&removed);
    if m.uncovered_count() == 0 {
        return true;
    }
    for _ in 0..config.max_modifications {
        match choose_neighborhood(&config.neighborhood_weights, rng) {
            Neighborhood::SingleCell => improve_random_cell(rows, m, set, rng),
            Neighborhood::FullColumn => improve_random_column(rows, m, set, rng),
            Neighborhood::UncoveredTuple => {
                cover_random_uncovered_tuple(rows, m, set, rng);
            }
        }
        if m.uncovered_count() == 0 {
            return true;
        }
    }
    *rows = saved_rows;
    *m = saved_matrix;
    false
}

/// End-to-end pipeline: closes the forbidden tuples, builds and cleans the
/// combination matrix, constructs an initial solution, and runs improvement
/// rounds until the budget expires. The result covers every coverable
/// combination, contains no forbidden tuple, and never grows during
/// improvement.
pub fn generate(model: &ModelFile, config: &GeneratorConfig) -> Result<GeneratedSuite> {
    config.validate()?;
    let space = model.space();
    let strength = Strength::new(config.strength, space.k())?;
    let set = close_tuples(model)?;
    let mut m = CombinationMatrix::build(space, strength);
    m.clean(&set);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mut rows, _trace) = initial_solution(&mut m, space, &set, &mut rng)?;
    let initial_size = rows.len();

    let mut improve_iterations = 0u64;
    match config.budget {
        Budget::Rounds(rounds) => {
            for _ in 0..rounds {
                improve_once(&mut rows, &mut m, &set, config, &mut rng);
                improve_iterations += 1;
            }
        }
        Budget::TimeMs(ms) => {
            let deadline = Instant::now() + Duration::from_millis(ms);
            while Instant::now() < deadline {
                improve_once(&mut rows, &mut m, &set, config, &mut rng);
                improve_iterations += 1;
            }
        }
    }

    debug_assert_eq!(m.uncovered_count(), 0);
    debug_assert!(rows.iter().all(|r| set.is_valid(r)));
    Ok(GeneratedSuite {
        strength: config.strength,
        seed: config.seed,
        rows,
        stats: GenerationStats {
            coverable_tuples: m.coverable_count(),
            initial_size,
            improve_iterations,
        },
    })
}
