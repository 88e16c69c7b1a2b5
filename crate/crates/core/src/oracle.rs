//! Independent brute-force verifier. It enumerates the full Cartesian
//! product of the domains and evaluates the original CNF clauses directly —
//! never the derived forbidden tuples — so that it can certify the
//! derivation machinery and the generated suites from the outside.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{t_tuples_of, PartialTuple, Strength, TestCase};
use crate::parser::ModelFile;

/// Largest Cartesian product the oracle will enumerate by default.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Outcome of checking a suite against exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Number of t-tuples that appear in at least one clause-satisfying
    /// full test case.
    pub coverable_tuple_count: usize,
    /// How many of those the suite covers.
    pub covered_tuple_count: usize,
    /// Coverable tuples the suite misses, canonical order.
    pub missing_tuples: Vec<PartialTuple>,
    /// Rows violating the CNF, as (row index, violated clause in input
    /// syntax).
    pub invalid_rows: Vec<(usize, String)>,
}

impl OracleReport {
    /// A suite passes when nothing is missing and no row is invalid.
    pub fn passes(&self) -> bool {
        self.missing_tuples.is_empty() && self.invalid_rows.is_empty()
    }

    /// One-line human summary.
    pub fn render_text(&self) -> String {
        format!(
            "oracle report: coverable: {}, covered: {}, missing: {}, invalid: {} — {}",
            self.coverable_tuple_count,
            self.covered_tuple_count,
            self.missing_tuples.len(),
            self.invalid_rows.len(),
            if self.passes() { "PASS" } else { "FAIL" }
        )
    }
}

/// Walks the full Cartesian product in odometer order, yielding every test
/// case (valid or not).
fn for_each_full_test_case(model: &ModelFile, mut f: impl FnMut(&TestCase)) {
    let space = model.space();
    let sizes = space.domain_sizes();
    let mut values = vec![0usize; sizes.len()];
    loop {
        let tc = TestCase::new(values.clone(), space).expect("odometer stays in domain");
        f(&tc);
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            values[i] += 1;
            if values[i] < sizes[i] {
                break;
            }
            values[i] = 0;
        }
    }
}

/// Enumerates every t-tuple that some clause-satisfying full test case
/// contains. This is the ground truth an engine-side cleaned matrix must
/// agree with.
pub fn enumerate_coverable_tuples(
    model: &ModelFile,
    t: Strength,
) -> Result<BTreeSet<PartialTuple>> {
    enumerate_coverable_tuples_with_cap(model, t, DEFAULT_ENUMERATION_CAP)
}

/// [`enumerate_coverable_tuples`] with an explicit product-size cap.
pub fn enumerate_coverable_tuples_with_cap(
    model: &ModelFile,
    t: Strength,
    cap: u64,
) -> Result<BTreeSet<PartialTuple>> {
    let space = model.space();
    if space.total_test_cases() > cap as u128 {
        return Err(Error::EnumerationCapExceeded { cap });
    }
    let mut coverable = BTreeSet::new();
    for_each_full_test_case(model, |tc| {
        if model.satisfied_by(tc) {
            for tuple in t_tuples_of(tc, t, space) {
                coverable.insert(tuple);
            }
        }
    });
    Ok(coverable)
}

/// Certifies a suite: every row must satisfy all clauses directly, and the
/// rows' t-tuples must cover everything [`enumerate_coverable_tuples`]
/// reports as coverable.
pub fn verify_suite(rows: &[TestCase], model: &ModelFile, t: Strength) -> Result<OracleReport> {
    verify_suite_with_cap(rows, model, t, DEFAULT_ENUMERATION_CAP)
}

/// [`verify_suite`] with an explicit product-size cap.
pub fn verify_suite_with_cap(
    rows: &[TestCase],
    model: &ModelFile,
    t: Strength,
    cap: u64,
) -> Result<OracleReport> {
    let space = model.space();
    let coverable = enumerate_coverable_tuples_with_cap(model, t, cap)?;

    let mut invalid_rows = Vec::new();
    let mut covered: BTreeSet<PartialTuple> = BTreeSet::new();
    for (i, row) in rows.iter().enumerate() {
        if let Some(clause) = model.clauses().iter().find(|c| !c.satisfied_by(row)) {
            invalid_rows.push((i, clause.render(space)));
            continue;
        }
        for tuple in t_tuples_of(row, t, space) {
            covered.insert(tuple);
        }
    }

    let missing_tuples: Vec<PartialTuple> =
        coverable.difference(&covered).cloned().collect();
    Ok(OracleReport {
        coverable_tuple_count: coverable.len(),
        covered_tuple_count: coverable.len() - missing_tuples.len(),
        missing_tuples,
        invalid_rows,
    })
}

/// Row-validity-only check for models too large to enumerate: reports each
/// row violating a clause. Coverage completeness is not checked.
pub fn check_rows_only(rows: &[TestCase], model: &ModelFile) -> Vec<(usize, String)> {
    let space = model.space();
    let mut invalid = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if let Some(clause) = model.clauses().iter().find(|c| !c.satisfied_by(row)) {
            invalid.push((i, clause.render(space)));
        }
    }
    invalid
}
