//! Forbidden-tuple closure. Constraint clauses map to an initial set of
//! forbidden tuples; a derive/simplify loop then completes the set so that a
//! t-tuple is forbidden exactly when it contains a member of the set.
//!
//! Derivation rule: for a parameter P with n values, pick one forbidden tuple
//! containing `P=v` for every value v of P. Any test case must hit one of the
//! picked tuples' P-assignments, so the union of the picked tuples minus
//! their P-assignments is itself forbidden. Simplification removes tuples
//! that strictly contain another member, which never changes validity
//! answers. The loop alternates the two until nothing changes.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{ParameterSpace, PartialTuple, TestCase};
use crate::parser::{clause_to_tuple, ModelFile};

/// Ceiling on the number of stored tuples before derivation gives up; the
/// closure can blow up combinatorially on adversarial inputs.
pub const DEFAULT_DERIVATION_CAP: usize = 100_000;

/// A set of forbidden partial tuples over one parameter space, kept in
/// canonical (sorted, deduplicated) form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenTupleSet {
    space: ParameterSpace,
    tuples: BTreeSet<PartialTuple>,
}

impl ForbiddenTupleSet {
    /// The pre-closure set: one tuple per non-vacuous clause.
    pub fn from_model_clauses(model: &ModelFile) -> Self {
        let tuples = model
            .clauses()
            .iter()
            .filter_map(|c| clause_to_tuple(c, model.space()))
            .collect();
        Self {
            space: model.space().clone(),
            tuples,
        }
    }

    pub fn space(&self) -> &ParameterSpace {
        &self.space
    }

    /// Tuples in canonical ascending order.
    pub fn tuples(&self) -> impl Iterator<Item = &PartialTuple> {
        self.tuples.iter()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &PartialTuple) -> bool {
        self.tuples.contains(tuple)
    }

    /// One derivation sweep. Selections are drawn from `self` as a snapshot,
    /// in ascending (parameter, tuple-order) order; candidates already
    /// implied by the working set are dropped, candidates with conflicting
    /// assignments are impossible in any test case and are skipped.
    pub fn derive_pass(&self, cap: usize) -> Result<ForbiddenTupleSet> {
        let snapshot: Vec<&PartialTuple> = self.tuples.iter().collect();
        let mut working = self.tuples.clone();
        for p in 0..self.space.k() {
            let n = self.space.domain_size(p);
            let buckets: Vec<Vec<&PartialTuple>> = (0..n)
                .map(|v| {
                    snapshot
                        .iter()
                        .copied()
                        .filter(|t| t.value_of(p) == Some(v))
                        .collect()
                })
                .collect();
            if buckets.iter().any(|b| b.is_empty()) {
                continue;
            }
            // Odometer over one pick per bucket, ascending.
            let mut pick = vec![0usize; n];
            loop {
                let mut union = Some(PartialTuple::empty());
                for (v, &i) in pick.iter().enumerate() {
                    let stripped = strip_parameter(buckets[v][i], p);
                    union = union.and_then(|u| u.merge(&stripped));
                }
                if let Some(candidate) = union {
                    if candidate.is_empty() {
                        return Err(Error::Unsatisfiable {
                            reason: format!(
                                "every value of parameter '{}' is forbidden",
                                self.space.parameter_name(p)
                            ),
                        });
                    }
                    let implied = working.iter().any(|t| t.is_subset_of(&candidate));
                    if !implied {
                        working.insert(candidate);
                        if working.len() > cap {
                            return Err(Error::DerivationCapExceeded { cap });
                        }
                    }
                }
                // Advance the odometer; done when it wraps.
                let mut digit = n;
                let mut wrapped = true;
                while digit > 0 {
                    digit -= 1;
                    pick[digit] += 1;
                    if pick[digit] < buckets[digit].len() {
                        wrapped = false;
                        break;
                    }
                    pick[digit] = 0;
                }
                if wrapped {
                    break;
                }
            }
        }
        Ok(ForbiddenTupleSet {
            space: self.space.clone(),
            tuples: working,
        })
    }

    /// Removes every tuple that strictly contains another member; the result
    /// is an antichain under inclusion with identical validity answers.
    pub fn simplify_pass(&self) -> ForbiddenTupleSet {
        let tuples: BTreeSet<PartialTuple> = self
            .tuples
            .iter()
            .filter(|t| {
                !self
                    .tuples
                    .iter()
                    .any(|other| other != *t && other.is_subset_of(t))
            })
            .cloned()
            .collect();
        ForbiddenTupleSet {
            space: self.space.clone(),
            tuples,
        }
    }

    /// True when the test case contains no forbidden tuple.
    pub fn is_valid(&self, tc: &TestCase) -> bool {
        !self.tuples.iter().any(|t| t.is_subassignment_of(tc))
    }

    /// True when the partial tuple contains a forbidden tuple (and therefore
    /// can never appear in a valid test case).
    pub fn tuple_forbidden(&self, pt: &PartialTuple) -> bool {
        self.tuples.iter().any(|t| t.is_subset_of(pt))
    }

    /// Renders the set as `{{p=v, …}, …}` in canonical order.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.tuples.iter().map(|t| t.render(&self.space)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn strip_parameter(tuple: &PartialTuple, parameter: usize) -> PartialTuple {
    PartialTuple::from_assignments(
        tuple
            .assignments()
            .iter()
            .copied()
            .filter(|a| a.parameter != parameter)
            .collect(),
    )
    .expect("removing assignments cannot introduce conflicts")
}

/// Runs derive/simplify rounds until a full round changes nothing and
/// returns the fixpoint: the complete, minimal forbidden-tuple set.
pub fn close_tuples(model: &ModelFile) -> Result<ForbiddenTupleSet> {
    close_tuples_with_cap(model, DEFAULT_DERIVATION_CAP)
}

/// [`close_tuples`] with an explicit tuple-count cap.
pub fn close_tuples_with_cap(model: &ModelFile, cap: usize) -> Result<ForbiddenTupleSet> {
    let mut set = ForbiddenTupleSet::from_model_clauses(model).simplify_pass();
    loop {
        let next = set.derive_pass(cap)?.simplify_pass();
        if next == set {
            return Ok(set);
        }
        set = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Assignment;
    use crate::parser::{parse_model, Clause, Literal};
    use proptest::prelude::*;

    const SURFACE_MODEL: &str = "\
PARAMETERS
color[black, gold, red]
shape[square, triangle, circle]
state[liquid, solid, gas]
material[leather, plastic, aluminum]
coating[anodic, cathodic]
CONSTRAINTS
color != black || shape != square
color != black || shape != triangle
color != black || shape != circle
color != gold || coating != cathodic
material != aluminum || color != gold
";

    fn tuple(pairs: &[(usize, usize)]) -> PartialTuple {
        PartialTuple::from_assignments(
            pairs.iter().map(|&(p, v)| Assignment::new(p, v)).collect(),
        )
        .unwrap()
    }

    /// Every full test case of a space, odometer order.
    fn all_test_cases(space: &ParameterSpace) -> Vec<TestCase> {
        let sizes = space.domain_sizes();
        let mut out = Vec::new();
        let mut values = vec![0usize; sizes.len()];
        loop {
            out.push(TestCase::new(values.clone(), space).unwrap());
            let mut i = sizes.len();
            loop {
                if i == 0 {
                    return out;
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

    #[test]
    fn initial_set_matches_clause_negations() {
        let model = parse_model(SURFACE_MODEL).unwrap();
        let set = ForbiddenTupleSet::from_model_clauses(&model);
        assert_eq!(set.len(), 5);
        assert!(set.contains(&tuple(&[(0, 0), (1, 0)])));
        assert!(set.contains(&tuple(&[(0, 1), (4, 1)])));
        assert!(set.contains(&tuple(&[(0, 1), (3, 2)])));
    }

    #[test]
    fn derive_pass_finds_fully_covered_parameter() {
        let model = parse_model(SURFACE_MODEL).unwrap();
        let set = ForbiddenTupleSet::from_model_clauses(&model);
        let derived = set.derive_pass(DEFAULT_DERIVATION_CAP).unwrap();
        // The three shape tuples cover every shape value; stripping shape
        // leaves {color=black}.
        assert!(derived.contains(&tuple(&[(0, 0)])));
        assert!(derived.len() > set.len());
    }

    #[test]
    fn derive_pass_without_covered_parameter_is_identity() {
        let model = parse_model(
            "PARAMETERS\np[a, b]\nq[c, d]\nCONSTRAINTS\np != a || q != c\n",
        )
        .unwrap();
        let set = ForbiddenTupleSet::from_model_clauses(&model);
        let derived = set.derive_pass(DEFAULT_DERIVATION_CAP).unwrap();
        assert_eq!(set, derived);
    }

    #[test]
    fn fully_forbidden_domain_is_unsatisfiable() {
        let model = parse_model("PARAMETERS\np[a, b]\nCONSTRAINTS\np != a\np != b\n").unwrap();
        let err = close_tuples(&model).unwrap_err();
        match err {
            Error::Unsatisfiable { reason } => {
                assert!(reason.contains("every value of parameter 'p'"), "{reason}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn indirectly_unsatisfiable_model_is_detected() {
        // p=a is forbidden with each q value, and p=b outright: no test case
        // exists, but only derivation can see it.
        let model = parse_model(
            "PARAMETERS\np[a, b]\nq[c, d]\nCONSTRAINTS\np != a || q != c\np != a || q != d\np != b\n",
        )
        .unwrap();
        let err = close_tuples(&model).unwrap_err();
        match err {
            Error::Unsatisfiable { reason } => {
                assert!(reason.contains("parameter 'p'"), "{reason}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn simplify_removes_strict_supersets() {
        let model = parse_model(SURFACE_MODEL).unwrap();
        let set = ForbiddenTupleSet::from_model_clauses(&model)
            .derive_pass(DEFAULT_DERIVATION_CAP)
            .unwrap();
        let simplified = set.simplify_pass();
        // The three {color=black, shape=*} tuples drop out once {color=black}
        // is present.
        assert!(simplified.contains(&tuple(&[(0, 0)])));
        assert!(!simplified.contains(&tuple(&[(0, 0), (1, 0)])));
        assert!(!simplified.contains(&tuple(&[(0, 0), (1, 1)])));
        assert!(!simplified.contains(&tuple(&[(0, 0), (1, 2)])));
        // Antichain input is a fixpoint.
        assert_eq!(simplified.simplify_pass(), simplified);
    }

    #[test]
    fn simplify_removes_all_dominated_tuples() {
        let model = parse_model(
            "PARAMETERS\np[a, x]\nq[b, c, y]\nCONSTRAINTS\np != a\np != a || q != b\np != a || q != c\n",
        )
        .unwrap();
        let simplified = ForbiddenTupleSet::from_model_clauses(&model).simplify_pass();
        assert_eq!(simplified.len(), 1);
        assert!(simplified.contains(&tuple(&[(0, 0)])));
    }

    #[test]
    fn closure_of_surface_model_matches_known_minimal_set() {
        let model = parse_model(SURFACE_MODEL).unwrap();
        let closed = close_tuples(&model).unwrap();
        let expected: BTreeSet<PartialTuple> = [
            tuple(&[(0, 0)]),          // {color=black}
            tuple(&[(0, 1), (4, 1)]),  // {color=gold, coating=cathodic}
            tuple(&[(0, 1), (3, 2)]),  // {color=gold, material=aluminum}
        ]
        .into_iter()
        .collect();
        let actual: BTreeSet<PartialTuple> = closed.tuples().cloned().collect();
        assert_eq!(actual, expected);
        assert_eq!(
            closed.render(),
            "{{color=black}, {color=gold, material=aluminum}, {color=gold, coating=cathodic}}"
        );
    }

    #[test]
    fn closure_of_empty_clause_list_is_empty() {
        let model = parse_model("PARAMETERS\np[a, b]\nq[c]\n").unwrap();
        let closed = close_tuples(&model).unwrap();
        assert!(closed.is_empty());
    }

    #[test]
    fn closure_of_shape_clauses_only() {
        // First three clauses only. Brute-force first: the violating test
        // cases must be exactly those with color=black.
        let model = parse_model(
            "PARAMETERS\ncolor[black, gold, red]\nshape[square, triangle, circle]\nstate[liquid, solid, gas]\nmaterial[leather, plastic, aluminum]\ncoating[anodic, cathodic]\nCONSTRAINTS\ncolor != black || shape != square\ncolor != black || shape != triangle\ncolor != black || shape != circle\n",
        )
        .unwrap();
        let space = model.space();
        let all = all_test_cases(space);
        assert_eq!(all.len(), 162);
        for tc in &all {
            assert_eq!(model.satisfied_by(tc), tc.value(0) != 0);
        }
        let closed = close_tuples(&model).unwrap();
        assert_eq!(closed.len(), 1);
        assert!(closed.contains(&tuple(&[(0, 0)])));
    }

    #[test]
    fn validity_answers_on_surface_model() {
        let model = parse_model(SURFACE_MODEL).unwrap();
        let space = model.space().clone();
        let closed = close_tuples(&model).unwrap();
        let ok = TestCase::new(vec![2, 2, 2, 1, 0], &space).unwrap();
        assert!(closed.is_valid(&ok));
        let black = TestCase::new(vec![0, 2, 2, 1, 0], &space).unwrap();
        assert!(!closed.is_valid(&black));
        let empty = ForbiddenTupleSet::from_model_clauses(&ModelFile::unconstrained(space));
        assert!(empty.is_valid(&black));
    }

    #[test]
    fn tuple_forbidden_answers_on_surface_model() {
        let model = parse_model(SURFACE_MODEL).unwrap();
        let closed = close_tuples(&model).unwrap();
        assert!(closed.tuple_forbidden(&tuple(&[(0, 0), (1, 0)]))); // {color=black, shape=square}
        assert!(closed.tuple_forbidden(&tuple(&[(0, 1), (3, 2)]))); // {color=gold, material=aluminum}
        assert!(!closed.tuple_forbidden(&tuple(&[(1, 0), (2, 0)]))); // {shape=square, state=liquid}
    }

    #[test]
    fn closure_is_idempotent_over_reencoding() {
        // Encode the closed set back into one clause per tuple and close
        // again; the fixpoint must reproduce itself.
        let model = parse_model(SURFACE_MODEL).unwrap();
        let closed = close_tuples(&model).unwrap();
        let clauses: Vec<Clause> = closed
            .tuples()
            .map(|t| {
                Clause::new(
                    t.assignments()
                        .iter()
                        .map(|a| Literal {
                            parameter: a.parameter,
                            value: a.value,
                        })
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let reencoded = ModelFile::new(model.space().clone(), clauses).unwrap();
        let reclosed = close_tuples(&reencoded).unwrap();
        assert_eq!(reclosed, closed);
    }

    #[test]
    fn derivation_cap_is_enforced() {
        let model = parse_model(SURFACE_MODEL).unwrap();
        let err = close_tuples_with_cap(&model, 5).unwrap_err();
        match err {
            Error::DerivationCapExceeded { cap } => assert_eq!(cap, 5),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn closure_is_deterministic() {
        let model = parse_model(SURFACE_MODEL).unwrap();
        let a = close_tuples(&model).unwrap().render();
        let b = close_tuples(&model).unwrap().render();
        assert_eq!(a, b);
    }

    /// Random small constrained models for semantic properties.
    fn arb_small_model() -> impl Strategy<Value = ModelFile> {
        (2usize..=4, 2usize..=3).prop_flat_map(|(k, max_v)| {
            let params: Vec<(String, Vec<String>)> = (0..k)
                .map(|p| {
                    let name = format!("p{p}");
                    let values = (0..max_v).map(|v| format!("v{v}")).collect();
                    (name, values)
                })
                .collect();
            let space = ParameterSpace::new(params).unwrap();
            let literal = (0..k, 0..max_v).prop_map(|(parameter, value)| Literal {
                parameter,
                value,
            });
            let clause = prop::collection::vec(literal, 1..=3)
                .prop_map(|l| Clause::new(l).unwrap());
            prop::collection::vec(clause, 0..=4).prop_map(move |clauses| {
                ModelFile::new(space.clone(), clauses).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closure_preserves_cnf_semantics(model in arb_small_model()) {
            match close_tuples(&model) {
                Ok(closed) => {
                    for tc in all_test_cases(model.space()) {
                        prop_assert_eq!(closed.is_valid(&tc), model.satisfied_by(&tc));
                    }
                }
                Err(Error::Unsatisfiable { .. }) => {
                    // The error may only appear when truly no test case works.
                    for tc in all_test_cases(model.space()) {
                        prop_assert!(!model.satisfied_by(&tc));
                    }
                }
                Err(other) => prop_assert!(false, "unexpected error {}", other),
            }
        }

        #[test]
        fn closure_is_an_antichain(model in arb_small_model()) {
            if let Ok(closed) = close_tuples(&model) {
                let tuples: Vec<&PartialTuple> = closed.tuples().collect();
                for a in &tuples {
                    for b in &tuples {
                        if a != b {
                            prop_assert!(!a.is_subset_of(b));
                        }
                    }
                }
            }
        }

        #[test]
        fn forbidden_tuples_are_exactly_the_non_extendable_ones(model in arb_small_model()) {
            // Completeness on small models: a t-tuple is forbidden iff no
            // valid full test case extends it.
            if let Ok(closed) = close_tuples(&model) {
                let space = model.space();
                let all = all_test_cases(space);
                let t = 2.min(space.k());
                let strength = crate::model::Strength::new(t, space.k()).unwrap();
                let mut seen = BTreeSet::new();
                for tc in &all {
                    for tuple in crate::model::t_tuples_of(tc, strength, space) {
                        seen.insert(tuple);
                    }
                }
                for tuple in seen {
                    let extendable = all
                        .iter()
                        .filter(|tc| model.satisfied_by(tc))
                        .any(|tc| tuple.is_subassignment_of(tc));
                    prop_assert_eq!(
                        closed.tuple_forbidden(&tuple),
                        !extendable,
                        "tuple {}",
                        tuple.render(space)
                    );
                }
            }
        }
    }
}
