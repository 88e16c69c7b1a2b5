//! Indexed domain model shared by every other module: parameters and their
//! value domains, test cases, partial tuples, and the interaction strength.
//!
//! Parameters and values are referred to by position everywhere except the
//! parse and emit boundaries: parameter `p` is an index in `0..k` and a value
//! of `p` is an index in `0..domain_size(p)`.

use std::fmt::Write as _;

use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};

/// An ordered list of parameters, each with an ordered finite value domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSpace {
    parameters: Vec<Parameter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Parameter {
    name: String,
    values: Vec<String>,
}

impl ParameterSpace {
    /// Builds a space from `(name, values)` pairs, checking that names are
    /// unique and non-empty and that every parameter has at least one value.
    pub fn new<N, V>(parameters: Vec<(N, Vec<V>)>) -> Result<Self>
    where
        N: Into<String>,
        V: Into<String>,
    {
        let parameters: Vec<Parameter> = parameters
            .into_iter()
            .map(|(name, values)| Parameter {
                name: name.into(),
                values: values.into_iter().map(Into::into).collect(),
            })
            .collect();
        if parameters.is_empty() {
            return Err(Error::InvalidModel("no parameters defined".into()));
        }
        for (i, p) in parameters.iter().enumerate() {
            if p.name.is_empty() {
                return Err(Error::InvalidModel("empty parameter name".into()));
            }
            if parameters[..i].iter().any(|q| q.name == p.name) {
                return Err(Error::InvalidModel(format!(
                    "duplicate parameter name '{}'",
                    p.name
                )));
            }
            if p.values.is_empty() {
                return Err(Error::InvalidModel(format!(
                    "parameter '{}' has no values",
                    p.name
                )));
            }
            for (j, v) in p.values.iter().enumerate() {
                if v.is_empty() {
                    return Err(Error::InvalidModel(format!(
                        "empty value name in parameter '{}'",
                        p.name
                    )));
                }
                if p.values[..j].contains(v) {
                    return Err(Error::InvalidModel(format!(
                        "duplicate value '{}' in parameter '{}'",
                        v, p.name
                    )));
                }
            }
        }
        Ok(Self { parameters })
    }

    /// Number of parameters.
    pub fn k(&self) -> usize {
        self.parameters.len()
    }

    /// Number of values of parameter `p`.
    pub fn domain_size(&self, p: usize) -> usize {
        self.parameters[p].values.len()
    }

    /// Largest domain size over all parameters.
    pub fn max_domain_size(&self) -> usize {
        self.parameters
            .iter()
            .map(|p| p.values.len())
            .max()
            .unwrap_or(0)
    }

    /// All domain sizes in parameter order.
    pub fn domain_sizes(&self) -> Vec<usize> {
        self.parameters.iter().map(|p| p.values.len()).collect()
    }

    pub fn parameter_name(&self, p: usize) -> &str {
        &self.parameters[p].name
    }

    pub fn value_name(&self, p: usize, v: usize) -> &str {
        &self.parameters[p].values[v]
    }

    pub fn parameter_names(&self) -> impl Iterator<Item = &str> {
        self.parameters.iter().map(|p| p.name.as_str())
    }

    pub fn value_names(&self, p: usize) -> impl Iterator<Item = &str> {
        self.parameters[p].values.iter().map(|v| v.as_str())
    }

    pub fn parameter_index(&self, name: &str) -> Option<usize> {
        self.parameters.iter().position(|p| p.name == name)
    }

    pub fn value_index(&self, p: usize, name: &str) -> Option<usize> {
        self.parameters[p].values.iter().position(|v| v == name)
    }

    /// Size of the full Cartesian product of all domains.
    pub fn total_test_cases(&self) -> u128 {
        self.parameters
            .iter()
            .map(|p| p.values.len() as u128)
            .product()
    }
}

/// One `parameter = value` pair, both as indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    pub parameter: usize,
    pub value: usize,
}

impl Assignment {
    pub fn new(parameter: usize, value: usize) -> Self {
        Self { parameter, value }
    }
}

/// A partial assignment with pairwise-distinct parameters, stored in
/// ascending parameter order. The derived `Ord` on the assignment list is the
/// canonical tuple order used everywhere tuples are enumerated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialTuple {
    assignments: Vec<Assignment>,
}

impl PartialTuple {
    pub fn empty() -> Self {
        Self {
            assignments: Vec::new(),
        }
    }

    /// Canonicalizes a list of assignments: sorts by parameter and drops exact
    /// duplicates. Returns `None` when two assignments give the same parameter
    /// different values.
    pub fn from_assignments(mut assignments: Vec<Assignment>) -> Option<Self> {
        assignments.sort();
        assignments.dedup();
        for pair in assignments.windows(2) {
            if pair[0].parameter == pair[1].parameter {
                return None;
            }
        }
        Some(Self { assignments })
    }

    pub fn assignments(&self) -> &[Assignment] {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Value assigned to `parameter`, if any.
    pub fn value_of(&self, parameter: usize) -> Option<usize> {
        self.assignments
            .binary_search_by_key(&parameter, |a| a.parameter)
            .ok()
            .map(|i| self.assignments[i].value)
    }

    /// True when every assignment of `self` also appears in `other`.
    pub fn is_subset_of(&self, other: &PartialTuple) -> bool {
        let mut rest = other.assignments.as_slice();
        for a in &self.assignments {
            match rest.iter().position(|b| b == a) {
                Some(i) => rest = &rest[i + 1..],
                None => return false,
            }
        }
        true
    }

    /// True when the test case agrees with every assignment of `self`.
    pub fn is_subassignment_of(&self, tc: &TestCase) -> bool {
        self.assignments
            .iter()
            .all(|a| tc.value(a.parameter) == a.value)
    }

    /// True when the two tuples assign disjoint parameter sets.
    pub fn parameters_disjoint_with(&self, other: &PartialTuple) -> bool {
        self.assignments
            .iter()
            .all(|a| other.value_of(a.parameter).is_none())
    }

    /// Union of two tuples; `None` when they conflict on a parameter.
    pub fn merge(&self, other: &PartialTuple) -> Option<PartialTuple> {
        let mut all = self.assignments.clone();
        all.extend_from_slice(&other.assignments);
        PartialTuple::from_assignments(all)
    }

    /// Renders the tuple with names, e.g. `{color=black, shape=square}`.
    pub fn render(&self, space: &ParameterSpace) -> String {
        let mut out = String::from("{");
        for (i, a) in self.assignments.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(
                out,
                "{}={}",
                space.parameter_name(a.parameter),
                space.value_name(a.parameter, a.value)
            );
        }
        out.push('}');
        out
    }
}

/// A fully assigned test case: one value index per parameter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TestCase {
    values: Vec<usize>,
}

impl TestCase {
    /// Validating constructor: length and per-parameter domain bounds.
    pub fn new(values: Vec<usize>, space: &ParameterSpace) -> Result<Self> {
        if values.len() != space.k() {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: space.k(),
            });
        }
        for (p, &v) in values.iter().enumerate() {
            if v >= space.domain_size(p) {
                return Err(Error::InvalidModel(format!(
                    "value index {v} out of range for parameter '{}'",
                    space.parameter_name(p)
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn value(&self, parameter: usize) -> usize {
        self.values[parameter]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Copy of `self` with one cell replaced.
    pub fn with_value(&self, parameter: usize, value: usize) -> TestCase {
        let mut values = self.values.clone();
        values[parameter] = value;
        TestCase { values }
    }

    /// Copy of `self` with every assignment of `tuple` written over it.
    pub fn overwrite_with(&self, tuple: &PartialTuple) -> TestCase {
        let mut values = self.values.clone();
        for a in tuple.assignments() {
            values[a.parameter] = a.value;
        }
        TestCase { values }
    }
}

/// Interaction strength `t`, validated against the parameter count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strength {
    t: usize,
}

impl Strength {
    pub fn new(t: usize, k: usize) -> Result<Self> {
        if t < 1 {
            return Err(Error::StrengthTooSmall { t });
        }
        if t > k {
            return Err(Error::StrengthExceedsParameters { t, k });
        }
        Ok(Self { t })
    }

    pub fn get(self) -> usize {
        self.t
    }
}

/// Enumerates the C(k, t) restrictions of a test case to t-sized parameter
/// combinations, in ascending lexicographic combination order.
pub fn t_tuples_of(tc: &TestCase, t: Strength, space: &ParameterSpace) -> Vec<PartialTuple> {
    debug_assert_eq!(tc.len(), space.k());
    let mut out = Vec::new();
    for_each_combination(space.k(), t.get(), |combo| {
        let assignments = combo
            .iter()
            .map(|&p| Assignment::new(p, tc.value(p)))
            .collect();
        out.push(PartialTuple {
            assignments,
        });
    });
    out
}

/// Number of positions at which two test cases differ.
pub fn hamming_distance(a: &TestCase, b: &TestCase) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .filter(|(x, y)| x != y)
        .count())
}
