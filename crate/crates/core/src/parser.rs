//! Line-oriented parser for the CIT model file format:
//!
//! ```text
//! PARAMETERS
//! color[black, gold, red]
//! coating[anodic, cathodic]
//! CONSTRAINTS
//! color != gold || coating != cathodic
//! ```
//!
//! A `PARAMETERS` section lists each parameter with its value domain. An
//! optional `CONSTRAINTS` section holds one disjunction of inequalities per
//! line; the lines together form a conjunction (CNF). Keywords are exact
//! uppercase matches, names and values are case-sensitive and trimmed, and
//! blank lines are ignored everywhere.

use crate::error::{Error, Result};
use crate::model::{Assignment, ParameterSpace, PartialTuple, TestCase};

/// One inequality `parameter != value`, resolved to indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub parameter: usize,
    pub value: usize,
}

/// A non-empty disjunction of inequality literals (one source line).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Self> {
        if literals.is_empty() {
            return Err(Error::InvalidModel("empty constraint clause".into()));
        }
        Ok(Self { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    /// Direct CNF semantics: a disjunction holds when at least one
    /// inequality holds.
    pub fn satisfied_by(&self, tc: &TestCase) -> bool {
        self.literals
            .iter()
            .any(|lit| tc.value(lit.parameter) != lit.value)
    }

    /// Renders the clause in input syntax, e.g. `color != black || shape != square`.
    pub fn render(&self, space: &ParameterSpace) -> String {
        let rendered: Vec<String> = self
            .literals
            .iter()
            .map(|lit| {
                format!(
                    "{} != {}",
                    space.parameter_name(lit.parameter),
                    space.value_name(lit.parameter, lit.value)
                )
            })
            .collect();
        rendered.join(" || ")
    }
}

/// A parsed model: the parameter space plus the CNF constraint list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    space: ParameterSpace,
    clauses: Vec<Clause>,
}

impl ModelFile {
    /// Validating constructor: every literal must reference an existing
    /// parameter and a value inside that parameter's domain.
    pub fn new(space: ParameterSpace, clauses: Vec<Clause>) -> Result<Self> {
        for clause in &clauses {
            for lit in clause.literals() {
                if lit.parameter >= space.k() {
                    return Err(Error::InvalidModel(format!(
                        "literal references parameter index {} out of range",
                        lit.parameter
                    )));
                }
                if lit.value >= space.domain_size(lit.parameter) {
                    return Err(Error::InvalidModel(format!(
                        "literal references value index {} out of range for parameter '{}'",
                        lit.value,
                        space.parameter_name(lit.parameter)
                    )));
                }
            }
        }
        Ok(Self { space, clauses })
    }

    /// A model with no constraints.
    pub fn unconstrained(space: ParameterSpace) -> Self {
        Self {
            space,
            clauses: Vec::new(),
        }
    }

    pub fn space(&self) -> &ParameterSpace {
        &self.space
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// True when the test case satisfies every clause (the conjunction).
    pub fn satisfied_by(&self, tc: &TestCase) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(tc))
    }

    /// Renders the model back to canonical input text; parsing the result
    /// reproduces this model exactly.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::from("PARAMETERS\n");
        for p in 0..self.space.k() {
            out.push_str(self.space.parameter_name(p));
            out.push('[');
            let values: Vec<&str> = self.space.value_names(p).collect();
            out.push_str(&values.join(", "));
            out.push_str("]\n");
        }
        if !self.clauses.is_empty() {
            out.push_str("CONSTRAINTS\n");
            for clause in &self.clauses {
                out.push_str(&clause.render(&self.space));
                out.push('\n');
            }
        }
        out
    }
}

/// Maps a clause to the forbidden tuple given by its negation: the clause
/// `p1 != v1 || ... || pm != vm` rules out exactly the combination
/// `{p1=v1, ..., pm=vm}`. Identical literals collapse; a clause that gives
/// one parameter two different values is satisfied by every test case and
/// yields `None` (vacuous, no forbidden tuple).
pub fn clause_to_tuple(clause: &Clause, _space: &ParameterSpace) -> Option<PartialTuple> {
    PartialTuple::from_assignments(
        clause
            .literals()
            .iter()
            .map(|lit| Assignment::new(lit.parameter, lit.value))
            .collect(),
    )
}

const NAME_FORBIDDEN: [char; 6] = ['[', ']', ',', '|', '!', '='];

fn check_name(s: &str, what: &str, line: usize) -> Result<()> {
    if s.is_empty() {
        return Err(Error::Parse {
            line,
            message: format!("empty {what}"),
        });
    }
    for c in NAME_FORBIDDEN {
        if s.contains(c) {
            return Err(Error::Parse {
                line,
                message: format!("invalid character '{c}' in {what} '{s}'"),
            });
        }
    }
    Ok(())
}

fn looks_like_section_header(line: &str) -> bool {
    !line.is_empty() && line.chars().all(|c| c.is_ascii_uppercase())
}

/// Parses model text into a [`ModelFile`]. Every rejection carries the
/// 1-based number of the offending line.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    enum Section {
        Parameters,
        Constraints,
    }

    let mut section: Option<Section> = None;
    let mut header_line = 0usize;
    let mut parameters: Vec<(String, Vec<String>)> = Vec::new();
    let mut raw_clauses: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match section {
            None => {
                if line == "PARAMETERS" {
                    section = Some(Section::Parameters);
                    header_line = line_no;
                } else {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "missing PARAMETERS header".into(),
                    });
                }
            }
            Some(Section::Parameters) => {
                if line == "CONSTRAINTS" {
                    if parameters.is_empty() {
                        return Err(Error::Parse {
                            line: line_no,
                            message: "no parameters defined before CONSTRAINTS".into(),
                        });
                    }
                    section = Some(Section::Constraints);
                } else if line == "PARAMETERS" {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "duplicate PARAMETERS section".into(),
                    });
                } else if looks_like_section_header(line) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown section '{line}'"),
                    });
                } else {
                    parameters.push(parse_parameter_line(line, line_no, &parameters)?);
                }
            }
            Some(Section::Constraints) => {
                if line == "PARAMETERS" || line == "CONSTRAINTS" {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("duplicate {line} section"),
                    });
                }
                if looks_like_section_header(line) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown section '{line}'"),
                    });
                }
                raw_clauses.push((line_no, line.to_string()));
            }
        }
    }

    if section.is_none() {
        return Err(Error::Parse {
            line: 1,
            message: "missing PARAMETERS header".into(),
        });
    }
    if parameters.is_empty() {
        return Err(Error::Parse {
            line: header_line,
            message: "no parameters defined".into(),
        });
    }

    let space = ParameterSpace::new(parameters)?;
    let mut clauses = Vec::with_capacity(raw_clauses.len());
    for (line_no, line) in raw_clauses {
        clauses.push(parse_clause_line(&line, line_no, &space)?);
    }
    ModelFile::new(space, clauses)
}

fn parse_parameter_line(
    line: &str,
    line_no: usize,
    seen: &[(String, Vec<String>)],
) -> Result<(String, Vec<String>)> {
    let Some((name, rest)) = line.split_once('[') else {
        return Err(Error::Parse {
            line: line_no,
            message: "expected '[' in parameter definition".into(),
        });
    };
    let name = name.trim();
    check_name(name, "parameter name", line_no)?;
    if seen.iter().any(|(n, _)| n == name) {
        return Err(Error::Parse {
            line: line_no,
            message: format!("duplicate parameter name '{name}'"),
        });
    }
    let Some((inner, tail)) = rest.split_once(']') else {
        return Err(Error::Parse {
            line: line_no,
            message: "expected closing ']' in parameter definition".into(),
        });
    };
    if !tail.trim().is_empty() {
        return Err(Error::Parse {
            line: line_no,
            message: "unexpected text after ']'".into(),
        });
    }
    let mut values = Vec::new();
    for piece in inner.split(',') {
        let value = piece.trim();
        check_name(value, "value name", line_no)?;
        if values.iter().any(|v| v == value) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate value '{value}' in parameter '{name}'"),
            });
        }
        values.push(value.to_string());
    }
    Ok((name.to_string(), values))
}

fn parse_clause_line(line: &str, line_no: usize, space: &ParameterSpace) -> Result<Clause> {
    let mut literals = Vec::new();
    for piece in line.split("||") {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty disjunct in constraint".into(),
            });
        }
        let Some((lhs, rhs)) = piece.split_once("!=") else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected '!=' in constraint literal '{piece}'"),
            });
        };
        let pname = lhs.trim();
        let vname = rhs.trim();
        check_name(pname, "parameter name", line_no)?;
        check_name(vname, "value name", line_no)?;
        let Some(parameter) = space.parameter_index(pname) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unknown parameter '{pname}'"),
            });
        };
        let Some(value) = space.value_index(parameter, vname) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "unknown value '{vname}' for parameter '{pname}'"
                ),
            });
        };
        literals.push(Literal { parameter, value });
    }
    Clause::new(literals)
}
