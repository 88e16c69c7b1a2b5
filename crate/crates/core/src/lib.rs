//! Constrained combinatorial interaction test generation.
//!
//! The pipeline: parse a parameters+constraints model file
//! ([`parser::parse_model`]), complete the forbidden-tuple set with a
//! derive/simplify fixpoint ([`constraints::close_tuples`]), build and clean
//! the combination matrix ([`coverage::CombinationMatrix`]), construct and
//! shrink a covering suite with mixed-neighborhood local search
//! ([`generator::generate`]), and certify the result against an independent
//! brute-force oracle ([`oracle::verify_suite`]).

mod combinatorics;

pub mod constraints;
pub mod coverage;
pub mod error;
pub mod generator;
pub mod model;
pub mod oracle;
pub mod output;
pub mod parser;

pub use constraints::{close_tuples, close_tuples_with_cap, ForbiddenTupleSet};
pub use coverage::{CombinationMatrix, CoverageDelta};
pub use error::{Error, Result};
pub use generator::{generate, Budget, GeneratedSuite, GenerationStats, GeneratorConfig};
pub use model::{Assignment, ParameterSpace, PartialTuple, Strength, TestCase};
pub use oracle::{enumerate_coverable_tuples, verify_suite, OracleReport};
pub use parser::{parse_model, Clause, Literal, ModelFile};
