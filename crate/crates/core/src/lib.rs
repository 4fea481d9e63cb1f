//! Knowledge compilation of propositional constraints into smooth,
//! deterministic, decomposable circuits, and differentiable queries over them:
//! weighted model counting, semantic loss, constrained entropy and gradients.

pub mod circuit;
pub mod compiler;
pub mod constraints;
pub mod error;
pub mod formula;
pub mod nnf;
pub mod parse;
pub mod queries;
mod varset;

#[cfg(test)]
mod testing;

pub use circuit::{
    smooth, Circuit, Determinism, DeterminismMode, Lit, Node, NodeId, StructureReport,
};
pub use compiler::{compile, compile_with, default_order, CompileOptions, CompileStats, VarOrder};
pub use error::{CircuitError, CompileError, ConstraintError, FormulaError, QueryError};
pub use formula::{Assignment, Expr, Formula, ModelSet, Var};
pub use nnf::{read_nnf, write_nnf};
pub use parse::{parse_dimacs, parse_formula};
pub use queries::{EvalTrace, ProbVector};
pub use varset::VarSet;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
