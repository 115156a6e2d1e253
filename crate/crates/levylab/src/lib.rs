//! Formula analysis for set theory in the Lévy hierarchy.
//!
//! The crate parses first-order set-theory formulas with bounded and
//! ordinal-bounded quantifiers, computes syntactic hierarchy upper bounds
//! with derivation traces, decides the choice-elimination transfer gate for
//! `forallOrd`-prefixed sentences, and validates its own classifications by
//! brute-force evaluation over finite transitive models of hereditarily
//! finite sets. All classifications are upper bounds under a fixed rewrite
//! pipeline; no semantic minimization is attempted.

pub mod ast;
pub mod classify;
pub mod cli;
pub mod corpus;
pub mod hf;
pub mod levy;
pub mod normalize;
pub mod parser;
pub mod partition;
pub mod printer;
pub mod registry;
pub mod report;
pub mod transfer;

pub use ast::{check_scope, free_vars, rename_fresh, Formula, ScopeViolation, Variable};
pub use classify::{classify, delta_refine, is_ordinal_bounded_only, ClassifyError, RuleSet};
pub use levy::{ClassKind, LevyClass};
pub use normalize::{contract_blocks, desugar_ord, to_nnf, to_prenex, PrenexForm};
pub use parser::{parse, ParseError};
pub use printer::print;
pub use registry::{BuiltinEval, PredicateInfo, Registry, RegistryError};
pub use transfer::{
    check_transfer, certify_downwards, certify_upwards, ParameterDeclaration, ParameterSort,
    TransferError, TransferOutcome, TransferVerdict,
};
