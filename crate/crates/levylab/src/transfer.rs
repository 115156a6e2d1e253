//! The choice-elimination transfer gate.
//!
//! A sentence of the form `forallOrd x . psi` with `psi` upwards absolute is
//! provable without choice exactly when it is provable with it, because the
//! instance at any set of ordinal tuples can be checked inside a
//! constructible inner model containing that set. The gate recognizes the
//! `forallOrd` prefix on the sugared AST and certifies the matrix upwards
//! absolute with a syntactic rule system: Σ₁ classifications are the base
//! case, registry flags vouch for asserted atoms, and the closure rules walk
//! connectives and absoluteness-preserving quantifiers. The hypothesis it
//! checks is syntactic; it never claims the sentence is actually provable.

use std::fmt;
use std::str::FromStr;

use crate::ast::{free_vars, Formula, Variable};
use crate::classify::{classify_class, ClassifyError, RuleSet};
use crate::levy::LevyClass;
use crate::registry::Registry;

/// Sort of a declared parameter. Only ordinal-flavored parameters are
/// admissible: they live in every constructible inner model, so they do not
/// widen the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterSort {
    Ordinal,
    OrdinalTupleSet,
}

impl ParameterSort {
    pub fn name(&self) -> &'static str {
        match self {
            ParameterSort::Ordinal => "ordinal",
            ParameterSort::OrdinalTupleSet => "ordinal-tuple-set",
        }
    }
}

impl FromStr for ParameterSort {
    type Err = String;

    fn from_str(s: &str) -> Result<ParameterSort, String> {
        match s {
            "ordinal" | "ord" => Ok(ParameterSort::Ordinal),
            "ordinal-tuple-set" | "ordset" => Ok(ParameterSort::OrdinalTupleSet),
            other => Err(format!(
                "unknown parameter sort `{other}` (expected ordinal or ordinal-tuple-set)"
            )),
        }
    }
}

/// Declares one free variable of a gated sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterDeclaration {
    pub variable: Variable,
    pub sort: ParameterSort,
}

impl ParameterDeclaration {
    pub fn new(variable: Variable, sort: ParameterSort) -> ParameterDeclaration {
        ParameterDeclaration { variable, sort }
    }

    /// Parses a comma-separated declaration list, `name:sort,...`.
    pub fn parse_list(text: &str) -> Result<Vec<ParameterDeclaration>, String> {
        let mut out = Vec::new();
        for piece in text.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (name, sort) = piece
                .split_once(':')
                .ok_or_else(|| format!("malformed parameter declaration `{piece}`"))?;
            if !crate::ast::is_identifier(name.trim()) {
                return Err(format!("invalid parameter name `{}`", name.trim()));
            }
            out.push(ParameterDeclaration::new(
                Variable::new(name.trim()),
                sort.trim().parse()?,
            ));
        }
        Ok(out)
    }
}

/// Result kind of the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TransferOutcome {
    Eliminable,
    NotApplicable,
}

impl fmt::Display for TransferOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransferOutcome::Eliminable => f.write_str("Eliminable"),
            TransferOutcome::NotApplicable => f.write_str("NotApplicable"),
        }
    }
}

impl FromStr for TransferOutcome {
    type Err = String;

    fn from_str(s: &str) -> Result<TransferOutcome, String> {
        match s {
            "Eliminable" | "eliminable" => Ok(TransferOutcome::Eliminable),
            "NotApplicable" | "not-applicable" => Ok(TransferOutcome::NotApplicable),
            other => Err(format!("unknown transfer outcome `{other}`")),
        }
    }
}

/// Verdict of the gate, with the derivation that justifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferVerdict {
    pub outcome: TransferOutcome,
    /// Variables of the stripped leading `forallOrd` block, outermost first.
    pub stripped_prefix: Vec<Variable>,
    /// Classification of the matrix under the zf rules.
    pub matrix_class: LevyClass,
    /// Certificate lines, `rule:<name> at <subformula path>`.
    pub absoluteness_trace: Vec<String>,
    /// Explanation when the gate does not apply.
    pub reason: Option<String>,
}

/// Gate failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransferError {
    #[error("free variable `{0}` is not declared as a parameter")]
    UndeclaredParameter(Variable),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Decides whether the sentence has the shape the transfer theorem needs:
/// a maximal leading `forallOrd` block over an upwards-absolute matrix.
/// Free variables must all be declared; the two ordinal sorts are the only
/// admissible ones, so declaration is admission.
pub fn check_transfer(
    formula: &Formula,
    params: &[ParameterDeclaration],
    registry: &Registry,
) -> Result<TransferVerdict, TransferError> {
    for free in free_vars(formula) {
        if !params.iter().any(|p| p.variable == free) {
            return Err(TransferError::UndeclaredParameter(free));
        }
    }

    let mut stripped_prefix = Vec::new();
    let mut matrix = formula;
    while let Formula::OrdForall(var, body) = matrix {
        stripped_prefix.push(var.clone());
        matrix = body;
    }

    let matrix_class = classify_class(matrix, RuleSet::Zf, registry)?;
    let (certified, trace) = certify_upwards(matrix, registry);
    if certified {
        Ok(TransferVerdict {
            outcome: TransferOutcome::Eliminable,
            stripped_prefix,
            matrix_class,
            absoluteness_trace: trace,
            reason: None,
        })
    } else {
        let reason = match matrix {
            Formula::Exists(..) | Formula::OrdExists(..) => {
                "leading quantifier is existential".to_string()
            }
            _ => "matrix is not certified upwards absolute".to_string(),
        };
        Ok(TransferVerdict {
            outcome: TransferOutcome::NotApplicable,
            stripped_prefix,
            matrix_class,
            absoluteness_trace: Vec::new(),
            reason: Some(reason),
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Upwards,
    Downwards,
}

/// Certifies that truth of `formula` persists from a transitive inner model
/// to the outer one. Returns the certificate trace on success and an empty
/// trace on refusal; the calculus is an upper bound and may refuse formulas
/// that happen to be absolute.
pub fn certify_upwards(formula: &Formula, registry: &Registry) -> (bool, Vec<String>) {
    match certify(formula, Direction::Upwards, "/", registry) {
        Some(trace) => (true, trace),
        None => (false, Vec::new()),
    }
}

/// Dual certificate: truth persists from the outer model to the inner one.
pub fn certify_downwards(formula: &Formula, registry: &Registry) -> (bool, Vec<String>) {
    match certify(formula, Direction::Downwards, "/", registry) {
        Some(trace) => (true, trace),
        None => (false, Vec::new()),
    }
}

fn child_path(path: &str, index: usize) -> String {
    if path == "/" {
        format!("/{index}")
    } else {
        format!("{path}/{index}")
    }
}

fn certify(
    formula: &Formula,
    dir: Direction,
    path: &str,
    registry: &Registry,
) -> Option<Vec<String>> {
    let line = |name: &str| format!("rule:{name} at {path}");

    // Base case: low classifications are absolute in the matching direction.
    let base = match dir {
        Direction::Upwards => LevyClass::sigma(1),
        Direction::Downwards => LevyClass::pi(1),
    };
    if let Ok(class) = classify_class(formula, RuleSet::Zf, registry) {
        if class.leq(&base) {
            let name = match dir {
                Direction::Upwards => "sigma1",
                Direction::Downwards => "pi1",
            };
            return Some(vec![line(name)]);
        }
    }

    match formula {
        Formula::Defined(name, _) => {
            let info = registry.get(name)?;
            let flagged = match dir {
                Direction::Upwards => info.upwards_absolute(),
                Direction::Downwards => info.downwards_absolute(),
            };
            flagged.then(|| {
                vec![line(match dir {
                    Direction::Upwards => "flag-up",
                    Direction::Downwards => "flag-down",
                })]
            })
        }
        Formula::Not(body) => {
            let sub = certify(body, dir.flip(), &child_path(path, 0), registry)?;
            Some(with_head(line(&dir.tag("not")), sub))
        }
        Formula::And(l, r) | Formula::Or(l, r) => {
            let name = if matches!(formula, Formula::And(..)) {
                "and"
            } else {
                "or"
            };
            let mut trace = vec![line(&dir.tag(name))];
            trace.extend(certify(l, dir, &child_path(path, 0), registry)?);
            trace.extend(certify(r, dir, &child_path(path, 1), registry)?);
            Some(trace)
        }
        Formula::Implies(l, r) => {
            // Truth of an implication transfers when the antecedent transfers
            // the opposite way and the consequent this way.
            let mut trace = vec![line(&dir.tag("implies"))];
            trace.extend(certify(l, dir.flip(), &child_path(path, 0), registry)?);
            trace.extend(certify(r, dir, &child_path(path, 1), registry)?);
            Some(trace)
        }
        Formula::Exists(_, body) | Formula::OrdExists(_, body) => {
            // A witness in the inner model is one in the outer model; the
            // dual direction is refused.
            if dir != Direction::Upwards {
                return None;
            }
            let name = if matches!(formula, Formula::Exists(..)) {
                "exists"
            } else {
                "ord-exists"
            };
            let sub = certify(body, dir, &child_path(path, 0), registry)?;
            Some(with_head(line(&dir.tag(name)), sub))
        }
        Formula::Forall(_, body) | Formula::OrdForall(_, body) => {
            if dir != Direction::Downwards {
                return None;
            }
            let name = if matches!(formula, Formula::Forall(..)) {
                "forall"
            } else {
                "ord-forall"
            };
            let sub = certify(body, dir, &child_path(path, 0), registry)?;
            Some(with_head(line(&dir.tag(name)), sub))
        }
        // Transitivity keeps the elements of an in-scope set identical in
        // both models, so set-bounded quantifiers preserve either direction.
        Formula::BoundedExists { body, .. } => {
            let sub = certify(body, dir, &child_path(path, 0), registry)?;
            Some(with_head(line(&dir.tag("bounded-exists")), sub))
        }
        Formula::BoundedForall { body, .. } => {
            let sub = certify(body, dir, &child_path(path, 0), registry)?;
            Some(with_head(line(&dir.tag("bounded-forall")), sub))
        }
        Formula::Member(..) | Formula::Equal(..) => None,
    }
}

impl Direction {
    fn flip(self) -> Direction {
        match self {
            Direction::Upwards => Direction::Downwards,
            Direction::Downwards => Direction::Upwards,
        }
    }

    fn tag(self, name: &str) -> String {
        match self {
            Direction::Upwards => format!("{name}-up"),
            Direction::Downwards => format!("{name}-down"),
        }
    }
}

fn with_head(head: String, mut tail: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(tail.len() + 1);
    out.push(head);
    out.append(&mut tail);
    out
}
