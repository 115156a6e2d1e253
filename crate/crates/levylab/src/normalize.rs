//! Rewrites feeding the classifier and the transfer gate: ordinal-bounded
//! quantifier desugaring, negation normal form, prenex extraction, and the
//! block-contraction view of a prenex prefix.

use std::collections::BTreeSet;

use crate::ast::{rename_fresh, Formula, Variable};
use crate::registry::BuiltinEval;

/// Kind of a prenex prefix entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantifierKind {
    Exists,
    Forall,
}

/// Whether a prefix quantifier is plain or ordinal-bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantifierFlavor {
    Unbounded,
    OrdBounded,
}

/// One entry of a prenex prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixEntry {
    pub kind: QuantifierKind,
    pub flavor: QuantifierFlavor,
    pub var: Variable,
}

/// A formula in prenex form: a prefix of unbounded and ordinal-bounded
/// quantifiers over a matrix containing at most set-bounded quantifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrenexForm {
    pub prefix: Vec<PrefixEntry>,
    pub matrix: Formula,
}

impl PrenexForm {
    /// Reassembles the prenex form into a single formula.
    pub fn rebuild(&self) -> Formula {
        let mut f = self.matrix.clone();
        for entry in self.prefix.iter().rev() {
            f = match (entry.kind, entry.flavor) {
                (QuantifierKind::Exists, QuantifierFlavor::Unbounded) => {
                    Formula::exists(entry.var.clone(), f)
                }
                (QuantifierKind::Forall, QuantifierFlavor::Unbounded) => {
                    Formula::forall(entry.var.clone(), f)
                }
                (QuantifierKind::Exists, QuantifierFlavor::OrdBounded) => {
                    Formula::ord_exists(entry.var.clone(), f)
                }
                (QuantifierKind::Forall, QuantifierFlavor::OrdBounded) => {
                    Formula::ord_forall(entry.var.clone(), f)
                }
            };
        }
        f
    }
}

/// A maximal run of same-kind prefix quantifiers, the unit the level count
/// sees. Contraction is bookkeeping only; no pairing apparatus is introduced
/// and the formula itself is untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantifierBlock {
    pub kind: QuantifierKind,
    pub vars: Vec<(Variable, QuantifierFlavor)>,
}

/// Replaces ordinal-bounded quantifiers by their definitions:
/// `existsOrd x . p` becomes `exists x . OrdTupleSet(x) and p`, and
/// `forallOrd x . p` becomes `forall x . OrdTupleSet(x) -> p`.
pub fn desugar_ord(formula: &Formula) -> Formula {
    let guard = |v: &Variable| {
        Formula::Defined(BuiltinEval::OrdTupleSet.name().to_string(), vec![v.clone()])
    };
    match formula {
        Formula::Member(..) | Formula::Equal(..) | Formula::Defined(..) => formula.clone(),
        Formula::Not(body) => Formula::not(desugar_ord(body)),
        Formula::And(l, r) => Formula::and(desugar_ord(l), desugar_ord(r)),
        Formula::Or(l, r) => Formula::or(desugar_ord(l), desugar_ord(r)),
        Formula::Implies(l, r) => Formula::implies(desugar_ord(l), desugar_ord(r)),
        Formula::Exists(v, body) => Formula::exists(v.clone(), desugar_ord(body)),
        Formula::Forall(v, body) => Formula::forall(v.clone(), desugar_ord(body)),
        Formula::BoundedExists { var, bound, body } => {
            Formula::bounded_exists(var.clone(), bound.clone(), desugar_ord(body))
        }
        Formula::BoundedForall { var, bound, body } => {
            Formula::bounded_forall(var.clone(), bound.clone(), desugar_ord(body))
        }
        Formula::OrdExists(v, body) => Formula::exists(
            v.clone(),
            Formula::and(guard(v), desugar_ord(body)),
        ),
        Formula::OrdForall(v, body) => Formula::forall(
            v.clone(),
            Formula::implies(guard(v), desugar_ord(body)),
        ),
    }
}

/// Negation normal form: `->` eliminated as `not L or R`, negations pushed
/// to atoms through the quantifier dualities.
pub fn to_nnf(formula: &Formula) -> Formula {
    nnf_positive(formula)
}

fn nnf_positive(formula: &Formula) -> Formula {
    match formula {
        Formula::Member(..) | Formula::Equal(..) | Formula::Defined(..) => formula.clone(),
        Formula::Not(body) => nnf_negated(body),
        Formula::And(l, r) => Formula::and(nnf_positive(l), nnf_positive(r)),
        Formula::Or(l, r) => Formula::or(nnf_positive(l), nnf_positive(r)),
        Formula::Implies(l, r) => Formula::or(nnf_negated(l), nnf_positive(r)),
        Formula::Exists(v, body) => Formula::exists(v.clone(), nnf_positive(body)),
        Formula::Forall(v, body) => Formula::forall(v.clone(), nnf_positive(body)),
        Formula::BoundedExists { var, bound, body } => {
            Formula::bounded_exists(var.clone(), bound.clone(), nnf_positive(body))
        }
        Formula::BoundedForall { var, bound, body } => {
            Formula::bounded_forall(var.clone(), bound.clone(), nnf_positive(body))
        }
        Formula::OrdExists(v, body) => Formula::ord_exists(v.clone(), nnf_positive(body)),
        Formula::OrdForall(v, body) => Formula::ord_forall(v.clone(), nnf_positive(body)),
    }
}

fn nnf_negated(formula: &Formula) -> Formula {
    match formula {
        Formula::Member(..) | Formula::Equal(..) | Formula::Defined(..) => {
            Formula::not(formula.clone())
        }
        Formula::Not(body) => nnf_positive(body),
        Formula::And(l, r) => Formula::or(nnf_negated(l), nnf_negated(r)),
        Formula::Or(l, r) => Formula::and(nnf_negated(l), nnf_negated(r)),
        Formula::Implies(l, r) => Formula::and(nnf_positive(l), nnf_negated(r)),
        Formula::Exists(v, body) => Formula::forall(v.clone(), nnf_negated(body)),
        Formula::Forall(v, body) => Formula::exists(v.clone(), nnf_negated(body)),
        Formula::BoundedExists { var, bound, body } => {
            Formula::bounded_forall(var.clone(), bound.clone(), nnf_negated(body))
        }
        Formula::BoundedForall { var, bound, body } => {
            Formula::bounded_exists(var.clone(), bound.clone(), nnf_negated(body))
        }
        Formula::OrdExists(v, body) => Formula::ord_forall(v.clone(), nnf_negated(body)),
        Formula::OrdForall(v, body) => Formula::ord_exists(v.clone(), nnf_negated(body)),
    }
}

/// Classical prenex extraction. The input is first put in negation normal
/// form and all binders are freshened; unbounded and ordinal-bounded
/// quantifiers are then pulled into the prefix in left-to-right order of
/// occurrence. A set-bounded quantifier stays in the matrix unless unbounded
/// quantifiers occur beneath it, in which case it is expanded to its guarded
/// unbounded form and pulled as well, so the matrix is always prefix-free.
/// Vacuous quantifiers are pulled like any other, not deleted.
pub fn to_prenex(formula: &Formula) -> PrenexForm {
    let normalized = rename_fresh(&to_nnf(formula), &BTreeSet::new());
    let (prefix, matrix) = pull(&normalized);
    PrenexForm { prefix, matrix }
}

fn pull(formula: &Formula) -> (Vec<PrefixEntry>, Formula) {
    match formula {
        Formula::Member(..) | Formula::Equal(..) | Formula::Defined(..) | Formula::Not(..) => {
            (Vec::new(), formula.clone())
        }
        Formula::And(l, r) => {
            let (mut prefix, left) = pull(l);
            let (right_prefix, right) = pull(r);
            prefix.extend(right_prefix);
            (prefix, Formula::and(left, right))
        }
        Formula::Or(l, r) => {
            let (mut prefix, left) = pull(l);
            let (right_prefix, right) = pull(r);
            prefix.extend(right_prefix);
            (prefix, Formula::or(left, right))
        }
        Formula::Implies(..) => unreachable!("implications are eliminated by nnf"),
        Formula::Exists(v, body) => pulled_prefix(
            QuantifierKind::Exists,
            QuantifierFlavor::Unbounded,
            v,
            body,
        ),
        Formula::Forall(v, body) => pulled_prefix(
            QuantifierKind::Forall,
            QuantifierFlavor::Unbounded,
            v,
            body,
        ),
        Formula::OrdExists(v, body) => pulled_prefix(
            QuantifierKind::Exists,
            QuantifierFlavor::OrdBounded,
            v,
            body,
        ),
        Formula::OrdForall(v, body) => pulled_prefix(
            QuantifierKind::Forall,
            QuantifierFlavor::OrdBounded,
            v,
            body,
        ),
        Formula::BoundedExists { var, bound, body } => {
            let (inner_prefix, matrix) = pull(body);
            if inner_prefix.is_empty() {
                (
                    Vec::new(),
                    Formula::bounded_exists(var.clone(), bound.clone(), matrix),
                )
            } else {
                // (exists x in y . p) == exists x . x in y and p
                let guarded = Formula::and(Formula::Member(var.clone(), bound.clone()), matrix);
                let mut prefix = vec![PrefixEntry {
                    kind: QuantifierKind::Exists,
                    flavor: QuantifierFlavor::Unbounded,
                    var: var.clone(),
                }];
                prefix.extend(inner_prefix);
                (prefix, guarded)
            }
        }
        Formula::BoundedForall { var, bound, body } => {
            let (inner_prefix, matrix) = pull(body);
            if inner_prefix.is_empty() {
                (
                    Vec::new(),
                    Formula::bounded_forall(var.clone(), bound.clone(), matrix),
                )
            } else {
                // (forall x in y . p) == forall x . not x in y or p
                let guarded = Formula::or(
                    Formula::not(Formula::Member(var.clone(), bound.clone())),
                    matrix,
                );
                let mut prefix = vec![PrefixEntry {
                    kind: QuantifierKind::Forall,
                    flavor: QuantifierFlavor::Unbounded,
                    var: var.clone(),
                }];
                prefix.extend(inner_prefix);
                (prefix, guarded)
            }
        }
    }
}

fn pulled_prefix(
    kind: QuantifierKind,
    flavor: QuantifierFlavor,
    var: &Variable,
    body: &Formula,
) -> (Vec<PrefixEntry>, Formula) {
    let (inner_prefix, matrix) = pull(body);
    let mut prefix = vec![PrefixEntry {
        kind,
        flavor,
        var: var.clone(),
    }];
    prefix.extend(inner_prefix);
    (prefix, matrix)
}

/// Groups adjacent same-kind prefix entries into blocks, the unit counted by
/// the classifier. Flavor is recorded per variable.
pub fn contract_blocks(prenex: &PrenexForm) -> Vec<QuantifierBlock> {
    let mut blocks: Vec<QuantifierBlock> = Vec::new();
    for entry in &prenex.prefix {
        match blocks.last_mut() {
            Some(block) if block.kind == entry.kind => {
                block.vars.push((entry.var.clone(), entry.flavor));
            }
            _ => blocks.push(QuantifierBlock {
                kind: entry.kind,
                vars: vec![(entry.var.clone(), entry.flavor)],
            }),
        }
    }
    blocks
}

/// True when the prenex matrix satisfies its invariant: no unbounded or
/// ordinal-bounded quantifier anywhere, including under bounded quantifiers.
pub fn matrix_is_prefix_free(formula: &Formula) -> bool {
    match formula {
        Formula::Member(..) | Formula::Equal(..) | Formula::Defined(..) => true,
        Formula::Not(body) => matrix_is_prefix_free(body),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            matrix_is_prefix_free(l) && matrix_is_prefix_free(r)
        }
        Formula::BoundedExists { body, .. } | Formula::BoundedForall { body, .. } => {
            matrix_is_prefix_free(body)
        }
        Formula::Exists(..)
        | Formula::Forall(..)
        | Formula::OrdExists(..)
        | Formula::OrdForall(..) => false,
    }
}
