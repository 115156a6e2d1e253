//! Syntactic Lévy-hierarchy upper bounds with derivation traces.
//!
//! The computed class is the least one derivable by a fixed rule calculus;
//! a formula reported Σ₂ may well be equivalent to something lower, so the
//! result is an upper bound, never a lower-bound claim. Atoms over ∈ and =
//! are Δ₀, defined atoms contribute their assigned class, negation dualizes,
//! the binary connectives take the lattice join (an implication counts as
//! `not L or R`), unbounded quantifiers lift into the least enclosing Σ/Π
//! envelope, and ordinal-bounded quantifiers behave exactly like unbounded
//! ones because their guard is Δ₀. Set-bounded quantifiers are where the two
//! rule sets differ.

use crate::ast::{Formula, Variable};
use crate::levy::{ClassKind, LevyClass, LEVEL_CAP};
use crate::normalize::to_nnf;
use crate::registry::Registry;

/// Which bounded-quantifier rules to apply.
///
/// `Zf` absorbs a set-bounded quantifier into a Σₙ/Πₙ/Δₙ body for n ≥ 1,
/// the standard collection fact; `Minimal` grants nothing beyond the Δ₀ base
/// case and otherwise treats bounded quantifiers like unbounded ones. Both
/// agree on Δ₀ bodies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RuleSet {
    #[default]
    Zf,
    Minimal,
}

impl RuleSet {
    pub fn name(&self) -> &'static str {
        match self {
            RuleSet::Zf => "zf",
            RuleSet::Minimal => "minimal",
        }
    }
}

impl std::str::FromStr for RuleSet {
    type Err = String;

    fn from_str(s: &str) -> Result<RuleSet, String> {
        match s {
            "zf" => Ok(RuleSet::Zf),
            "minimal" => Ok(RuleSet::Minimal),
            other => Err(format!("unknown rule set `{other}` (expected zf or minimal)")),
        }
    }
}

/// The rule applied at one trace node, carrying what replay needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceRule {
    AtomMember,
    AtomEqual,
    AtomDefined { assigned: LevyClass },
    NotDual,
    AndJoin,
    OrJoin,
    ImpliesJoin,
    ExistsLift,
    ForallLift,
    OrdExistsLift,
    OrdForallLift,
    BoundedDelta0,
    BoundedAbsorb,
    BoundedExistsLift,
    BoundedForallLift,
}

impl TraceRule {
    pub fn name(&self) -> &'static str {
        match self {
            TraceRule::AtomMember => "atom-member",
            TraceRule::AtomEqual => "atom-equal",
            TraceRule::AtomDefined { .. } => "atom-defined",
            TraceRule::NotDual => "not-dual",
            TraceRule::AndJoin => "and-join",
            TraceRule::OrJoin => "or-join",
            TraceRule::ImpliesJoin => "implies-join",
            TraceRule::ExistsLift => "exists-lift",
            TraceRule::ForallLift => "forall-lift",
            TraceRule::OrdExistsLift => "ord-exists-lift",
            TraceRule::OrdForallLift => "ord-forall-lift",
            TraceRule::BoundedDelta0 => "bounded-delta0",
            TraceRule::BoundedAbsorb => "bounded-absorb",
            TraceRule::BoundedExistsLift => "bounded-exists-lift",
            TraceRule::BoundedForallLift => "bounded-forall-lift",
        }
    }
}

/// Derivation tree of a classification; the root class is the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationTrace {
    pub rule: TraceRule,
    /// Head of the subformula the rule fired on, e.g. `exists x` or `x in y`.
    pub subformula: String,
    pub class: LevyClass,
    pub children: Vec<ClassificationTrace>,
}

impl ClassificationTrace {
    /// Re-derives the class bottom-up from the recorded rules alone.
    /// Returns `None` if any node's stored class disagrees with its rule.
    pub fn replay(&self) -> Option<LevyClass> {
        let child_classes: Vec<LevyClass> = self
            .children
            .iter()
            .map(|c| c.replay())
            .collect::<Option<Vec<_>>>()?;
        let derived = match (&self.rule, child_classes.as_slice()) {
            (TraceRule::AtomMember, []) | (TraceRule::AtomEqual, []) => LevyClass::DELTA0,
            (TraceRule::AtomDefined { assigned }, []) => *assigned,
            (TraceRule::NotDual, [c]) => c.dual(),
            (TraceRule::AndJoin, [l, r]) | (TraceRule::OrJoin, [l, r]) => l.join(r),
            (TraceRule::ImpliesJoin, [l, r]) => l.dual().join(r),
            (TraceRule::ExistsLift, [c]) | (TraceRule::OrdExistsLift, [c]) => c.lift_exists(),
            (TraceRule::ForallLift, [c]) | (TraceRule::OrdForallLift, [c]) => c.lift_forall(),
            (TraceRule::BoundedDelta0, [c]) if *c == LevyClass::DELTA0 => LevyClass::DELTA0,
            (TraceRule::BoundedAbsorb, [c]) => *c,
            (TraceRule::BoundedExistsLift, [c]) => c.lift_exists(),
            (TraceRule::BoundedForallLift, [c]) => c.lift_forall(),
            _ => return None,
        };
        (derived == self.class).then_some(derived)
    }

    /// Flattens the tree into indented display lines.
    pub fn render_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        self.render_into(0, &mut lines);
        lines
    }

    fn render_into(&self, depth: usize, lines: &mut Vec<String>) {
        lines.push(format!(
            "{}{} [{}] {}",
            "  ".repeat(depth),
            self.subformula,
            self.rule.name(),
            self.class
        ));
        for child in &self.children {
            child.render_into(depth + 1, lines);
        }
    }
}

/// Classification failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("derived level exceeds the cap of {0}")]
    LevelCapExceeded(u32),
}

fn head_label(formula: &Formula) -> String {
    match formula {
        Formula::Member(a, b) => format!("{a} in {b}"),
        Formula::Equal(a, b) => format!("{a} = {b}"),
        Formula::Defined(name, args) => {
            let args: Vec<String> = args.iter().map(Variable::to_string).collect();
            format!("{name}({})", args.join(", "))
        }
        Formula::Not(..) => "not".to_string(),
        Formula::And(..) => "and".to_string(),
        Formula::Or(..) => "or".to_string(),
        Formula::Implies(..) => "->".to_string(),
        Formula::Exists(v, _) => format!("exists {v}"),
        Formula::Forall(v, _) => format!("forall {v}"),
        Formula::BoundedExists { var, bound, .. } => format!("exists {var} in {bound}"),
        Formula::BoundedForall { var, bound, .. } => format!("forall {var} in {bound}"),
        Formula::OrdExists(v, _) => format!("existsOrd {v}"),
        Formula::OrdForall(v, _) => format!("forallOrd {v}"),
    }
}

/// Computes the least class derivable by the rule system together with the
/// derivation trace that witnesses it.
pub fn classify(
    formula: &Formula,
    rules: RuleSet,
    registry: &Registry,
) -> Result<(LevyClass, ClassificationTrace), ClassifyError> {
    let trace = classify_node(formula, rules, registry)?;
    Ok((trace.class, trace))
}

/// Classification without the trace.
pub fn classify_class(
    formula: &Formula,
    rules: RuleSet,
    registry: &Registry,
) -> Result<LevyClass, ClassifyError> {
    classify(formula, rules, registry).map(|(class, _)| class)
}

fn classify_node(
    formula: &Formula,
    rules: RuleSet,
    registry: &Registry,
) -> Result<ClassificationTrace, ClassifyError> {
    let node = |rule: TraceRule, class: LevyClass, children: Vec<ClassificationTrace>| {
        if class.level() > LEVEL_CAP {
            Err(ClassifyError::LevelCapExceeded(LEVEL_CAP))
        } else {
            Ok(ClassificationTrace {
                rule,
                subformula: head_label(formula),
                class,
                children,
            })
        }
    };
    match formula {
        Formula::Member(..) => node(TraceRule::AtomMember, LevyClass::DELTA0, Vec::new()),
        Formula::Equal(..) => node(TraceRule::AtomEqual, LevyClass::DELTA0, Vec::new()),
        Formula::Defined(name, _) => {
            let info = registry
                .get(name)
                .ok_or_else(|| ClassifyError::UnknownPredicate(name.clone()))?;
            let assigned = info.assigned_class();
            node(TraceRule::AtomDefined { assigned }, assigned, Vec::new())
        }
        Formula::Not(body) => {
            let child = classify_node(body, rules, registry)?;
            let class = child.class.dual();
            node(TraceRule::NotDual, class, vec![child])
        }
        Formula::And(l, r) => {
            let left = classify_node(l, rules, registry)?;
            let right = classify_node(r, rules, registry)?;
            let class = left.class.join(&right.class);
            node(TraceRule::AndJoin, class, vec![left, right])
        }
        Formula::Or(l, r) => {
            let left = classify_node(l, rules, registry)?;
            let right = classify_node(r, rules, registry)?;
            let class = left.class.join(&right.class);
            node(TraceRule::OrJoin, class, vec![left, right])
        }
        Formula::Implies(l, r) => {
            let left = classify_node(l, rules, registry)?;
            let right = classify_node(r, rules, registry)?;
            let class = left.class.dual().join(&right.class);
            node(TraceRule::ImpliesJoin, class, vec![left, right])
        }
        Formula::Exists(_, body) => {
            let child = classify_node(body, rules, registry)?;
            let class = child.class.lift_exists();
            node(TraceRule::ExistsLift, class, vec![child])
        }
        Formula::Forall(_, body) => {
            let child = classify_node(body, rules, registry)?;
            let class = child.class.lift_forall();
            node(TraceRule::ForallLift, class, vec![child])
        }
        // The ordinal-bound guard is a Delta0 atom, so joining it in leaves
        // the body class unchanged and the lift matches the unbounded one.
        Formula::OrdExists(_, body) => {
            let child = classify_node(body, rules, registry)?;
            let class = child.class.lift_exists();
            node(TraceRule::OrdExistsLift, class, vec![child])
        }
        Formula::OrdForall(_, body) => {
            let child = classify_node(body, rules, registry)?;
            let class = child.class.lift_forall();
            node(TraceRule::OrdForallLift, class, vec![child])
        }
        Formula::BoundedExists { body, .. } => {
            let child = classify_node(body, rules, registry)?;
            bounded_node(formula, rules, child, QuantDir::Exists)
        }
        Formula::BoundedForall { body, .. } => {
            let child = classify_node(body, rules, registry)?;
            bounded_node(formula, rules, child, QuantDir::Forall)
        }
    }
}

enum QuantDir {
    Exists,
    Forall,
}

fn bounded_node(
    formula: &Formula,
    rules: RuleSet,
    child: ClassificationTrace,
    dir: QuantDir,
) -> Result<ClassificationTrace, ClassifyError> {
    let (rule, class) = if child.class == LevyClass::DELTA0 {
        (TraceRule::BoundedDelta0, LevyClass::DELTA0)
    } else {
        match rules {
            RuleSet::Zf => (TraceRule::BoundedAbsorb, child.class),
            RuleSet::Minimal => match dir {
                QuantDir::Exists => (TraceRule::BoundedExistsLift, child.class.lift_exists()),
                QuantDir::Forall => (TraceRule::BoundedForallLift, child.class.lift_forall()),
            },
        }
    };
    if class.level() > LEVEL_CAP {
        return Err(ClassifyError::LevelCapExceeded(LEVEL_CAP));
    }
    Ok(ClassificationTrace {
        rule,
        subformula: head_label(formula),
        class,
        children: vec![child],
    })
}

/// Detects Δ-ness by the dual derivation: a formula is Δₙ when it has both a
/// Σₙ and a Πₙ derivation, the latter witnessed by a Σₙ derivation of its
/// negation. When the two route levels agree the result refines to Δ at that
/// level; otherwise the plain classification stands. Delta-kind results are
/// already both-sided and returned unchanged.
pub fn delta_refine(
    formula: &Formula,
    rules: RuleSet,
    registry: &Registry,
) -> Result<LevyClass, ClassifyError> {
    let class = classify_class(formula, rules, registry)?;
    if class.kind() == ClassKind::Delta {
        return Ok(class);
    }
    let negated = to_nnf(&Formula::not(formula.clone()));
    let negated_class = classify_class(&negated, rules, registry)?;
    let sigma_route = class.sigma_envelope_level();
    let pi_route = negated_class.sigma_envelope_level();
    if sigma_route == pi_route {
        Ok(LevyClass::delta(sigma_route))
    } else {
        Ok(class)
    }
}

/// True when every unbounded quantifier occurrence is ordinal-bounded;
/// set-bounded quantifiers are permitted.
pub fn is_ordinal_bounded_only(formula: &Formula) -> bool {
    match formula {
        Formula::Member(..) | Formula::Equal(..) | Formula::Defined(..) => true,
        Formula::Not(body) => is_ordinal_bounded_only(body),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            is_ordinal_bounded_only(l) && is_ordinal_bounded_only(r)
        }
        Formula::Exists(..) | Formula::Forall(..) => false,
        Formula::BoundedExists { body, .. }
        | Formula::BoundedForall { body, .. }
        | Formula::OrdExists(_, body)
        | Formula::OrdForall(_, body) => is_ordinal_bounded_only(body),
    }
}
