//! Formula AST over the language of set theory: ∈ and = atoms, registry-defined
//! atoms, the propositional connectives, and four quantifier shapes (unbounded,
//! set-bounded, and the ordinal-bounded sugar).

use std::collections::BTreeSet;
use std::fmt;

use crate::registry::Registry;

/// A variable of the object language. Parameters are ordinary free variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    /// Builds a variable; the name must be a nonempty identifier
    /// (`[A-Za-z_][A-Za-z0-9_]*` and not a keyword).
    pub fn new(name: impl Into<String>) -> Variable {
        let name = name.into();
        debug_assert!(is_identifier(&name), "invalid variable name `{name}`");
        Variable(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) const KEYWORDS: &[&str] = &[
    "forall", "exists", "forallOrd", "existsOrd", "in", "not", "and", "or",
];

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

/// A formula of the object language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `x in y`
    Member(Variable, Variable),
    /// `x = y`
    Equal(Variable, Variable),
    /// `Name(args...)` — meaning supplied by the predicate registry.
    Defined(String, Vec<Variable>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `exists v . body`
    Exists(Variable, Box<Formula>),
    /// `forall v . body`
    Forall(Variable, Box<Formula>),
    /// `exists v in bound . body`
    BoundedExists {
        var: Variable,
        bound: Variable,
        body: Box<Formula>,
    },
    /// `forall v in bound . body`
    BoundedForall {
        var: Variable,
        bound: Variable,
        body: Box<Formula>,
    },
    /// `existsOrd v . body` — v ranges over sets of finite ordinal tuples.
    OrdExists(Variable, Box<Formula>),
    /// `forallOrd v . body`
    OrdForall(Variable, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Formula {
        Formula::Not(Box::new(body))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn implies(left: Formula, right: Formula) -> Formula {
        Formula::Implies(Box::new(left), Box::new(right))
    }

    pub fn exists(var: Variable, body: Formula) -> Formula {
        Formula::Exists(var, Box::new(body))
    }

    pub fn forall(var: Variable, body: Formula) -> Formula {
        Formula::Forall(var, Box::new(body))
    }

    pub fn bounded_exists(var: Variable, bound: Variable, body: Formula) -> Formula {
        Formula::BoundedExists {
            var,
            bound,
            body: Box::new(body),
        }
    }

    pub fn bounded_forall(var: Variable, bound: Variable, body: Formula) -> Formula {
        Formula::BoundedForall {
            var,
            bound,
            body: Box::new(body),
        }
    }

    pub fn ord_exists(var: Variable, body: Formula) -> Formula {
        Formula::OrdExists(var, Box::new(body))
    }

    pub fn ord_forall(var: Variable, body: Formula) -> Formula {
        Formula::OrdForall(var, Box::new(body))
    }

    /// Folds `and` over a nonempty list, left-associated.
    pub fn and_all(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "and_all of empty list");
        let mut acc = parts.remove(0);
        for part in parts {
            acc = Formula::and(acc, part);
        }
        acc
    }

    /// Folds `or` over a nonempty list, left-associated.
    pub fn or_all(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "or_all of empty list");
        let mut acc = parts.remove(0);
        for part in parts {
            acc = Formula::or(acc, part);
        }
        acc
    }
}

/// The exact set of variables with a free occurrence.
pub fn free_vars(formula: &Formula) -> BTreeSet<Variable> {
    let mut out = BTreeSet::new();
    collect_free(formula, &mut Vec::new(), &mut out);
    out
}

fn collect_free(formula: &Formula, scope: &mut Vec<Variable>, out: &mut BTreeSet<Variable>) {
    let mut record = |v: &Variable, scope: &[Variable]| {
        if !scope.contains(v) {
            out.insert(v.clone());
        }
    };
    match formula {
        Formula::Member(a, b) | Formula::Equal(a, b) => {
            record(a, scope);
            record(b, scope);
        }
        Formula::Defined(_, args) => {
            for a in args {
                record(a, scope);
            }
        }
        Formula::Not(body) => collect_free(body, scope, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            collect_free(l, scope, out);
            collect_free(r, scope, out);
        }
        Formula::Exists(v, body)
        | Formula::Forall(v, body)
        | Formula::OrdExists(v, body)
        | Formula::OrdForall(v, body) => {
            scope.push(v.clone());
            collect_free(body, scope, out);
            scope.pop();
        }
        Formula::BoundedExists { var, bound, body }
        | Formula::BoundedForall { var, bound, body } => {
            record(bound, scope);
            scope.push(var.clone());
            collect_free(body, scope, out);
            scope.pop();
        }
    }
}

/// Violation of the well-scopedness invariants.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScopeViolation {
    #[error("bounded quantifier binds `{0}` with itself as the bound")]
    SelfBound(Variable),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{name}` applied to {got} arguments, expected {want}")]
    ArityMismatch { name: String, got: usize, want: usize },
}

/// Checks the `Formula` invariants: no bounded quantifier uses its own
/// variable as the bound, and every defined atom is registered with the
/// right arity. Free variables are always permitted (they are parameters).
pub fn check_scope(formula: &Formula, registry: &Registry) -> Result<(), ScopeViolation> {
    match formula {
        Formula::Member(..) | Formula::Equal(..) => Ok(()),
        Formula::Defined(name, args) => {
            let info = registry
                .get(name)
                .ok_or_else(|| ScopeViolation::UnknownPredicate(name.clone()))?;
            if info.arity() != args.len() {
                return Err(ScopeViolation::ArityMismatch {
                    name: name.clone(),
                    got: args.len(),
                    want: info.arity(),
                });
            }
            Ok(())
        }
        Formula::Not(body) => check_scope(body, registry),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            check_scope(l, registry)?;
            check_scope(r, registry)
        }
        Formula::Exists(_, body)
        | Formula::Forall(_, body)
        | Formula::OrdExists(_, body)
        | Formula::OrdForall(_, body) => check_scope(body, registry),
        Formula::BoundedExists { var, bound, body }
        | Formula::BoundedForall { var, bound, body } => {
            if var == bound {
                return Err(ScopeViolation::SelfBound(var.clone()));
            }
            check_scope(body, registry)
        }
    }
}

/// Renames bound variables so that every binder is distinct from every other
/// binder, from `reserved`, and from the formula's free variables. Fresh names
/// append the least unused numeric suffix to the original name. The result is
/// alpha-equivalent to the input.
pub fn rename_fresh(formula: &Formula, reserved: &BTreeSet<Variable>) -> Formula {
    let mut used: BTreeSet<String> = reserved.iter().map(|v| v.0.clone()).collect();
    used.extend(free_vars(formula).into_iter().map(|v| v.0));
    let mut env: Vec<(Variable, Variable)> = Vec::new();
    rename_walk(formula, &mut used, &mut env)
}

fn fresh_name(base: &str, used: &mut BTreeSet<String>) -> String {
    if !used.contains(base) {
        used.insert(base.to_string());
        return base.to_string();
    }
    let mut n: u64 = 1;
    loop {
        let candidate = format!("{base}{n}");
        if !used.contains(&candidate) {
            used.insert(candidate.clone());
            return candidate;
        }
        n += 1;
    }
}

fn rename_walk(
    formula: &Formula,
    used: &mut BTreeSet<String>,
    env: &mut Vec<(Variable, Variable)>,
) -> Formula {
    let resolve = |v: &Variable, env: &[(Variable, Variable)]| -> Variable {
        env.iter()
            .rev()
            .find(|(old, _)| old == v)
            .map(|(_, new)| new.clone())
            .unwrap_or_else(|| v.clone())
    };
    let bind = |v: &Variable, used: &mut BTreeSet<String>| -> Variable {
        Variable(fresh_name(&v.0, used))
    };
    match formula {
        Formula::Member(a, b) => Formula::Member(resolve(a, env), resolve(b, env)),
        Formula::Equal(a, b) => Formula::Equal(resolve(a, env), resolve(b, env)),
        Formula::Defined(name, args) => Formula::Defined(
            name.clone(),
            args.iter().map(|a| resolve(a, env)).collect(),
        ),
        Formula::Not(body) => Formula::not(rename_walk(body, used, env)),
        Formula::And(l, r) => {
            Formula::and(rename_walk(l, used, env), rename_walk(r, used, env))
        }
        Formula::Or(l, r) => Formula::or(rename_walk(l, used, env), rename_walk(r, used, env)),
        Formula::Implies(l, r) => {
            Formula::implies(rename_walk(l, used, env), rename_walk(r, used, env))
        }
        Formula::Exists(v, body) => {
            let fresh = bind(v, used);
            env.push((v.clone(), fresh.clone()));
            let body = rename_walk(body, used, env);
            env.pop();
            Formula::exists(fresh, body)
        }
        Formula::Forall(v, body) => {
            let fresh = bind(v, used);
            env.push((v.clone(), fresh.clone()));
            let body = rename_walk(body, used, env);
            env.pop();
            Formula::forall(fresh, body)
        }
        Formula::OrdExists(v, body) => {
            let fresh = bind(v, used);
            env.push((v.clone(), fresh.clone()));
            let body = rename_walk(body, used, env);
            env.pop();
            Formula::ord_exists(fresh, body)
        }
        Formula::OrdForall(v, body) => {
            let fresh = bind(v, used);
            env.push((v.clone(), fresh.clone()));
            let body = rename_walk(body, used, env);
            env.pop();
            Formula::ord_forall(fresh, body)
        }
        Formula::BoundedExists { var, bound, body } => {
            let bound = resolve(bound, env);
            let fresh = bind(var, used);
            env.push((var.clone(), fresh.clone()));
            let body = rename_walk(body, used, env);
            env.pop();
            Formula::bounded_exists(fresh, bound, body)
        }
        Formula::BoundedForall { var, bound, body } => {
            let bound = resolve(bound, env);
            let fresh = bind(var, used);
            env.push((var.clone(), fresh.clone()));
            let body = rename_walk(body, used, env);
            env.pop();
            Formula::bounded_forall(fresh, bound, body)
        }
    }
}
