//! Shared generators for the property suites.
//!
//! All variables are drawn from a fixed pool, so generated formulas are
//! well-scoped by construction: pool variables not captured by a binder are
//! free parameters, and bounded quantifiers never bind their own bound.
#![allow(dead_code)] // each test target uses its own slice of this module

use proptest::prelude::*;

use levylab::levy::LevyClass;
use levylab::registry::{PredicateInfo, Registry};
use levylab::{Formula, Variable};

pub const POOL: &[&str] = &["a", "b", "c", "d", "e"];

/// Built-ins plus defined atoms spread across the lattice, so generated
/// formulas exercise assigned classes and absoluteness flags.
pub fn test_registry() -> Registry {
    let mut registry = Registry::with_builtins();
    let atoms = [
        ("P0", 1, LevyClass::DELTA0, true, true),
        ("UpAtom", 1, LevyClass::sigma(1), true, false),
        ("DownAtom", 1, LevyClass::pi(1), false, true),
        ("BothAtom", 1, LevyClass::delta(1), true, true),
        ("HighUp", 2, LevyClass::sigma(2), true, false),
        ("HighDown", 2, LevyClass::pi(2), false, true),
        ("MidBoth", 1, LevyClass::delta(2), true, true),
    ];
    for (name, arity, class, up, down) in atoms {
        registry
            .register(PredicateInfo::new(name, arity, class, up, down, None).unwrap())
            .unwrap();
    }
    registry
}

pub fn pool_var() -> impl Strategy<Value = Variable> {
    prop::sample::select(POOL).prop_map(Variable::new)
}

fn atom(defined: bool) -> BoxedStrategy<Formula> {
    let member = (pool_var(), pool_var()).prop_map(|(a, b)| Formula::Member(a, b));
    let equal = (pool_var(), pool_var()).prop_map(|(a, b)| Formula::Equal(a, b));
    if !defined {
        return prop_oneof![member, equal].boxed();
    }
    const UNARY_NAMES: &[&str] = &["P0", "UpAtom", "DownAtom", "BothAtom", "MidBoth", "Ord", "OrdTupleSet"];
    let unary = (prop::sample::select(UNARY_NAMES), pool_var())
        .prop_map(|(name, v)| Formula::Defined(name.to_string(), vec![v]));
    const BINARY_NAMES: &[&str] = &["HighUp", "HighDown"];
    let binary = (
        prop::sample::select(BINARY_NAMES),
        pool_var(),
        pool_var(),
    )
        .prop_map(|(name, a, b)| Formula::Defined(name.to_string(), vec![a, b]));
    prop_oneof![4 => member, 3 => equal, 3 => unary, 1 => binary].boxed()
}

fn connective_layer(inner: BoxedStrategy<Formula>) -> BoxedStrategy<Formula> {
    prop_oneof![
        2 => inner.clone().prop_map(Formula::not),
        2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
        2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
        1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
        2 => (pool_var(), inner.clone()).prop_map(|(v, b)| Formula::exists(v, b)),
        2 => (pool_var(), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
        1 => (pool_var(), pool_var(), inner.clone()).prop_filter_map(
            "bound must differ from binder",
            |(v, bound, b)| (v != bound).then(|| Formula::bounded_exists(v, bound, b)),
        ),
        1 => (pool_var(), pool_var(), inner.clone()).prop_filter_map(
            "bound must differ from binder",
            |(v, bound, b)| (v != bound).then(|| Formula::bounded_forall(v, bound, b)),
        ),
        1 => (pool_var(), inner.clone()).prop_map(|(v, b)| Formula::ord_exists(v, b)),
        1 => (pool_var(), inner).prop_map(|(v, b)| Formula::ord_forall(v, b)),
    ]
    .boxed()
}

/// Arbitrary well-scoped formulas over the full test registry.
pub fn arb_formula() -> BoxedStrategy<Formula> {
    atom(true)
        .prop_recursive(6, 48, 2, connective_layer)
        .boxed()
}

/// Formulas guaranteed to contain at least one ordinal-bounded quantifier.
pub fn arb_formula_with_ord() -> BoxedStrategy<Formula> {
    (any::<bool>(), pool_var(), arb_formula())
        .prop_map(|(universal, v, body)| {
            if universal {
                Formula::ord_forall(v, body)
            } else {
                Formula::ord_exists(v, body)
            }
        })
        .boxed()
}

/// Formulas whose atoms all have evaluators, for semantic checks. Kept
/// shallow so brute-force evaluation over a stage stays cheap.
pub fn arb_evaluable_formula() -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        3 => (pool_var(), pool_var()).prop_map(|(a, b)| Formula::Member(a, b)),
        2 => (pool_var(), pool_var()).prop_map(|(a, b)| Formula::Equal(a, b)),
        2 => pool_var().prop_map(|v| Formula::Defined("Ord".to_string(), vec![v])),
        1 => pool_var().prop_map(|v| Formula::Defined("OrdTupleSet".to_string(), vec![v])),
        1 => (pool_var(), pool_var(), pool_var())
            .prop_map(|(f, a, b)| Formula::Defined("FuncInto".to_string(), vec![f, a, b])),
    ]
    .boxed();
    leaf.prop_recursive(4, 20, 2, connective_layer).boxed()
}

/// Evaluable formulas over a two-variable pool, shallow enough that every
/// assignment over a small stage can be enumerated.
pub fn arb_evaluable_formula_small() -> BoxedStrategy<Formula> {
    let small_var = || prop::sample::select(&POOL[..2]).prop_map(Variable::new);
    let leaf = prop_oneof![
        3 => (small_var(), small_var()).prop_map(|(a, b)| Formula::Member(a, b)),
        2 => (small_var(), small_var()).prop_map(|(a, b)| Formula::Equal(a, b)),
        2 => small_var().prop_map(|v| Formula::Defined("Ord".to_string(), vec![v])),
        1 => small_var().prop_map(|v| Formula::Defined("OrdTupleSet".to_string(), vec![v])),
    ]
    .boxed();
    let layer = move |inner: BoxedStrategy<Formula>| {
        prop_oneof![
            2 => inner.clone().prop_map(Formula::not),
            2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            1 => (small_var(), inner.clone()).prop_map(|(v, b)| Formula::exists(v, b)),
            1 => (small_var(), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
            1 => (small_var(), small_var(), inner.clone()).prop_filter_map(
                "bound must differ from binder",
                |(v, bound, b)| (v != bound).then(|| Formula::bounded_exists(v, bound, b)),
            ),
            1 => (small_var(), small_var(), inner.clone()).prop_filter_map(
                "bound must differ from binder",
                |(v, bound, b)| (v != bound).then(|| Formula::bounded_forall(v, bound, b)),
            ),
            1 => (small_var(), inner.clone()).prop_map(|(v, b)| Formula::ord_exists(v, b)),
            1 => (small_var(), inner).prop_map(|(v, b)| Formula::ord_forall(v, b)),
        ]
        .boxed()
    };
    leaf.prop_recursive(3, 12, 2, layer).boxed()
}

/// Closes a formula by quantifying its free variables, alternating kinds.
pub fn close_formula(formula: Formula) -> Formula {
    let mut closed = formula;
    for (i, free) in levylab::free_vars(&closed).into_iter().enumerate() {
        closed = if i % 2 == 0 {
            Formula::exists(free, closed)
        } else {
            Formula::forall(free, closed)
        };
    }
    closed
}

/// Every assignment of the pool prefix `vars` into the model's elements.
pub fn all_assignments(
    vars: &[Variable],
    model: &levylab::hf::TransitiveModel,
) -> Vec<levylab::hf::Assignment> {
    let mut assignments = vec![levylab::hf::Assignment::new()];
    for var in vars {
        let mut extended = Vec::with_capacity(assignments.len() * model.len());
        for assignment in &assignments {
            for element in model.elements() {
                let mut next = assignment.clone();
                next.insert(var.clone(), element.clone());
                extended.push(next);
            }
        }
        assignments = extended;
    }
    assignments
}
