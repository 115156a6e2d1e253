//! Finite transitive models inside the hereditarily finite sets, brute-force
//! Tarskian evaluation, and the empirical absoluteness harness.
//!
//! Sets are kept in canonical form (children sorted by Ackermann order,
//! duplicates removed), tuples are Kuratowski pairs, finite sequences are
//! functions on a von Neumann natural. Everything is immutable and shared.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::ast::{Formula, Variable};
use crate::classify::{classify_class, ClassifyError, RuleSet};
use crate::levy::LevyClass;
use crate::registry::{BuiltinEval, Registry};

/// A hereditarily finite set in canonical form.
#[derive(Clone)]
pub struct HfSet {
    children: Arc<[HfSet]>,
}

impl HfSet {
    pub fn empty() -> HfSet {
        HfSet {
            children: Arc::from([]),
        }
    }

    /// Builds a set from arbitrary children, sorting and deduplicating.
    pub fn from_children(mut children: Vec<HfSet>) -> HfSet {
        children.sort();
        children.dedup();
        HfSet {
            children: children.into(),
        }
    }

    /// Children in ascending Ackermann order.
    pub fn children(&self) -> &[HfSet] {
        &self.children
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn contains(&self, element: &HfSet) -> bool {
        self.children.binary_search(element).is_ok()
    }

    /// The Ackermann code Σ 2^code(child), when it fits in a u64.
    pub fn ackermann_code(&self) -> Option<u64> {
        let mut code: u64 = 0;
        for child in self.children.iter() {
            let child_code = child.ackermann_code()?;
            if child_code >= 64 {
                return None;
            }
            code = code.checked_add(1u64 << child_code)?;
        }
        Some(code)
    }

    /// Decodes an Ackermann code: bit i set means the set with code i is a child.
    pub fn from_code(code: u64) -> HfSet {
        let mut children = Vec::new();
        for bit in 0..64 {
            if code & (1 << bit) != 0 {
                children.push(HfSet::from_code(bit));
            }
        }
        // Bits ascend, and from_code is monotone, so children are sorted.
        HfSet {
            children: children.into(),
        }
    }

    /// The von Neumann natural n = {0, 1, ..., n-1}.
    pub fn von_neumann(n: usize) -> HfSet {
        let mut stages = Vec::with_capacity(n);
        for i in 0..n {
            stages.push(HfSet::from_children(stages[..i].to_vec()));
        }
        HfSet::from_children(stages)
    }

    pub fn singleton(a: HfSet) -> HfSet {
        HfSet::from_children(vec![a])
    }

    /// The Kuratowski pair {{a}, {a, b}}.
    pub fn kuratowski_pair(a: HfSet, b: HfSet) -> HfSet {
        let first = HfSet::singleton(a.clone());
        let both = HfSet::from_children(vec![a, b]);
        HfSet::from_children(vec![first, both])
    }

    /// A finite sequence coded as the function {⟨i, vᵢ⟩ : i < n}.
    pub fn sequence(values: &[HfSet]) -> HfSet {
        let pairs = values
            .iter()
            .enumerate()
            .map(|(i, v)| HfSet::kuratowski_pair(HfSet::von_neumann(i), v.clone()))
            .collect();
        HfSet::from_children(pairs)
    }

    /// True for von Neumann naturals: in canonical order, child i must be
    /// exactly the set of children 0..i.
    pub fn is_von_neumann_ordinal(&self) -> bool {
        self.children
            .iter()
            .enumerate()
            .all(|(i, child)| child.children() == &self.children[..i])
    }

    /// Decodes a Kuratowski pair. {{a}} is the degenerate pair ⟨a, a⟩.
    pub fn decode_pair(&self) -> Option<(HfSet, HfSet)> {
        match self.children() {
            [u] => match u.children() {
                [a] => Some((a.clone(), a.clone())),
                _ => None,
            },
            [u, w] => {
                // Canonical order puts the singleton {a} before {a, b}.
                let a = match u.children() {
                    [a] => a,
                    _ => return None,
                };
                match w.children() {
                    [x, y] if x == a => Some((a.clone(), y.clone())),
                    [x, y] if y == a => Some((a.clone(), x.clone())),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Decodes a function graph: every element a Kuratowski pair, no first
    /// coordinate mapped two ways. Returns the pairs in child order.
    pub fn function_graph(&self) -> Option<Vec<(HfSet, HfSet)>> {
        let mut pairs = Vec::with_capacity(self.children.len());
        for child in self.children.iter() {
            pairs.push(child.decode_pair()?);
        }
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len() {
                if pairs[i].0 == pairs[j].0 && pairs[i].1 != pairs[j].1 {
                    return None;
                }
            }
        }
        Some(pairs)
    }

    /// A finite sequence of ordinals: a function whose domain is exactly a
    /// von Neumann natural and whose values are all ordinals.
    pub fn is_ordinal_sequence(&self) -> bool {
        let Some(pairs) = self.function_graph() else {
            return false;
        };
        let mut domain: Vec<&HfSet> = pairs.iter().map(|(i, _)| i).collect();
        domain.sort();
        domain.dedup();
        let mut stage = HfSet::empty();
        for index in &domain {
            if **index != stage {
                return false;
            }
            stage = HfSet::from_children(
                stage
                    .children()
                    .iter()
                    .cloned()
                    .chain(std::iter::once(stage.clone()))
                    .collect(),
            );
        }
        pairs.iter().all(|(_, v)| v.is_von_neumann_ordinal())
    }

    /// Every element is a finite ordinal sequence: the finite reading of
    /// "a set of tuples of ordinals".
    pub fn is_ordinal_tuple_set(&self) -> bool {
        self.children.iter().all(HfSet::is_ordinal_sequence)
    }

    /// `self` is a function from `a` into `b`: a function graph with domain
    /// exactly `a` and range included in `b`.
    pub fn is_function_into(&self, a: &HfSet, b: &HfSet) -> bool {
        let Some(pairs) = self.function_graph() else {
            return false;
        };
        let domain: BTreeSet<&HfSet> = pairs.iter().map(|(x, _)| x).collect();
        let expected: BTreeSet<&HfSet> = a.children().iter().collect();
        domain == expected && pairs.iter().all(|(_, y)| b.contains(y))
    }
}

impl PartialEq for HfSet {
    fn eq(&self, other: &HfSet) -> bool {
        Arc::ptr_eq(&self.children, &other.children)
            || self.children[..] == other.children[..]
    }
}

impl Eq for HfSet {}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &HfSet) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HfSet {
    /// Ackermann order without computing codes: the set whose largest
    /// non-shared element is bigger is the bigger set, since 2^code(max)
    /// dominates every smaller tail.
    fn cmp(&self, other: &HfSet) -> Ordering {
        if Arc::ptr_eq(&self.children, &other.children) {
            return Ordering::Equal;
        }
        let mut ia = self.children.len();
        let mut ib = other.children.len();
        loop {
            match (ia, ib) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => match self.children[ia - 1].cmp(&other.children[ib - 1]) {
                    Ordering::Equal => {
                        ia -= 1;
                        ib -= 1;
                    }
                    unequal => return unequal,
                },
            }
        }
    }
}

impl std::hash::Hash for HfSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.children[..].hash(state);
    }
}

impl std::fmt::Debug for HfSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, child) in self.children.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{child:?}")?;
        }
        f.write_str("}")
    }
}

/// Errors from model construction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("rank {0} exceeds the cap of {MAX_RANK}")]
    RankTooLarge(u32),
    #[error("model is not transitive: an element's child is missing")]
    NotTransitive,
    #[error("ackermann code does not fit in 64 bits")]
    CodeOverflow,
}

/// Largest supported cumulative stage; V_5 already has 65536 elements.
pub const MAX_RANK: u32 = 5;

/// A finite transitive ∈-structure: every child of an element is an element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveModel {
    elements: Vec<HfSet>,
}

impl TransitiveModel {
    pub fn empty() -> TransitiveModel {
        TransitiveModel {
            elements: Vec::new(),
        }
    }

    /// Validates transitivity and canonicalizes the element order.
    pub fn from_elements(mut elements: Vec<HfSet>) -> Result<TransitiveModel, ModelError> {
        elements.sort();
        elements.dedup();
        let model = TransitiveModel { elements };
        for element in &model.elements {
            for child in element.children() {
                if !model.contains(child) {
                    return Err(ModelError::NotTransitive);
                }
            }
        }
        Ok(model)
    }

    pub fn elements(&self) -> &[HfSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, set: &HfSet) -> bool {
        self.elements.binary_search(set).is_ok()
    }

    /// Dump format: one element per line as its Ackermann code, ascending.
    pub fn render_dump(&self) -> Result<String, ModelError> {
        let mut out = String::new();
        for element in &self.elements {
            let code = element.ackermann_code().ok_or(ModelError::CodeOverflow)?;
            out.push_str(&code.to_string());
            out.push('\n');
        }
        Ok(out)
    }
}

/// The cumulative stage V_rank: V_0 = ∅ and V_{k+1} = the powerset of V_k.
pub fn build_v(rank: u32) -> Result<TransitiveModel, ModelError> {
    if rank > MAX_RANK {
        return Err(ModelError::RankTooLarge(rank));
    }
    let mut elements: Vec<HfSet> = Vec::new();
    for _ in 0..rank {
        // Subsets of the previous stage, generated in ascending code order:
        // the elements of V_k are exactly the sets with codes 0..|V_k|.
        let previous = elements;
        let count = 1usize << previous.len();
        let mut next = Vec::with_capacity(count);
        for mask in 0..count {
            let children: Vec<HfSet> = previous
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| e.clone())
                .collect();
            next.push(HfSet {
                children: children.into(),
            });
        }
        elements = next;
    }
    Ok(TransitiveModel { elements })
}

/// The least transitive superset of the seed sets.
pub fn transitive_close(seed: &[HfSet]) -> TransitiveModel {
    let mut found: BTreeSet<HfSet> = BTreeSet::new();
    let mut stack: Vec<HfSet> = seed.to_vec();
    while let Some(set) = stack.pop() {
        if found.insert(set.clone()) {
            stack.extend(set.children().iter().cloned());
        }
    }
    TransitiveModel {
        elements: found.into_iter().collect(),
    }
}

/// Maps variables to model elements.
pub type Assignment = BTreeMap<Variable, HfSet>;

/// Evaluation failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("predicate `{0}` has no finite-model evaluator")]
    UnevaluatablePredicate(String),
    #[error("variable `{0}` is not assigned")]
    UnboundVariable(Variable),
    #[error("work budget of {0} steps exhausted")]
    BudgetExhausted(u64),
}

/// Default per-call step budget; deep quantifier nesting over V_5 runs out
/// instead of running for hours.
pub const DEFAULT_EVAL_BUDGET: u64 = 100_000_000;

/// Tarskian truth of `formula` in `model` under `assignment`. Unbounded and
/// ordinal-bounded quantifiers range over the model's elements (the latter
/// filtered by the ordinal-tuple-set check); bounded quantifiers range over
/// the children of the bound's value, which transitivity keeps inside the
/// model. Defined atoms need a registry evaluator.
pub fn eval(
    model: &TransitiveModel,
    formula: &Formula,
    assignment: &Assignment,
    registry: &Registry,
) -> Result<bool, EvalError> {
    eval_with_budget(model, formula, assignment, registry, DEFAULT_EVAL_BUDGET)
}

/// `eval` with an explicit step budget.
pub fn eval_with_budget(
    model: &TransitiveModel,
    formula: &Formula,
    assignment: &Assignment,
    registry: &Registry,
    budget: u64,
) -> Result<bool, EvalError> {
    let mut env: Vec<(Variable, HfSet)> = assignment
        .iter()
        .map(|(v, s)| (v.clone(), s.clone()))
        .collect();
    let mut steps = budget;
    eval_inner(model, formula, &mut env, registry, &mut steps, budget)
}

fn lookup(env: &[(Variable, HfSet)], var: &Variable) -> Result<HfSet, EvalError> {
    env.iter()
        .rev()
        .find(|(v, _)| v == var)
        .map(|(_, s)| s.clone())
        .ok_or_else(|| EvalError::UnboundVariable(var.clone()))
}

fn eval_inner(
    model: &TransitiveModel,
    formula: &Formula,
    env: &mut Vec<(Variable, HfSet)>,
    registry: &Registry,
    steps: &mut u64,
    budget: u64,
) -> Result<bool, EvalError> {
    if *steps == 0 {
        return Err(EvalError::BudgetExhausted(budget));
    }
    *steps -= 1;
    match formula {
        Formula::Member(x, y) => {
            let element = lookup(env, x)?;
            Ok(lookup(env, y)?.contains(&element))
        }
        Formula::Equal(x, y) => Ok(lookup(env, x)? == lookup(env, y)?),
        Formula::Defined(name, args) => {
            let evaluator = registry
                .get(name)
                .and_then(|info| info.evaluator())
                .ok_or_else(|| EvalError::UnevaluatablePredicate(name.clone()))?;
            let mut values = Vec::with_capacity(args.len());
            for arg in args {
                values.push(lookup(env, arg)?);
            }
            Ok(match evaluator {
                BuiltinEval::Ord => values[0].is_von_neumann_ordinal(),
                BuiltinEval::OrdTupleSet => values[0].is_ordinal_tuple_set(),
                BuiltinEval::FuncInto => values[0].is_function_into(&values[1], &values[2]),
                // No finite set is the first infinite ordinal.
                BuiltinEval::Omega => false,
            })
        }
        Formula::Not(body) => Ok(!eval_inner(model, body, env, registry, steps, budget)?),
        Formula::And(l, r) => Ok(eval_inner(model, l, env, registry, steps, budget)?
            && eval_inner(model, r, env, registry, steps, budget)?),
        Formula::Or(l, r) => Ok(eval_inner(model, l, env, registry, steps, budget)?
            || eval_inner(model, r, env, registry, steps, budget)?),
        Formula::Implies(l, r) => Ok(!eval_inner(model, l, env, registry, steps, budget)?
            || eval_inner(model, r, env, registry, steps, budget)?),
        Formula::Exists(var, body) => {
            for element in model.elements() {
                env.push((var.clone(), element.clone()));
                let truth = eval_inner(model, body, env, registry, steps, budget);
                env.pop();
                if truth? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall(var, body) => {
            for element in model.elements() {
                env.push((var.clone(), element.clone()));
                let truth = eval_inner(model, body, env, registry, steps, budget);
                env.pop();
                if !truth? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::OrdExists(var, body) => {
            for element in model.elements() {
                if !element.is_ordinal_tuple_set() {
                    continue;
                }
                env.push((var.clone(), element.clone()));
                let truth = eval_inner(model, body, env, registry, steps, budget);
                env.pop();
                if truth? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::OrdForall(var, body) => {
            for element in model.elements() {
                if !element.is_ordinal_tuple_set() {
                    continue;
                }
                env.push((var.clone(), element.clone()));
                let truth = eval_inner(model, body, env, registry, steps, budget);
                env.pop();
                if !truth? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::BoundedExists { var, bound, body } => {
            let bound_value = lookup(env, bound)?;
            for element in bound_value.children() {
                env.push((var.clone(), element.clone()));
                let truth = eval_inner(model, body, env, registry, steps, budget);
                env.pop();
                if truth? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::BoundedForall { var, bound, body } => {
            let bound_value = lookup(env, bound)?;
            for element in bound_value.children() {
                env.push((var.clone(), element.clone()));
                let truth = eval_inner(model, body, env, registry, steps, budget);
                env.pop();
                if !truth? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

// Deterministic splitmix64; pair sampling must reproduce bit-for-bit.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    fn coin(&mut self) -> bool {
        self.next() & 1 == 1
    }
}

const PAIR_SAMPLE_SEED: u64 = 0x1e77_1ab5;

/// Samples at most `budget` nested transitive pairs M ⊆ N inside the
/// universe, deterministically. The pair (∅, universe) always comes first
/// and (universe, universe) second, budget permitting.
pub fn enumerate_transitive_pairs(
    universe: &TransitiveModel,
    budget: usize,
) -> Vec<(TransitiveModel, TransitiveModel)> {
    let mut out: Vec<(TransitiveModel, TransitiveModel)> = Vec::new();
    let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
    let index_key = |model: &TransitiveModel| -> Vec<usize> {
        model
            .elements()
            .iter()
            .map(|e| universe.elements().binary_search(e).expect("subset of universe"))
            .collect()
    };
    let mut push = |pair: (TransitiveModel, TransitiveModel),
                    out: &mut Vec<(TransitiveModel, TransitiveModel)>| {
        let key = (index_key(&pair.0), index_key(&pair.1));
        if seen.insert(key) {
            out.push(pair);
        }
    };

    if budget >= 1 {
        push((TransitiveModel::empty(), universe.clone()), &mut out);
    }
    if out.len() < budget {
        push((universe.clone(), universe.clone()), &mut out);
    }

    let mut rng = SplitMix64(PAIR_SAMPLE_SEED);
    let attempts = 64 + budget.saturating_mul(8);
    for _ in 0..attempts {
        if out.len() >= budget {
            break;
        }
        let seed: Vec<HfSet> = universe
            .elements()
            .iter()
            .filter(|_| rng.coin())
            .cloned()
            .collect();
        let outer = transitive_close(&seed);
        let inner_seed: Vec<HfSet> = outer
            .elements()
            .iter()
            .filter(|_| rng.coin())
            .cloned()
            .collect();
        let inner = transitive_close(&inner_seed);
        push((inner, outer), &mut out);
    }
    out
}

/// Which absoluteness contract a classification imposes between a transitive
/// submodel and its extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ContractDirection {
    /// Class within both Σ₁ and Π₁: truth must coincide.
    Equal,
    /// Class within Σ₁: truth goes up.
    Upward,
    /// Class within Π₁: truth goes down.
    Downward,
    /// Higher class: recorded, no contract.
    Observed,
}

/// Contract dictated by a classification.
pub fn contract_for(class: LevyClass) -> ContractDirection {
    let up = class.leq(&LevyClass::sigma(1));
    let down = class.leq(&LevyClass::pi(1));
    match (up, down) {
        (true, true) => ContractDirection::Equal,
        (true, false) => ContractDirection::Upward,
        (false, true) => ContractDirection::Downward,
        (false, false) => ContractDirection::Observed,
    }
}

/// Whether a pair of truth values breaches a contract, inner model first.
pub fn contract_violated(direction: ContractDirection, inner: bool, outer: bool) -> bool {
    match direction {
        ContractDirection::Equal => inner != outer,
        ContractDirection::Upward => inner && !outer,
        ContractDirection::Downward => outer && !inner,
        ContractDirection::Observed => false,
    }
}

/// One (formula, pair) cell of the suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteRecord {
    pub formula_id: String,
    pub pair_id: String,
    pub class: LevyClass,
    pub direction: ContractDirection,
    pub inner_truth: bool,
    pub outer_truth: bool,
    pub violation: bool,
}

/// Outcome of the absoluteness harness over one universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub records: Vec<SuiteRecord>,
    pub pair_count: usize,
}

impl SuiteReport {
    pub fn violations(&self) -> impl Iterator<Item = &SuiteRecord> {
        self.records.iter().filter(|r| r.violation)
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }
}

/// Suite failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Runs the absoluteness harness: for every sampled pair M ⊆ N and every
/// closed formula, evaluates both sides and checks the direction its
/// classification dictates. Cells are independent; the record order is the
/// deterministic input order.
pub fn absoluteness_suite(
    universe: &TransitiveModel,
    formulas: &[(String, Formula)],
    budget: usize,
    registry: &Registry,
) -> Result<SuiteReport, SuiteError> {
    let pairs = enumerate_transitive_pairs(universe, budget);
    let mut records = Vec::with_capacity(pairs.len() * formulas.len());
    let empty = Assignment::new();
    for (id, formula) in formulas {
        let class = classify_class(formula, RuleSet::Zf, registry)?;
        let direction = contract_for(class);
        for (pair_index, (inner, outer)) in pairs.iter().enumerate() {
            let inner_truth = eval(inner, formula, &empty, registry)?;
            let outer_truth = eval(outer, formula, &empty, registry)?;
            let violation = contract_violated(direction, inner_truth, outer_truth);
            records.push(SuiteRecord {
                formula_id: id.clone(),
                pair_id: format!("pair-{pair_index:03}"),
                class,
                direction,
                inner_truth,
                outer_truth,
                violation,
            });
        }
    }
    Ok(SuiteReport {
        records,
        pair_count: pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn reg() -> Registry {
        Registry::with_builtins()
    }

    fn p(text: &str) -> Formula {
        parse(text, &reg()).unwrap()
    }

    #[test]
    fn ackermann_codes_round_trip() {
        for code in 0..64u64 {
            assert_eq!(HfSet::from_code(code).ackermann_code(), Some(code));
        }
        assert_eq!(HfSet::empty().ackermann_code(), Some(0));
        assert_eq!(
            HfSet::singleton(HfSet::empty()).ackermann_code(),
            Some(1)
        );
        assert_eq!(HfSet::von_neumann(2).ackermann_code(), Some(3));
        assert_eq!(HfSet::von_neumann(3).ackermann_code(), Some(11));
    }

    #[test]
    fn ackermann_order_matches_codes() {
        let sets: Vec<HfSet> = (0..32).map(HfSet::from_code).collect();
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                assert_eq!(a.cmp(b), i.cmp(&j), "codes {i} vs {j}");
            }
        }
    }

    #[test]
    fn code_is_injective_on_canonical_sets() {
        let mut seen = std::collections::HashMap::new();
        for code in 0..256u64 {
            let set = HfSet::from_code(code);
            assert_eq!(set.ackermann_code(), Some(code));
            if let Some(previous) = seen.insert(code, set.clone()) {
                assert_eq!(previous, set);
            }
        }
    }

    #[test]
    fn build_v_sizes() {
        assert_eq!(build_v(0).unwrap().len(), 0);
        assert_eq!(build_v(1).unwrap().len(), 1);
        assert_eq!(build_v(2).unwrap().len(), 2);
        assert_eq!(build_v(3).unwrap().len(), 4);
        assert_eq!(build_v(4).unwrap().len(), 16);
        assert!(matches!(build_v(6), Err(ModelError::RankTooLarge(6))));
    }

    #[test]
    fn build_v5_has_65536_elements() {
        let v5 = build_v(5).unwrap();
        assert_eq!(v5.len(), 65536);
        // Elements of V_k carry codes 0..|V_k|, in order.
        assert_eq!(v5.elements()[4095].ackermann_code(), Some(4095));
    }

    #[test]
    fn stages_are_transitive_and_nested() {
        for rank in 0..=4 {
            let stage = build_v(rank).unwrap();
            assert!(TransitiveModel::from_elements(stage.elements().to_vec()).is_ok());
            if rank > 0 {
                let previous = build_v(rank - 1).unwrap();
                for element in previous.elements() {
                    assert!(stage.contains(element));
                }
            }
        }
    }

    #[test]
    fn transitive_close_examples() {
        let empty_set = HfSet::empty();
        let close = transitive_close(std::slice::from_ref(&empty_set));
        assert_eq!(close.elements(), std::slice::from_ref(&empty_set));

        let nested = HfSet::singleton(HfSet::singleton(HfSet::empty()));
        let close = transitive_close(std::slice::from_ref(&nested));
        assert_eq!(close.len(), 3);
        assert!(close.contains(&empty_set));
        assert!(close.contains(&nested));

        assert!(transitive_close(&[]).is_empty());
    }

    #[test]
    fn model_dump_lists_codes_ascending() {
        let v3 = build_v(3).unwrap();
        assert_eq!(v3.render_dump().unwrap(), "0\n1\n2\n3\n");
    }

    #[test]
    fn von_neumann_recognition() {
        for n in 0..6 {
            assert!(HfSet::von_neumann(n).is_von_neumann_ordinal(), "ordinal {n}");
        }
        let one = HfSet::von_neumann(1);
        assert!(!HfSet::singleton(one.clone()).is_von_neumann_ordinal());
        let skipped = HfSet::from_children(vec![HfSet::empty(), HfSet::von_neumann(2)]);
        assert!(!skipped.is_von_neumann_ordinal());
    }

    #[test]
    fn kuratowski_pairs_decode() {
        let zero = HfSet::von_neumann(0);
        let two = HfSet::von_neumann(2);
        let pair = HfSet::kuratowski_pair(zero.clone(), two.clone());
        assert_eq!(pair.decode_pair(), Some((zero.clone(), two.clone())));
        let degenerate = HfSet::kuratowski_pair(two.clone(), two.clone());
        assert_eq!(degenerate.decode_pair(), Some((two.clone(), two)));
        assert_eq!(HfSet::von_neumann(3).decode_pair(), None);
    }

    #[test]
    fn ordinal_sequences_and_tuple_sets() {
        let seq = HfSet::sequence(&[HfSet::von_neumann(2), HfSet::von_neumann(0)]);
        assert!(seq.is_ordinal_sequence());
        assert!(HfSet::empty().is_ordinal_sequence());
        // Domain {1} is not a von Neumann natural.
        let gap = HfSet::singleton(HfSet::kuratowski_pair(
            HfSet::von_neumann(1),
            HfSet::von_neumann(0),
        ));
        assert!(!gap.is_ordinal_sequence());
        // A non-ordinal value disqualifies the sequence.
        let bad_value = HfSet::sequence(&[HfSet::singleton(HfSet::von_neumann(1))]);
        assert!(!bad_value.is_ordinal_sequence());

        assert!(HfSet::empty().is_ordinal_tuple_set());
        assert!(HfSet::singleton(HfSet::empty()).is_ordinal_tuple_set());
        assert!(HfSet::from_children(vec![seq]).is_ordinal_tuple_set());
        assert!(!HfSet::singleton(HfSet::singleton(HfSet::empty())).is_ordinal_tuple_set());
    }

    #[test]
    fn function_into_checks_domain_and_range() {
        let zero = HfSet::von_neumann(0);
        let one = HfSet::von_neumann(1);
        let two = HfSet::von_neumann(2);
        // f = {⟨0, 1⟩, ⟨1, 0⟩} : 2 → 2
        let f = HfSet::from_children(vec![
            HfSet::kuratowski_pair(zero.clone(), one.clone()),
            HfSet::kuratowski_pair(one.clone(), zero.clone()),
        ]);
        assert!(f.is_function_into(&two, &two));
        // Wrong domain.
        assert!(!f.is_function_into(&one, &two));
        // The empty function maps ∅ into anything.
        assert!(HfSet::empty().is_function_into(&zero, &two));
        // Not functional.
        let clash = HfSet::from_children(vec![
            HfSet::kuratowski_pair(zero.clone(), zero.clone()),
            HfSet::kuratowski_pair(zero.clone(), one.clone()),
        ]);
        assert!(clash.function_graph().is_none());
    }

    #[test]
    fn eval_finds_empty_set_witness() {
        let v3 = build_v(3).unwrap();
        let truth = eval(
            &v3,
            &p("exists x . forall y in x . not y = y"),
            &Assignment::new(),
            &reg(),
        )
        .unwrap();
        assert!(truth);
    }

    #[test]
    fn eval_checks_ordinal_atom() {
        let v2 = build_v(2).unwrap();
        let mut assignment = Assignment::new();
        assignment.insert(Variable::new("a"), HfSet::von_neumann(1));
        assert!(eval(&v2, &p("Ord(a)"), &assignment, &reg()).unwrap());
    }

    #[test]
    fn eval_rejects_membership_cycles_in_v4() {
        let v4 = build_v(4).unwrap();
        // Independent oracle: scan all 16×16 element pairs directly.
        let mut cycle_found = false;
        for x in v4.elements() {
            for y in v4.elements() {
                if y.contains(x) && x.contains(y) {
                    cycle_found = true;
                }
            }
        }
        assert!(!cycle_found);
        let truth = eval(
            &v4,
            &p("exists x . exists y . x in y and y in x"),
            &Assignment::new(),
            &reg(),
        )
        .unwrap();
        assert_eq!(truth, cycle_found);
    }

    #[test]
    fn eval_reports_unbound_and_unevaluatable() {
        let v2 = build_v(2).unwrap();
        assert_eq!(
            eval(&v2, &p("a in b"), &Assignment::new(), &reg()),
            Err(EvalError::UnboundVariable(Variable::new("a")))
        );
        let mut registry = reg();
        registry
            .register(
                crate::registry::PredicateInfo::new(
                    "Opaque",
                    0,
                    LevyClass::sigma(1),
                    true,
                    false,
                    None,
                )
                .unwrap(),
            )
            .unwrap();
        let formula = parse("Opaque()", &registry).unwrap();
        assert_eq!(
            eval(&v2, &formula, &Assignment::new(), &registry),
            Err(EvalError::UnevaluatablePredicate("Opaque".into()))
        );
    }

    #[test]
    fn eval_budget_is_enforced() {
        let v4 = build_v(4).unwrap();
        let formula = p("forall x . forall y . forall z . x = x and y = y and z = z");
        assert_eq!(
            eval_with_budget(&v4, &formula, &Assignment::new(), &reg(), 100),
            Err(EvalError::BudgetExhausted(100))
        );
    }

    #[test]
    fn omega_is_false_in_finite_models() {
        let v4 = build_v(4).unwrap();
        assert!(!eval(&v4, &p("exists x . Omega(x)"), &Assignment::new(), &reg()).unwrap());
    }

    #[test]
    fn pair_enumeration_respects_budget_and_mandatory_pairs() {
        let v3 = build_v(3).unwrap();
        let pairs = enumerate_transitive_pairs(&v3, 1);
        assert_eq!(pairs.len(), 1);
        assert!(pairs[0].0.is_empty());
        assert_eq!(pairs[0].1, v3);

        let empty = TransitiveModel::empty();
        let pairs = enumerate_transitive_pairs(&empty, 10);
        assert_eq!(pairs.len(), 1);
        assert!(pairs[0].0.is_empty() && pairs[0].1.is_empty());
    }

    #[test]
    fn pair_enumeration_is_deterministic_and_nested() {
        let v4 = build_v(4).unwrap();
        let a = enumerate_transitive_pairs(&v4, 50);
        let b = enumerate_transitive_pairs(&v4, 50);
        assert_eq!(a, b);
        for (inner, outer) in &a {
            assert!(TransitiveModel::from_elements(inner.elements().to_vec()).is_ok());
            assert!(TransitiveModel::from_elements(outer.elements().to_vec()).is_ok());
            for element in inner.elements() {
                assert!(outer.contains(element));
            }
        }
    }

    #[test]
    fn pair_enumeration_exhausts_v2() {
        // Independent oracle: enumerate all transitive subsets of V_2 and
        // nest them exhaustively.
        let v2 = build_v(2).unwrap();
        let mut transitive_subsets = Vec::new();
        for mask in 0..(1 << v2.len()) {
            let subset: Vec<HfSet> = v2
                .elements()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| e.clone())
                .collect();
            if let Ok(model) = TransitiveModel::from_elements(subset) {
                transitive_subsets.push(model);
            }
        }
        let mut expected = BTreeSet::new();
        for inner in &transitive_subsets {
            for outer in &transitive_subsets {
                if inner.elements().iter().all(|e| outer.contains(e)) {
                    expected.insert((
                        inner.render_dump().unwrap(),
                        outer.render_dump().unwrap(),
                    ));
                }
            }
        }
        let sampled: BTreeSet<_> = enumerate_transitive_pairs(&v2, 1000)
            .into_iter()
            .map(|(m, n)| (m.render_dump().unwrap(), n.render_dump().unwrap()))
            .collect();
        assert_eq!(sampled, expected);
    }

    #[test]
    fn suite_reports_no_violations_for_sound_sentences() {
        let v3 = build_v(3).unwrap();
        let formulas = vec![
            // Σ₁, unsatisfiable: vacuously upward absolute.
            ("unsat".to_string(), p("exists x . Ord(x) and not x = x")),
            // Π₁, true everywhere.
            ("foundation".to_string(), p("forall x . not x in x")),
            // Σ₁, true from V_1 on.
            ("empty".to_string(), p("exists x . forall y in x . not y = y")),
        ];
        let report = absoluteness_suite(&v3, &formulas, 30, &reg()).unwrap();
        assert_eq!(report.violation_count(), 0);
        assert!(report.records.len() >= formulas.len() * 2);
        let directions: BTreeSet<_> = report
            .records
            .iter()
            .map(|r| format!("{:?}", r.direction))
            .collect();
        assert!(directions.contains("Upward"));
        assert!(directions.contains("Downward"));
    }

    #[test]
    fn contracts_follow_the_lattice() {
        assert_eq!(contract_for(LevyClass::DELTA0), ContractDirection::Equal);
        assert_eq!(contract_for(LevyClass::delta(1)), ContractDirection::Equal);
        assert_eq!(contract_for(LevyClass::sigma(1)), ContractDirection::Upward);
        assert_eq!(contract_for(LevyClass::pi(1)), ContractDirection::Downward);
        assert_eq!(contract_for(LevyClass::sigma(2)), ContractDirection::Observed);
        assert_eq!(contract_for(LevyClass::delta(2)), ContractDirection::Observed);
    }

    #[test]
    fn violation_predicate_covers_all_directions() {
        use ContractDirection::*;
        // (direction, inner, outer, breach)
        let table = [
            (Equal, true, true, false),
            (Equal, true, false, true),
            (Equal, false, true, true),
            (Upward, true, false, true),
            (Upward, false, true, false),
            (Upward, true, true, false),
            (Downward, false, true, true),
            (Downward, true, false, false),
            (Observed, true, false, false),
            (Observed, false, true, false),
        ];
        for (direction, inner, outer, breach) in table {
            assert_eq!(
                contract_violated(direction, inner, outer),
                breach,
                "{direction:?} inner={inner} outer={outer}"
            );
        }
    }
}
