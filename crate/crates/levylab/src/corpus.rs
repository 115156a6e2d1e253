//! The versioned statement corpus: flagship sentences, partition-family
//! instances, and the small evaluable sentences driving the semantic suite.
//!
//! Expected fields are golden values: `corpus check` recomputes every
//! classification, ordinal-boundedness flag, and transfer verdict and fails
//! on any drift. Formula files and the manifest regenerate only via bless.

use std::fmt::Write as _;

use crate::ast::{Formula, Variable};
use crate::classify::{classify_class, is_ordinal_bounded_only, RuleSet};
use crate::levy::LevyClass;
use crate::parser::parse;
use crate::partition::{
    make_partition_statement, Exponent, HomogeneityMode, PartitionStatementSpec,
};
use crate::printer::print;
use crate::registry::{PredicateInfo, Registry};
use crate::transfer::{
    check_transfer, ParameterDeclaration, ParameterSort, TransferOutcome,
};

/// One corpus statement with its golden expectations.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub formula: Formula,
    pub params: Vec<ParameterDeclaration>,
    pub expected_class: LevyClass,
    pub expected_ord_bounded_only: bool,
    pub expected_transfer: TransferOutcome,
    /// Whether every atom has a finite-model evaluator; only evaluable
    /// entries enter the semantic suite. Sentences about ω stay out.
    pub evaluable: bool,
    /// What the statement says, for reports and file headers.
    pub provenance: &'static str,
}

/// Registry entries the corpus statements rely on, over the built-ins.
///
/// The constructibility-relativized atoms are recorded as absolute in both
/// directions: membership in those inner models is itself of low enough
/// complexity that the relativization does not disturb transfer, and the
/// corpus makes that encoding choice explicit here rather than hiding it in
/// the formulas.
pub fn corpus_registry() -> Registry {
    let mut registry = Registry::with_builtins();
    let entries = [
        // wo-reals: binary-sequence machinery. The omega-indexed atoms take
        // the standard Delta1 complexity of quantification over ω plus
        // ordinal arithmetic.
        ("FuncIntoTwo", 2, LevyClass::DELTA0, true, true),
        ("OmegaSeqTwo", 1, LevyClass::delta(1), true, true),
        ("TailMatch", 3, LevyClass::delta(1), true, true),
        // magidor-skeleton items, with their assigned classes.
        ("CardsInLA", 1, LevyClass::pi(1), true, true),
        ("SupSingularInLA", 1, LevyClass::sigma(1), true, true),
        ("SupSuccessorInLA", 2, LevyClass::delta(2), true, true),
        ("InjectionInLAB", 2, LevyClass::sigma(1), true, true),
        ("ZeroSharpExists", 0, LevyClass::sigma(2), true, false),
    ];
    for (name, arity, class, up, down) in entries {
        registry
            .register(PredicateInfo::new(name, arity, class, up, down, None).expect("valid"))
            .expect("no clashes with builtins");
    }
    registry
}

fn ord_param(name: &str) -> ParameterDeclaration {
    ParameterDeclaration::new(Variable::new(name), ParameterSort::Ordinal)
}

/// The partition-family instance for pairs in two-ish colors with the
/// source cardinal itself as target.
pub fn edm_spec() -> PartitionStatementSpec {
    PartitionStatementSpec {
        kappa: Variable::new("k"),
        lambda: Variable::new("l"),
        exponent: Exponent::Fixed(2),
        target: Variable::new("k"),
        mode: HomogeneityMode::Homogeneous,
        order_preserving: false,
    }
}

/// The built-in corpus, stable ids, golden expectations filled.
pub fn corpus() -> Vec<CorpusEntry> {
    let registry = corpus_registry();
    let p = |text: &str| parse(text, &registry).expect("corpus formula parses");
    let mut entries = vec![CorpusEntry {
        id: "wo-reals",
        formula: p(
            "existsOrd a . existsOrd f . forallOrd x . \
             Ord(a) and FuncIntoTwo(f, a) and \
             (OmegaSeqTwo(x) -> exists b in a . TailMatch(x, f, b))",
        ),
        params: vec![],
        expected_class: LevyClass::sigma(2),
        expected_ord_bounded_only: true,
        expected_transfer: TransferOutcome::NotApplicable,
        evaluable: false,
        provenance: "well-ordering of the continuum as a binary-sequence catalogue",
    }];

    entries.push(CorpusEntry {
        id: "magidor-skeleton",
        formula: p(
            "forallOrd A . forallOrd B . \
             (CardsInLA(A) and SupSingularInLA(A) and SupSuccessorInLA(A, B) \
              and InjectionInLAB(A, B)) -> ZeroSharpExists()",
        ),
        params: vec![],
        expected_class: LevyClass::pi(3),
        expected_ord_bounded_only: true,
        expected_transfer: TransferOutcome::Eliminable,
        evaluable: false,
        provenance: "singular-successor collapse implies a transcendent real",
    });

    entries.push(CorpusEntry {
        id: "edm",
        formula: make_partition_statement(&edm_spec()).expect("valid spec"),
        params: vec![ord_param("k"), ord_param("l")],
        expected_class: LevyClass::pi(2),
        expected_ord_bounded_only: true,
        expected_transfer: TransferOutcome::Eliminable,
        evaluable: false,
        provenance: "partition statement family, pairs instance with the source as target",
    });

    entries.push(CorpusEntry {
        id: "partition-family-anti",
        formula: make_partition_statement(&PartitionStatementSpec {
            kappa: Variable::new("k"),
            lambda: Variable::new("l"),
            exponent: Exponent::Fixed(3),
            target: Variable::new("t"),
            mode: HomogeneityMode::AntiHomogeneous,
            order_preserving: false,
        })
        .expect("valid spec"),
        params: vec![ord_param("k"), ord_param("l"), ord_param("t")],
        expected_class: LevyClass::pi(2),
        expected_ord_bounded_only: true,
        expected_transfer: TransferOutcome::Eliminable,
        evaluable: false,
        provenance: "partition statement family, anti-homogeneous triples instance",
    });

    entries.push(CorpusEntry {
        id: "partition-family-op",
        formula: make_partition_statement(&PartitionStatementSpec {
            kappa: Variable::new("k"),
            lambda: Variable::new("l"),
            exponent: Exponent::AllFinite,
            target: Variable::new("t"),
            mode: HomogeneityMode::Homogeneous,
            order_preserving: true,
        })
        .expect("valid spec"),
        params: vec![ord_param("k"), ord_param("l"), ord_param("t")],
        expected_class: LevyClass::pi(2),
        expected_ord_bounded_only: true,
        expected_transfer: TransferOutcome::Eliminable,
        evaluable: false,
        provenance: "partition statement family, order-preserving all-finite-lengths instance",
    });

    // Small evaluable sentences for the semantic suite. Σ₁ sentences are
    // trivially within the gate, so their expected transfer is Eliminable
    // with an empty stripped prefix; unbounded-∀ sentences are refused.
    let evaluable: &[(&'static str, &'static str, LevyClass, bool, TransferOutcome, &'static str)] = &[
        (
            "empty-exists",
            "exists x . forall y in x . not y = y",
            LevyClass::sigma(1),
            false,
            TransferOutcome::Eliminable,
            "an empty set exists",
        ),
        (
            "foundation-no-self",
            "forall x . not x in x",
            LevyClass::pi(1),
            false,
            TransferOutcome::NotApplicable,
            "no set is self-membered",
        ),
        (
            "no-two-cycle",
            "forall x . forall y . not (x in y and y in x)",
            LevyClass::pi(1),
            false,
            TransferOutcome::NotApplicable,
            "membership has no two-cycles",
        ),
        (
            "two-cycle-exists",
            "exists x . exists y . x in y and y in x",
            LevyClass::sigma(1),
            false,
            TransferOutcome::Eliminable,
            "a membership two-cycle exists",
        ),
        (
            "ord-exists",
            "exists x . Ord(x)",
            LevyClass::sigma(1),
            false,
            TransferOutcome::Eliminable,
            "an ordinal exists",
        ),
        (
            "unsat-ord",
            "exists x . Ord(x) and not x = x",
            LevyClass::sigma(1),
            false,
            TransferOutcome::Eliminable,
            "a self-unequal ordinal exists",
        ),
        (
            "extensional-empty",
            "forall x . forall y . \
             ((forall z in x . not z = z) and (forall z in y . not z = z)) -> x = y",
            LevyClass::pi(1),
            false,
            TransferOutcome::NotApplicable,
            "the empty set is unique",
        ),
        (
            "ordtuple-all",
            "forall x . OrdTupleSet(x)",
            LevyClass::pi(1),
            false,
            TransferOutcome::NotApplicable,
            "everything is a set of ordinal tuples",
        ),
        (
            "membership-total",
            "forall x . forall y . x in y or y in x or x = y",
            LevyClass::pi(1),
            false,
            TransferOutcome::NotApplicable,
            "membership compares any two sets",
        ),
        (
            "singleton-exists",
            "exists x . exists y . y in x and (forall z in x . z = y)",
            LevyClass::sigma(1),
            false,
            TransferOutcome::Eliminable,
            "a singleton exists",
        ),
        (
            "empty-func-exists",
            "exists f . exists a . FuncInto(f, a, a)",
            LevyClass::sigma(1),
            false,
            TransferOutcome::Eliminable,
            "an endofunction exists",
        ),
        (
            "ord-seq-exists",
            "existsOrd s . exists a in s . Ord(a)",
            LevyClass::sigma(1),
            true,
            TransferOutcome::Eliminable,
            "a nonempty ordinal-tuple set whose member is an ordinal exists",
        ),
        (
            "ord-no-self-member",
            "forallOrd s . not s in s",
            LevyClass::pi(1),
            true,
            TransferOutcome::Eliminable,
            "no ordinal-tuple set is self-membered",
        ),
        (
            "nonempty-has-empty-member",
            "forall x . (exists y in x . y = y) -> (exists y in x . forall z in y . not z = z)",
            LevyClass::pi(1),
            false,
            TransferOutcome::NotApplicable,
            "every nonempty set has an empty member",
        ),
        (
            "ord-tuple-inhabited",
            "existsOrd s . exists q in s . q = q",
            LevyClass::sigma(1),
            true,
            TransferOutcome::Eliminable,
            "a nonempty ordinal-tuple set exists",
        ),
    ];
    for (id, text, class, ord_only, transfer, provenance) in evaluable {
        entries.push(CorpusEntry {
            id,
            formula: p(text),
            params: vec![],
            expected_class: *class,
            expected_ord_bounded_only: *ord_only,
            expected_transfer: *transfer,
            evaluable: true,
            provenance,
        });
    }

    entries
}

/// Looks up one entry by id.
pub fn corpus_entry(id: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.id == id)
}

/// The (id, formula) list the semantic suite runs on.
pub fn evaluable_formulas() -> Vec<(String, Formula)> {
    corpus()
        .into_iter()
        .filter(|e| e.evaluable)
        .map(|e| (e.id.to_string(), e.formula))
        .collect()
}

/// A mismatch between an entry's golden fields and recomputed analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusMismatch {
    pub id: String,
    pub field: &'static str,
    pub expected: String,
    pub actual: String,
}

/// Recomputes class, ordinal-boundedness, and transfer for every entry and
/// compares against the golden fields.
pub fn check_corpus_expectations() -> Vec<CorpusMismatch> {
    let registry = corpus_registry();
    let mut mismatches = Vec::new();
    for entry in corpus() {
        let mut mismatch = |field: &'static str, expected: String, actual: String| {
            if expected != actual {
                mismatches.push(CorpusMismatch {
                    id: entry.id.to_string(),
                    field,
                    expected,
                    actual,
                });
            }
        };
        match classify_class(&entry.formula, RuleSet::Zf, &registry) {
            Ok(class) => mismatch(
                "expected_class",
                entry.expected_class.to_string(),
                class.to_string(),
            ),
            Err(e) => mismatch("expected_class", entry.expected_class.to_string(), e.to_string()),
        }
        mismatch(
            "ord_bounded_only",
            entry.expected_ord_bounded_only.to_string(),
            is_ordinal_bounded_only(&entry.formula).to_string(),
        );
        match check_transfer(&entry.formula, &entry.params, &registry) {
            Ok(verdict) => mismatch(
                "transfer",
                entry.expected_transfer.to_string(),
                verdict.outcome.to_string(),
            ),
            Err(e) => mismatch("transfer", entry.expected_transfer.to_string(), e.to_string()),
        }
    }
    mismatches
}

fn params_line(params: &[ParameterDeclaration]) -> String {
    params
        .iter()
        .map(|p| format!("{}:{}", p.variable, p.sort.name()))
        .collect::<Vec<_>>()
        .join(",")
}

/// Renders one formula file: a provenance header, the declared parameters,
/// and the canonical formula text.
pub fn render_formula_file(entry: &CorpusEntry) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", entry.provenance);
    if !entry.params.is_empty() {
        let _ = writeln!(out, "# params: {}", params_line(&entry.params));
    }
    let _ = writeln!(out, "{}", print(&entry.formula));
    out
}

/// Renders the manifest: one line per entry,
/// `id <tab> file <tab> expected_class <tab> ord_only <tab> transfer <tab> provenance`.
pub fn render_manifest(entries: &[CorpusEntry]) -> String {
    let mut out = String::new();
    for entry in entries {
        let _ = writeln!(
            out,
            "{}\t{}.fml\t{}\t{}\t{}\t{}",
            entry.id,
            entry.id,
            entry.expected_class,
            entry.expected_ord_bounded_only,
            entry.expected_transfer,
            entry.provenance
        );
    }
    out
}
