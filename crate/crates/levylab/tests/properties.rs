//! Cross-module property suites: syntax round trips, normal-form laws,
//! classifier coherence, gate soundness at desk scale.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{
    all_assignments, arb_evaluable_formula, arb_formula, close_formula, test_registry,
};
use levylab::classify::{classify, classify_class, delta_refine, RuleSet};
use levylab::hf::{build_v, enumerate_transitive_pairs, eval, Assignment};
use levylab::normalize::{contract_blocks, desugar_ord, matrix_is_prefix_free, to_nnf, to_prenex};
use levylab::transfer::{certify_upwards, check_transfer, TransferOutcome};
use levylab::{free_vars, parse, print, rename_fresh, Formula, Variable};

proptest! {
    #[test]
    fn print_parse_round_trip(f in arb_formula()) {
        let registry = test_registry();
        let printed = print(&f);
        let reparsed = parse(&printed, &registry).expect("printed formula parses");
        prop_assert_eq!(reparsed, f, "round trip of `{}`", printed);
    }

    #[test]
    fn rename_fresh_preserves_free_variables(f in arb_formula()) {
        let reserved: BTreeSet<Variable> =
            [Variable::new("a"), Variable::new("q")].into_iter().collect();
        let renamed = rename_fresh(&f, &reserved);
        prop_assert_eq!(free_vars(&renamed), free_vars(&f));
    }

    #[test]
    fn parser_never_panics(text in "\\PC*") {
        let _ = parse(&text, &test_registry());
    }

    #[test]
    fn parser_never_panics_on_token_soup(
        tokens in prop::collection::vec(
            prop::sample::select(&[
                "forall", "exists", "forallOrd", "existsOrd", "in", "not", "and",
                "or", "->", ".", "(", ")", "=", ",", "x", "y", "Ord", "#",
            ][..]),
            0..24,
        )
    ) {
        let _ = parse(&tokens.join(" "), &test_registry());
    }

    #[test]
    fn desugar_is_idempotent(f in arb_formula()) {
        let once = desugar_ord(&f);
        prop_assert_eq!(desugar_ord(&once), once);
    }

    #[test]
    fn prenex_form_satisfies_its_invariants(f in arb_formula()) {
        let pf = to_prenex(&f);
        prop_assert!(matrix_is_prefix_free(&pf.matrix));
        let mut names = BTreeSet::new();
        for entry in &pf.prefix {
            prop_assert!(names.insert(entry.var.clone()), "duplicate prefix variable");
        }
        let matrix_free = free_vars(&pf.matrix);
        let formula_free = free_vars(&f);
        for var in &matrix_free {
            prop_assert!(
                names.contains(var) || formula_free.contains(var),
                "matrix variable {} is neither prefix nor parameter",
                var
            );
        }
        prop_assert!(contract_blocks(&pf).len() <= pf.prefix.len());
    }

    #[test]
    fn classify_agrees_across_rule_sets_up_to_order(f in arb_formula()) {
        let registry = test_registry();
        if let (Ok(zf), Ok(minimal)) = (
            classify_class(&f, RuleSet::Zf, &registry),
            classify_class(&f, RuleSet::Minimal, &registry),
        ) {
            prop_assert!(
                zf.leq(&minimal),
                "zf {} not below minimal {} for `{}`",
                zf,
                minimal,
                print(&f)
            );
        }
    }

    #[test]
    fn traces_replay_for_both_rule_sets(f in arb_formula()) {
        let registry = test_registry();
        for rules in [RuleSet::Zf, RuleSet::Minimal] {
            if let Ok((class, trace)) = classify(&f, rules, &registry) {
                prop_assert_eq!(trace.replay(), Some(class));
            }
        }
    }

    #[test]
    fn delta_refine_never_coarsens(f in arb_formula()) {
        let registry = test_registry();
        if let (Ok(refined), Ok(class)) = (
            delta_refine(&f, RuleSet::Zf, &registry),
            classify_class(&f, RuleSet::Zf, &registry),
        ) {
            prop_assert!(refined.leq(&class));
            prop_assert_eq!(refined.level(), class.level());
        }
    }

    #[test]
    fn eval_respects_alpha_equivalence(f in arb_evaluable_formula()) {
        let registry = test_registry();
        let model = build_v(2).unwrap();
        let reserved: BTreeSet<Variable> = common::POOL.iter().map(|n| Variable::new(*n)).collect();
        let renamed = rename_fresh(&f, &reserved);
        let vars: Vec<Variable> = free_vars(&f).into_iter().collect();
        for assignment in all_assignments(&vars, &model) {
            let original = eval(&model, &f, &assignment, &registry).unwrap();
            let refreshed = eval(&model, &renamed, &assignment, &registry).unwrap();
            prop_assert_eq!(original, refreshed);
        }
    }

    #[test]
    fn certified_upward_formulas_are_upward_absolute(f in arb_evaluable_formula()) {
        let registry = test_registry();
        let closed = close_formula(f);
        let (certified, trace) = certify_upwards(&closed, &registry);
        if !certified {
            return Ok(());
        }
        prop_assert!(!trace.is_empty());
        let universe = build_v(3).unwrap();
        let empty = Assignment::new();
        for (inner, outer) in enumerate_transitive_pairs(&universe, 24) {
            let inner_truth = eval(&inner, &closed, &empty, &registry).unwrap();
            let outer_truth = eval(&outer, &closed, &empty, &registry).unwrap();
            prop_assert!(
                !inner_truth || outer_truth,
                "certified formula `{}` dropped from inner to outer",
                print(&closed)
            );
        }
    }

    #[test]
    fn sigma1_sentences_climb_the_stages(f in arb_evaluable_formula()) {
        let registry = test_registry();
        let closed = close_formula(f);
        if classify_class(&closed, RuleSet::Zf, &registry) != Ok(levylab::LevyClass::sigma(1)) {
            return Ok(());
        }
        let empty = Assignment::new();
        let mut previous = false;
        for rank in 0..=3 {
            let stage = build_v(rank).unwrap();
            let truth = eval(&stage, &closed, &empty, &registry).unwrap();
            prop_assert!(!previous || truth, "Sigma1 truth dropped at V_{rank}");
            previous = truth;
        }
    }

    #[test]
    fn pure_ord_forall_prefix_over_delta0_is_eliminable(
        vars in prop::collection::vec(common::pool_var(), 1..4),
        body in arb_evaluable_formula(),
    ) {
        let registry = test_registry();
        // Quantifier-free bodies only: strip anything above Delta0.
        if classify_class(&body, RuleSet::Zf, &registry) != Ok(levylab::LevyClass::DELTA0) {
            return Ok(());
        }
        let mut sentence = body;
        for var in vars {
            sentence = Formula::ord_forall(var, sentence);
        }
        let decls: Vec<_> = free_vars(&sentence)
            .into_iter()
            .map(|v| levylab::transfer::ParameterDeclaration::new(
                v,
                levylab::transfer::ParameterSort::Ordinal,
            ))
            .collect();
        let verdict = check_transfer(&sentence, &decls, &registry).unwrap();
        prop_assert_eq!(verdict.outcome, TransferOutcome::Eliminable);
        prop_assert!(!verdict.absoluteness_trace.is_empty());
    }

    #[test]
    fn eliminable_sigma1_matrix_bounds_the_sentence_by_pi2(
        vars in prop::collection::vec(common::pool_var(), 1..3),
        body in arb_evaluable_formula(),
    ) {
        let registry = test_registry();
        let mut sentence = body.clone();
        for var in vars {
            sentence = Formula::ord_forall(var, sentence);
        }
        let decls: Vec<_> = free_vars(&sentence)
            .into_iter()
            .map(|v| levylab::transfer::ParameterDeclaration::new(
                v,
                levylab::transfer::ParameterSort::Ordinal,
            ))
            .collect();
        let verdict = check_transfer(&sentence, &decls, &registry).unwrap();
        let matrix_sigma1 = verdict.matrix_class.leq(&levylab::LevyClass::sigma(1));
        if verdict.outcome == TransferOutcome::Eliminable
            && !verdict.stripped_prefix.is_empty()
            && matrix_sigma1
        {
            let class = classify_class(&sentence, RuleSet::Zf, &registry).unwrap();
            prop_assert!(
                class.leq(&levylab::LevyClass::pi(2)),
                "gate accepted `{}` at {}",
                print(&sentence),
                class
            );
        }
    }
}

#[test]
fn nnf_fixes_negations_to_atoms() {
    // Deterministic spot checks that the nnf laws compose with parsing.
    let registry = test_registry();
    let cases = [
        "not (exists x . (x in a -> not (forall y in x . y = a)))",
        "not not (a in b -> b in a)",
        "not (forallOrd s . exists t . t in s and not t = a)",
    ];
    for text in cases {
        let f = parse(text, &registry).unwrap();
        let nnf = to_nnf(&f);
        assert!(nnf_shape_ok(&nnf), "bad nnf for `{text}`: `{}`", print(&nnf));
    }
}

fn nnf_shape_ok(f: &Formula) -> bool {
    match f {
        Formula::Member(..) | Formula::Equal(..) | Formula::Defined(..) => true,
        Formula::Not(body) => matches!(
            body.as_ref(),
            Formula::Member(..) | Formula::Equal(..) | Formula::Defined(..)
        ),
        Formula::And(l, r) | Formula::Or(l, r) => nnf_shape_ok(l) && nnf_shape_ok(r),
        Formula::Implies(..) => false,
        Formula::Exists(_, b)
        | Formula::Forall(_, b)
        | Formula::OrdExists(_, b)
        | Formula::OrdForall(_, b) => nnf_shape_ok(b),
        Formula::BoundedExists { body, .. } | Formula::BoundedForall { body, .. } => {
            nnf_shape_ok(body)
        }
    }
}

proptest! {
    #[test]
    fn nnf_shape_holds_for_generated_formulas(f in arb_formula()) {
        prop_assert!(nnf_shape_ok(&to_nnf(&f)));
    }
}
