//! Canonical rendering of formulas; `parse(print(f))` returns `f` exactly.

use std::fmt::Write;

use crate::ast::Formula;

// Binding strength used to decide parenthesization. Quantifiers are weakest
// because their body extends maximally rightward.
const PREC_QUANT: u8 = 0;
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(formula: &Formula) -> u8 {
    match formula {
        Formula::Member(..) | Formula::Equal(..) | Formula::Defined(..) => PREC_ATOM,
        Formula::Not(..) => PREC_NOT,
        Formula::And(..) => PREC_AND,
        Formula::Or(..) => PREC_OR,
        Formula::Implies(..) => PREC_IMPLIES,
        Formula::Exists(..)
        | Formula::Forall(..)
        | Formula::BoundedExists { .. }
        | Formula::BoundedForall { .. }
        | Formula::OrdExists(..)
        | Formula::OrdForall(..) => PREC_QUANT,
    }
}

/// Renders a formula in the concrete syntax.
pub fn print(formula: &Formula) -> String {
    let mut out = String::new();
    write_prec(formula, PREC_QUANT, &mut out);
    out
}

fn write_prec(formula: &Formula, min: u8, out: &mut String) {
    if precedence(formula) < min {
        out.push('(');
        write_node(formula, out);
        out.push(')');
    } else {
        write_node(formula, out);
    }
}

fn write_node(formula: &Formula, out: &mut String) {
    match formula {
        Formula::Member(a, b) => {
            let _ = write!(out, "{a} in {b}");
        }
        Formula::Equal(a, b) => {
            let _ = write!(out, "{a} = {b}");
        }
        Formula::Defined(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{arg}");
            }
            out.push(')');
        }
        Formula::Not(body) => {
            out.push_str("not ");
            write_prec(body, PREC_NOT, out);
        }
        Formula::And(l, r) => {
            write_prec(l, PREC_AND, out);
            out.push_str(" and ");
            write_prec(r, PREC_AND + 1, out);
        }
        Formula::Or(l, r) => {
            write_prec(l, PREC_OR, out);
            out.push_str(" or ");
            write_prec(r, PREC_OR + 1, out);
        }
        Formula::Implies(l, r) => {
            write_prec(l, PREC_IMPLIES + 1, out);
            out.push_str(" -> ");
            write_prec(r, PREC_IMPLIES, out);
        }
        Formula::Exists(v, body) => {
            let _ = write!(out, "exists {v} . ");
            write_prec(body, PREC_QUANT, out);
        }
        Formula::Forall(v, body) => {
            let _ = write!(out, "forall {v} . ");
            write_prec(body, PREC_QUANT, out);
        }
        Formula::BoundedExists { var, bound, body } => {
            let _ = write!(out, "exists {var} in {bound} . ");
            write_prec(body, PREC_QUANT, out);
        }
        Formula::BoundedForall { var, bound, body } => {
            let _ = write!(out, "forall {var} in {bound} . ");
            write_prec(body, PREC_QUANT, out);
        }
        Formula::OrdExists(v, body) => {
            let _ = write!(out, "existsOrd {v} . ");
            write_prec(body, PREC_QUANT, out);
        }
        Formula::OrdForall(v, body) => {
            let _ = write!(out, "forallOrd {v} . ");
            write_prec(body, PREC_QUANT, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Variable;
    use crate::parser::parse;
    use crate::registry::Registry;

    fn v(name: &str) -> Variable {
        Variable::new(name)
    }

    #[test]
    fn prints_atoms() {
        assert_eq!(print(&Formula::Member(v("x"), v("y"))), "x in y");
        assert_eq!(
            print(&Formula::not(Formula::Equal(v("x"), v("x")))),
            "not x = x"
        );
    }

    #[test]
    fn prints_quantifier_chain_without_parens() {
        let f = Formula::ord_forall(
            v("f"),
            Formula::exists(v("A"), Formula::Member(v("A"), v("f"))),
        );
        assert_eq!(print(&f), "forallOrd f . exists A . A in f");
    }

    #[test]
    fn parenthesizes_quantifier_operands() {
        let f = Formula::and(
            Formula::forall(v("x"), Formula::Equal(v("x"), v("x"))),
            Formula::Member(v("a"), v("b")),
        );
        assert_eq!(print(&f), "(forall x . x = x) and a in b");
    }

    #[test]
    fn preserves_right_nested_conjunction() {
        let f = Formula::and(
            Formula::Equal(v("a"), v("a")),
            Formula::and(Formula::Equal(v("b"), v("b")), Formula::Equal(v("c"), v("c"))),
        );
        assert_eq!(print(&f), "a = a and (b = b and c = c)");
        let g = Formula::and(
            Formula::and(Formula::Equal(v("a"), v("a")), Formula::Equal(v("b"), v("b"))),
            Formula::Equal(v("c"), v("c")),
        );
        assert_eq!(print(&g), "a = a and b = b and c = c");
    }

    #[test]
    fn double_negation_needs_no_parens() {
        let f = Formula::not(Formula::not(Formula::Member(v("x"), v("y"))));
        assert_eq!(print(&f), "not not x in y");
    }

    #[test]
    fn round_trips_through_parser() {
        let reg = Registry::with_builtins();
        let cases = [
            Formula::implies(
                Formula::implies(Formula::Equal(v("a"), v("a")), Formula::Equal(v("b"), v("b"))),
                Formula::Equal(v("c"), v("c")),
            ),
            Formula::or(
                Formula::not(Formula::and(
                    Formula::Member(v("x"), v("y")),
                    Formula::Member(v("y"), v("z")),
                )),
                Formula::bounded_exists(v("q"), v("z"), Formula::Equal(v("q"), v("x"))),
            ),
            Formula::ord_exists(
                v("s"),
                Formula::and(
                    Formula::Defined("OrdTupleSet".into(), vec![v("s")]),
                    Formula::forall(v("t"), Formula::not(Formula::Member(v("t"), v("s")))),
                ),
            ),
        ];
        for f in cases {
            let printed = print(&f);
            assert_eq!(parse(&printed, &reg).unwrap(), f, "round trip of `{printed}`");
        }
    }
}
