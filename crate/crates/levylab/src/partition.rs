//! Generator for partition-calculus statements.
//!
//! Every statement of the family "for every coloring of a subset of
//! `[κ]^{<ω}` in λ colors there is a subset of order type/cardinality α which
//! is homogeneous/anti-homogeneous" is emitted in the shape
//! `forallOrd f . existsOrd A . existsOrd g . phi` with `phi` built entirely
//! from ∈/= atoms, the Δ₀ built-ins, and set-bounded quantifiers: the
//! coloring guard spells out "f maps strictly increasing finite sequences
//! into κ to colors below λ" by decoding Kuratowski pairs with bounded
//! quantifiers, and the homogeneity matrix compares colors of A-ranged
//! sequences. The whole family is therefore Π₂ with every quantifier
//! ordinal-bounded or set-bounded, and the transfer gate accepts it.

use std::collections::BTreeSet;

use crate::ast::{Formula, Variable};
use crate::registry::BuiltinEval;

/// Length discipline for the colored sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    /// Sequences of one fixed finite length n ≥ 1, as in `[κ]^n`.
    Fixed(u32),
    /// All finite lengths, as in `[κ]^{<ω}`.
    AllFinite,
}

/// Whether the witness set makes the coloring constant or injective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomogeneityMode {
    Homogeneous,
    AntiHomogeneous,
}

/// One instance of the partition-statement family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionStatementSpec {
    /// Source of the colored sequences, an ordinal parameter.
    pub kappa: Variable,
    /// Number of colors, an ordinal parameter.
    pub lambda: Variable,
    pub exponent: Exponent,
    /// Order type/cardinality of the witness set, an ordinal parameter.
    pub target: Variable,
    pub mode: HomogeneityMode,
    /// Demand an order-preserving bijection onto the target.
    pub order_preserving: bool,
}

/// Spec validation failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvalidSpec {
    #[error("fixed exponent must be at least 1")]
    ZeroExponent,
}

// Hands out globally fresh bound-variable names, never colliding with the
// spec's parameter variables.
struct Names {
    used: BTreeSet<String>,
}

impl Names {
    fn reserving(vars: &[&Variable]) -> Names {
        Names {
            used: vars.iter().map(|v| v.name().to_string()).collect(),
        }
    }

    fn fresh(&mut self, base: &str) -> Variable {
        if self.used.insert(base.to_string()) {
            return Variable::new(base);
        }
        let mut n = 1u64;
        loop {
            let candidate = format!("{base}{n}");
            if self.used.insert(candidate.clone()) {
                return Variable::new(candidate);
            }
            n += 1;
        }
    }
}

fn member(a: &Variable, b: &Variable) -> Formula {
    Formula::Member(a.clone(), b.clone())
}

fn equal(a: &Variable, b: &Variable) -> Formula {
    Formula::Equal(a.clone(), b.clone())
}

fn ord_atom(v: &Variable) -> Formula {
    Formula::Defined(BuiltinEval::Ord.name().to_string(), vec![v.clone()])
}

/// p = ⟨a, b⟩ in Kuratowski coding: {a} and {a, b} are elements of p and
/// nothing else is.
fn is_pair_of(p: &Variable, a: &Variable, b: &Variable, names: &mut Names) -> Formula {
    let u = names.fresh("u");
    let w = names.fresh("w");
    let q = names.fresh("q");
    let t = |names: &mut Names| names.fresh("t");

    let t1 = t(names);
    let has_singleton = Formula::bounded_exists(
        u.clone(),
        p.clone(),
        Formula::and(
            member(a, &u),
            Formula::bounded_forall(t1.clone(), u.clone(), equal(&t1, a)),
        ),
    );
    let t2 = t(names);
    let has_doubleton = Formula::bounded_exists(
        w.clone(),
        p.clone(),
        Formula::and_all(vec![
            member(a, &w),
            member(b, &w),
            Formula::bounded_forall(
                t2.clone(),
                w.clone(),
                Formula::or(equal(&t2, a), equal(&t2, b)),
            ),
        ]),
    );
    let t3 = t(names);
    let t4 = t(names);
    let nothing_else = Formula::bounded_forall(
        q.clone(),
        p.clone(),
        Formula::or(
            Formula::and(
                member(a, &q),
                Formula::bounded_forall(t3.clone(), q.clone(), equal(&t3, a)),
            ),
            Formula::and_all(vec![
                member(a, &q),
                member(b, &q),
                Formula::bounded_forall(
                    t4.clone(),
                    q.clone(),
                    Formula::or(equal(&t4, a), equal(&t4, b)),
                ),
            ]),
        ),
    );
    Formula::and_all(vec![has_singleton, has_doubleton, nothing_else])
}

/// Runs `body(x, y)` under the bounded decode of every pair ⟨x, y⟩ ∈ f,
/// guarded by the pair check.
fn for_all_pairs_of(
    f: &Variable,
    names: &mut Names,
    body: impl FnOnce(&Variable, &Variable, &mut Names) -> Formula,
) -> Formula {
    let p = names.fresh("p");
    let u = names.fresh("u");
    let x = names.fresh("x");
    let w = names.fresh("w");
    let y = names.fresh("y");
    let pair_guard = is_pair_of(&p, &x, &y, names);
    let inner = body(&x, &y, names);
    Formula::bounded_forall(
        p.clone(),
        f.clone(),
        Formula::bounded_forall(
            u.clone(),
            p.clone(),
            Formula::bounded_forall(
                x.clone(),
                u.clone(),
                Formula::bounded_forall(
                    w.clone(),
                    p.clone(),
                    Formula::bounded_forall(
                        y.clone(),
                        w,
                        Formula::implies(pair_guard, inner),
                    ),
                ),
            ),
        ),
    )
}

/// Like `for_all_pairs_of` for two function graphs at once.
fn for_all_pair_pairs_of(
    f: &Variable,
    g: &Variable,
    names: &mut Names,
    body: impl FnOnce(&Variable, &Variable, &Variable, &Variable, &mut Names) -> Formula,
) -> Formula {
    for_all_pairs_of(f, names, |x1, y1, names| {
        let x1 = x1.clone();
        let y1 = y1.clone();
        for_all_pairs_of(g, names, move |x2, y2, names| {
            body(&x1, &y1, x2, y2, names)
        })
    })
}

/// ⟨x, y⟩ ∈ f for some y, all quantifiers bounded through f's structure.
fn in_domain(x: &Variable, f: &Variable, names: &mut Names) -> Formula {
    let p = names.fresh("p");
    let w = names.fresh("w");
    let y = names.fresh("y");
    let pair = is_pair_of(&p, x, &y, names);
    Formula::bounded_exists(
        p.clone(),
        f.clone(),
        Formula::bounded_exists(
            w.clone(),
            p.clone(),
            Formula::bounded_exists(y.clone(), w, pair),
        ),
    )
}

/// Every element of f is a Kuratowski pair and no first coordinate is sent
/// two ways.
fn is_function(f: &Variable, names: &mut Names) -> Formula {
    let p = names.fresh("p");
    let u = names.fresh("u");
    let x = names.fresh("x");
    let w = names.fresh("w");
    let y = names.fresh("y");
    let pair = is_pair_of(&p, &x, &y, names);
    let all_pairs = Formula::bounded_forall(
        p.clone(),
        f.clone(),
        Formula::bounded_exists(
            u.clone(),
            p.clone(),
            Formula::bounded_exists(
                x.clone(),
                u,
                Formula::bounded_exists(
                    w.clone(),
                    p.clone(),
                    Formula::bounded_exists(y.clone(), w, pair),
                ),
            ),
        ),
    );
    let functional = for_all_pair_pairs_of(f, f, names, |x1, y1, x2, y2, _| {
        Formula::implies(equal(x1, x2), equal(y1, y2))
    });
    Formula::and(all_pairs, functional)
}

/// o is empty or a successor: some k ∈ o with every element of o either in
/// k or equal to it.
fn zero_or_successor(o: &Variable, names: &mut Names) -> Formula {
    let t = names.fresh("t");
    let k = names.fresh("k");
    let t2 = names.fresh("t");
    let is_zero = Formula::bounded_forall(
        t.clone(),
        o.clone(),
        Formula::not(equal(&t, &t)),
    );
    let is_successor = Formula::bounded_exists(
        k.clone(),
        o.clone(),
        Formula::bounded_forall(
            t2.clone(),
            o.clone(),
            Formula::or(member(&t2, &k), equal(&t2, &k)),
        ),
    );
    Formula::or(is_zero, is_successor)
}

/// i is a von Neumann natural: an ordinal, itself zero or a successor, all
/// of whose elements are zero or successors.
fn is_natural(i: &Variable, names: &mut Names) -> Formula {
    let j = names.fresh("j");
    let elements_ok = zero_or_successor(&j, names);
    Formula::and_all(vec![
        ord_atom(i),
        zero_or_successor(i, names),
        Formula::bounded_forall(j, i.clone(), elements_ok),
    ])
}

/// Values of the sequence s all land in `range`.
fn sequence_range_in(s: &Variable, range: &Variable, names: &mut Names) -> Formula {
    let range = range.clone();
    for_all_pairs_of(s, names, move |_, v, _| member(v, &range))
}

/// s is a strictly increasing finite sequence into kappa: a function whose
/// first coordinates are naturals forming a downward-closed set (hence a
/// finite ordinal), whose values lie in kappa, increasing along positions.
fn is_increasing_sequence_into(
    s: &Variable,
    kappa: &Variable,
    names: &mut Names,
) -> Formula {
    let function = is_function(s, names);
    let kappa_owned = kappa.clone();
    let s_owned = s.clone();
    let domain_and_values = for_all_pairs_of(s, names, move |i, v, names| {
        let i2 = names.fresh("i");
        let downward = in_domain(&i2, &s_owned, names);
        Formula::and_all(vec![
            is_natural(i, names),
            Formula::bounded_forall(i2, i.clone(), downward),
            member(v, &kappa_owned),
        ])
    });
    let increasing = for_all_pair_pairs_of(s, s, names, |i1, v1, i2, v2, _| {
        Formula::implies(member(i1, i2), member(v1, v2))
    });
    Formula::and_all(vec![function, domain_and_values, increasing])
}

/// |i| ≤ n for a set i: any n+1 elements repeat (pigeonhole).
fn at_most_n_elements(i: &Variable, n: u32, names: &mut Names) -> Formula {
    let picks: Vec<Variable> = (0..=n).map(|_| names.fresh("t")).collect();
    let mut repeats = Vec::new();
    for a in 0..picks.len() {
        for b in (a + 1)..picks.len() {
            repeats.push(equal(&picks[a], &picks[b]));
        }
    }
    let mut body = if repeats.is_empty() {
        // n = 0 with one pick: no possible repeat, so demand emptiness.
        Formula::not(equal(&picks[0], &picks[0]))
    } else {
        Formula::or_all(repeats)
    };
    for pick in picks.into_iter().rev() {
        body = Formula::bounded_forall(pick, i.clone(), body);
    }
    body
}

/// |i| = n exactly: n distinct elements that exhaust i.
fn exactly_n_elements(i: &Variable, n: u32, names: &mut Names) -> Formula {
    if n == 0 {
        let t = names.fresh("t");
        return Formula::bounded_forall(t.clone(), i.clone(), Formula::not(equal(&t, &t)));
    }
    let picks: Vec<Variable> = (0..n).map(|_| names.fresh("t")).collect();
    let mut clauses = Vec::new();
    for a in 0..picks.len() {
        for b in (a + 1)..picks.len() {
            clauses.push(Formula::not(equal(&picks[a], &picks[b])));
        }
    }
    let cover = names.fresh("t");
    clauses.push(Formula::bounded_forall(
        cover.clone(),
        i.clone(),
        Formula::or_all(picks.iter().map(|p| equal(&cover, p)).collect()),
    ));
    let mut body = Formula::and_all(clauses);
    for pick in picks.into_iter().rev() {
        body = Formula::bounded_exists(pick, i.clone(), body);
    }
    body
}

/// dom(s) is exactly the numeral n: every position has at most n-1
/// elements (so lies below n) and some position has exactly n-1.
fn sequence_length_is(s: &Variable, n: u32, names: &mut Names) -> Formula {
    let below = for_all_pairs_of(s, names, |i, _, names| at_most_n_elements(i, n - 1, names));
    let p = names.fresh("p");
    let u = names.fresh("u");
    let i = names.fresh("i");
    let w = names.fresh("w");
    let v = names.fresh("v");
    let pair = is_pair_of(&p, &i, &v, names);
    let top_size = exactly_n_elements(&i, n - 1, names);
    let reaches = Formula::bounded_exists(
        p.clone(),
        s.clone(),
        Formula::bounded_exists(
            u.clone(),
            p.clone(),
            Formula::bounded_exists(
                i.clone(),
                u,
                Formula::bounded_exists(
                    w.clone(),
                    p.clone(),
                    Formula::bounded_exists(
                        v.clone(),
                        w,
                        Formula::and(pair, top_size),
                    ),
                ),
            ),
        ),
    );
    Formula::and(below, reaches)
}

/// The coloring guard: f is a function sending strictly increasing finite
/// sequences into kappa (of the demanded length) to colors below lambda.
fn is_coloring(
    f: &Variable,
    kappa: &Variable,
    lambda: &Variable,
    exponent: Exponent,
    names: &mut Names,
) -> Formula {
    let function = is_function(f, names);
    let kappa = kappa.clone();
    let lambda = lambda.clone();
    let entries = for_all_pairs_of(f, names, move |s, c, names| {
        let mut parts = vec![
            member(c, &lambda),
            is_increasing_sequence_into(s, &kappa, names),
        ];
        if let Exponent::Fixed(n) = exponent {
            parts.push(sequence_length_is(s, n, names));
        }
        Formula::and_all(parts)
    });
    Formula::and(function, entries)
}

/// g is a bijection from a onto target, order preserving when demanded.
/// Totality and range containment ride on the built-in FuncInto atom.
fn is_target_bijection(
    g: &Variable,
    a: &Variable,
    target: &Variable,
    order_preserving: bool,
    names: &mut Names,
) -> Formula {
    let func_into = Formula::Defined(
        BuiltinEval::FuncInto.name().to_string(),
        vec![g.clone(), a.clone(), target.clone()],
    );
    let injective = for_all_pair_pairs_of(g, g, names, |x1, y1, x2, y2, _| {
        Formula::implies(equal(y1, y2), equal(x1, x2))
    });
    let y = names.fresh("y");
    let p = names.fresh("p");
    let u = names.fresh("u");
    let x = names.fresh("x");
    let onto_pair = is_pair_of(&p, &x, &y, names);
    let onto = Formula::bounded_forall(
        y.clone(),
        target.clone(),
        Formula::bounded_exists(
            p.clone(),
            g.clone(),
            Formula::bounded_exists(
                u.clone(),
                p.clone(),
                Formula::bounded_exists(x.clone(), u, onto_pair),
            ),
        ),
    );
    let mut parts = vec![func_into, injective, onto];
    if order_preserving {
        parts.push(for_all_pair_pairs_of(g, g, names, |x1, y1, x2, y2, _| {
            Formula::implies(member(x1, x2), member(y1, y2))
        }));
    }
    Formula::and_all(parts)
}

/// Homogeneity: colored sequences ranging inside a get one color.
/// Anti-homogeneity: the coloring is injective on them.
fn homogeneity_matrix(
    f: &Variable,
    a: &Variable,
    mode: HomogeneityMode,
    names: &mut Names,
) -> Formula {
    let a = a.clone();
    for_all_pair_pairs_of(f, f, names, move |s1, c1, s2, c2, names| {
        let ranged = Formula::and(
            sequence_range_in(s1, &a, names),
            sequence_range_in(s2, &a, names),
        );
        match mode {
            HomogeneityMode::Homogeneous => {
                Formula::implies(ranged, equal(c1, c2))
            }
            HomogeneityMode::AntiHomogeneous => Formula::implies(
                Formula::and(ranged, equal(c1, c2)),
                equal(s1, s2),
            ),
        }
    })
}

/// Builds the partition statement in the canonical proof shape
/// `forallOrd f . existsOrd A . existsOrd g . (coloring guard -> witness)`.
/// The matrix is Δ₀ and every quantifier is ordinal- or set-bounded, so the
/// statement classifies Π₂ and the transfer gate accepts it.
pub fn make_partition_statement(spec: &PartitionStatementSpec) -> Result<Formula, InvalidSpec> {
    if spec.exponent == Exponent::Fixed(0) {
        return Err(InvalidSpec::ZeroExponent);
    }
    let mut names = Names::reserving(&[&spec.kappa, &spec.lambda, &spec.target]);
    let f = names.fresh("f");
    let a = names.fresh("A");
    let g = names.fresh("g");

    let guard = is_coloring(&f, &spec.kappa, &spec.lambda, spec.exponent, &mut names);
    let subset = {
        let e = names.fresh("e");
        Formula::bounded_forall(e.clone(), a.clone(), member(&e, &spec.kappa))
    };
    let bijection = is_target_bijection(&g, &a, &spec.target, spec.order_preserving, &mut names);
    let witness = homogeneity_matrix(&f, &a, spec.mode, &mut names);

    let matrix = Formula::implies(
        guard,
        Formula::and_all(vec![subset, bijection, witness]),
    );
    Ok(Formula::ord_forall(
        f,
        Formula::ord_exists(a, Formula::ord_exists(g, matrix)),
    ))
}
