//! Shared fixtures for unit tests.

use proptest::prelude::*;

use crate::circuit::{Circuit, Lit, Node};
use crate::formula::{Expr, Formula};

/// Reference circuit for `(A ∧ B) ⇒ C` with A, B, C = variables 0, 1, 2.
pub fn implication_circuit() -> Circuit {
    let nodes = vec![
        Node::Literal(Lit::pos(0)), // 0 A
        Node::Literal(Lit::neg(0)), // 1 ¬A
        Node::Literal(Lit::pos(1)), // 2 B
        Node::Literal(Lit::neg(1)), // 3 ¬B
        Node::Literal(Lit::pos(2)), // 4 C
        Node::Literal(Lit::neg(2)), // 5 ¬C
        Node::Or(vec![0, 1]),       // 6 A ∨ ¬A
        Node::Or(vec![2, 3]),       // 7 B ∨ ¬B
        Node::And(vec![6, 7]),      // 8
        Node::And(vec![0, 3]),      // 9 A ∧ ¬B
        Node::And(vec![1, 7]),      // 10 ¬A ∧ (B ∨ ¬B)
        Node::Or(vec![9, 10]),      // 11
        Node::And(vec![4, 8]),      // 12 C ∧ ...
        Node::And(vec![11, 5]),     // 13 ... ∧ ¬C
        Node::Or(vec![12, 13]),     // 14 root
    ];
    Circuit::from_nodes(nodes, 3).unwrap()
}

fn arb_expr(n: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        8 => (0..n).prop_map(Expr::var),
        1 => Just(Expr::True),
        1 => Just(Expr::False),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Expr::And),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Expr::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::iff(a, b)),
        ]
    })
}

fn arb_cnf(n: usize) -> impl Strategy<Value = Expr> {
    let lit = (0..n, any::<bool>()).prop_map(|(v, p)| Expr::lit(v, p));
    let clause = prop::collection::vec(lit, 1..4).prop_map(Expr::Or);
    prop::collection::vec(clause, 1..(2 * n + 2)).prop_map(Expr::And)
}

/// Random formulas over 1..=max_vars variables: half CNF, half free-form ASTs.
pub fn arb_formula(max_vars: usize) -> impl Strategy<Value = Formula> {
    (1..=max_vars).prop_flat_map(|n| {
        prop_oneof![arb_cnf(n), arb_expr(n)].prop_map(move |e| Formula::new(e, n).unwrap())
    })
}
