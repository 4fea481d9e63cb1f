//! Propositional formulas over indexed Boolean variables.
//!
//! Formulas are plain syntax trees: `implies` and `iff` stay first-class nodes
//! and nothing is simplified on construction. Brute-force semantics
//! ([`Formula::eval`], [`Formula::enumerate_models`]) are the reference every
//! compiled circuit is checked against.

use std::fmt;

use crate::error::FormulaError;

/// Largest variable count [`Formula::enumerate_models`] accepts.
pub const ENUMERATION_LIMIT: usize = 24;

/// A 0-based Boolean variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    True,
    False,
    Var(Var),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(index: usize) -> Expr {
        Expr::Var(Var(index))
    }

    /// Literal over `index`: positive when `positive` is set, negated otherwise.
    pub fn lit(index: usize, positive: bool) -> Expr {
        if positive {
            Expr::var(index)
        } else {
            Expr::not(Expr::var(index))
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(children: Vec<Expr>) -> Expr {
        Expr::And(children)
    }

    pub fn or(children: Vec<Expr>) -> Expr {
        Expr::Or(children)
    }

    pub fn implies(a: Expr, b: Expr) -> Expr {
        Expr::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Expr, b: Expr) -> Expr {
        Expr::Iff(Box::new(a), Box::new(b))
    }

    /// Evaluates under the valuation `value(var_index)`.
    pub fn eval_with<F: Fn(usize) -> bool>(&self, value: &F) -> bool {
        match self {
            Expr::True => true,
            Expr::False => false,
            Expr::Var(v) => value(v.0),
            Expr::Not(e) => !e.eval_with(value),
            Expr::And(cs) => cs.iter().all(|c| c.eval_with(value)),
            Expr::Or(cs) => cs.iter().any(|c| c.eval_with(value)),
            Expr::Implies(a, b) => !a.eval_with(value) || b.eval_with(value),
            Expr::Iff(a, b) => a.eval_with(value) == b.eval_with(value),
        }
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<usize> {
        let mut max = None;
        self.visit_vars(&mut |v| max = Some(max.map_or(v, |m: usize| m.max(v))));
        max
    }

    /// Calls `f` once per variable occurrence (leaf), left to right.
    pub fn visit_vars<F: FnMut(usize)>(&self, f: &mut F) {
        match self {
            Expr::True | Expr::False => {}
            Expr::Var(v) => f(v.0),
            Expr::Not(e) => e.visit_vars(f),
            Expr::And(cs) | Expr::Or(cs) => cs.iter().for_each(|c| c.visit_vars(f)),
            Expr::Implies(a, b) | Expr::Iff(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Shifts every variable index by `offset`.
    pub fn shifted(&self, offset: usize) -> Expr {
        match self {
            Expr::True => Expr::True,
            Expr::False => Expr::False,
            Expr::Var(v) => Expr::var(v.0 + offset),
            Expr::Not(e) => Expr::not(e.shifted(offset)),
            Expr::And(cs) => Expr::And(cs.iter().map(|c| c.shifted(offset)).collect()),
            Expr::Or(cs) => Expr::Or(cs.iter().map(|c| c.shifted(offset)).collect()),
            Expr::Implies(a, b) => Expr::implies(a.shifted(offset), b.shifted(offset)),
            Expr::Iff(a, b) => Expr::iff(a.shifted(offset), b.shifted(offset)),
        }
    }

    fn check(&self, var_count: usize) -> Result<(), FormulaError> {
        match self {
            Expr::True | Expr::False => Ok(()),
            Expr::Var(v) if v.0 >= var_count => Err(FormulaError::VarOutOfRange {
                index: v.0,
                var_count,
            }),
            Expr::Var(_) => Ok(()),
            Expr::Not(e) => e.check(var_count),
            Expr::And(cs) | Expr::Or(cs) => {
                if cs.is_empty() {
                    return Err(FormulaError::EmptyConnective);
                }
                cs.iter().try_for_each(|c| c.check(var_count))
            }
            Expr::Implies(a, b) | Expr::Iff(a, b) => {
                a.check(var_count)?;
                b.check(var_count)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, op: &str, cs: &[&Expr]) -> fmt::Result {
            write!(f, "({op}")?;
            for c in cs {
                write!(f, " {c}")?;
            }
            write!(f, ")")
        }
        match self {
            Expr::True => write!(f, "true"),
            Expr::False => write!(f, "false"),
            Expr::Var(v) => write!(f, "(var {})", v.0),
            Expr::Not(e) => list(f, "not", &[e]),
            Expr::And(cs) => list(f, "and", &cs.iter().collect::<Vec<_>>()),
            Expr::Or(cs) => list(f, "or", &cs.iter().collect::<Vec<_>>()),
            Expr::Implies(a, b) => list(f, "=>", &[a, b]),
            Expr::Iff(a, b) => list(f, "<=>", &[a, b]),
        }
    }
}

/// A well-formed expression together with its declared variable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    expr: Expr,
    var_count: usize,
}

impl Formula {
    pub fn new(expr: Expr, var_count: usize) -> Result<Self, FormulaError> {
        expr.check(var_count)?;
        Ok(Formula { expr, var_count })
    }

    /// Builds a formula whose variable count is one past the largest index used.
    pub fn from_expr(expr: Expr) -> Result<Self, FormulaError> {
        let n = expr.max_var().map_or(0, |m| m + 1);
        Formula::new(expr, n)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn into_expr(self) -> Expr {
        self.expr
    }

    /// The negated formula over the same variables.
    pub fn negated(&self) -> Formula {
        Formula {
            expr: Expr::not(self.expr.clone()),
            var_count: self.var_count,
        }
    }

    /// Number of leaf occurrences of every variable.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut counts = vec![0; self.var_count];
        self.expr.visit_vars(&mut |v| counts[v] += 1);
        counts
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        if a.len() != self.var_count {
            return Err(FormulaError::LengthMismatch {
                expected: self.var_count,
                found: a.len(),
            });
        }
        Ok(self.expr.eval_with(&|i| a.get(i)))
    }

    /// Exhaustive model enumeration in lexicographic order (variable 0 most significant).
    pub fn enumerate_models(&self) -> Result<ModelSet, FormulaError> {
        let n = self.var_count;
        if n > ENUMERATION_LIMIT {
            return Err(FormulaError::TooManyVariables {
                var_count: n,
                limit: ENUMERATION_LIMIT,
            });
        }
        let mut models = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let bit = |i: usize| (mask >> (n - 1 - i)) & 1 == 1;
            if self.expr.eval_with(&bit) {
                models.push(Assignment::from_mask(mask, n));
            }
        }
        Ok(ModelSet::from_sorted(models))
    }
}

impl fmt::Display for Formula {
    /// Writes the s-expression form. A `(vars N)` header is emitted only when
    /// the declared count differs from what the expression implies.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let implied = self.expr.max_var().map_or(0, |m| m + 1);
        if implied != self.var_count {
            writeln!(f, "(vars {})", self.var_count)?;
        }
        write!(f, "{}", self.expr)
    }
}

/// A complete truth assignment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    /// Decodes `mask` with variable 0 in the most significant of `n` bits.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Assignment((0..n).map(|i| (mask >> (n - 1 - i)) & 1 == 1).collect())
    }

    /// Parses a bit string such as `"101"`.
    pub fn from_bits(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Assignment)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Sorted, duplicate-free set of models.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelSet {
    models: Vec<Assignment>,
}

impl ModelSet {
    pub fn from_sorted(models: Vec<Assignment>) -> Self {
        debug_assert!(models.windows(2).all(|w| w[0] < w[1]));
        ModelSet { models }
    }

    pub fn from_unsorted(mut models: Vec<Assignment>) -> Self {
        models.sort();
        models.dedup();
        ModelSet { models }
    }

    pub fn count(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn contains(&self, a: &Assignment) -> bool {
        self.models.binary_search(a).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Assignment> {
        self.models.iter()
    }

    pub fn as_slice(&self) -> &[Assignment] {
        &self.models
    }

    /// Bit strings of every model, for compact assertions.
    pub fn to_strings(&self) -> Vec<String> {
        self.models.iter().map(|m| m.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn implication() -> Formula {
        parse_formula("(=> (and (var 0) (var 1)) (var 2))").unwrap()
    }

    /// Truth table of `e` as one bool per mask, computed bottom-up over whole
    /// columns. Shares nothing with `Expr::eval_with`.
    fn truth_table(e: &Expr, n: usize) -> Vec<bool> {
        let size = 1usize << n;
        match e {
            Expr::True => vec![true; size],
            Expr::False => vec![false; size],
            Expr::Var(v) => (0..size).map(|m| m & (1 << (n - 1 - v.0)) != 0).collect(),
            Expr::Not(a) => truth_table(a, n).into_iter().map(|b| !b).collect(),
            Expr::And(cs) => cs.iter().fold(vec![true; size], |acc, c| {
                acc.iter()
                    .zip(truth_table(c, n))
                    .map(|(&x, y)| x & y)
                    .collect()
            }),
            Expr::Or(cs) => cs.iter().fold(vec![false; size], |acc, c| {
                acc.iter()
                    .zip(truth_table(c, n))
                    .map(|(&x, y)| x | y)
                    .collect()
            }),
            Expr::Implies(a, b) => truth_table(a, n)
                .into_iter()
                .zip(truth_table(b, n))
                .map(|(x, y)| !x | y)
                .collect(),
            Expr::Iff(a, b) => truth_table(a, n)
                .into_iter()
                .zip(truth_table(b, n))
                .map(|(x, y)| x == y)
                .collect(),
        }
    }

    #[test]
    fn implication_has_seven_models() {
        let f = implication();
        let models = f.enumerate_models().unwrap();
        assert_eq!(models.count(), 7);
        assert!(!models.contains(&Assignment::from_bits("110").unwrap()));
    }

    #[test]
    fn eval_examples() {
        let f = implication();
        assert!(!f.eval(&Assignment::from_bits("110").unwrap()).unwrap());
        assert!(f.eval(&Assignment::from_bits("010").unwrap()).unwrap());
        let taut = parse_formula("(or (var 0) (not (var 0)))").unwrap();
        assert!(taut.eval(&Assignment::from_bits("0").unwrap()).unwrap());
        assert!(taut.eval(&Assignment::from_bits("1").unwrap()).unwrap());
    }

    #[test]
    fn eval_rejects_wrong_length() {
        let err = implication()
            .eval(&Assignment::from_bits("11").unwrap())
            .unwrap_err();
        assert!(matches!(
            err,
            FormulaError::LengthMismatch {
                expected: 3,
                found: 2
            }
        ));
    }

    #[test]
    fn exactly_one_of_three() {
        let e = Expr::and(vec![
            Expr::or(vec![Expr::var(0), Expr::var(1), Expr::var(2)]),
            Expr::not(Expr::and(vec![Expr::var(0), Expr::var(1)])),
            Expr::not(Expr::and(vec![Expr::var(0), Expr::var(2)])),
            Expr::not(Expr::and(vec![Expr::var(1), Expr::var(2)])),
        ]);
        let models = Formula::from_expr(e).unwrap().enumerate_models().unwrap();
        assert_eq!(models.to_strings(), vec!["001", "010", "100"]);
    }

    #[test]
    fn biconditional_has_two_models() {
        let f = parse_formula("(<=> (var 0) (var 1))").unwrap();
        assert_eq!(f.enumerate_models().unwrap().to_strings(), vec!["00", "11"]);
    }

    #[test]
    fn enumeration_guard() {
        let f = Formula::new(Expr::True, ENUMERATION_LIMIT + 1).unwrap();
        assert!(matches!(
            f.enumerate_models(),
            Err(FormulaError::TooManyVariables {
                limit: ENUMERATION_LIMIT,
                ..
            })
        ));
    }

    #[test]
    fn construction_validates_indices() {
        assert!(matches!(
            Formula::new(Expr::var(3), 3),
            Err(FormulaError::VarOutOfRange {
                index: 3,
                var_count: 3
            })
        ));
        assert!(matches!(
            Formula::new(Expr::And(vec![]), 1),
            Err(FormulaError::EmptyConnective)
        ));
    }

    #[test]
    fn random_cnf_matches_truth_table_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 8;
            let clauses = (0..rng.random_range(1..12))
                .map(|_| {
                    Expr::or(
                        (0..rng.random_range(1..4))
                            .map(|_| Expr::lit(rng.random_range(0..n), rng.random_bool(0.5)))
                            .collect(),
                    )
                })
                .collect();
            let f = Formula::new(Expr::and(clauses), n).unwrap();
            let table = truth_table(f.expr(), n);
            let expected: Vec<String> = (0..1u64 << n)
                .filter(|&m| table[m as usize])
                .map(|m| Assignment::from_mask(m, n).to_string())
                .collect();
            assert_eq!(f.enumerate_models().unwrap().to_strings(), expected);
        }
    }

    mod props {
        use super::*;
        use crate::testing::arb_formula;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn formula_and_negation_partition(f in arb_formula(8)) {
                let pos = f.enumerate_models().unwrap().count();
                let neg = f.negated().enumerate_models().unwrap().count();
                prop_assert_eq!(pos + neg, 1usize << f.var_count());
            }

            #[test]
            fn eval_agrees_with_membership(f in arb_formula(6)) {
                let models = f.enumerate_models().unwrap();
                for mask in 0..(1u64 << f.var_count()) {
                    let a = Assignment::from_mask(mask, f.var_count());
                    prop_assert_eq!(f.eval(&a).unwrap(), models.contains(&a));
                }
            }

            #[test]
            fn enumeration_matches_truth_table(f in arb_formula(7)) {
                let table = truth_table(f.expr(), f.var_count());
                let count = table.iter().filter(|&&b| b).count();
                prop_assert_eq!(f.enumerate_models().unwrap().count(), count);
            }

            #[test]
            fn print_parse_round_trip(f in arb_formula(6)) {
                let text = f.to_string();
                prop_assert_eq!(parse_formula(&text).unwrap(), f);
            }
        }
    }
}
