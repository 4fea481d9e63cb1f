//! Differentiable queries over smooth, deterministic, decomposable circuits.
//!
//! One upward pass computes per-node log-probabilities under a fully
//! factorized distribution (products at AND, log-sum-exp at OR). A second
//! upward pass computes the entropy of the distribution conditioned on each
//! node: zero at literals, the sum over children at AND, and at OR the
//! entropy of the normalized child weights plus the weighted child entropies.
//! Gradients are exact reverse-mode passes over the same trace.
//!
//! All logarithms are natural; entropies are in nats.

use crate::circuit::{Circuit, Node, NodeId};
use crate::error::QueryError;

pub const DEFAULT_EPS: f64 = 1e-7;

pub type GradVector = Vec<f64>;

/// Per-variable success probabilities, clamped to `[eps, 1 - eps]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    values: Vec<f64>,
    eps: f64,
}

impl ProbVector {
    pub fn new(values: &[f64]) -> Result<Self, QueryError> {
        ProbVector::with_eps(values, DEFAULT_EPS)
    }

    pub fn with_eps(values: &[f64], eps: f64) -> Result<Self, QueryError> {
        let clamped = values
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                if (0.0..=1.0).contains(&value) {
                    Ok(value.clamp(eps, 1.0 - eps))
                } else {
                    Err(QueryError::BadProbability { index, value })
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(ProbVector {
            values: clamped,
            eps,
        })
    }

    pub fn uniform(n: usize) -> Self {
        ProbVector {
            values: vec![0.5; n],
            eps: DEFAULT_EPS,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

fn binary_entropy(p: f64) -> f64 {
    -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Per-node values of both upward passes for one probability vector.
#[derive(Debug, Clone)]
pub struct EvalTrace<'c> {
    circuit: &'c Circuit,
    probs: ProbVector,
    log_values: Vec<f64>,
    entropies: Vec<f64>,
    visits: usize,
}

/// Runs both upward passes. Refuses circuits whose structure cannot be verified.
pub fn evaluate<'c>(c: &'c Circuit, p: &ProbVector) -> Result<EvalTrace<'c>, QueryError> {
    c.validate_for_queries()?;
    if p.len() != c.var_count() {
        return Err(QueryError::LengthMismatch {
            expected: c.var_count(),
            found: p.len(),
        });
    }
    let probs = p.as_slice();
    let mut visits = 0;
    let mut log_values = Vec::with_capacity(c.len());
    for node in c.nodes() {
        visits += 1;
        let v = match node {
            Node::Literal(l) if l.positive => probs[l.var].ln(),
            Node::Literal(l) => (1.0 - probs[l.var]).ln(),
            Node::True => 0.0,
            Node::False => f64::NEG_INFINITY,
            Node::And(cs) => cs.iter().map(|&x| log_values[x]).sum(),
            Node::Or(cs) => log_sum_exp(cs.iter().map(|&x| log_values[x])),
        };
        log_values.push(v);
    }

    let mut entropies = Vec::with_capacity(c.len());
    for (id, node) in c.nodes().iter().enumerate() {
        visits += 1;
        let h = match node {
            Node::And(cs) => cs.iter().map(|&x| entropies[x]).sum(),
            Node::Or(cs) if log_values[id].is_finite() => {
                let mut h = 0.0;
                for &x in cs {
                    let q = (log_values[x] - log_values[id]).exp();
                    if q > 0.0 {
                        h += q * (entropies[x] - q.ln());
                    }
                }
                h
            }
            _ => 0.0,
        };
        entropies.push(h);
    }

    Ok(EvalTrace {
        circuit: c,
        probs: p.clone(),
        log_values,
        entropies,
        visits,
    })
}

impl<'c> EvalTrace<'c> {
    pub fn log_value(&self, id: NodeId) -> f64 {
        self.log_values[id]
    }

    /// Probability mass of the sub-circuit rooted at `id`.
    pub fn value(&self, id: NodeId) -> f64 {
        self.log_values[id].exp()
    }

    /// Entropy (nats) of the distribution conditioned on node `id`; zero when
    /// the node carries no mass.
    pub fn entropy_at(&self, id: NodeId) -> f64 {
        self.entropies[id]
    }

    /// Normalized weights of an OR node's children; empty for other nodes or
    /// zero-mass ORs.
    pub fn or_weights(&self, id: NodeId) -> Vec<f64> {
        match self.circuit.node(id) {
            Node::Or(cs) if self.log_values[id].is_finite() => cs
                .iter()
                .map(|&x| (self.log_values[x] - self.log_values[id]).exp())
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Node visits across both upward passes (twice the node count).
    pub fn visits(&self) -> usize {
        self.visits
    }

    pub fn log_wmc(&self) -> f64 {
        self.log_values[self.circuit.root()]
    }

    pub fn wmc(&self) -> f64 {
        self.log_wmc().exp()
    }

    /// `-ln wmc`; `+inf` when the constraint has no mass.
    pub fn semantic_loss(&self) -> f64 {
        -self.log_wmc()
    }

    fn free_var_entropy(&self) -> f64 {
        let p = self.probs.as_slice();
        self.circuit
            .free_vars()
            .iter()
            .map(|&v| binary_entropy(p[v]))
            .sum()
    }

    /// Entropy of the output distribution conditioned on the constraint.
    pub fn entropy(&self) -> Result<f64, QueryError> {
        if !self.log_wmc().is_finite() {
            return Err(QueryError::EmptySupport);
        }
        Ok(self.entropies[self.circuit.root()] + self.free_var_entropy())
    }

    /// `∂ ln wmc / ∂p`, or `None` when the constraint has no mass.
    fn log_wmc_gradient(&self) -> Option<GradVector> {
        if !self.log_wmc().is_finite() {
            return None;
        }
        let c = self.circuit;
        let p = self.probs.as_slice();
        let mut adj = vec![0.0; c.len()];
        let mut grad = vec![0.0; c.var_count()];
        adj[c.root()] = 1.0;
        for id in (0..c.len()).rev() {
            let g = adj[id];
            if g == 0.0 || !self.log_values[id].is_finite() {
                continue;
            }
            match c.node(id) {
                Node::And(cs) => cs.iter().for_each(|&x| adj[x] += g),
                Node::Or(cs) => {
                    for &x in cs {
                        adj[x] += g * (self.log_values[x] - self.log_values[id]).exp();
                    }
                }
                Node::Literal(l) if l.positive => grad[l.var] += g / p[l.var],
                Node::Literal(l) => grad[l.var] -= g / (1.0 - p[l.var]),
                Node::True | Node::False => {}
            }
        }
        Some(grad)
    }

    /// `∂ wmc / ∂p`; all zeros when the constraint has no mass.
    pub fn wmc_gradient(&self) -> GradVector {
        let w = self.wmc();
        match self.log_wmc_gradient() {
            Some(g) => g.into_iter().map(|x| w * x).collect(),
            None => vec![0.0; self.circuit.var_count()],
        }
    }

    /// `∂ SL / ∂p = -∂ ln wmc / ∂p`.
    pub fn semantic_loss_gradient(&self) -> Result<GradVector, QueryError> {
        self.log_wmc_gradient()
            .map(|g| g.into_iter().map(|x| -x).collect())
            .ok_or(QueryError::EmptySupport)
    }

    /// `∂ H(Y | α) / ∂p` by reverse-mode through both upward passes.
    pub fn entropy_gradient(&self) -> Result<GradVector, QueryError> {
        if !self.log_wmc().is_finite() {
            return Err(QueryError::EmptySupport);
        }
        let c = self.circuit;
        let p = self.probs.as_slice();
        let lv = &self.log_values;
        let ent = &self.entropies;
        // adjoints of each node's entropy and log-value
        let mut h_adj = vec![0.0; c.len()];
        let mut l_adj = vec![0.0; c.len()];
        let mut grad = vec![0.0; c.var_count()];
        h_adj[c.root()] = 1.0;
        for id in (0..c.len()).rev() {
            let (hb, lb) = (h_adj[id], l_adj[id]);
            if (hb == 0.0 && lb == 0.0) || !lv[id].is_finite() {
                continue;
            }
            match c.node(id) {
                Node::And(cs) => {
                    for &x in cs {
                        h_adj[x] += hb;
                        l_adj[x] += lb;
                    }
                }
                Node::Or(cs) => {
                    for &x in cs {
                        let log_q = lv[x] - lv[id];
                        let q = log_q.exp();
                        if q == 0.0 {
                            continue;
                        }
                        h_adj[x] += hb * q;
                        l_adj[x] += q * (lb + hb * (ent[x] - log_q - ent[id]));
                    }
                }
                Node::Literal(l) if l.positive => grad[l.var] += lb / p[l.var],
                Node::Literal(l) => grad[l.var] -= lb / (1.0 - p[l.var]),
                Node::True | Node::False => {}
            }
        }
        for v in c.free_vars() {
            grad[v] += ((1.0 - p[v]) / p[v]).ln();
        }
        Ok(grad)
    }
}

pub fn wmc(c: &Circuit, p: &ProbVector) -> Result<f64, QueryError> {
    Ok(evaluate(c, p)?.wmc())
}

pub fn semantic_loss(c: &Circuit, p: &ProbVector) -> Result<f64, QueryError> {
    Ok(evaluate(c, p)?.semantic_loss())
}

pub fn wmc_gradient(c: &Circuit, p: &ProbVector) -> Result<GradVector, QueryError> {
    Ok(evaluate(c, p)?.wmc_gradient())
}

pub fn semantic_loss_gradient(c: &Circuit, p: &ProbVector) -> Result<GradVector, QueryError> {
    evaluate(c, p)?.semantic_loss_gradient()
}

pub fn nesy_entropy(c: &Circuit, p: &ProbVector) -> Result<f64, QueryError> {
    evaluate(c, p)?.entropy()
}

pub fn entropy_gradient(c: &Circuit, p: &ProbVector) -> Result<GradVector, QueryError> {
    evaluate(c, p)?.entropy_gradient()
}

/// Entropy of the unconstrained fully factorized distribution.
pub fn full_entropy(p: &ProbVector) -> f64 {
    p.as_slice().iter().map(|&x| binary_entropy(x)).sum()
}

pub fn full_entropy_gradient(p: &ProbVector) -> GradVector {
    p.as_slice().iter().map(|&x| ((1.0 - x) / x).ln()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Lit, Node};
    use crate::compiler::{compile, compile_with, CompileOptions, VarOrder};
    use crate::formula::{Assignment, Formula};
    use crate::parse::parse_formula;
    use crate::testing::implication_circuit;

    const IMPL_P: [f64; 3] = [0.3, 0.5, 0.2];

    fn probs(v: &[f64]) -> ProbVector {
        ProbVector::new(v).unwrap()
    }

    /// Brute-force oracle over enumerated models: (wmc, conditional entropy).
    fn oracle(f: &Formula, p: &[f64]) -> (f64, f64) {
        let weights: Vec<f64> = f
            .enumerate_models()
            .unwrap()
            .iter()
            .map(|m| {
                (0..f.var_count())
                    .map(|i| if m.get(i) { p[i] } else { 1.0 - p[i] })
                    .product()
            })
            .collect();
        let w: f64 = weights.iter().sum();
        let h = -weights.iter().map(|&x| (x / w) * (x / w).ln()).sum::<f64>();
        (w, h)
    }

    fn central_difference<F: Fn(&[f64]) -> f64>(f: F, p: &[f64], h: f64) -> Vec<f64> {
        (0..p.len())
            .map(|i| {
                let mut up = p.to_vec();
                let mut down = p.to_vec();
                up[i] += h;
                down[i] -= h;
                (f(&up) - f(&down)) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn implication_upward_values() {
        let c = implication_circuit();
        let t = evaluate(&c, &probs(&IMPL_P)).unwrap();
        assert!((t.wmc() - 0.88).abs() < 1e-12);
        // edges into the root OR, then into the ¬C-branch OR
        assert!((t.value(12) - 0.2).abs() < 1e-12);
        assert!((t.value(13) - 0.68).abs() < 1e-12);
        assert!((t.value(11) - 0.85).abs() < 1e-12);
        assert!((t.value(9) - 0.15).abs() < 1e-12);
        assert!((t.value(10) - 0.7).abs() < 1e-12);
        assert!((t.value(8) - 1.0).abs() < 1e-12);
        let w = t.or_weights(14);
        assert!((w[0] - 0.2 / 0.88).abs() < 1e-12 && (w[0] + w[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn implication_entropies() {
        let c = implication_circuit();
        let t = evaluate(&c, &probs(&IMPL_P)).unwrap();
        assert!((t.entropy().unwrap() - 1.633_510_130_545_814_8).abs() < 1e-12);
        assert!((t.entropy_at(6) - 0.610_864_302_054_893_5).abs() < 1e-12);
        assert!((t.entropy_at(7) - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((t.entropy_at(12) - 1.304_011_482_614_838_8).abs() < 1e-12);
        assert!((t.entropy_at(11) - 1.036_826_346_833_938_7).abs() < 1e-12);
        assert_eq!(t.entropy_at(9), 0.0);
        assert_eq!(t.entropy_at(4), 0.0);
        assert_eq!(t.visits(), 2 * c.len());
    }

    #[test]
    fn implication_semantic_loss() {
        let c = implication_circuit();
        let sl = semantic_loss(&c, &probs(&IMPL_P)).unwrap();
        assert!((sl - 0.127_833_371_509_885_0).abs() < 1e-9);
    }

    #[test]
    fn implication_wmc_gradient_closed_form() {
        // wmc = 1 - pA pB (1 - pC)
        let c = implication_circuit();
        let g = wmc_gradient(&c, &probs(&IMPL_P)).unwrap();
        let [a, b, cc] = IMPL_P;
        let expected = [-b * (1.0 - cc), -a * (1.0 - cc), a * b];
        for (x, y) in g.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12, "{g:?}");
        }
        assert!((g[0] + 0.4).abs() < 1e-12);
    }

    #[test]
    fn implication_entropy_gradient_matches_finite_differences() {
        let c = implication_circuit();
        let g = entropy_gradient(&c, &probs(&IMPL_P)).unwrap();
        let f = parse_formula("(=> (and v0 v1) v2)").unwrap();
        let fd = central_difference(|p| oracle(&f, p).1, &IMPL_P, 1e-5);
        for (x, y) in g.iter().zip(&fd) {
            assert!((x - y).abs() <= 1e-4 * y.abs().max(1e-3), "{g:?} vs {fd:?}");
        }
    }

    #[test]
    fn implication_compiled_with_c_first_gives_reference_values() {
        let f = parse_formula("(=> (and v0 v1) v2)").unwrap();
        let opts = CompileOptions::with_order(VarOrder::new(vec![2, 0, 1]).unwrap());
        let (c, _) = compile_with(&f, &opts).unwrap();
        let t = evaluate(&c, &probs(&IMPL_P)).unwrap();
        // reference edge values sit on edges into gates, not literals
        let mut or_edges: Vec<f64> = Vec::new();
        for node in c.nodes() {
            for &x in node.children() {
                if !matches!(c.node(x), Node::Literal(_)) {
                    or_edges.push(t.value(x));
                }
            }
        }
        for target in [0.2, 0.68, 0.85, 0.15, 0.7] {
            assert!(
                or_edges.iter().any(|v| (v - target).abs() < 1e-9),
                "{target} in {or_edges:?}"
            );
        }
        let hs: Vec<f64> = (0..c.len()).map(|i| t.entropy_at(i)).collect();
        for target in [0.61, 0.69, 1.30, 1.04] {
            assert!(
                hs.iter().any(|h| (h - target).abs() < 5e-3),
                "{target} in {hs:?}"
            );
        }
    }

    #[test]
    fn constants_and_literals() {
        let t = Circuit::constant(true, 2);
        let p = probs(&[0.3, 0.9]);
        assert!((wmc(&t, &p).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(semantic_loss(&t, &p).unwrap(), 0.0);
        assert!((nesy_entropy(&t, &p).unwrap() - full_entropy(&p)).abs() < 1e-12);
        assert_eq!(wmc_gradient(&t, &p).unwrap(), vec![0.0, 0.0]);

        let f = Circuit::constant(false, 2);
        assert_eq!(wmc(&f, &p).unwrap(), 0.0);
        assert_eq!(semantic_loss(&f, &p).unwrap(), f64::INFINITY);
        assert_eq!(nesy_entropy(&f, &p), Err(QueryError::EmptySupport));
        assert_eq!(entropy_gradient(&f, &p), Err(QueryError::EmptySupport));
        assert_eq!(wmc_gradient(&f, &p).unwrap(), vec![0.0, 0.0]);

        let lit = Circuit::from_nodes(vec![Node::Literal(Lit::pos(0))], 1).unwrap();
        let p1 = probs(&[0.37]);
        assert_eq!(wmc_gradient(&lit, &p1).unwrap(), vec![1.0]);
        assert_eq!(nesy_entropy(&lit, &p1).unwrap(), 0.0);
        assert_eq!(entropy_gradient(&lit, &p1).unwrap(), vec![0.0]);
    }

    #[test]
    fn tautology_entropy_gradient_is_logit() {
        let t = Circuit::constant(true, 1);
        let g = entropy_gradient(&t, &probs(&[0.5])).unwrap();
        assert!(g[0].abs() < 1e-15);
        let g = entropy_gradient(&t, &probs(&[0.2])).unwrap();
        assert!((g[0] - (0.8f64 / 0.2).ln()).abs() < 1e-12);
        let (smoothed, _) = compile(&Formula::new(crate::Expr::True, 1).unwrap()).unwrap();
        let g2 = entropy_gradient(&smoothed, &probs(&[0.2])).unwrap();
        assert!((g2[0] - g[0]).abs() < 1e-12);
    }

    #[test]
    fn exactly_one_examples() {
        let two = parse_formula("(and (or v0 v1) (not (and v0 v1)))").unwrap();
        let (c, _) = compile(&two).unwrap();
        assert!((wmc(&c, &probs(&[0.5, 0.5])).unwrap() - 0.5).abs() < 1e-15);
        let three = parse_formula(
            "(and (or v0 v1 v2) (not (and v0 v1)) (not (and v0 v2)) (not (and v1 v2)))",
        )
        .unwrap();
        let (c, _) = compile(&three).unwrap();
        let h = nesy_entropy(&c, &ProbVector::uniform(3)).unwrap();
        assert!((h - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn full_entropy_examples() {
        let n = 5;
        assert!(
            (full_entropy(&ProbVector::uniform(n)) - n as f64 * std::f64::consts::LN_2).abs()
                < 1e-12
        );
        assert!(full_entropy(&probs(&[0.0, 1.0])) < 1e-5);
        assert!((full_entropy(&probs(&IMPL_P)) - 1.804_413_906_153_026_7).abs() < 1e-12);
    }

    #[test]
    fn probability_vector_validation() {
        assert!(matches!(
            ProbVector::new(&[0.2, 1.5]),
            Err(QueryError::BadProbability { index: 1, .. })
        ));
        assert!(ProbVector::new(&[f64::NAN]).is_err());
        let p = probs(&[0.0, 1.0, 0.4]);
        assert_eq!(p.as_slice(), &[DEFAULT_EPS, 1.0 - DEFAULT_EPS, 0.4]);
        let c = implication_circuit();
        assert!(matches!(
            wmc(&c, &probs(&[0.5, 0.5])),
            Err(QueryError::LengthMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn refuses_unverified_structure() {
        let c =
            Circuit::from_nodes(vec![Node::Literal(Lit::pos(0)), Node::Or(vec![0, 0])], 1).unwrap();
        assert!(matches!(
            wmc(&c, &probs(&[0.5])),
            Err(QueryError::Circuit(_))
        ));
    }

    #[test]
    fn long_conjunction_does_not_underflow() {
        let n = 2000;
        let lits: Vec<_> = (0..n).map(|i| Node::Literal(Lit::pos(i))).collect();
        let mut nodes = lits;
        nodes.push(Node::And((0..n).collect()));
        let c = Circuit::from_nodes(nodes, n).unwrap();
        let p = ProbVector::new(&vec![0.5; n]).unwrap();
        let sl = semantic_loss(&c, &p).unwrap();
        assert!((sl - n as f64 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(
            evaluate(&c, &p).unwrap().semantic_loss_gradient().unwrap(),
            vec![-2.0; n]
        );
    }

    mod props {
        use super::*;
        use crate::testing::arb_formula;
        use proptest::prelude::*;

        fn arb_case(max_vars: usize) -> impl Strategy<Value = (Formula, Vec<f64>)> {
            arb_formula(max_vars).prop_flat_map(|f| {
                let n = f.var_count();
                (Just(f), prop::collection::vec(0.02f64..0.98, n))
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn queries_match_enumeration((f, p) in arb_case(10)) {
                let (c, _) = compile(&f).unwrap();
                let pv = ProbVector::new(&p).unwrap();
                let t = evaluate(&c, &pv).unwrap();
                let (w, h) = oracle(&f, &p);
                prop_assert!((t.wmc() - w).abs() <= 1e-10);
                prop_assert!(t.wmc() >= 0.0 && t.wmc() <= 1.0 + 1e-12);
                if w > 0.0 {
                    prop_assert!((t.semantic_loss() + w.ln()).abs() <= 1e-8);
                    let ent = t.entropy().unwrap();
                    prop_assert!((ent - h).abs() <= 1e-8);
                    let count = f.enumerate_models().unwrap().count() as f64;
                    prop_assert!(ent >= -1e-12 && ent <= count.ln() + 1e-9);
                } else {
                    prop_assert_eq!(t.semantic_loss(), f64::INFINITY);
                    prop_assert_eq!(t.entropy(), Err(QueryError::EmptySupport));
                }
                prop_assert_eq!(t.visits(), 2 * c.len());
            }

            #[test]
            fn gradients_match_finite_differences((f, p) in arb_case(8)) {
                let (c, _) = compile(&f).unwrap();
                let t = evaluate(&c, &ProbVector::new(&p).unwrap()).unwrap();
                prop_assume!(t.wmc() > 1e-3);
                let fd_w = central_difference(|q| oracle(&f, q).0, &p, 1e-5);
                let fd_h = central_difference(|q| oracle(&f, q).1, &p, 1e-5);
                for (x, y) in t.wmc_gradient().iter().zip(&fd_w) {
                    prop_assert!((x - y).abs() <= 1e-4 * y.abs().max(1e-2), "wmc {} vs {}", x, y);
                }
                for (x, y) in t.entropy_gradient().unwrap().iter().zip(&fd_h) {
                    prop_assert!((x - y).abs() <= 1e-4 * y.abs().max(1e-2), "entropy {} vs {}", x, y);
                }
            }

            #[test]
            fn uniform_entropy_is_log_model_count(f in arb_formula(10)) {
                let (c, _) = compile(&f).unwrap();
                let count = f.enumerate_models().unwrap().count();
                prop_assume!(count > 0);
                let h = nesy_entropy(&c, &ProbVector::uniform(f.var_count())).unwrap();
                prop_assert!((h - (count as f64).ln()).abs() <= 1e-9);
            }

            #[test]
            fn semantic_loss_falls_as_mass_moves_to_a_model((f, p) in arb_case(8)) {
                let models = f.enumerate_models().unwrap();
                prop_assume!(!models.is_empty());
                let (c, _) = compile(&f).unwrap();
                let target: &Assignment = &models.as_slice()[0];
                let toward: Vec<f64> = p
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| 0.5 * x + if target.get(i) { 0.5 } else { 0.0 })
                    .collect();
                let t0 = evaluate(&c, &ProbVector::new(&p).unwrap()).unwrap();
                let t1 = evaluate(&c, &ProbVector::new(&toward).unwrap()).unwrap();
                if t1.wmc() > t0.wmc() {
                    prop_assert!(t1.semantic_loss() < t0.semantic_loss());
                }
            }
        }
    }
}
