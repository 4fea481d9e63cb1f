//! Top-down compilation of formulas into smooth, deterministic, decomposable
//! circuits.
//!
//! The residual formula is kept as a set of hash-consed negation-normal-form
//! conjuncts. Each step propagates unit literals, looks the residual up in a
//! cache keyed by its canonical conjunct list, splits variable-disjoint
//! components into AND children, and otherwise case-splits on the first
//! variable of the static order, emitting a decision node
//! `(¬Y ∧ low) ∨ (Y ∧ high)`. A smoothing pass finishes the circuit.

use std::collections::HashMap;
use std::time::Instant;

use crate::circuit::{smooth, Circuit, CircuitBuilder, Lit, NodeId};
use crate::error::CompileError;
use crate::formula::{Expr, Formula};
use crate::varset::VarSet;

pub const DEFAULT_MAX_NODES: usize = 5_000_000;

/// A permutation of `0..var_count` giving the case-split priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarOrder(Vec<usize>);

impl VarOrder {
    pub fn new(order: Vec<usize>) -> Result<Self, CompileError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(CompileError::BadOrder { var_count: n });
            }
        }
        Ok(VarOrder(order))
    }

    pub fn identity(n: usize) -> Self {
        VarOrder((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Most frequently occurring variables first; ties by ascending index.
pub fn default_order(f: &Formula) -> VarOrder {
    let occ = f.occurrences();
    let mut order: Vec<usize> = (0..f.var_count()).collect();
    order.sort_by(|&a, &b| occ[b].cmp(&occ[a]).then(a.cmp(&b)));
    VarOrder(order)
}

#[derive(Debug, Clone)]
pub struct CompileOptions {
    pub order: Option<VarOrder>,
    pub max_nodes: usize,
    pub cache: bool,
    /// Run the final smoothing pass. Without it the output is a
    /// deterministic, decomposable circuit that may not be smooth.
    pub smooth: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            order: None,
            max_nodes: DEFAULT_MAX_NODES,
            cache: true,
            smooth: true,
        }
    }
}

impl CompileOptions {
    pub fn with_order(order: VarOrder) -> Self {
        CompileOptions {
            order: Some(order),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompileStats {
    pub nodes: usize,
    pub edges: usize,
    pub cache_hits: usize,
    pub peak_cache: usize,
    pub seconds: f64,
}

/// Compiles with default options.
pub fn compile(f: &Formula) -> Result<(Circuit, CompileStats), CompileError> {
    compile_with(f, &CompileOptions::default())
}

pub fn compile_with(
    f: &Formula,
    opts: &CompileOptions,
) -> Result<(Circuit, CompileStats), CompileError> {
    let start = Instant::now();
    let n = f.var_count();
    let order = match &opts.order {
        Some(o) if o.len() != n => return Err(CompileError::BadOrder { var_count: n }),
        Some(o) => o.clone(),
        None => default_order(f),
    };
    let cap = CompileError::ResourceCap {
        cap: opts.max_nodes,
    };

    let mut terms = Terms::new(n);
    let top = terms.from_expr(f.expr(), true);
    let mut state = Compiler {
        terms,
        builder: CircuitBuilder::with_cap(n, opts.max_nodes),
        order: order.0,
        cache: HashMap::new(),
        use_cache: opts.cache,
        cache_hits: 0,
    };
    let conj = state.terms.conjuncts(top);
    let root = match conj {
        None => state.builder.constant(false),
        Some(conj) => state.compile(conj),
    }
    .map_err(|_| cap.clone())?;

    let peak_cache = state.cache.len();
    let cache_hits = state.cache_hits;
    let raw = state.builder.finish(root);
    let circuit = if opts.smooth { smooth(&raw) } else { raw };
    if circuit.len() > opts.max_nodes {
        return Err(cap);
    }
    let stats = CompileStats {
        nodes: circuit.len(),
        edges: circuit.edge_count(),
        cache_hits,
        peak_cache,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok((circuit, stats))
}

type TermId = u32;
const FALSE: TermId = 0;
const TRUE: TermId = 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Term {
    False,
    True,
    Lit(Lit),
    And(Vec<TermId>),
    Or(Vec<TermId>),
}

/// Hash-consed NNF terms with sorted, deduplicated children.
struct Terms {
    nodes: Vec<Term>,
    vars: Vec<VarSet>,
    unique: HashMap<Term, TermId>,
    var_count: usize,
}

impl Terms {
    fn new(var_count: usize) -> Self {
        let mut t = Terms {
            nodes: Vec::new(),
            vars: Vec::new(),
            unique: HashMap::new(),
            var_count,
        };
        t.intern(Term::False);
        t.intern(Term::True);
        t
    }

    fn intern(&mut self, term: Term) -> TermId {
        if let Some(&id) = self.unique.get(&term) {
            return id;
        }
        let mut vars = VarSet::empty(self.var_count);
        match &term {
            Term::Lit(l) => vars.insert(l.var),
            Term::And(cs) | Term::Or(cs) => {
                for &c in cs {
                    vars.union_with(&self.vars[c as usize]);
                }
            }
            _ => {}
        }
        let id = self.nodes.len() as TermId;
        self.nodes.push(term.clone());
        self.vars.push(vars);
        self.unique.insert(term, id);
        id
    }

    fn lit(&mut self, l: Lit) -> TermId {
        self.intern(Term::Lit(l))
    }

    fn as_lit(&self, t: TermId) -> Option<Lit> {
        match self.nodes[t as usize] {
            Term::Lit(l) => Some(l),
            _ => None,
        }
    }

    /// `and = true` builds a conjunction, otherwise a disjunction.
    fn junction(&mut self, and: bool, children: Vec<TermId>) -> TermId {
        let (unit, zero) = if and { (TRUE, FALSE) } else { (FALSE, TRUE) };
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            if c == zero {
                return zero;
            }
            if c == unit {
                continue;
            }
            match &self.nodes[c as usize] {
                Term::And(gs) if and => flat.extend_from_slice(gs),
                Term::Or(gs) if !and => flat.extend_from_slice(gs),
                _ => flat.push(c),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        // two distinct literal terms on one variable are complementary
        let mut lit_vars: Vec<usize> = flat
            .iter()
            .filter_map(|&c| self.as_lit(c))
            .map(|l| l.var)
            .collect();
        lit_vars.sort_unstable();
        if lit_vars.windows(2).any(|w| w[0] == w[1]) {
            return zero;
        }
        match flat.len() {
            0 => unit,
            1 => flat[0],
            _ => self.intern(if and { Term::And(flat) } else { Term::Or(flat) }),
        }
    }

    /// Negation-normal form of `e` (or of `¬e` when `positive` is false).
    fn from_expr(&mut self, e: &Expr, positive: bool) -> TermId {
        match e {
            Expr::True => {
                if positive {
                    TRUE
                } else {
                    FALSE
                }
            }
            Expr::False => {
                if positive {
                    FALSE
                } else {
                    TRUE
                }
            }
            Expr::Var(v) => self.lit(Lit::new(v.0, positive)),
            Expr::Not(a) => self.from_expr(a, !positive),
            Expr::And(cs) | Expr::Or(cs) => {
                let is_and = matches!(e, Expr::And(_)) == positive;
                let kids = cs.iter().map(|c| self.from_expr(c, positive)).collect();
                self.junction(is_and, kids)
            }
            Expr::Implies(a, b) => {
                // a ⇒ b  ≡  ¬a ∨ b
                let na = self.from_expr(a, !positive);
                let b = self.from_expr(b, positive);
                self.junction(!positive, vec![na, b])
            }
            Expr::Iff(a, b) => {
                let pa = self.from_expr(a, true);
                let na = self.from_expr(a, false);
                let pb = self.from_expr(b, positive);
                let nb = self.from_expr(b, !positive);
                let both = self.junction(true, vec![pa, pb]);
                let neither = self.junction(true, vec![na, nb]);
                self.junction(false, vec![both, neither])
            }
        }
    }

    /// Top-level conjuncts of `t`, or `None` when `t` is false.
    fn conjuncts(&self, t: TermId) -> Option<Vec<TermId>> {
        match &self.nodes[t as usize] {
            Term::False => None,
            Term::True => Some(Vec::new()),
            Term::And(cs) => Some(cs.clone()),
            _ => Some(vec![t]),
        }
    }

    /// Substitutes the partial assignment (`assigned`, `values`) into `t`.
    fn condition(
        &mut self,
        t: TermId,
        assigned: &VarSet,
        values: &[bool],
        memo: &mut HashMap<TermId, TermId>,
    ) -> TermId {
        if self.vars[t as usize].is_disjoint(assigned) {
            return t;
        }
        if let Some(&r) = memo.get(&t) {
            return r;
        }
        let r = match self.nodes[t as usize].clone() {
            Term::Lit(l) => {
                if l.holds(values[l.var]) {
                    TRUE
                } else {
                    FALSE
                }
            }
            Term::And(cs) | Term::Or(cs) => {
                let is_and = matches!(self.nodes[t as usize], Term::And(_));
                let kids = cs
                    .iter()
                    .map(|&c| self.condition(c, assigned, values, memo))
                    .collect();
                self.junction(is_and, kids)
            }
            Term::True | Term::False => t,
        };
        memo.insert(t, r);
        r
    }

    /// Conditions every conjunct and re-flattens; `None` when the result is false.
    fn condition_all(&mut self, conj: &[TermId], lits: &[Lit]) -> Option<Vec<TermId>> {
        let mut assigned = VarSet::empty(self.var_count);
        let mut values = vec![false; self.var_count];
        for l in lits {
            assigned.insert(l.var);
            values[l.var] = l.positive;
        }
        let mut memo = HashMap::new();
        let kids: Vec<TermId> = conj
            .iter()
            .map(|&c| self.condition(c, &assigned, &values, &mut memo))
            .collect();
        let t = self.junction(true, kids);
        self.conjuncts(t)
    }
}

struct Compiler {
    terms: Terms,
    builder: CircuitBuilder,
    order: Vec<usize>,
    cache: HashMap<Vec<TermId>, NodeId>,
    use_cache: bool,
    cache_hits: usize,
}

type Step<T> = Result<T, crate::circuit::NodeCapExceeded>;

impl Compiler {
    /// Compiles a sorted conjunct list.
    fn compile(&mut self, mut conj: Vec<TermId>) -> Step<NodeId> {
        let mut fixed: Vec<Lit> = Vec::new();
        loop {
            let units: Vec<Lit> = conj.iter().filter_map(|&c| self.terms.as_lit(c)).collect();
            if units.is_empty() {
                break;
            }
            // complementary units were already collapsed to false by `junction`
            match self.terms.condition_all(&conj, &units) {
                None => return self.builder.constant(false),
                Some(next) => conj = next,
            }
            fixed.extend(units);
        }
        let mut parts = Vec::with_capacity(fixed.len() + 1);
        for l in fixed {
            parts.push(self.builder.literal(l)?);
        }
        if !conj.is_empty() {
            parts.push(self.residual(conj)?);
        }
        self.builder.and(parts)
    }

    /// Compiles a non-empty, unit-free residual.
    fn residual(&mut self, conj: Vec<TermId>) -> Step<NodeId> {
        if self.use_cache {
            if let Some(&hit) = self.cache.get(&conj) {
                self.cache_hits += 1;
                return Ok(hit);
            }
        }
        let components = self.components(&conj);
        let node = if components.len() > 1 {
            let mut parts = Vec::with_capacity(components.len());
            for comp in components {
                parts.push(self.residual(comp)?);
            }
            self.builder.and(parts)?
        } else {
            self.branch(&conj)?
        };
        if self.use_cache {
            self.cache.insert(conj, node);
        }
        Ok(node)
    }

    fn branch(&mut self, conj: &[TermId]) -> Step<NodeId> {
        let mut mentioned = VarSet::empty(self.terms.var_count);
        for &c in conj {
            mentioned.union_with(&self.terms.vars[c as usize]);
        }
        let var = *self
            .order
            .iter()
            .find(|&&v| mentioned.contains(v))
            .expect("a non-empty residual mentions a variable");

        let mut arms = Vec::with_capacity(2);
        for positive in [false, true] {
            let lit = Lit::new(var, positive);
            let sub = match self.terms.condition_all(conj, &[lit]) {
                None => continue,
                Some(sub) => self.compile(sub)?,
            };
            let guard = self.builder.literal(lit)?;
            arms.push(self.builder.and(vec![guard, sub])?);
        }
        self.builder.or(arms)
    }

    /// Splits conjuncts into variable-disjoint groups, in first-appearance order.
    fn components(&self, conj: &[TermId]) -> Vec<Vec<TermId>> {
        let n = self.terms.var_count;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &c in conj {
            let mut vars = self.terms.vars[c as usize].iter();
            if let Some(first) = vars.next() {
                let r = find(&mut parent, first);
                for v in vars {
                    let rv = find(&mut parent, v);
                    parent[rv] = r;
                }
            }
        }
        let mut groups: Vec<(usize, Vec<TermId>)> = Vec::new();
        for &c in conj {
            let first = self.terms.vars[c as usize]
                .iter()
                .next()
                .expect("residual conjuncts are not constants");
            let r = find(&mut parent, first);
            match groups.iter_mut().find(|g| g.0 == r) {
                Some(g) => g.1.push(c),
                None => groups.push((r, vec![c])),
            }
        }
        groups.into_iter().map(|g| g.1).collect()
    }
}
