//! Compiled circuits: an immutable, topologically numbered DAG of literal,
//! AND and OR nodes, with per-node variable scopes cached at construction.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::error::CircuitError;
use crate::formula::{Assignment, ModelSet};
use crate::varset::VarSet;

/// Variable-count limit for brute-force determinism checks and model listing.
pub const BRUTE_FORCE_LIMIT: usize = 20;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn new(var: usize, positive: bool) -> Self {
        Lit { var, positive }
    }

    pub fn pos(var: usize) -> Self {
        Lit::new(var, true)
    }

    pub fn neg(var: usize) -> Self {
        Lit::new(var, false)
    }

    pub fn negated(self) -> Self {
        Lit::new(self.var, !self.positive)
    }

    pub fn holds(self, value: bool) -> bool {
        value == self.positive
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Literal(Lit),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    True,
    False,
}

impl Node {
    pub fn children(&self) -> &[NodeId] {
        match self {
            Node::And(cs) | Node::Or(cs) => cs,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeterminismMode {
    /// Do not examine determinism.
    Skip,
    /// Linear-time certificate: every OR's children are pairwise separated by
    /// opposite literals. A failed certificate is inconclusive.
    Guards,
    /// Exhaustive check over all assignments (at most [`BRUTE_FORCE_LIMIT`] variables).
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Determinism {
    Holds,
    Violated,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub node: NodeId,
    pub property: &'static str,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub decomposable: bool,
    pub smooth: bool,
    pub deterministic: Determinism,
    /// First violation found, present iff some property is false.
    pub witness: Option<Witness>,
}

impl StructureReport {
    pub fn all_hold(&self) -> bool {
        self.decomposable && self.smooth && self.deterministic == Determinism::Holds
    }
}

#[derive(Debug, Clone)]
pub struct Circuit {
    nodes: Vec<Node>,
    scopes: Vec<VarSet>,
    var_count: usize,
    queryable: OnceLock<Result<(), CircuitError>>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.var_count == other.var_count && self.nodes == other.nodes
    }
}

impl Circuit {
    /// Builds a circuit from a raw node table; the last node is the root.
    ///
    /// `And([])` is read as true and `Or([])` as false.
    pub fn from_nodes(nodes: Vec<Node>, var_count: usize) -> Result<Self, CircuitError> {
        if nodes.is_empty() {
            return Err(CircuitError::Empty);
        }
        let mut scopes: Vec<VarSet> = Vec::with_capacity(nodes.len());
        let mut normalized = Vec::with_capacity(nodes.len());
        for (id, node) in nodes.into_iter().enumerate() {
            let node = match node {
                Node::And(cs) if cs.is_empty() => Node::True,
                Node::Or(cs) if cs.is_empty() => Node::False,
                n => n,
            };
            let mut scope = VarSet::empty(var_count);
            match &node {
                Node::Literal(l) => {
                    if l.var >= var_count {
                        return Err(CircuitError::VarOutOfRange {
                            var: l.var,
                            var_count,
                        });
                    }
                    scope.insert(l.var);
                }
                Node::And(cs) | Node::Or(cs) => {
                    for &c in cs {
                        if c >= id {
                            return Err(CircuitError::ForwardReference { node: id, child: c });
                        }
                        scope.union_with(&scopes[c]);
                    }
                }
                Node::True | Node::False => {}
            }
            scopes.push(scope);
            normalized.push(node);
        }
        Ok(Circuit {
            nodes: normalized,
            scopes,
            var_count,
            queryable: OnceLock::new(),
        })
    }

    /// Single constant circuit over `var_count` variables.
    pub fn constant(value: bool, var_count: usize) -> Self {
        let node = if value { Node::True } else { Node::False };
        Circuit::from_nodes(vec![node], var_count).expect("constant circuit is well formed")
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children().len()).sum()
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn scope(&self, id: NodeId) -> &VarSet {
        &self.scopes[id]
    }

    /// Variables the root does not mention; they are unconstrained.
    pub fn free_vars(&self) -> Vec<usize> {
        let root = &self.scopes[self.root()];
        (0..self.var_count).filter(|&v| !root.contains(v)).collect()
    }

    /// Decision variable of a two-child OR whose children carry opposite
    /// literals of it as direct conjuncts.
    pub fn decision_var(&self, id: NodeId) -> Option<usize> {
        match &self.nodes[id] {
            Node::Or(cs) if cs.len() == 2 => self.separating_var(cs[0], cs[1]),
            _ => None,
        }
    }

    fn is_false(&self, id: NodeId) -> bool {
        matches!(self.nodes[id], Node::False)
    }

    fn direct_lits(&self, id: NodeId) -> Vec<Lit> {
        match &self.nodes[id] {
            Node::Literal(l) => vec![*l],
            Node::And(cs) => cs
                .iter()
                .filter_map(|&c| match self.nodes[c] {
                    Node::Literal(l) => Some(l),
                    _ => None,
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    fn separating_var(&self, a: NodeId, b: NodeId) -> Option<usize> {
        let la = self.direct_lits(a);
        let lb = self.direct_lits(b);
        la.iter().find(|l| lb.contains(&l.negated())).map(|l| l.var)
    }

    /// Whether OR node `id` is certified deterministic by its literal guards.
    pub fn is_guarded(&self, id: NodeId) -> bool {
        match &self.nodes[id] {
            Node::Or(cs) => cs.iter().enumerate().all(|(i, &a)| {
                cs[i + 1..].iter().all(|&b| {
                    self.is_false(a) || self.is_false(b) || self.separating_var(a, b).is_some()
                })
            }),
            _ => true,
        }
    }

    pub fn check_structure(&self, mode: DeterminismMode) -> StructureReport {
        let mut witness: Option<Witness> = None;
        let mut decomposable = true;
        let mut smooth = true;
        for (id, node) in self.nodes.iter().enumerate() {
            match node {
                Node::And(cs) => {
                    if decomposable {
                        if let Some(desc) = self.overlap(cs) {
                            decomposable = false;
                            witness.get_or_insert(Witness {
                                node: id,
                                property: "decomposable",
                                description: desc,
                            });
                        }
                    }
                }
                Node::Or(cs) => {
                    if smooth {
                        let scope = &self.scopes[id];
                        if let Some(&c) = cs.iter().find(|&&c| &self.scopes[c] != scope) {
                            smooth = false;
                            witness.get_or_insert(Witness {
                                node: id,
                                property: "smooth",
                                description: format!(
                                    "child {c} mentions {} of {} variables",
                                    self.scopes[c].len(),
                                    scope.len()
                                ),
                            });
                        }
                    }
                }
                _ => {}
            }
        }

        let deterministic = match mode {
            DeterminismMode::Skip => Determinism::Unchecked,
            DeterminismMode::Guards => {
                if (0..self.len()).all(|id| self.is_guarded(id)) {
                    Determinism::Holds
                } else {
                    Determinism::Unchecked
                }
            }
            DeterminismMode::BruteForce if self.var_count > BRUTE_FORCE_LIMIT => {
                Determinism::Unchecked
            }
            DeterminismMode::BruteForce => match self.brute_force_nondeterminism() {
                None => Determinism::Holds,
                Some((node, a, b)) => {
                    witness.get_or_insert(Witness {
                        node,
                        property: "deterministic",
                        description: format!("children {a} and {b} are satisfied together"),
                    });
                    Determinism::Violated
                }
            },
        };

        StructureReport {
            decomposable,
            smooth,
            deterministic,
            witness,
        }
    }

    fn overlap(&self, cs: &[NodeId]) -> Option<String> {
        let mut seen = VarSet::empty(self.var_count);
        for &c in cs {
            if let Some(v) = seen.first_common(&self.scopes[c]) {
                return Some(format!(
                    "child {c} shares variable {v} with an earlier sibling"
                ));
            }
            seen.union_with(&self.scopes[c]);
        }
        None
    }

    /// Lowest OR node with two children satisfiable together.
    fn brute_force_nondeterminism(&self) -> Option<(NodeId, NodeId, NodeId)> {
        let mut first: Option<(NodeId, NodeId, NodeId)> = None;
        for_each_block(self, |words, _| {
            for (id, node) in self.nodes.iter().enumerate() {
                if first.is_some_and(|f| f.0 <= id) {
                    break;
                }
                if let Node::Or(cs) = node {
                    for (i, &a) in cs.iter().enumerate() {
                        if let Some(&b) = cs[i + 1..].iter().find(|&&b| words[a] & words[b] != 0) {
                            first = Some((id, a, b));
                            return;
                        }
                    }
                }
            }
        });
        first
    }

    /// Queries need decomposability, smoothness and determinism (by guards,
    /// or brute force when the guards are inconclusive). Cached.
    pub fn validate_for_queries(&self) -> Result<(), CircuitError> {
        self.queryable
            .get_or_init(|| {
                let report = self.check_structure(DeterminismMode::Guards);
                if let Some(w) = report.witness {
                    return Err(CircuitError::Structure {
                        property: w.property,
                        node: w.node,
                        detail: w.description,
                    });
                }
                if report.deterministic == Determinism::Holds {
                    return Ok(());
                }
                if self.var_count > BRUTE_FORCE_LIMIT {
                    return Err(CircuitError::Unverifiable {
                        var_count: self.var_count,
                        limit: BRUTE_FORCE_LIMIT,
                    });
                }
                match self.brute_force_nondeterminism() {
                    None => Ok(()),
                    Some((node, a, b)) => Err(CircuitError::Structure {
                        property: "deterministic",
                        node,
                        detail: format!("children {a} and {b} are satisfied together"),
                    }),
                }
            })
            .clone()
    }

    /// Evaluates every node under one complete assignment; returns the root value.
    pub fn eval(&self, a: &Assignment) -> Result<bool, CircuitError> {
        if a.len() != self.var_count {
            return Err(CircuitError::LengthMismatch {
                expected: self.var_count,
                found: a.len(),
            });
        }
        Ok(self.eval_bits(a.bits()))
    }

    pub(crate) fn eval_bits(&self, bits: &[bool]) -> bool {
        let mut values = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                Node::Literal(l) => l.holds(bits[l.var]),
                Node::And(cs) => cs.iter().all(|&c| values[c]),
                Node::Or(cs) => cs.iter().any(|&c| values[c]),
                Node::True => true,
                Node::False => false,
            };
            values.push(v);
        }
        values[self.root()]
    }

    /// All satisfying assignments over the declared variables, lexicographic.
    pub fn models(&self) -> Result<ModelSet, CircuitError> {
        if self.var_count > BRUTE_FORCE_LIMIT {
            return Err(CircuitError::TooManyVariables {
                var_count: self.var_count,
                limit: BRUTE_FORCE_LIMIT,
            });
        }
        let n = self.var_count;
        let root = self.root();
        let mut models = Vec::new();
        for_each_block(self, |words, base| {
            let mut w = words[root];
            while w != 0 {
                let j = w.trailing_zeros() as u64;
                w &= w - 1;
                models.push(Assignment::from_mask(base + j, n));
            }
        });
        Ok(ModelSet::from_sorted(models))
    }

    /// Exact model count over all declared variables.
    ///
    /// Refuses circuits that are not smooth, decomposable and deterministic.
    pub fn model_count(&self) -> Result<BigUint, CircuitError> {
        self.validate_for_queries()?;
        let mut counts: Vec<BigUint> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let c = match node {
                Node::Literal(_) | Node::True => BigUint::from(1u32),
                Node::False => BigUint::from(0u32),
                Node::And(cs) => cs
                    .iter()
                    .fold(BigUint::from(1u32), |acc, &c| acc * &counts[c]),
                Node::Or(cs) => cs
                    .iter()
                    .fold(BigUint::from(0u32), |acc, &c| acc + &counts[c]),
            };
            counts.push(c);
        }
        let free = self.free_vars().len();
        Ok(counts.swap_remove(self.root()) << free)
    }
}

/// Bit-parallel evaluation of all nodes over every assignment, 64 at a time.
/// `f` receives per-node words and the mask of bit 0; bits beyond `2^n` are clear.
fn for_each_block<F: FnMut(&[u64], u64)>(c: &Circuit, mut f: F) {
    let n = c.var_count;
    let total: u64 = 1 << n;
    let blocks = total.div_ceil(64);
    let valid_mask = if total >= 64 {
        u64::MAX
    } else {
        (1u64 << total) - 1
    };
    // pattern[s]: bit j set iff bit s of j is set, for s < 6.
    let pattern: [u64; 6] = std::array::from_fn(|s| {
        (0..64u64)
            .filter(|j| (j >> s) & 1 == 1)
            .fold(0, |acc, j| acc | (1 << j))
    });
    let mut words = vec![0u64; c.nodes.len()];
    for block in 0..blocks {
        let base = block * 64;
        let var_word = |var: usize| -> u64 {
            let shift = n - 1 - var;
            if shift < 6 {
                pattern[shift]
            } else if (base >> shift) & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        };
        for (id, node) in c.nodes.iter().enumerate() {
            words[id] = match node {
                Node::Literal(l) => {
                    let w = var_word(l.var);
                    if l.positive {
                        w
                    } else {
                        !w
                    }
                }
                Node::And(cs) => cs.iter().fold(u64::MAX, |acc, &ch| acc & words[ch]),
                Node::Or(cs) => cs.iter().fold(0, |acc, &ch| acc | words[ch]),
                Node::True => u64::MAX,
                Node::False => 0,
            } & valid_mask;
        }
        f(&words, base);
    }
}

/// Hash-consing circuit builder with light constant simplification.
#[derive(Debug)]
pub struct CircuitBuilder {
    nodes: Vec<Node>,
    scopes: Vec<VarSet>,
    unique: HashMap<Node, NodeId>,
    var_count: usize,
    max_nodes: usize,
}

/// Raised by [`CircuitBuilder`] when its node cap is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeCapExceeded;

impl CircuitBuilder {
    pub fn new(var_count: usize) -> Self {
        CircuitBuilder::with_cap(var_count, usize::MAX)
    }

    pub fn with_cap(var_count: usize, max_nodes: usize) -> Self {
        CircuitBuilder {
            nodes: Vec::new(),
            scopes: Vec::new(),
            unique: HashMap::new(),
            var_count,
            max_nodes,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn scope(&self, id: NodeId) -> &VarSet {
        &self.scopes[id]
    }

    /// Adds `node` verbatim (after hash-consing).
    pub fn push(&mut self, node: Node) -> Result<NodeId, NodeCapExceeded> {
        if let Some(&id) = self.unique.get(&node) {
            return Ok(id);
        }
        if self.nodes.len() >= self.max_nodes {
            return Err(NodeCapExceeded);
        }
        let mut scope = VarSet::empty(self.var_count);
        match &node {
            Node::Literal(l) => scope.insert(l.var),
            Node::And(cs) | Node::Or(cs) => {
                for &c in cs {
                    scope.union_with(&self.scopes[c]);
                }
            }
            _ => {}
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.scopes.push(scope);
        self.unique.insert(node, id);
        Ok(id)
    }

    pub fn literal(&mut self, lit: Lit) -> Result<NodeId, NodeCapExceeded> {
        self.push(Node::Literal(lit))
    }

    pub fn constant(&mut self, value: bool) -> Result<NodeId, NodeCapExceeded> {
        self.push(if value { Node::True } else { Node::False })
    }

    /// Conjunction; drops true children, collapses on a false child, unwraps singletons.
    pub fn and(&mut self, children: Vec<NodeId>) -> Result<NodeId, NodeCapExceeded> {
        let mut kept = Vec::with_capacity(children.len());
        for c in children {
            match self.nodes[c] {
                Node::True => {}
                Node::False => return self.constant(false),
                _ => kept.push(c),
            }
        }
        match kept.len() {
            0 => self.constant(true),
            1 => Ok(kept[0]),
            _ => self.push(Node::And(kept)),
        }
    }

    /// Disjunction; drops false children, unwraps singletons. Duplicates are kept.
    pub fn or(&mut self, children: Vec<NodeId>) -> Result<NodeId, NodeCapExceeded> {
        let kept: Vec<NodeId> = children
            .into_iter()
            .filter(|&c| !matches!(self.nodes[c], Node::False))
            .collect();
        match kept.len() {
            0 => self.constant(false),
            1 => Ok(kept[0]),
            _ => self.push(Node::Or(kept)),
        }
    }

    /// `Y ∨ ¬Y`.
    pub fn gadget(&mut self, var: usize) -> Result<NodeId, NodeCapExceeded> {
        let p = self.literal(Lit::pos(var))?;
        let n = self.literal(Lit::neg(var))?;
        self.push(Node::Or(vec![p, n]))
    }

    /// Conjoins `child` with gadgets for `missing`, appending to an existing AND.
    pub fn pad(&mut self, child: NodeId, missing: &[usize]) -> Result<NodeId, NodeCapExceeded> {
        if missing.is_empty() {
            return Ok(child);
        }
        let mut parts = match &self.nodes[child] {
            Node::And(cs) => cs.clone(),
            _ => vec![child],
        };
        for &v in missing {
            parts.push(self.gadget(v)?);
        }
        self.and(parts)
    }

    /// Keeps only nodes reachable from `root`, preserving relative order, so
    /// the root becomes the last node.
    pub fn finish(self, root: NodeId) -> Circuit {
        let mut live = vec![false; self.nodes.len()];
        live[root] = true;
        for id in (0..=root).rev() {
            if live[id] {
                for &c in self.nodes[id].children() {
                    live[c] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (id, node) in self.nodes.into_iter().enumerate().take(root + 1) {
            if !live[id] {
                continue;
            }
            remap[id] = nodes.len();
            nodes.push(match node {
                Node::And(cs) => Node::And(cs.iter().map(|&c| remap[c]).collect()),
                Node::Or(cs) => Node::Or(cs.iter().map(|&c| remap[c]).collect()),
                n => n,
            });
        }
        Circuit::from_nodes(nodes, self.var_count).expect("builder output is topologically ordered")
    }
}

/// Smooths `c`: every OR child missing a variable of the OR's scope is
/// conjoined with `Y ∨ ¬Y`, and the root is extended to cover every declared
/// variable. Already-smooth, root-complete circuits are returned unchanged.
pub fn smooth(c: &Circuit) -> Circuit {
    let root_complete = c.free_vars().is_empty() || matches!(c.node(c.root()), Node::False);
    if root_complete && c.check_structure(DeterminismMode::Skip).smooth {
        return c.clone();
    }
    let mut b = CircuitBuilder::new(c.var_count());
    let mut map = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let id = match node {
            Node::Literal(l) => b.literal(*l),
            Node::True => b.constant(true),
            Node::False => b.constant(false),
            Node::And(cs) => b.and(cs.iter().map(|&x| map[x]).collect()),
            Node::Or(cs) => {
                let kids: Vec<NodeId> = cs
                    .iter()
                    .map(|&x| map[x])
                    .filter(|&x| !matches!(b.node(x), Node::False))
                    .collect();
                let mut scope = VarSet::empty(c.var_count());
                for &k in &kids {
                    scope.union_with(b.scope(k));
                }
                let mut padded = Vec::with_capacity(kids.len());
                for k in kids {
                    let missing: Vec<usize> = scope.difference(b.scope(k)).collect();
                    padded.push(b.pad(k, &missing).expect("uncapped builder"));
                }
                b.or(padded)
            }
        }
        .expect("uncapped builder");
        map.push(id);
    }
    let mut root = map[c.root()];
    if !matches!(b.node(root), Node::False) {
        let all = VarSet::full(c.var_count());
        let missing: Vec<usize> = all.difference(b.scope(root)).collect();
        root = b.pad(root, &missing).expect("uncapped builder");
    }
    b.finish(root)
}
