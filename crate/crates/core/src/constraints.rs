//! Generators for structured-output constraints.
//!
//! Variable layouts:
//!
//! - `exactly_one(n)`: variable `i` is option `i`.
//! - `total_order(n)`: `X[i][j]` (item `i` at position `j`) is variable `i*n + j`.
//! - `simple_path(g, s, t)`: one variable per grid edge, in [`GridSpec::edges`] order.
//! - `simple_path_full(g)`: `rows*cols` node indicators first, then the edges.
//! - `tile_grid`: cell-major, `(r, c, tile)` is variable `(r*cols + c)*vocab + tile`.
//! - `conditional(parts)`: the shared content variables, then one code variable per part.
//!
//! Grid nodes are numbered row-major. Edges are listed by visiting nodes in
//! row-major order and emitting the right edge, then the down edge.

use crate::error::ConstraintError;
use crate::formula::{Expr, Formula};

pub const DEFAULT_PATH_CAP: usize = 100_000;

fn invalid(msg: impl Into<String>) -> ConstraintError {
    ConstraintError::Invalid(msg.into())
}

fn build(expr: Expr, var_count: usize) -> Formula {
    Formula::new(expr, var_count).expect("generator produced a malformed formula")
}

/// One-hot over the given variables, pairwise encoding.
pub fn exactly_one_expr(vars: &[usize]) -> Expr {
    let mut parts = vec![Expr::Or(vars.iter().map(|&v| Expr::var(v)).collect())];
    for (i, &a) in vars.iter().enumerate() {
        for &b in &vars[i + 1..] {
            parts.push(Expr::not(Expr::and(vec![Expr::var(a), Expr::var(b)])));
        }
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Expr::And(parts)
    }
}

pub fn exactly_one(n: usize) -> Result<Formula, ConstraintError> {
    if n == 0 {
        return Err(invalid("exactly_one needs at least one variable"));
    }
    Ok(build(exactly_one_expr(&(0..n).collect::<Vec<_>>()), n))
}

/// Permutation matrices over `n` items.
pub fn total_order(n: usize) -> Result<Formula, ConstraintError> {
    if n == 0 {
        return Err(invalid("total_order needs at least one item"));
    }
    let mut parts = Vec::with_capacity(2 * n);
    for i in 0..n {
        parts.push(exactly_one_expr(
            &(0..n).map(|j| i * n + j).collect::<Vec<_>>(),
        ));
    }
    for j in 0..n {
        parts.push(exactly_one_expr(
            &(0..n).map(|i| i * n + j).collect::<Vec<_>>(),
        ));
    }
    Ok(build(Expr::And(parts), n * n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    rows: usize,
    cols: usize,
    edges: Vec<(usize, usize)>,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize) -> Result<Self, ConstraintError> {
        if rows == 0 || cols == 0 {
            return Err(invalid("grid needs at least one row and one column"));
        }
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let u = r * cols + c;
                if c + 1 < cols {
                    edges.push((u, u + 1));
                }
                if r + 1 < rows {
                    edges.push((u, u + cols));
                }
            }
        }
        Ok(GridSpec { rows, cols, edges })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn node_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge endpoints `(u, v)` with `u < v`, indexed by edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.iter().position(|&e| e == key)
    }

    /// `(edge id, neighbour)` pairs at `node`, by ascending edge id.
    pub fn incident(&self, node: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(id, &(u, v))| {
                if u == node {
                    Some((id, v))
                } else if v == node {
                    Some((id, u))
                } else {
                    None
                }
            })
            .collect()
    }

    fn check_pair(&self, s: usize, t: usize) -> Result<(), ConstraintError> {
        let n = self.node_count();
        if s >= n || t >= n {
            return Err(invalid(format!(
                "node out of range for a grid with {n} nodes"
            )));
        }
        if s == t {
            return Err(invalid("source and destination must differ"));
        }
        Ok(())
    }

    /// All simple `s`-`t` paths as edge-id sequences in traversal order,
    /// discovered depth-first taking lower edge ids first.
    pub fn simple_paths(
        &self,
        s: usize,
        t: usize,
        cap: usize,
    ) -> Result<Vec<Vec<usize>>, ConstraintError> {
        self.check_pair(s, t)?;
        let adjacency: Vec<_> = (0..self.node_count()).map(|v| self.incident(v)).collect();
        let mut visited = vec![false; self.node_count()];
        let mut path = Vec::new();
        let mut out = Vec::new();

        fn dfs(
            node: usize,
            t: usize,
            cap: usize,
            adjacency: &[Vec<(usize, usize)>],
            visited: &mut [bool],
            path: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) -> Result<(), ConstraintError> {
            if node == t {
                if out.len() == cap {
                    return Err(ConstraintError::PathCap { cap });
                }
                out.push(path.clone());
                return Ok(());
            }
            visited[node] = true;
            for &(e, next) in &adjacency[node] {
                if !visited[next] {
                    path.push(e);
                    dfs(next, t, cap, adjacency, visited, path, out)?;
                    path.pop();
                }
            }
            visited[node] = false;
            Ok(())
        }

        dfs(s, t, cap, &adjacency, &mut visited, &mut path, &mut out)?;
        Ok(out)
    }

    /// Whether the selected edges form exactly one simple path from `s` to `t`.
    pub fn is_simple_path(&self, selected: &[bool], s: usize, t: usize) -> bool {
        if selected.len() != self.edge_count()
            || s == t
            || s >= self.node_count()
            || t >= self.node_count()
        {
            return false;
        }
        let total = selected.iter().filter(|&&b| b).count();
        let mut prev_edge = usize::MAX;
        let mut node = s;
        let mut walked = 0;
        while node != t {
            let next: Vec<_> = self
                .incident(node)
                .into_iter()
                .filter(|&(e, _)| selected[e] && e != prev_edge)
                .collect();
            if next.len() != 1 {
                return false;
            }
            let (e, other) = next[0];
            prev_edge = e;
            node = other;
            walked += 1;
            if walked > total {
                return false;
            }
        }
        // t must be an endpoint and no selected edge may lie off the walk
        let t_degree = self
            .incident(t)
            .iter()
            .filter(|&&(e, _)| selected[e])
            .count();
        walked == total && t_degree == 1
    }
}

fn path_term(path: &[usize], edge_count: usize, offset: usize) -> Vec<Expr> {
    let mut on = vec![false; edge_count];
    for &e in path {
        on[e] = true;
    }
    on.iter()
        .enumerate()
        .map(|(e, &b)| Expr::lit(offset + e, b))
        .collect()
}

/// Models are exactly the edge sets of simple `s`-`t` paths.
pub fn simple_path(g: &GridSpec, s: usize, t: usize) -> Result<Formula, ConstraintError> {
    simple_path_capped(g, s, t, DEFAULT_PATH_CAP)
}

pub fn simple_path_capped(
    g: &GridSpec,
    s: usize,
    t: usize,
    cap: usize,
) -> Result<Formula, ConstraintError> {
    let m = g.edge_count();
    let terms: Vec<Expr> = g
        .simple_paths(s, t, cap)?
        .iter()
        .map(|p| Expr::And(path_term(p, m, 0)))
        .collect();
    Ok(build(Expr::Or(terms), m))
}

/// Disjunction over unordered pairs `s < t` of "indicators are exactly
/// `{s, t}`" conjoined with that pair's path constraint.
pub fn simple_path_full(g: &GridSpec) -> Result<Formula, ConstraintError> {
    simple_path_full_capped(g, DEFAULT_PATH_CAP)
}

pub fn simple_path_full_capped(g: &GridSpec, cap: usize) -> Result<Formula, ConstraintError> {
    let n = g.node_count();
    let m = g.edge_count();
    if n < 2 {
        return Err(invalid("grid needs at least two nodes"));
    }
    let mut total = 0;
    let mut pairs = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            let paths = g.simple_paths(s, t, cap - total)?;
            total += paths.len();
            let terms: Vec<Expr> = paths
                .iter()
                .map(|p| Expr::And(path_term(p, m, n)))
                .collect();
            let mut conj: Vec<Expr> = (0..n).map(|v| Expr::lit(v, v == s || v == t)).collect();
            conj.push(Expr::Or(terms));
            pairs.push(Expr::And(conj));
        }
    }
    Ok(build(Expr::Or(pairs), n + m))
}

/// `if tile at if_at then one of then_tiles at then_at`; offsets are
/// `(row, col)` relative to the window origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implication {
    pub if_at: (usize, usize),
    pub if_tile: usize,
    pub then_at: (usize, usize),
    pub then_tiles: Vec<usize>,
}

/// Local tiling rule, applied at every position where an implication's two
/// cells both lie inside the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileRule {
    vocab: usize,
    implications: Vec<Implication>,
}

pub mod pipes {
    pub const EMPTY: usize = 0;
    pub const TOP_LEFT: usize = 1;
    pub const TOP_RIGHT: usize = 2;
    pub const BODY_LEFT: usize = 3;
    pub const BODY_RIGHT: usize = 4;
    pub const VOCAB: usize = 5;
    pub const NAMES: [&str; VOCAB] = ["empty", "top-left", "top-right", "body-left", "body-right"];
}

impl TileRule {
    pub fn new(vocab: usize, implications: Vec<Implication>) -> Result<Self, ConstraintError> {
        if vocab == 0 {
            return Err(invalid("tile vocabulary must be non-empty"));
        }
        for imp in &implications {
            if imp.if_tile >= vocab || imp.then_tiles.iter().any(|&t| t >= vocab) {
                return Err(invalid(format!(
                    "tile id out of range for vocabulary of {vocab}"
                )));
            }
            if imp.then_tiles.is_empty() {
                return Err(invalid("implication with no allowed consequent tiles"));
            }
            if imp.if_at == imp.then_at {
                return Err(invalid("implication relates a cell to itself"));
            }
        }
        Ok(TileRule {
            vocab,
            implications,
        })
    }

    /// Pipe pieces: a top-left needs a top-right to its right and a body-left
    /// below; a body-left needs a body-right to its right and a top-left or
    /// body-left above.
    pub fn pipes() -> Self {
        use pipes::*;
        let imp = |if_at, if_tile, then_at, then_tiles: &[usize]| Implication {
            if_at,
            if_tile,
            then_at,
            then_tiles: then_tiles.to_vec(),
        };
        TileRule::new(
            VOCAB,
            vec![
                imp((0, 0), TOP_LEFT, (0, 1), &[TOP_RIGHT]),
                imp((0, 0), TOP_LEFT, (1, 0), &[BODY_LEFT]),
                imp((0, 0), BODY_LEFT, (0, 1), &[BODY_RIGHT]),
                imp((1, 0), BODY_LEFT, (0, 0), &[TOP_LEFT, BODY_LEFT]),
            ],
        )
        .unwrap()
    }

    pub fn vocab(&self) -> usize {
        self.vocab
    }

    pub fn implications(&self) -> &[Implication] {
        &self.implications
    }

    /// `(height, width)` of the bounding window of all implications.
    pub fn window(&self) -> (usize, usize) {
        self.implications.iter().fold((1, 1), |(h, w), imp| {
            (
                h.max(imp.if_at.0 + 1).max(imp.then_at.0 + 1),
                w.max(imp.if_at.1 + 1).max(imp.then_at.1 + 1),
            )
        })
    }

    fn placements(
        &self,
        imp: &Implication,
        rows: usize,
        cols: usize,
    ) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        let h = imp.if_at.0.max(imp.then_at.0) + 1;
        let w = imp.if_at.1.max(imp.then_at.1) + 1;
        let (a, b) = (imp.if_at, imp.then_at);
        (0..(rows + 1).saturating_sub(h))
            .flat_map(move |r| (0..(cols + 1).saturating_sub(w)).map(move |c| (r, c)))
            .map(move |(r, c)| (r + a.0, c + a.1, r + b.0, c + b.1))
    }

    /// Direct check of a tiling given as one tile id per cell, row-major.
    pub fn holds(&self, rows: usize, cols: usize, tiles: &[usize]) -> bool {
        tiles.len() == rows * cols
            && tiles.iter().all(|&t| t < self.vocab)
            && self.implications.iter().all(|imp| {
                self.placements(imp, rows, cols).all(|(ir, ic, tr, tc)| {
                    tiles[ir * cols + ic] != imp.if_tile
                        || imp.then_tiles.contains(&tiles[tr * cols + tc])
                })
            })
    }
}

pub fn tile_var(cols: usize, vocab: usize, r: usize, c: usize, tile: usize) -> usize {
    (r * cols + c) * vocab + tile
}

pub fn tile_grid(rows: usize, cols: usize, rule: &TileRule) -> Result<Formula, ConstraintError> {
    let (h, w) = rule.window();
    if rows < h || cols < w {
        return Err(invalid(format!(
            "{h}x{w} rule window does not fit a {rows}x{cols} grid"
        )));
    }
    let v = rule.vocab();
    let var = |r, c, t| tile_var(cols, v, r, c, t);
    let mut parts = Vec::new();
    for cell in 0..rows * cols {
        parts.push(exactly_one_expr(
            &(0..v).map(|t| cell * v + t).collect::<Vec<_>>(),
        ));
    }
    for imp in rule.implications() {
        for (ir, ic, tr, tc) in rule.placements(imp, rows, cols) {
            let then = imp
                .then_tiles
                .iter()
                .map(|&t| Expr::var(var(tr, tc, t)))
                .collect::<Vec<_>>();
            let then = if then.len() == 1 {
                then.into_iter().next().unwrap()
            } else {
                Expr::Or(then)
            };
            parts.push(Expr::implies(Expr::var(var(ir, ic, imp.if_tile)), then));
        }
    }
    Ok(build(Expr::And(parts), rows * cols * v))
}

/// `⋀ᵢ (cᵢ ⇔ αᵢ)` with code variable `cᵢ = n + i`, where `n` is the largest
/// part variable count.
pub fn conditional(parts: &[Formula]) -> Result<Formula, ConstraintError> {
    if parts.is_empty() {
        return Err(invalid("conditional needs at least one part"));
    }
    let n = parts.iter().map(Formula::var_count).max().unwrap();
    let conj = parts
        .iter()
        .enumerate()
        .map(|(i, f)| Expr::iff(Expr::var(n + i), f.expr().clone()))
        .collect();
    Ok(build(Expr::And(conj), n + parts.len()))
}
