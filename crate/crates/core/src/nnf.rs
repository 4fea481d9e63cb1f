//! c2d-style NNF text format.
//!
//! ```text
//! nnf <#nodes> <#edges> <#vars>
//! L <signed 1-based literal>
//! A <childcount> <child ids...>
//! O <decision var or 0> <childcount> <child ids...>
//! ```
//!
//! Node ids are 0-based in file order and every child must precede its
//! parent. `A 0` is true and `O 0 0` is false. The last node is the root.

use std::fmt::Write as _;

use crate::circuit::{Circuit, Lit, Node};
use crate::error::CircuitError;

pub fn write_nnf(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "nnf {} {} {}", c.len(), c.edge_count(), c.var_count()).unwrap();
    for (id, node) in c.nodes().iter().enumerate() {
        match node {
            Node::Literal(l) => {
                let v = l.var as i64 + 1;
                writeln!(out, "L {}", if l.positive { v } else { -v }).unwrap();
            }
            Node::True => out.push_str("A 0\n"),
            Node::False => out.push_str("O 0 0\n"),
            Node::And(cs) => {
                write!(out, "A {}", cs.len()).unwrap();
                for c in cs {
                    write!(out, " {c}").unwrap();
                }
                out.push('\n');
            }
            Node::Or(cs) => {
                let decision = c.decision_var(id).map_or(0, |v| v + 1);
                write!(out, "O {decision} {}", cs.len()).unwrap();
                for c in cs {
                    write!(out, " {c}").unwrap();
                }
                out.push('\n');
            }
        }
    }
    out
}

fn perr(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Parse {
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, CircuitError> {
    tok.ok_or_else(|| perr(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(line, format!("bad {what}")))
}

/// Parses NNF text. The decision-variable field of `O` lines is informational
/// and is not trusted.
pub fn read_nnf(text: &str) -> Result<Circuit, CircuitError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut nodes: Vec<Node> = Vec::new();
    let mut edges = 0usize;
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let kind = toks.next().unwrap_or_default();
        if kind == "nnf" {
            if header.is_some() {
                return Err(perr(line_no, "duplicate header"));
            }
            header = Some((
                num(toks.next(), line_no, "node count")?,
                num(toks.next(), line_no, "edge count")?,
                num(toks.next(), line_no, "variable count")?,
            ));
            if toks.next().is_some() {
                return Err(perr(line_no, "trailing tokens in header"));
            }
            continue;
        }
        let (_, _, var_count) = header.ok_or_else(|| perr(line_no, "node before header"))?;
        let id = nodes.len();
        let node = match kind {
            "L" => {
                let lit: i64 = num(toks.next(), line_no, "literal")?;
                if lit == 0 {
                    return Err(perr(line_no, "literal 0"));
                }
                let var = lit.unsigned_abs() as usize - 1;
                if var >= var_count {
                    return Err(perr(line_no, format!("literal {lit} out of range")));
                }
                Node::Literal(Lit::new(var, lit > 0))
            }
            "A" | "O" => {
                if kind == "O" {
                    let _decision: usize = num(toks.next(), line_no, "decision variable")?;
                }
                let count: usize = num(toks.next(), line_no, "child count")?;
                let mut children = Vec::with_capacity(count);
                for _ in 0..count {
                    let child: usize = num(toks.next(), line_no, "child id")?;
                    if child >= id {
                        return Err(CircuitError::ForwardReference { node: id, child });
                    }
                    children.push(child);
                }
                edges += count;
                match (kind, count) {
                    ("A", 0) => Node::True,
                    ("O", 0) => Node::False,
                    ("A", _) => Node::And(children),
                    _ => Node::Or(children),
                }
            }
            other => return Err(perr(line_no, format!("unknown node kind '{other}'"))),
        };
        if toks.next().is_some() {
            return Err(perr(line_no, "trailing tokens"));
        }
        nodes.push(node);
    }

    let (n_nodes, n_edges, var_count) = header.ok_or_else(|| perr(last_line, "missing header"))?;
    if nodes.len() != n_nodes {
        return Err(perr(
            last_line,
            format!("header declares {n_nodes} nodes, found {}", nodes.len()),
        ));
    }
    if edges != n_edges {
        return Err(perr(
            last_line,
            format!("header declares {n_edges} edges, found {edges}"),
        ));
    }
    Circuit::from_nodes(nodes, var_count)
}
