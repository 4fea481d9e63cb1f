//! Text front ends for [`Formula`]: DIMACS CNF and prefix s-expressions.

use crate::error::FormulaError;
use crate::formula::{Expr, Formula};

/// Parses DIMACS CNF. Variable `k` in the file becomes index `k - 1`.
///
/// Every clause line must end with `0`; several clauses may share a line.
pub fn parse_dimacs(text: &str) -> Result<Formula, FormulaError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Expr> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(FormulaError::parse(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(FormulaError::parse(
                    line_no,
                    "expected 'p cnf <vars> <clauses>'",
                ));
            }
            let n = parts[2]
                .parse()
                .map_err(|_| FormulaError::parse(line_no, "bad variable count"))?;
            let m = parts[3]
                .parse()
                .map_err(|_| FormulaError::parse(line_no, "bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or_else(|| FormulaError::parse(line_no, "clause before header"))?;

        let mut current = Vec::new();
        let mut terminated = false;
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| FormulaError::parse(line_no, format!("bad literal '{tok}'")))?;
            if lit == 0 {
                clauses.push(clause(std::mem::take(&mut current)));
                terminated = true;
                continue;
            }
            terminated = false;
            let var = lit.unsigned_abs() as usize;
            if var > n {
                return Err(FormulaError::parse(
                    line_no,
                    format!("literal {lit} out of range for {n} variables"),
                ));
            }
            current.push(Expr::lit(var - 1, lit > 0));
        }
        if !terminated {
            return Err(FormulaError::parse(line_no, "missing terminating 0"));
        }
    }

    let (n, m) = header.ok_or_else(|| FormulaError::parse(last_line.max(1), "missing header"))?;
    if clauses.len() != m {
        return Err(FormulaError::parse(
            last_line.max(1),
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    let expr = if clauses.is_empty() {
        Expr::True
    } else {
        Expr::And(clauses)
    };
    Formula::new(expr, n)
}

fn clause(lits: Vec<Expr>) -> Expr {
    if lits.is_empty() {
        Expr::False
    } else {
        Expr::Or(lits)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(Token<'_>, usize)> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split(';').next().unwrap_or("");
        let mut start: Option<usize> = None;
        for (i, ch) in line.char_indices() {
            let delim = ch == '(' || ch == ')' || ch.is_whitespace();
            if delim {
                if let Some(s) = start.take() {
                    out.push((Token::Atom(&line[s..i]), idx + 1));
                }
                match ch {
                    '(' => out.push((Token::Open, idx + 1)),
                    ')' => out.push((Token::Close, idx + 1)),
                    _ => {}
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push((Token::Atom(&line[s..]), idx + 1));
        }
    }
    out
}

struct SexpParser<'a> {
    tokens: Vec<(Token<'a>, usize)>,
    pos: usize,
}

impl<'a> SexpParser<'a> {
    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or(self.tokens.last())
            .map_or(1, |t| t.1)
    }

    fn next(&mut self) -> Result<Token<'a>, FormulaError> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| FormulaError::parse(self.line(), "unexpected end of input"))?;
        self.pos += 1;
        Ok(tok.0)
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn index(&mut self) -> Result<usize, FormulaError> {
        let line = self.line();
        match self.next()? {
            Token::Atom(a) => a
                .parse()
                .map_err(|_| FormulaError::parse(line, format!("bad index '{a}'"))),
            _ => Err(FormulaError::parse(line, "expected an index")),
        }
    }

    fn close(&mut self) -> Result<(), FormulaError> {
        let line = self.line();
        match self.next()? {
            Token::Close => Ok(()),
            _ => Err(FormulaError::parse(line, "expected ')'")),
        }
    }

    fn expr(&mut self) -> Result<Expr, FormulaError> {
        let line = self.line();
        match self.next()? {
            Token::Close => Err(FormulaError::parse(line, "unbalanced ')'")),
            Token::Atom(a) => atom(a, line),
            Token::Open => {
                let op = match self.next()? {
                    Token::Atom(a) => a,
                    _ => return Err(FormulaError::parse(line, "expected an operator")),
                };
                match op {
                    "var" => {
                        let i = self.index()?;
                        self.close()?;
                        Ok(Expr::var(i))
                    }
                    "not" => {
                        let e = self.expr()?;
                        self.close()?;
                        Ok(Expr::not(e))
                    }
                    "=>" | "<=>" => {
                        let a = self.expr()?;
                        let b = self.expr()?;
                        self.close()?;
                        Ok(if op == "=>" {
                            Expr::implies(a, b)
                        } else {
                            Expr::iff(a, b)
                        })
                    }
                    "and" | "or" => {
                        let mut children = Vec::new();
                        while self.peek() != Some(&Token::Close) {
                            if self.peek().is_none() {
                                return Err(FormulaError::parse(self.line(), "unbalanced '('"));
                            }
                            children.push(self.expr()?);
                        }
                        self.pos += 1;
                        if children.is_empty() {
                            return Err(FormulaError::parse(line, format!("({op}) needs a child")));
                        }
                        Ok(if op == "and" {
                            Expr::And(children)
                        } else {
                            Expr::Or(children)
                        })
                    }
                    other => Err(FormulaError::parse(
                        line,
                        format!("unknown operator '{other}'"),
                    )),
                }
            }
        }
    }
}

fn atom(a: &str, line: usize) -> Result<Expr, FormulaError> {
    match a {
        "true" => Ok(Expr::True),
        "false" => Ok(Expr::False),
        _ => match a.strip_prefix('v').map(str::parse::<usize>) {
            Some(Ok(i)) => Ok(Expr::var(i)),
            _ => Err(FormulaError::parse(line, format!("unknown atom '{a}'"))),
        },
    }
}

/// Parses the prefix s-expression syntax: `(and ..)`, `(or ..)`, `(not x)`,
/// `(=> a b)`, `(<=> a b)`, `(var i)` or `vi`, `true`, `false`.
///
/// An optional leading `(vars N)` form declares the variable count; without
/// it the count is one past the largest index used. `;` starts a comment.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = SexpParser {
        tokens: tokenize(text),
        pos: 0,
    };
    let mut declared = None;
    if p.tokens.len() >= 2 && p.tokens[0].0 == Token::Open && p.tokens[1].0 == Token::Atom("vars") {
        p.pos = 2;
        declared = Some(p.index()?);
        p.close()?;
    }
    let expr = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(FormulaError::parse(
            p.line(),
            "trailing input after formula",
        ));
    }
    let implied = expr.max_var().map_or(0, |m| m + 1);
    match declared {
        Some(n) if n < implied => Err(FormulaError::parse(
            1,
            format!("declared {n} variables but index {} is used", implied - 1),
        )),
        Some(n) => Formula::new(expr, n),
        None => Formula::new(expr, implied),
    }
}
