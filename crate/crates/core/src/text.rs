//! A line-oriented text form for automata.
//!
//! ```text
//! root n0
//! node n0 = { +(n1,n1) where {0.0=1.0} }
//! node n1 = { f(n2) }
//! node n2 = { a b c }
//! ```
//!
//! Labels are arbitrary names and may be referenced before they are
//! defined; cycles through labels become recursive nodes. An empty brace
//! pair is the empty node. `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::lex::{Lexer, SyntaxError, Tok};
use crate::pcs::Pcs;
use crate::store::{Node, NodeId, Store};
use crate::term::{write_symbol_name, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{line}:{col}: reference to undefined node {label:?}")]
    Undefined { label: String, line: usize, col: usize },
    #[error("{line}:{col}: node {label:?} is defined twice")]
    Duplicate { label: String, line: usize, col: usize },
    #[error("no root line")]
    MissingRoot,
    #[error("{line}:{col}: second root line")]
    SecondRoot { line: usize, col: usize },
}

struct RawEdge {
    symbol: String,
    children: Vec<(String, usize, usize)>,
    constraints: Pcs,
}

/// Reads a text description into `store` and returns its root.
pub fn parse_ecta(store: &mut Store, src: &str) -> Result<NodeId, TextError> {
    let mut lx = Lexer::new(src);
    let mut nodes: HashMap<String, Vec<RawEdge>> = HashMap::new();
    let mut root: Option<(String, usize, usize)> = None;
    loop {
        if lx.peek()? == &Tok::End {
            break;
        }
        if lx.at_keyword("root")? {
            let at = lx.error_here("");
            lx.next()?;
            let label = lx.name()?;
            if root.is_some() {
                return Err(TextError::SecondRoot { line: at.line, col: at.col });
            }
            root = Some((label, at.line, at.col));
            continue;
        }
        lx.keyword("node")?;
        let at = lx.error_here("");
        let label = lx.name()?;
        lx.keyword("=")?;
        lx.expect(&Tok::LBrace)?;
        let mut edges = Vec::new();
        while !lx.eat(&Tok::RBrace)? {
            edges.push(parse_edge(&mut lx)?);
        }
        if nodes.insert(label.clone(), edges).is_some() {
            return Err(TextError::Duplicate { label, line: at.line, col: at.col });
        }
    }
    let (root, line, col) = root.ok_or(TextError::MissingRoot)?;
    if !nodes.contains_key(&root) {
        return Err(TextError::Undefined { label: root, line, col });
    }
    for edges in nodes.values() {
        for e in edges {
            for (c, line, col) in &e.children {
                if !nodes.contains_key(c) {
                    return Err(TextError::Undefined { label: c.clone(), line: *line, col: *col });
                }
            }
        }
    }
    let mut b = Builder { nodes: &nodes, stack: Vec::new(), done: HashMap::new() };
    Ok(b.build(store, &root))
}

fn parse_edge(lx: &mut Lexer<'_>) -> Result<RawEdge, SyntaxError> {
    let symbol = lx.name()?;
    let mut children = Vec::new();
    if lx.eat(&Tok::LParen)? {
        loop {
            let at = lx.error_here("");
            children.push((lx.name()?, at.line, at.col));
            if !lx.eat(&Tok::Comma)? {
                break;
            }
        }
        lx.expect(&Tok::RParen)?;
    }
    let mut constraints = Pcs::empty();
    if lx.at_keyword("where")? {
        lx.next()?;
        lx.expect(&Tok::LBrace)?;
        let (raw, line, col) = lx.raw_braced()?;
        constraints = raw.parse().map_err(|e: crate::error::ParseConstraintError| SyntaxError {
            line,
            col,
            message: e.to_string(),
        })?;
    }
    Ok(RawEdge { symbol, children, constraints })
}

/// Turns the label graph into interned nodes. Every label being built is a
/// potential binder; binders nobody refers to disappear again in `mk_mu`.
struct Builder<'a> {
    nodes: &'a HashMap<String, Vec<RawEdge>>,
    stack: Vec<&'a str>,
    done: HashMap<&'a str, NodeId>,
}

impl<'a> Builder<'a> {
    fn build(&mut self, store: &mut Store, label: &'a str) -> NodeId {
        if let Some(pos) = self.stack.iter().rposition(|l| *l == label) {
            return store.mk_var((self.stack.len() - 1 - pos) as u32);
        }
        if let Some(&n) = self.done.get(label) {
            return n;
        }
        self.stack.push(label);
        let (key, raw) = self.nodes.get_key_value(label).expect("references checked");
        let mut edges = Vec::with_capacity(raw.len());
        for e in raw {
            let children: Vec<NodeId> = e.children.iter().map(|(c, _, _)| self.build(store, c.as_str())).collect();
            let symbol = Symbol::new(&e.symbol, children.len());
            if let Some(edge) = store.mk_edge(symbol, children, e.constraints.clone()).expect("arity follows children") {
                edges.push(edge);
            }
        }
        self.stack.pop();
        let body = store.mk_node(edges);
        let n = store.mk_mu(body);
        if store.is_closed(n) {
            self.done.insert(key.as_str(), n);
        }
        n
    }
}

/// Prints the automaton rooted at `root`. Nodes are labelled `n0`, `n1`, ...
/// in depth-first order; recursive nodes print as a cycle through their label.
pub fn print_ecta(store: &Store, root: NodeId) -> String {
    let mut p = Printer { store, labels: HashMap::new(), lines: Vec::new() };
    let mut ctx = Vec::new();
    let r = p.label(root, &mut ctx);
    let mut out = format!("root n{r}\n");
    let mut lines = std::mem::take(&mut p.lines);
    lines.sort_by_key(|(l, _)| *l);
    for (_, line) in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

struct Printer<'s> {
    store: &'s Store,
    /// Open nodes are keyed with the labels of their enclosing binders.
    labels: HashMap<(NodeId, Vec<usize>), usize>,
    lines: Vec<(usize, String)>,
}

impl Printer<'_> {
    fn label(&mut self, n: NodeId, ctx: &mut Vec<usize>) -> usize {
        if let Node::Var(k) = self.store.node(n) {
            return ctx[ctx.len() - 1 - *k as usize];
        }
        let key = if self.store.is_closed(n) { (n, Vec::new()) } else { (n, ctx.clone()) };
        if let Some(&l) = self.labels.get(&key) {
            return l;
        }
        let l = self.labels.len();
        self.labels.insert(key, l);
        let mut body = n;
        let mut pushed = 0;
        while let Node::Mu(b) = self.store.node(body) {
            ctx.push(l);
            pushed += 1;
            body = *b;
        }
        let edges = self.store.edges(body).to_vec();
        let mut line = format!("node n{l} = {{");
        for e in &edges {
            line.push(' ');
            write_symbol_name(&mut line, e.symbol().name()).expect("writing to a string");
            if !e.children().is_empty() {
                let kids: Vec<String> = e.children().iter().map(|&c| format!("n{}", self.label(c, ctx))).collect();
                let _ = write!(line, "({})", kids.join(","));
            }
            if !e.constraints().is_empty() {
                let _ = write!(line, " where {}", e.constraints());
            }
        }
        line.push_str(if edges.is_empty() { "}" } else { " }" });
        ctx.truncate(ctx.len() - pushed);
        self.lines.push((l, line));
        l
    }
}
